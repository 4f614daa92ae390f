#include "trolllens/topics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trolllens/error.hpp"
#include "trolllens/util.hpp"

namespace trolllens {

using nlohmann::ordered_json;

int LdaModel::term_id(const std::string& term) const {
    auto it = vocab_index_.find(term);
    return it == vocab_index_.end() ? -1 : it->second;
}

double LdaModel::phi(int topic, int term) const {
    double vb = static_cast<double>(vocab_.size()) * beta_;
    return (topic_word_[topic][term] + beta_) / (topic_totals_[topic] + vb);
}

double LdaModel::theta(std::size_t doc, int topic) const {
    double denom = static_cast<double>(docs_[doc].size()) + k_ * alpha_;
    return (doc_topic_[doc][topic] + alpha_) / denom;
}

LdaModel fit_lda(const std::vector<std::vector<std::string>>& docs, const LdaOptions& options,
                 const SweepObserver& on_sweep) {
    if (options.num_topics < 1)
        raise("InvalidHyperparameter", "K must be >= 1");
    if (options.effective_alpha() <= 0.0 || options.beta <= 0.0)
        raise("InvalidHyperparameter", "alpha and beta must be > 0");
    if (options.iterations < 0)
        raise("InvalidHyperparameter", "iterations must be >= 0");

    LdaModel m;
    m.k_ = options.num_topics;
    m.alpha_ = options.effective_alpha();
    m.beta_ = options.beta;
    m.iterations_ = options.iterations;
    m.fold_in_iterations_ = options.fold_in_iterations;
    m.seed_ = options.seed;

    // vocabulary: first-appearance order, pruned by min_term_count
    std::unordered_map<std::string, int> term_counts;
    std::vector<std::string> appearance;
    for (const auto& doc : docs) {
        for (const auto& term : doc) {
            auto [it, inserted] = term_counts.emplace(term, 0);
            if (inserted) appearance.push_back(term);
            ++it->second;
        }
    }
    for (const auto& term : appearance) {
        if (term_counts[term] >= std::max(1, options.min_term_count)) {
            m.vocab_index_.emplace(term, static_cast<int>(m.vocab_.size()));
            m.vocab_.push_back(term);
        }
    }

    m.docs_.resize(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& term : docs[d]) {
            int id = m.term_id(term);
            if (id >= 0) m.docs_[d].push_back(id);
        }
        m.total_tokens_ += m.docs_[d].size();
    }
    if (m.total_tokens_ == 0)
        raise("EmptyCorpus", "no documents with tokens after vocabulary pruning");

    const int K = m.k_;
    const std::size_t V = m.vocab_.size();
    m.topic_word_.assign(K, std::vector<int>(V, 0));
    m.doc_topic_.assign(docs.size(), std::vector<int>(K, 0));
    m.topic_totals_.assign(K, 0);
    m.assignments_.resize(docs.size());

    util::Rng rng(m.seed_);
    for (std::size_t d = 0; d < m.docs_.size(); ++d) {
        m.assignments_[d].resize(m.docs_[d].size());
        for (std::size_t i = 0; i < m.docs_[d].size(); ++i) {
            int k = static_cast<int>(rng.uniform_index(K));
            m.assignments_[d][i] = k;
            ++m.doc_topic_[d][k];
            ++m.topic_word_[k][m.docs_[d][i]];
            ++m.topic_totals_[k];
        }
    }

    const double vb = static_cast<double>(V) * m.beta_;
    std::vector<double> cumulative(K);

    for (int sweep = 1; sweep <= m.iterations_; ++sweep) {
        for (std::size_t d = 0; d < m.docs_.size(); ++d) {
            auto& doc = m.docs_[d];
            auto& z = m.assignments_[d];
            auto& n_dk = m.doc_topic_[d];
            for (std::size_t i = 0; i < doc.size(); ++i) {
                const int w = doc[i];
                const int old_k = z[i];
                --n_dk[old_k];
                --m.topic_word_[old_k][w];
                --m.topic_totals_[old_k];

                double total = 0.0;
                for (int k = 0; k < K; ++k) {
                    double p = (n_dk[k] + m.alpha_) * (m.topic_word_[k][w] + m.beta_) /
                               (m.topic_totals_[k] + vb);
                    total += p;
                    cumulative[k] = total;
                }
                double u = rng.uniform01() * total;
                int new_k = K - 1;
                for (int k = 0; k < K; ++k) {
                    if (u < cumulative[k]) {
                        new_k = k;
                        break;
                    }
                }
                z[i] = new_k;
                ++n_dk[new_k];
                ++m.topic_word_[new_k][w];
                ++m.topic_totals_[new_k];
            }
        }
        if (sweep % 10 == 0 || sweep == m.iterations_)
            m.ll_history_.emplace_back(sweep, joint_log_likelihood(m));
        if (on_sweep) on_sweep(m, sweep);
    }
    if (m.iterations_ == 0) m.ll_history_.emplace_back(0, joint_log_likelihood(m));
    return m;
}

std::vector<std::vector<std::string>> topic_top_words(const LdaModel& model, int n) {
    std::vector<std::vector<std::string>> out(model.num_topics());
    const std::size_t V = model.vocab_size();
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(std::max(n, 0)), V);

    std::vector<int> order(V);
    for (int k = 0; k < model.num_topics(); ++k) {
        std::iota(order.begin(), order.end(), 0);
        const auto& counts = model.topic_word_counts()[k];
        // phi ordering == count ordering for a fixed topic; ties by vocab index
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return counts[a] > counts[b]; });
        out[k].reserve(take);
        for (std::size_t i = 0; i < take; ++i) out[k].push_back(model.vocab()[order[i]]);
    }
    return out;
}

int assign_theme(const LdaModel& model, std::size_t training_doc) {
    const auto& counts = model.doc_topic_counts().at(training_doc);
    if (model.doc_length(training_doc) == 0) return LdaModel::kNoTheme;
    int best = 0;
    for (int k = 1; k < model.num_topics(); ++k)
        if (counts[k] > counts[best]) best = k;
    return best;
}

int assign_theme(const LdaModel& model, const std::vector<std::string>& doc_tokens,
                 std::optional<int> fold_in_iterations) {
    std::vector<int> ids;
    ids.reserve(doc_tokens.size());
    for (const auto& term : doc_tokens) {
        int id = model.term_id(term);
        if (id >= 0) ids.push_back(id);
    }
    if (ids.empty()) return LdaModel::kNoTheme;

    const int K = model.num_topics();
    const double vb = static_cast<double>(model.vocab_size()) * model.beta();
    const int sweeps = fold_in_iterations.value_or(model.fold_in_iterations());

    // seed derived from model seed and token sequence: deterministic and
    // independent of the order documents are folded in
    std::uint64_t h = model.seed() ^ 0x9e3779b97f4a7c15ULL;
    for (const auto& term : doc_tokens) h = util::fnv1a64(term, h);
    util::Rng rng(h);

    std::vector<int> local(K, 0);
    std::vector<int> z(ids.size(), 0);
    std::vector<double> cumulative(K);
    const auto& topic_word = model.topic_word_counts();
    const auto& totals = model.topic_totals();

    auto sample = [&](std::size_t i, bool subtract) {
        const int w = ids[i];
        if (subtract) --local[z[i]];
        double total = 0.0;
        for (int k = 0; k < K; ++k) {
            double p = (local[k] + model.alpha()) * (topic_word[k][w] + model.beta()) /
                       (totals[k] + vb);
            total += p;
            cumulative[k] = total;
        }
        double u = rng.uniform01() * total;
        int new_k = K - 1;
        for (int k = 0; k < K; ++k) {
            if (u < cumulative[k]) {
                new_k = k;
                break;
            }
        }
        z[i] = new_k;
        ++local[new_k];
    };

    for (std::size_t i = 0; i < ids.size(); ++i) sample(i, false);
    for (int s = 0; s < sweeps; ++s)
        for (std::size_t i = 0; i < ids.size(); ++i) sample(i, true);

    int best = 0;
    for (int k = 1; k < K; ++k)
        if (local[k] > local[best]) best = k;
    return best;
}

double joint_log_likelihood(const LdaModel& model) {
    const int K = model.num_topics();
    const std::size_t V = model.vocab_size();
    const std::size_t D = model.num_docs();
    const double alpha = model.alpha();
    const double beta = model.beta();
    const double vb = static_cast<double>(V) * beta;

    // per topic: lgamma(Vb) + sum_{n_kv>0} [lgamma(n_kv+b) - lgamma(b)] - lgamma(n_k+Vb)
    double ll = 0.0;
    const double lgamma_beta = std::lgamma(beta);
    for (int k = 0; k < K; ++k) {
        ll += std::lgamma(vb);
        for (std::size_t v = 0; v < V; ++v) {
            int c = model.topic_word_counts()[k][v];
            if (c > 0) ll += std::lgamma(c + beta) - lgamma_beta;
        }
        ll -= std::lgamma(model.topic_totals()[k] + vb);
    }
    const double ka = K * alpha;
    const double lgamma_alpha = std::lgamma(alpha);
    for (std::size_t d = 0; d < D; ++d) {
        if (model.doc_length(d) == 0) continue;
        ll += std::lgamma(ka);
        for (int k = 0; k < K; ++k) {
            int c = model.doc_topic_counts()[d][k];
            if (c > 0) ll += std::lgamma(c + alpha) - lgamma_alpha;
        }
        ll -= std::lgamma(static_cast<double>(model.doc_length(d)) + ka);
    }
    return ll;
}

ordered_json LdaModel::to_json() const {
    ordered_json j;
    j["kind"] = "lda_model";
    j["k"] = k_;
    j["alpha"] = alpha_;
    j["beta"] = beta_;
    j["iterations"] = iterations_;
    j["fold_in_iterations"] = fold_in_iterations_;
    j["seed"] = seed_;
    j["vocab"] = vocab_;
    j["topic_word_counts"] = topic_word_;
    j["topic_totals"] = topic_totals_;
    j["doc_topic_counts"] = doc_topic_;
    ordered_json lengths = ordered_json::array();
    for (const auto& doc : docs_) lengths.push_back(doc.size());
    j["doc_lengths"] = std::move(lengths);
    return j;
}

LdaModel LdaModel::from_json(const ordered_json& j) {
    if (!j.is_object() || j.value("kind", "") != std::string("lda_model"))
        raise("MalformedLine", "not an lda_model artifact");
    LdaModel m;
    m.k_ = j.at("k").get<int>();
    m.alpha_ = j.at("alpha").get<double>();
    m.beta_ = j.at("beta").get<double>();
    m.iterations_ = j.at("iterations").get<int>();
    m.fold_in_iterations_ = j.at("fold_in_iterations").get<int>();
    m.seed_ = j.at("seed").get<std::uint64_t>();
    m.vocab_ = j.at("vocab").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < m.vocab_.size(); ++i)
        m.vocab_index_.emplace(m.vocab_[i], static_cast<int>(i));
    m.topic_word_ = j.at("topic_word_counts").get<std::vector<std::vector<int>>>();
    m.topic_totals_ = j.at("topic_totals").get<std::vector<int>>();
    m.doc_topic_ = j.at("doc_topic_counts").get<std::vector<std::vector<int>>>();
    auto lengths = j.at("doc_lengths").get<std::vector<std::size_t>>();
    m.docs_.resize(lengths.size());
    for (std::size_t d = 0; d < lengths.size(); ++d) {
        m.docs_[d].assign(lengths[d], 0); // term ids are not persisted; lengths drive theta/assign
        m.total_tokens_ += lengths[d];
    }

    // count-conservation invariants
    for (int k = 0; k < m.k_; ++k) {
        long sum = 0;
        for (std::size_t v = 0; v < m.vocab_.size(); ++v) sum += m.topic_word_[k][v];
        if (sum != m.topic_totals_[k])
            raise("MalformedLine", "lda_model artifact violates topic count invariant");
    }
    for (std::size_t d = 0; d < m.doc_topic_.size(); ++d) {
        long sum = 0;
        for (int k = 0; k < m.k_; ++k) sum += m.doc_topic_[d][k];
        if (sum != static_cast<long>(lengths[d]))
            raise("MalformedLine", "lda_model artifact violates document count invariant");
    }
    return m;
}

} // namespace trolllens
