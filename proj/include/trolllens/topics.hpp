#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace trolllens {

struct LdaOptions {
    int num_topics = 7;
    double alpha = 0.0; // <=0 means the 50/K default
    double beta = 0.01;
    int iterations = 500;
    int fold_in_iterations = 20;
    std::uint64_t seed = 1;
    int min_term_count = 5; // vocabulary pruning threshold

    double effective_alpha() const { return alpha > 0.0 ? alpha : 50.0 / num_topics; }
};

// Collapsed Gibbs LDA. Document indices are preserved: documents that
// are empty (or pruned empty) keep their slot and are assigned kNoTheme.
class LdaModel {
public:
    static constexpr int kNoTheme = -1;

    int num_topics() const { return k_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    std::uint64_t seed() const { return seed_; }
    int iterations() const { return iterations_; }
    int fold_in_iterations() const { return fold_in_iterations_; }

    std::size_t vocab_size() const { return vocab_.size(); }
    std::size_t num_docs() const { return doc_topic_.size(); }
    std::size_t total_tokens() const { return total_tokens_; }

    const std::vector<std::string>& vocab() const { return vocab_; }
    int term_id(const std::string& term) const; // -1 when out of vocabulary

    const std::vector<std::vector<int>>& topic_word_counts() const { return topic_word_; }
    const std::vector<std::vector<int>>& doc_topic_counts() const { return doc_topic_; }
    const std::vector<int>& topic_totals() const { return topic_totals_; }
    std::size_t doc_length(std::size_t d) const { return docs_[d].size(); }

    double phi(int topic, int term) const;
    double theta(std::size_t doc, int topic) const;

    // (sweep, joint log-likelihood) pairs recorded every 10 sweeps
    const std::vector<std::pair<int, double>>& log_likelihood_history() const { return ll_history_; }

    nlohmann::ordered_json to_json() const;
    static LdaModel from_json(const nlohmann::ordered_json& j);

private:
    friend LdaModel fit_lda(const std::vector<std::vector<std::string>>&, const LdaOptions&,
                            const std::function<void(const LdaModel&, int)>&);

    int k_ = 0;
    double alpha_ = 0.0;
    double beta_ = 0.0;
    int iterations_ = 0;
    int fold_in_iterations_ = 20;
    std::uint64_t seed_ = 0;

    std::vector<std::string> vocab_;
    std::unordered_map<std::string, int> vocab_index_;
    std::vector<std::vector<int>> docs_;        // term ids per doc (post-pruning)
    std::vector<std::vector<int>> assignments_; // topic per token
    std::vector<std::vector<int>> topic_word_;  // K x V
    std::vector<std::vector<int>> doc_topic_;   // D x K
    std::vector<int> topic_totals_;             // K
    std::size_t total_tokens_ = 0;
    std::vector<std::pair<int, double>> ll_history_;
};

using SweepObserver = std::function<void(const LdaModel&, int sweep)>;

// Random init from the seed, then `iterations` full sweeps resampling
// each token from p(z=k) ∝ (n_dk+α)(n_kw+β)/(n_k+Vβ). Deterministic
// given identical inputs. Errors: EmptyCorpus, InvalidHyperparameter.
LdaModel fit_lda(const std::vector<std::vector<std::string>>& docs, const LdaOptions& options,
                 const SweepObserver& on_sweep = {});

// Per-topic terms ranked by phi, ties broken by vocabulary index.
std::vector<std::vector<std::string>> topic_top_words(const LdaModel& model, int n);

// Theme of a training document: argmax of its stored topic counts (ties
// to the lowest topic); empty documents map to kNoTheme.
int assign_theme(const LdaModel& model, std::size_t training_doc);

// Fold-in for an unseen document: Gibbs sweeps against frozen
// topic-word counts, then argmax. Deterministic (seed derived from the
// model seed and the token sequence).
int assign_theme(const LdaModel& model, const std::vector<std::string>& doc_tokens,
                 std::optional<int> fold_in_iterations = std::nullopt);

// Collapsed joint log p(w, z).
double joint_log_likelihood(const LdaModel& model);

} // namespace trolllens
