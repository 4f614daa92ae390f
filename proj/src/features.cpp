#include "trolllens/features.hpp"

#include <algorithm>
#include <cmath>

#include "trolllens/error.hpp"
#include "trolllens/utf8.hpp"
#include "trolllens/util.hpp"

namespace trolllens {

std::uint64_t FeatureSchema::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const DimInfo& d : dims) {
        h = util::fnv1a64(d.name, h);
        h = util::fnv1a64("|", h);
        h = util::fnv1a64(d.family, h);
        h = util::fnv1a64("\n", h);
    }
    return h;
}

nlohmann::ordered_json FeatureSchema::to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const DimInfo& d : dims) arr.push_back({{"name", d.name}, {"family", d.family}});
    nlohmann::ordered_json j;
    j["dimension"] = dims.size();
    j["hash"] = hash();
    j["dims"] = std::move(arr);
    return j;
}

std::vector<double> tweet_family_vector(const Tweet& tweet, const Lexicon& lexicon) {
    TokenStream tokens = tokenize(tweet.text);
    CategoryHits hits = match(tokens, lexicon);
    std::vector<double> out(lexicon.categories.size());
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = hits.proportion(c);
    return out;
}

std::vector<double> tweet_theme_vector(const Tweet& tweet, const LexiconSet& lexicons) {
    TokenStream tokens = tokenize(tweet.text);
    std::vector<double> out;
    out.reserve(lexicons.total_dimensions());
    for (const Lexicon& lex : lexicons.lexicons) {
        CategoryHits hits = match(tokens, lex);
        for (std::size_t c = 0; c < lex.categories.size(); ++c) out.push_back(hits.proportion(c));
    }
    return out;
}

FeatureSchema family_tweet_schema(const Lexicon& lexicon) {
    FeatureSchema schema;
    for (const std::string& cat : lexicon.categories)
        schema.dims.push_back({lexicon.name + "." + cat, lexicon.name});
    return schema;
}

FeatureSchema theme_tweet_schema(const LexiconSet& lexicons) {
    FeatureSchema schema;
    for (const Lexicon& lex : lexicons.lexicons)
        for (const std::string& cat : lex.categories)
            schema.dims.push_back({lex.name + "." + cat, lex.name});
    return schema;
}

NliVector nli_vector(const Tweet& tweet) {
    const auto stopwords = english_stopwords();
    const std::size_t stop_n = stopwords.size();
    NliVector out;
    out.values.assign(stop_n + kUposTags.size() + kDeprelLabels.size(), 0.0);

    static const std::unordered_map<std::string_view, std::size_t> stop_index = [] {
        std::unordered_map<std::string_view, std::size_t> m;
        auto sw = english_stopwords();
        for (std::size_t i = 0; i < sw.size(); ++i) m.emplace(sw[i], i);
        return m;
    }();

    // stopword bag over the cleaned text's word-ish tokens
    std::string cleaned = clean_for_nli(tweet.text);
    std::size_t word_count = 0;
    for (const Token& tok : tokenize(cleaned)) {
        if (tok.kind != TokenKind::word && tok.kind != TokenKind::number) continue;
        ++word_count;
        auto it = stop_index.find(utf8::lower(tok.surface));
        if (it != stop_index.end()) out.values[it->second] += 1.0;
    }
    if (word_count > 0)
        for (std::size_t i = 0; i < stop_n; ++i) out.values[i] /= static_cast<double>(word_count);

    // POS and DEPREL bags over the annotations
    if (tweet.annotations && !tweet.annotations->empty()) {
        out.annotated = true;
        const double n = static_cast<double>(tweet.annotations->size());
        for (const TokenAnnotation& ann : *tweet.annotations) {
            out.values[stop_n + static_cast<std::size_t>(ann.upos)] += 1.0;
            out.values[stop_n + kUposTags.size() + static_cast<std::size_t>(ann.deprel)] += 1.0;
        }
        for (std::size_t i = stop_n; i < out.values.size(); ++i) out.values[i] /= n;
    }
    return out;
}

std::vector<double> stylistic_vector(std::string_view text) {
    const std::vector<char32_t> cps = utf8::decode(text);

    double special = 0.0;
    double letters = 0.0;
    double uppercase = 0.0;
    for (char32_t cp : cps) {
        utf8::CharClass c = utf8::classify(cp);
        if (c == utf8::CharClass::letter) {
            ++letters;
            if (utf8::is_upper(cp)) ++uppercase;
        } else if (c != utf8::CharClass::digit && c != utf8::CharClass::space) {
            ++special;
        }
    }

    // runs of >=2 identical non-letters plus runs of >=3 identical letters
    double runs = 0.0;
    for (std::size_t i = 0; i < cps.size();) {
        std::size_t j = i;
        while (j < cps.size() && cps[j] == cps[i]) ++j;
        std::size_t len = j - i;
        if (utf8::is_letter(cps[i])) {
            if (len >= 3) ++runs;
        } else if (!utf8::is_space(cps[i])) {
            if (len >= 2) ++runs;
        }
        i = j;
    }

    double urls = 0.0, hashtags = 0.0, mentions = 0.0;
    for (const Token& tok : tokenize(text)) {
        if (tok.kind == TokenKind::url) ++urls;
        else if (tok.kind == TokenKind::hashtag) ++hashtags;
        else if (tok.kind == TokenKind::mention) ++mentions;
    }

    return {special,
            runs,
            urls,
            hashtags,
            mentions,
            letters > 0 ? uppercase / letters : 0.0,
            static_cast<double>(cps.size())};
}

std::vector<double> stylistic_vector(const Tweet& tweet) { return stylistic_vector(tweet.text); }

FeatureSchema profile_tweet_schema() {
    FeatureSchema schema;
    for (std::string_view w : english_stopwords())
        schema.dims.push_back({"stop." + std::string(w), "stopwords"});
    for (std::string_view t : kUposTags) schema.dims.push_back({"pos." + std::string(t), "pos"});
    for (std::string_view r : kDeprelLabels)
        schema.dims.push_back({"dep." + std::string(r), "deprel"});
    for (std::string_view s : kStylisticNames)
        schema.dims.push_back({"style." + std::string(s), "stylistic"});
    return schema;
}

namespace {

// mean and population std over the selected tweet vectors; both zero
// when the selection is empty, std zero when it has one element
void mean_and_std(std::span<const std::vector<double>> vectors, std::span<const std::size_t> rows,
                  std::size_t dim, std::span<double> mean_out, std::span<double> std_out) {
    std::fill(mean_out.begin(), mean_out.end(), 0.0);
    std::fill(std_out.begin(), std_out.end(), 0.0);
    if (rows.empty()) return;
    const double n = static_cast<double>(rows.size());
    for (std::size_t r : rows)
        for (std::size_t d = 0; d < dim; ++d) mean_out[d] += vectors[r][d];
    for (std::size_t d = 0; d < dim; ++d) mean_out[d] /= n;
    if (rows.size() == 1) return;
    for (std::size_t r : rows)
        for (std::size_t d = 0; d < dim; ++d) {
            double dev = vectors[r][d] - mean_out[d];
            std_out[d] += dev * dev;
        }
    for (std::size_t d = 0; d < dim; ++d) std_out[d] = std::sqrt(std_out[d] / n);
}

} // namespace

std::vector<double> aggregate_eq1(std::span<const std::vector<double>> tweet_vectors,
                                  std::span<const int> themes, int num_themes) {
    if (tweet_vectors.size() != themes.size())
        raise("LengthMismatch", "tweet vectors and theme assignments differ in length");
    const std::size_t dim = tweet_vectors.empty() ? 0 : tweet_vectors.front().size();

    std::vector<std::vector<std::size_t>> by_theme(static_cast<std::size_t>(num_themes));
    for (std::size_t i = 0; i < themes.size(); ++i) {
        int t = themes[i];
        if (t >= 0 && t < num_themes) by_theme[static_cast<std::size_t>(t)].push_back(i);
    }

    std::vector<double> out(static_cast<std::size_t>(num_themes) * 2 * dim, 0.0);
    for (int t = 0; t < num_themes; ++t) {
        auto* block = out.data() + static_cast<std::size_t>(t) * 2 * dim;
        mean_and_std(tweet_vectors, by_theme[static_cast<std::size_t>(t)], dim,
                     std::span<double>(block, dim), std::span<double>(block + dim, dim));
    }
    return out;
}

std::vector<double> aggregate_eq2(std::span<const std::vector<double>> tweet_vectors) {
    if (tweet_vectors.empty()) raise("EmptyAccount", "cannot aggregate zero tweets");
    const std::size_t dim = tweet_vectors.front().size();
    std::vector<std::size_t> all(tweet_vectors.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::vector<double> out(2 * dim, 0.0);
    mean_and_std(tweet_vectors, all, dim, std::span<double>(out.data(), dim),
                 std::span<double>(out.data() + dim, dim));
    return out;
}

FeatureSchema eq1_schema(const FeatureSchema& tweet_schema, int num_themes) {
    FeatureSchema schema;
    schema.dims.reserve(static_cast<std::size_t>(num_themes) * 2 * tweet_schema.dims.size());
    for (int t = 0; t < num_themes; ++t) {
        std::string prefix = "t" + std::to_string(t) + ".";
        for (const char* stat : {"mean.", "std."})
            for (const DimInfo& d : tweet_schema.dims)
                schema.dims.push_back({prefix + stat + d.name, d.family});
    }
    return schema;
}

FeatureSchema eq2_schema(const FeatureSchema& tweet_schema) {
    FeatureSchema schema;
    schema.dims.reserve(2 * tweet_schema.dims.size());
    for (const char* stat : {"mean.", "std."})
        for (const DimInfo& d : tweet_schema.dims)
            schema.dims.push_back({stat + d.name, d.family});
    return schema;
}

UserFeatureVector aggregate_theme_user(const Corpus& corpus, const Account& account,
                                       const LexiconSet& lexicons,
                                       const std::unordered_map<std::string, int>& theme_by_tweet,
                                       int num_themes) {
    std::vector<std::vector<double>> vectors;
    std::vector<int> themes;
    vectors.reserve(account.tweet_ids.size());
    themes.reserve(account.tweet_ids.size());
    for (const std::string& id : account.tweet_ids) {
        const Tweet& tw = corpus.tweet_at(id);
        vectors.push_back(tweet_theme_vector(tw, lexicons));
        auto it = theme_by_tweet.find(id);
        themes.push_back(it == theme_by_tweet.end() ? -1 : it->second);
    }
    UserFeatureVector out;
    out.account_id = account.id;
    if (vectors.empty())
        out.values.assign(static_cast<std::size_t>(num_themes) * 2 * lexicons.total_dimensions(), 0.0);
    else
        out.values = aggregate_eq1(vectors, themes, num_themes);
    return out;
}

UserFeatureVector aggregate_profile_user(const Corpus& corpus, const Account& account) {
    if (account.tweet_ids.empty())
        raise("EmptyAccount", "account \"" + account.id + "\" has no tweets");
    std::vector<std::vector<double>> vectors;
    vectors.reserve(account.tweet_ids.size());
    for (const std::string& id : account.tweet_ids) {
        const Tweet& tw = corpus.tweet_at(id);
        NliVector nli = nli_vector(tw);
        std::vector<double> v = std::move(nli.values);
        std::vector<double> style = stylistic_vector(tw);
        v.insert(v.end(), style.begin(), style.end());
        vectors.push_back(std::move(v));
    }
    UserFeatureVector out;
    out.account_id = account.id;
    out.values = aggregate_eq2(vectors);
    return out;
}

namespace {

std::vector<std::string> bow_tokens(const Tweet& tweet) {
    std::vector<std::string> out;
    for (const Token& tok : tokenize(tweet.text)) {
        if (tok.kind == TokenKind::punct || tok.kind == TokenKind::emoji_or_symbol ||
            tok.kind == TokenKind::url)
            continue;
        out.push_back(utf8::lower(tok.surface));
    }
    return out;
}

} // namespace

BowVocabulary build_bow_vocabulary(const Corpus& corpus, std::span<const std::size_t> account_rows,
                                   std::size_t max_terms) {
    std::unordered_map<std::string, std::size_t> doc_freq;
    std::vector<std::string> appearance;
    for (std::size_t row : account_rows) {
        const Account& acc = corpus.accounts.at(row);
        std::unordered_map<std::string, bool> seen;
        for (const std::string& id : acc.tweet_ids) {
            for (std::string& term : bow_tokens(corpus.tweet_at(id))) {
                auto [it, inserted] = seen.emplace(std::move(term), true);
                if (inserted) {
                    auto [fit, finserted] = doc_freq.emplace(it->first, 0);
                    if (finserted) appearance.push_back(it->first);
                    ++fit->second;
                }
            }
        }
    }
    std::sort(appearance.begin(), appearance.end(), [&](const std::string& a, const std::string& b) {
        std::size_t fa = doc_freq.at(a), fb = doc_freq.at(b);
        if (fa != fb) return fa > fb;
        return a < b;
    });
    if (appearance.size() > max_terms) appearance.resize(max_terms);

    BowVocabulary vocab;
    vocab.terms = std::move(appearance);
    for (std::size_t i = 0; i < vocab.terms.size(); ++i)
        vocab.index.emplace(vocab.terms[i], static_cast<int>(i));
    return vocab;
}

std::vector<double> bow_user(const Corpus& corpus, const Account& account,
                             const BowVocabulary& vocabulary) {
    std::vector<double> out(vocabulary.terms.size(), 0.0);
    for (const std::string& id : account.tweet_ids) {
        for (const std::string& term : bow_tokens(corpus.tweet_at(id))) {
            auto it = vocabulary.index.find(term);
            if (it != vocabulary.index.end()) out[static_cast<std::size_t>(it->second)] += 1.0;
        }
    }
    return out;
}

std::vector<double> network_vector(const Account& account) {
    return {std::log1p(static_cast<double>(account.followers)),
            std::log1p(static_cast<double>(account.followees))};
}

FeatureSchema network_schema() {
    return FeatureSchema{{{"net.followers_log1p", "network"}, {"net.followees_log1p", "network"}}};
}

} // namespace trolllens
