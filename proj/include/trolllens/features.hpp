#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "trolllens/corpus.hpp"
#include "trolllens/lexicons.hpp"
#include "trolllens/preprocess.hpp"

namespace trolllens {

struct DimInfo {
    std::string name;   // unique across the schema
    std::string family; // "emotions", "pos", "stopwords", "stylistic", ...
};

struct FeatureSchema {
    std::vector<DimInfo> dims;

    std::size_t dimension() const { return dims.size(); }
    std::uint64_t hash() const;
    nlohmann::ordered_json to_json() const;
};

struct UserFeatureVector {
    std::string account_id;
    std::vector<double> values;
};

// ---- per-tweet vectors --------------------------------------------------

// Concatenated per-category proportions across the seven lexicon
// families, in family order (48 dims).
std::vector<double> tweet_theme_vector(const Tweet& tweet, const LexiconSet& lexicons);
std::vector<double> tweet_family_vector(const Tweet& tweet, const Lexicon& lexicon);

FeatureSchema theme_tweet_schema(const LexiconSet& lexicons);
FeatureSchema family_tweet_schema(const Lexicon& lexicon);

struct NliVector {
    std::vector<double> values; // |stopwords| + 17 UPOS + 37 DEPREL
    bool annotated = false;
};

// Bags of stopwords, UPOS tags and DEPREL labels as relative
// frequencies. Stopwords are counted over the NLI-cleaned text; the POS
// and DEPREL bags need annotations and stay zero without them.
NliVector nli_vector(const Tweet& tweet);

// [special chars, char runs, URLs, hashtags, mentions, uppercase ratio,
// length] over the raw text.
std::vector<double> stylistic_vector(const Tweet& tweet);
std::vector<double> stylistic_vector(std::string_view text);

inline constexpr std::size_t kStylisticDims = 7;
inline constexpr std::array<std::string_view, kStylisticDims> kStylisticNames = {
    "special_chars", "char_runs", "urls", "hashtags", "mentions", "uppercase_ratio", "length",
};

FeatureSchema profile_tweet_schema();

// ---- user-level aggregation ----------------------------------------------

// Theme-wise [mean ; population std] blocks (Eq. 1 layout): for each
// theme j in 0..T the block holds the mean then the std of the tweet
// vectors assigned to j; empty themes contribute zero blocks and tweets
// with no theme are excluded.
std::vector<double> aggregate_eq1(std::span<const std::vector<double>> tweet_vectors,
                                  std::span<const int> themes, int num_themes);

// Global [mean ; population std] over all tweet vectors (Eq. 2 layout).
std::vector<double> aggregate_eq2(std::span<const std::vector<double>> tweet_vectors);

FeatureSchema eq1_schema(const FeatureSchema& tweet_schema, int num_themes);
FeatureSchema eq2_schema(const FeatureSchema& tweet_schema);

// Convenience wrappers over the corpus structures.
UserFeatureVector aggregate_theme_user(const Corpus& corpus, const Account& account,
                                       const LexiconSet& lexicons,
                                       const std::unordered_map<std::string, int>& theme_by_tweet,
                                       int num_themes);
UserFeatureVector aggregate_profile_user(const Corpus& corpus, const Account& account);

// ---- baselines -------------------------------------------------------------

struct BowVocabulary {
    std::vector<std::string> terms; // document-frequency order, capped
    std::unordered_map<std::string, int> index;
};

// Top max_terms terms by document frequency (user = document) over the
// given accounts; ties broken by term.
BowVocabulary build_bow_vocabulary(const Corpus& corpus, std::span<const std::size_t> account_rows,
                                   std::size_t max_terms = 10000);

// Term counts over all of the user's tweets concatenated into one document.
std::vector<double> bow_user(const Corpus& corpus, const Account& account,
                             const BowVocabulary& vocabulary);

// [log1p(followers), log1p(followees)]
std::vector<double> network_vector(const Account& account);
FeatureSchema network_schema();

} // namespace trolllens
