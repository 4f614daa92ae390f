#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trolllens/corpus.hpp"

namespace trolllens {

enum class TokenKind { word, hashtag, mention, url, number, punct, emoji_or_symbol };

struct Token {
    std::string surface;
    TokenKind kind = TokenKind::word;

    bool operator==(const Token&) const = default;
};

using TokenStream = std::vector<Token>;

// Tweet-aware tokenizer: URLs, #hashtags and @mentions survive as single
// tokens; words split on whitespace and punctuation; never fails.
TokenStream tokenize(std::string_view text);

struct LdaCleanOutput {
    std::vector<std::string> tokens; // lowercase
    bool used_fallback = false;      // tweet had no annotations
};

// LDA-oriented cleaning: keep NOUN/PROPN surfaces plus hashtags, strip
// everything but letters/digits/'_'/'#', lowercase, drop the hashtags
// used for collection. Without annotations, falls back to all
// non-stopword word tokens plus hashtags and sets used_fallback.
LdaCleanOutput clean_for_lda(const Tweet& tweet, const std::set<std::string>& collection_hashtags);

// NLI-oriented cleaning: keep letters, digits, spaces, dots and commas
// (casing untouched); dot runs collapse to one dot, runs of >=3
// identical characters to one, whitespace runs to one space. Idempotent.
std::string clean_for_nli(std::string_view text);

// Fixed, ordered list of 179 English stopwords; doubles as the stopword
// bag dimension order.
std::span<const std::string_view> english_stopwords();
bool is_stopword(std::string_view lowercase_word);

} // namespace trolllens
