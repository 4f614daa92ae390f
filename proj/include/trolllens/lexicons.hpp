#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "trolllens/preprocess.hpp"

namespace trolllens {

// A category lexicon loaded from TSV (`term<TAB>category` lines, optional
// `# name: <n> categories: <c1,c2,...>` header). Terms are one or two
// tokens, lowercase; a trailing '*' marks a LIWC-style prefix entry.
class Lexicon {
public:
    std::string name;
    std::vector<std::string> categories;

    // category bitmasks keyed by exact term ("abandon", "not good")
    std::unordered_map<std::string, std::uint32_t> unigrams;
    std::unordered_map<std::string, std::uint32_t> bigrams;
    // prefix entries: ("certain", mask) from "certain*"
    std::vector<std::pair<std::string, std::uint32_t>> unigram_prefixes;
    // bigram prefix entries keyed by exact first token
    std::unordered_map<std::string, std::vector<std::pair<std::string, std::uint32_t>>> bigram_prefixes;

    std::size_t entry_count() const;
    int category_index(std::string_view category) const; // -1 if absent
    std::size_t max_prefix_len = 0;

    std::uint32_t lookup_unigram(std::string_view token) const;
    std::uint32_t lookup_bigram(std::string_view first, std::string_view second) const;
};

Lexicon load_lexicon(const std::filesystem::path& path);

struct CategoryHits {
    std::vector<std::int64_t> counts; // per category, lexicon order
    std::size_t token_count = 0;

    double proportion(std::size_t category) const {
        return token_count == 0 ? 0.0
                                : static_cast<double>(counts[category]) / static_cast<double>(token_count);
    }
    bool present(std::size_t category) const { return counts[category] >= 1; }
};

// Greedy left-to-right longest match (bigrams before unigrams); each
// token is consumed by at most one match. Tokens are lowercased and
// '#'/'@' prefixes stripped before lookup.
CategoryHits match(const TokenStream& tokens, const Lexicon& lexicon);

// The paper's seven theme-feature families with their fixed category
// orders (48 per-tweet dimensions in total).
struct LexiconFamily {
    std::string_view name;
    std::vector<std::string_view> categories;
};

const std::vector<LexiconFamily>& lexicon_families();

struct LexiconSet {
    std::vector<Lexicon> lexicons; // family order

    const Lexicon& family(std::string_view name) const;
    std::size_t total_dimensions() const; // 48
};

// Loads `<dir>/<family>.tsv` for each family and validates that the file
// declares exactly the family's categories (order normalized to the
// family's canonical order).
LexiconSet load_lexicon_set(const std::filesystem::path& dir);

} // namespace trolllens
