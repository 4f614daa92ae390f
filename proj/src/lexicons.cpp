#include "trolllens/lexicons.hpp"

#include <algorithm>
#include <fstream>

#include "trolllens/error.hpp"
#include "trolllens/utf8.hpp"
#include "trolllens/util.hpp"

namespace trolllens {

std::size_t Lexicon::entry_count() const {
    std::size_t n = unigrams.size() + bigrams.size() + unigram_prefixes.size();
    for (const auto& [first, rest] : bigram_prefixes) n += rest.size();
    return n;
}

int Lexicon::category_index(std::string_view category) const {
    for (std::size_t i = 0; i < categories.size(); ++i)
        if (categories[i] == category) return static_cast<int>(i);
    return -1;
}

std::uint32_t Lexicon::lookup_unigram(std::string_view token) const {
    std::uint32_t mask = 0;
    if (auto it = unigrams.find(std::string(token)); it != unigrams.end()) mask |= it->second;
    if (!unigram_prefixes.empty()) {
        for (const auto& [prefix, m] : unigram_prefixes)
            if (token.size() >= prefix.size() && token.substr(0, prefix.size()) == prefix) mask |= m;
    }
    return mask;
}

std::uint32_t Lexicon::lookup_bigram(std::string_view first, std::string_view second) const {
    std::uint32_t mask = 0;
    if (!bigrams.empty()) {
        std::string key;
        key.reserve(first.size() + 1 + second.size());
        key.append(first).push_back(' ');
        key.append(second);
        if (auto it = bigrams.find(key); it != bigrams.end()) mask |= it->second;
    }
    if (!bigram_prefixes.empty()) {
        if (auto it = bigram_prefixes.find(std::string(first)); it != bigram_prefixes.end()) {
            for (const auto& [prefix, m] : it->second)
                if (second.size() >= prefix.size() && second.substr(0, prefix.size()) == prefix) mask |= m;
        }
    }
    return mask;
}

namespace {

// normalize term whitespace: trim + collapse internal runs to one space
std::string normalize_term(std::string_view raw) {
    std::string out;
    bool pending_space = false;
    for (char c : raw) {
        if (c == ' ' || c == '\t') {
            if (!out.empty()) pending_space = true;
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(c);
        }
    }
    return out;
}

} // namespace

Lexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise("MissingArtifact", "cannot open lexicon file: " + path.string());

    Lexicon lex;
    lex.name = path.stem().string();
    bool header_present = false;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view sv = util::trim(line);
        if (sv.empty()) continue;
        if (sv[0] == '#') {
            // structured header: "# name: <lexicon> categories: <c1,c2,...>"
            auto name_pos = sv.find("name:");
            auto cats_pos = sv.find("categories:");
            if (name_pos != std::string_view::npos && cats_pos != std::string_view::npos) {
                header_present = true;
                lex.name = std::string(util::trim(sv.substr(name_pos + 5, cats_pos - (name_pos + 5))));
                for (auto& cat : util::split(sv.substr(cats_pos + 11), ',')) {
                    std::string c = util::lower_ascii(std::string(util::trim(cat)));
                    if (c.empty()) continue;
                    if (lex.category_index(c) < 0) lex.categories.push_back(std::move(c));
                }
                if (lex.categories.size() > 32)
                    raise("MalformedLine", path.string() + ": more than 32 categories declared");
            }
            continue;
        }

        auto tab = sv.find('\t');
        if (tab == std::string_view::npos)
            raise("MalformedLine", path.string() + " line " + std::to_string(line_no) +
                                       ": expected `term<TAB>category`");
        std::string term = utf8::lower(normalize_term(sv.substr(0, tab)));
        std::string category = util::lower_ascii(std::string(util::trim(sv.substr(tab + 1))));
        if (term.empty() || term == "*")
            raise("EmptyTerm", path.string() + " line " + std::to_string(line_no) + ": empty term");
        if (category.empty())
            raise("MalformedLine",
                  path.string() + " line " + std::to_string(line_no) + ": empty category");

        int cat_idx = lex.category_index(category);
        if (cat_idx < 0) {
            if (header_present)
                raise("UndeclaredCategory", path.string() + " line " + std::to_string(line_no) +
                                                ": category \"" + category + "\" not in header");
            if (lex.categories.size() >= 32)
                raise("MalformedLine", path.string() + ": more than 32 categories");
            cat_idx = static_cast<int>(lex.categories.size());
            lex.categories.push_back(category);
        }
        std::uint32_t bit = 1u << cat_idx;

        auto tokens = util::split(term, ' ');
        if (tokens.size() > 2)
            raise("MaxNgramExceeded", path.string() + " line " + std::to_string(line_no) +
                                          ": term \"" + term + "\" has more than 2 tokens");

        bool wildcard = term.back() == '*';
        if (wildcard) term.pop_back();
        if (tokens.size() == 1) {
            if (wildcard) {
                if (term.empty())
                    raise("EmptyTerm",
                          path.string() + " line " + std::to_string(line_no) + ": empty prefix term");
                auto it = std::find_if(lex.unigram_prefixes.begin(), lex.unigram_prefixes.end(),
                                       [&](const auto& p) { return p.first == term; });
                if (it != lex.unigram_prefixes.end())
                    it->second |= bit;
                else
                    lex.unigram_prefixes.emplace_back(term, bit);
                lex.max_prefix_len = std::max(lex.max_prefix_len, term.size());
            } else {
                lex.unigrams[term] |= bit;
            }
        } else {
            if (wildcard) {
                std::string first = std::string(util::trim(tokens[0]));
                std::string second = tokens[1].substr(0, tokens[1].size() - 1);
                if (second.empty())
                    raise("EmptyTerm",
                          path.string() + " line " + std::to_string(line_no) + ": empty prefix term");
                auto& vec = lex.bigram_prefixes[first];
                auto it = std::find_if(vec.begin(), vec.end(),
                                       [&](const auto& p) { return p.first == second; });
                if (it != vec.end())
                    it->second |= bit;
                else
                    vec.emplace_back(second, bit);
            } else {
                lex.bigrams[term] |= bit;
            }
        }
    }
    return lex;
}

namespace {

// lowercase + strip a leading '#' or '@' before lookup
std::string normalize_token(const Token& tok) {
    std::string_view s = tok.surface;
    if (!s.empty() && (s[0] == '#' || s[0] == '@')) s.remove_prefix(1);
    return utf8::lower(s);
}

} // namespace

CategoryHits match(const TokenStream& tokens, const Lexicon& lexicon) {
    CategoryHits hits;
    hits.counts.assign(lexicon.categories.size(), 0);
    hits.token_count = tokens.size();

    std::vector<std::string> norm(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) norm[i] = normalize_token(tokens[i]);

    const auto add = [&](std::uint32_t mask) {
        for (std::size_t c = 0; c < lexicon.categories.size(); ++c)
            if (mask & (1u << c)) ++hits.counts[c];
    };

    std::size_t i = 0;
    while (i < tokens.size()) {
        if (i + 1 < tokens.size()) {
            std::uint32_t mask = lexicon.lookup_bigram(norm[i], norm[i + 1]);
            if (mask) {
                add(mask);
                i += 2;
                continue;
            }
        }
        std::uint32_t mask = lexicon.lookup_unigram(norm[i]);
        if (mask) add(mask);
        ++i;
    }
    return hits;
}

const std::vector<LexiconFamily>& lexicon_families() {
    static const std::vector<LexiconFamily> families = {
        {"emotions",
         {"anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise", "trust"}},
        {"sentiment", {"positive", "negative"}},
        {"bad_sexual", {"bad", "sexual"}},
        {"stance",
         {"belief", "denial", "doubt", "fake", "knowledge", "negation", "question", "report"}},
        {"bias",
         {"assertive", "bias", "factive", "hedge", "implicative", "report", "strong_subj",
          "weak_subj"}},
        {"liwc",
         {"pronoun", "anx", "cogmech", "insight", "cause", "discrep", "tentat", "certain", "inhib",
          "incl"}},
        {"morality",
         {"care", "harm", "fairness", "cheating", "loyalty", "betrayal", "authority", "subversion",
          "sanctity", "degradation"}},
    };
    return families;
}

const Lexicon& LexiconSet::family(std::string_view name) const {
    for (const Lexicon& lex : lexicons)
        if (lex.name == name) return lex;
    raise("UnknownFamily", "no lexicon family named \"" + std::string(name) + "\"");
}

std::size_t LexiconSet::total_dimensions() const {
    std::size_t n = 0;
    for (const Lexicon& lex : lexicons) n += lex.categories.size();
    return n;
}

namespace {

// Remap a loaded lexicon's category bitmasks onto the family's canonical
// category order so feature dimensions are stable across files.
Lexicon reorder_to_family(Lexicon lex, const LexiconFamily& family,
                          const std::filesystem::path& path) {
    if (lex.categories.size() != family.categories.size())
        raise("UndeclaredCategory",
              path.string() + ": expected " + std::to_string(family.categories.size()) +
                  " categories for family \"" + std::string(family.name) + "\", found " +
                  std::to_string(lex.categories.size()));

    std::vector<int> remap(lex.categories.size(), -1);
    for (std::size_t i = 0; i < lex.categories.size(); ++i) {
        auto it = std::find(family.categories.begin(), family.categories.end(), lex.categories[i]);
        if (it == family.categories.end())
            raise("UndeclaredCategory", path.string() + ": category \"" + lex.categories[i] +
                                            "\" is not part of family \"" + std::string(family.name) +
                                            "\"");
        remap[i] = static_cast<int>(it - family.categories.begin());
    }

    auto remap_mask = [&](std::uint32_t mask) {
        std::uint32_t out = 0;
        for (std::size_t c = 0; c < remap.size(); ++c)
            if (mask & (1u << c)) out |= 1u << remap[c];
        return out;
    };
    for (auto& [term, mask] : lex.unigrams) mask = remap_mask(mask);
    for (auto& [term, mask] : lex.bigrams) mask = remap_mask(mask);
    for (auto& [prefix, mask] : lex.unigram_prefixes) mask = remap_mask(mask);
    for (auto& [first, vec] : lex.bigram_prefixes)
        for (auto& [prefix, mask] : vec) mask = remap_mask(mask);

    lex.name = std::string(family.name);
    lex.categories.assign(family.categories.begin(), family.categories.end());
    return lex;
}

} // namespace

LexiconSet load_lexicon_set(const std::filesystem::path& dir) {
    LexiconSet set;
    for (const LexiconFamily& family : lexicon_families()) {
        std::filesystem::path path = dir / (std::string(family.name) + ".tsv");
        if (!std::filesystem::exists(path))
            raise("MissingArtifact", "lexicon file not found: " + path.string());
        set.lexicons.push_back(reorder_to_family(load_lexicon(path), family, path));
    }
    return set;
}

} // namespace trolllens
