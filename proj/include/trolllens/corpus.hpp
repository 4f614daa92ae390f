#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace trolllens {

// Closed Universal Dependencies tag sets. Indices double as fixed
// feature dimensions, so the order here is normative.
inline constexpr std::array<std::string_view, 17> kUposTags = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
};

inline constexpr std::array<std::string_view, 37> kDeprelLabels = {
    "acl", "advcl", "advmod", "amod", "appos", "aux", "case", "cc", "ccomp",
    "clf", "compound", "conj", "cop", "csubj", "dep", "det", "discourse",
    "dislocated", "expl", "fixed", "flat", "goeswith", "iobj", "list", "mark",
    "nmod", "nsubj", "nummod", "obj", "obl", "orphan", "parataxis", "punct",
    "reparandum", "root", "vocative", "xcomp",
};

int upos_index(std::string_view tag);                 // -1 if unknown
int deprel_index(std::string_view label);             // -1 if unknown
std::string_view deprel_base(std::string_view label); // "nmod:poss" -> "nmod"

struct TokenAnnotation {
    std::string surface;
    int upos = -1;   // index into kUposTags
    int deprel = -1; // index into kDeprelLabels

    std::string_view upos_tag() const { return kUposTags[static_cast<std::size_t>(upos)]; }
    std::string_view deprel_label() const { return kDeprelLabels[static_cast<std::size_t>(deprel)]; }

    bool operator==(const TokenAnnotation&) const = default;
};

struct Tweet {
    std::string id;
    std::string account_id;
    std::string text; // preserved byte-exact as ingested
    std::optional<std::string> timestamp; // ISO-8601, validated at load
    std::optional<std::vector<TokenAnnotation>> annotations;
};

enum class Label { troll, regular };

std::string_view label_name(Label l);
Label parse_label(std::string_view s, int line_no); // throws UnknownLabel

struct Account {
    std::string id;
    Label label = Label::regular;
    std::uint64_t followers = 0;
    std::uint64_t followees = 0;
    std::vector<std::string> tweet_ids; // file order; partition of corpus tweets
};

// Immutable after load; safe for concurrent readers.
struct Corpus {
    std::vector<Account> accounts;
    std::vector<Tweet> tweets;
    std::set<std::string> collection_hashtags; // lowercase, '#'-prefixed

    std::unordered_map<std::string, std::size_t> account_index;
    std::unordered_map<std::string, std::size_t> tweet_index;

    void rebuild_indexes();
    const Tweet* find_tweet(std::string_view id) const;
    const Account* find_account(std::string_view id) const;
    const Tweet& tweet_at(const std::string& id) const; // throws if missing
};

struct CorpusStats {
    std::size_t troll_accounts = 0;
    std::size_t regular_accounts = 0;
    std::size_t troll_tweets = 0;
    std::size_t regular_tweets = 0;

    std::size_t total_accounts() const { return troll_accounts + regular_accounts; }
    std::size_t total_tweets() const { return troll_tweets + regular_tweets; }
};

// JSONL corpus: header {"kind":"meta",...}, then account and tweet
// objects, one per line (see README for the schema). Errors name the
// offending line(s): MissingField, DuplicateId, DanglingTweetReference,
// UnknownLabel, MalformedLine.
Corpus load_corpus(const std::filesystem::path& path);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// CoNLL-U ingestion. Each sentence block must carry `# tweet_id = <id>`;
// multiword ranges and empty nodes are skipped; DEPREL subtypes are
// truncated to their primary relation. Errors: MissingTweetIdComment,
// UnknownUposTag, UnknownDeprel.
using AnnotationMap = std::map<std::string, std::vector<TokenAnnotation>>;
AnnotationMap load_conllu(const std::filesystem::path& path);

// Attach annotations to matching tweets; returns the number of tweets
// annotated. Ids without a matching tweet are left in `unmatched` when
// the caller cares.
std::size_t attach_annotations(Corpus& corpus, const AnnotationMap& annotations,
                               std::vector<std::string>* unmatched = nullptr);

CorpusStats corpus_stats(const Corpus& corpus);

} // namespace trolllens
