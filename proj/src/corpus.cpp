#include "trolllens/corpus.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "trolllens/error.hpp"
#include "trolllens/utf8.hpp"
#include "trolllens/util.hpp"

namespace trolllens {

using nlohmann::ordered_json;

int upos_index(std::string_view tag) {
    for (std::size_t i = 0; i < kUposTags.size(); ++i)
        if (kUposTags[i] == tag) return static_cast<int>(i);
    return -1;
}

std::string_view deprel_base(std::string_view label) {
    auto pos = label.find(':');
    return pos == std::string_view::npos ? label : label.substr(0, pos);
}

int deprel_index(std::string_view label) {
    std::string_view base = deprel_base(label);
    for (std::size_t i = 0; i < kDeprelLabels.size(); ++i)
        if (kDeprelLabels[i] == base) return static_cast<int>(i);
    return -1;
}

std::string_view label_name(Label l) {
    return l == Label::troll ? "troll" : "regular";
}

Label parse_label(std::string_view s, int line_no) {
    if (s == "troll") return Label::troll;
    if (s == "regular") return Label::regular;
    raise("UnknownLabel", "line " + std::to_string(line_no) + ": unknown label \"" +
                              std::string(s) + "\" (expected \"troll\" or \"regular\")");
}

void Corpus::rebuild_indexes() {
    account_index.clear();
    tweet_index.clear();
    for (std::size_t i = 0; i < accounts.size(); ++i) account_index[accounts[i].id] = i;
    for (std::size_t i = 0; i < tweets.size(); ++i) tweet_index[tweets[i].id] = i;
}

const Tweet* Corpus::find_tweet(std::string_view id) const {
    auto it = tweet_index.find(std::string(id));
    return it == tweet_index.end() ? nullptr : &tweets[it->second];
}

const Account* Corpus::find_account(std::string_view id) const {
    auto it = account_index.find(std::string(id));
    return it == account_index.end() ? nullptr : &accounts[it->second];
}

const Tweet& Corpus::tweet_at(const std::string& id) const {
    const Tweet* t = find_tweet(id);
    if (!t) raise("DanglingTweetReference", "tweet id \"" + id + "\" not present in corpus");
    return *t;
}

namespace {

// Accepts YYYY-MM-DD with optional THH:MM:SS and optional Z or ±HH:MM.
bool valid_iso8601(std::string_view s) {
    auto digits = [&](std::size_t pos, std::size_t n) {
        if (pos + n > s.size()) return false;
        for (std::size_t i = 0; i < n; ++i)
            if (s[pos + i] < '0' || s[pos + i] > '9') return false;
        return true;
    };
    if (!digits(0, 4) || s.size() < 10) return false;
    if (s[4] != '-' || !digits(5, 2) || s[7] != '-' || !digits(8, 2)) return false;
    if (s.size() == 10) return true;
    if (s[10] != 'T' && s[10] != ' ') return false;
    if (!digits(11, 2) || s.size() < 19) return false;
    if (s[13] != ':' || !digits(14, 2) || s[16] != ':' || !digits(17, 2)) return false;
    if (s.size() == 19) return true;
    if (s.size() == 20 && s[19] == 'Z') return true;
    if (s.size() == 25 && (s[19] == '+' || s[19] == '-') && digits(20, 2) && s[22] == ':' && digits(23, 2))
        return true;
    return false;
}

std::string require_string(const ordered_json& obj, const char* field, int line_no) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_string())
        raise("MissingField", "line " + std::to_string(line_no) + ": missing or non-string field \"" +
                                  field + "\"");
    return it->get<std::string>();
}

std::uint64_t require_count(const ordered_json& obj, const char* field, int line_no) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_number_integer())
        raise("MissingField",
              "line " + std::to_string(line_no) + ": missing or non-integer field \"" + field + "\"");
    auto v = it->get<std::int64_t>();
    if (v < 0)
        raise("MalformedLine",
              "line " + std::to_string(line_no) + ": field \"" + field + "\" must be non-negative");
    return static_cast<std::uint64_t>(v);
}

std::vector<TokenAnnotation> parse_annotation_array(const ordered_json& arr, int line_no) {
    std::vector<TokenAnnotation> out;
    out.reserve(arr.size());
    for (const auto& item : arr) {
        if (!item.is_array() || item.size() != 3 || !item[0].is_string() || !item[1].is_string() ||
            !item[2].is_string())
            raise("MalformedLine", "line " + std::to_string(line_no) +
                                       ": annotation entries must be [surface, upos, deprel]");
        TokenAnnotation ann;
        ann.surface = item[0].get<std::string>();
        std::string upos = item[1].get<std::string>();
        std::string deprel = item[2].get<std::string>();
        ann.upos = upos_index(upos);
        if (ann.upos < 0)
            raise("UnknownUposTag", "line " + std::to_string(line_no) + ": unknown UPOS tag \"" + upos + "\"");
        ann.deprel = deprel_index(deprel);
        if (ann.deprel < 0)
            raise("UnknownDeprel",
                  "line " + std::to_string(line_no) + ": unknown DEPREL label \"" + deprel + "\"");
        out.push_back(std::move(ann));
    }
    return out;
}

} // namespace

Corpus load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise("MissingArtifact", "cannot open corpus file: " + path.string());

    Corpus corpus;
    std::unordered_map<std::string, int> account_lines;
    std::unordered_map<std::string, int> tweet_lines;
    std::vector<int> tweet_line_of; // parallel to corpus.tweets
    bool meta_seen = false;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = util::trim(line);
        if (sv.empty()) continue;

        ordered_json obj;
        try {
            obj = ordered_json::parse(sv);
        } catch (const nlohmann::json::exception& e) {
            raise("MalformedLine", "line " + std::to_string(line_no) + ": invalid JSON (" + e.what() + ")");
        }
        if (!obj.is_object())
            raise("MalformedLine", "line " + std::to_string(line_no) + ": expected a JSON object");

        std::string kind = require_string(obj, "kind", line_no);
        if (kind == "meta") {
            if (meta_seen)
                raise("MalformedLine", "line " + std::to_string(line_no) + ": duplicate meta line");
            if (line_no != 1)
                raise("MalformedLine",
                      "line " + std::to_string(line_no) + ": meta header must be the first line");
            meta_seen = true;
            auto it = obj.find("collection_hashtags");
            if (it == obj.end() || !it->is_array())
                raise("MissingField", "line " + std::to_string(line_no) +
                                          ": meta requires a \"collection_hashtags\" array");
            for (const auto& h : *it) {
                if (!h.is_string())
                    raise("MalformedLine",
                          "line " + std::to_string(line_no) + ": collection_hashtags must be strings");
                std::string tag = utf8::lower(h.get<std::string>());
                if (tag.empty()) continue;
                if (tag[0] != '#') tag.insert(tag.begin(), '#');
                corpus.collection_hashtags.insert(tag);
            }
        } else if (kind == "account") {
            Account acc;
            acc.id = require_string(obj, "id", line_no);
            acc.label = parse_label(require_string(obj, "label", line_no), line_no);
            acc.followers = require_count(obj, "followers", line_no);
            acc.followees = require_count(obj, "followees", line_no);
            auto [it, inserted] = account_lines.emplace(acc.id, line_no);
            if (!inserted)
                raise("DuplicateId", "duplicate account id \"" + acc.id + "\" (lines " +
                                         std::to_string(it->second) + " and " + std::to_string(line_no) + ")");
            corpus.accounts.push_back(std::move(acc));
        } else if (kind == "tweet") {
            Tweet tw;
            tw.id = require_string(obj, "id", line_no);
            tw.account_id = require_string(obj, "account_id", line_no);
            tw.text = require_string(obj, "text", line_no);
            if (auto it = obj.find("timestamp"); it != obj.end() && !it->is_null()) {
                if (!it->is_string())
                    raise("MalformedLine",
                          "line " + std::to_string(line_no) + ": timestamp must be a string");
                std::string ts = it->get<std::string>();
                if (!valid_iso8601(ts))
                    raise("MalformedLine", "line " + std::to_string(line_no) +
                                               ": timestamp \"" + ts + "\" is not ISO-8601");
                tw.timestamp = std::move(ts);
            }
            if (auto it = obj.find("annotations"); it != obj.end() && !it->is_null()) {
                if (!it->is_array())
                    raise("MalformedLine",
                          "line " + std::to_string(line_no) + ": annotations must be an array");
                tw.annotations = parse_annotation_array(*it, line_no);
            }
            auto [it, inserted] = tweet_lines.emplace(tw.id, line_no);
            if (!inserted)
                raise("DuplicateId", "duplicate tweet id \"" + tw.id + "\" (lines " +
                                         std::to_string(it->second) + " and " + std::to_string(line_no) + ")");
            corpus.tweets.push_back(std::move(tw));
            tweet_line_of.push_back(line_no);
        } else {
            raise("MalformedLine",
                  "line " + std::to_string(line_no) + ": unknown kind \"" + kind + "\"");
        }
    }
    if (!meta_seen)
        raise("MissingField", "corpus file has no meta header line");

    corpus.rebuild_indexes();
    for (std::size_t i = 0; i < corpus.tweets.size(); ++i) {
        const Tweet& tw = corpus.tweets[i];
        auto it = corpus.account_index.find(tw.account_id);
        if (it == corpus.account_index.end())
            raise("DanglingTweetReference",
                  "line " + std::to_string(tweet_line_of[i]) + ": tweet \"" + tw.id +
                      "\" references unknown account \"" + tw.account_id + "\"");
        corpus.accounts[it->second].tweet_ids.push_back(tw.id);
    }
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) raise("IoError", "cannot write corpus file: " + path.string());

    ordered_json meta;
    meta["kind"] = "meta";
    meta["collection_hashtags"] = corpus.collection_hashtags; // std::set: sorted, deterministic
    out << meta.dump() << '\n';

    for (const Account& acc : corpus.accounts) {
        ordered_json j;
        j["kind"] = "account";
        j["id"] = acc.id;
        j["label"] = std::string(label_name(acc.label));
        j["followers"] = acc.followers;
        j["followees"] = acc.followees;
        out << j.dump() << '\n';
    }
    for (const Tweet& tw : corpus.tweets) {
        ordered_json j;
        j["kind"] = "tweet";
        j["id"] = tw.id;
        j["account_id"] = tw.account_id;
        j["text"] = tw.text;
        if (tw.timestamp) j["timestamp"] = *tw.timestamp;
        if (tw.annotations) {
            ordered_json arr = ordered_json::array();
            for (const TokenAnnotation& ann : *tw.annotations)
                arr.push_back({ann.surface, std::string(ann.upos_tag()), std::string(ann.deprel_label())});
            j["annotations"] = std::move(arr);
        }
        out << j.dump() << '\n';
    }
}

AnnotationMap load_conllu(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise("MissingArtifact", "cannot open CoNLL-U file: " + path.string());

    AnnotationMap map;
    std::string line;
    int line_no = 0;
    std::string current_tweet_id;
    bool in_block = false;

    const auto is_range_or_empty_id = [](std::string_view id) {
        return id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) { // block boundary
            current_tweet_id.clear();
            in_block = false;
            continue;
        }
        if (line[0] == '#') {
            in_block = true;
            std::string_view sv = util::trim(std::string_view(line).substr(1));
            auto eq = sv.find('=');
            if (eq != std::string_view::npos) {
                std::string_view key = util::trim(sv.substr(0, eq));
                std::string_view val = util::trim(sv.substr(eq + 1));
                if (key == "tweet_id") current_tweet_id = std::string(val);
            }
            continue;
        }
        in_block = true;
        auto cols = util::split(line, '\t');
        if (cols.size() < 8)
            raise("MalformedLine",
                  "line " + std::to_string(line_no) + ": expected at least 8 tab-separated columns");
        if (is_range_or_empty_id(cols[0])) continue; // multiword range / empty node
        if (current_tweet_id.empty())
            raise("MissingTweetIdComment", "line " + std::to_string(line_no) +
                                               ": token line outside a block with a \"# tweet_id =\" comment");
        TokenAnnotation ann;
        ann.surface = cols[1];
        ann.upos = upos_index(cols[3]);
        if (ann.upos < 0)
            raise("UnknownUposTag",
                  "line " + std::to_string(line_no) + ": unknown UPOS tag \"" + cols[3] + "\"");
        ann.deprel = deprel_index(cols[7]);
        if (ann.deprel < 0)
            raise("UnknownDeprel",
                  "line " + std::to_string(line_no) + ": unknown DEPREL label \"" + cols[7] + "\"");
        map[current_tweet_id].push_back(std::move(ann));
    }
    (void)in_block;
    return map;
}

std::size_t attach_annotations(Corpus& corpus, const AnnotationMap& annotations,
                               std::vector<std::string>* unmatched) {
    std::size_t attached = 0;
    for (const auto& [tweet_id, anns] : annotations) {
        auto it = corpus.tweet_index.find(tweet_id);
        if (it == corpus.tweet_index.end()) {
            if (unmatched) unmatched->push_back(tweet_id);
            continue;
        }
        corpus.tweets[it->second].annotations = anns;
        ++attached;
    }
    return attached;
}

CorpusStats corpus_stats(const Corpus& corpus) {
    CorpusStats stats;
    for (const Account& acc : corpus.accounts) {
        if (acc.label == Label::troll) {
            ++stats.troll_accounts;
            stats.troll_tweets += acc.tweet_ids.size();
        } else {
            ++stats.regular_accounts;
            stats.regular_tweets += acc.tweet_ids.size();
        }
    }
    return stats;
}

} // namespace trolllens
