#include "trolllens/preprocess.hpp"

#include <algorithm>

#include "trolllens/utf8.hpp"

namespace trolllens {

namespace {

using utf8::CharClass;

bool is_word_char(char32_t cp) {
    CharClass c = utf8::classify(cp);
    return c == CharClass::letter || c == CharClass::digit || cp == U'_';
}

bool starts_url(const std::vector<char32_t>& cps, std::size_t i) {
    static const char32_t http[] = {U'h', U't', U't', U'p'};
    static const char32_t www[] = {U'w', U'w', U'w', U'.'};
    auto matches = [&](const char32_t* pat, std::size_t n) {
        if (i + n > cps.size()) return false;
        for (std::size_t k = 0; k < n; ++k)
            if (utf8::to_lower(cps[i + k]) != pat[k]) return false;
        return true;
    };
    if (matches(www, 4)) return true;
    if (!matches(http, 4)) return false;
    std::size_t j = i + 4;
    if (j < cps.size() && utf8::to_lower(cps[j]) == U's') ++j;
    return j + 2 < cps.size() && cps[j] == U':' && cps[j + 1] == U'/' && cps[j + 2] == U'/';
}

std::string slice(const std::vector<char32_t>& cps, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) utf8::append(out, cps[i]);
    return out;
}

} // namespace

TokenStream tokenize(std::string_view text) {
    TokenStream out;
    const std::vector<char32_t> cps = utf8::decode(text);
    const std::size_t n = cps.size();
    std::size_t i = 0;

    while (i < n) {
        char32_t c = cps[i];
        CharClass cls = utf8::classify(c);

        if (cls == CharClass::space) {
            ++i;
            continue;
        }
        if (starts_url(cps, i)) {
            std::size_t j = i;
            while (j < n && !utf8::is_space(cps[j])) ++j;
            out.push_back({slice(cps, i, j), TokenKind::url});
            i = j;
            continue;
        }
        if ((c == U'#' || c == U'@') && i + 1 < n && is_word_char(cps[i + 1])) {
            std::size_t j = i + 1;
            while (j < n && is_word_char(cps[j])) ++j;
            out.push_back({slice(cps, i, j), c == U'#' ? TokenKind::hashtag : TokenKind::mention});
            i = j;
            continue;
        }
        if (is_word_char(c)) {
            std::size_t j = i;
            bool all_numeric = true;
            while (j < n) {
                char32_t cj = cps[j];
                if (is_word_char(cj)) {
                    if (!utf8::is_digit(cj)) all_numeric = false;
                    ++j;
                    continue;
                }
                // apostrophe inside a word ("don't"), or . and , inside digits ("3.14")
                bool apostrophe = (cj == U'\'' || cj == 0x2019);
                bool digit_sep = (cj == U'.' || cj == U',');
                if ((apostrophe || digit_sep) && j + 1 < n && is_word_char(cps[j + 1])) {
                    if (digit_sep && !(utf8::is_digit(cps[j - 1]) && utf8::is_digit(cps[j + 1]))) break;
                    if (apostrophe) all_numeric = false;
                    ++j;
                    continue;
                }
                break;
            }
            out.push_back({slice(cps, i, j), all_numeric ? TokenKind::number : TokenKind::word});
            i = j;
            continue;
        }
        out.push_back({slice(cps, i, i + 1),
                       cls == CharClass::symbol ? TokenKind::emoji_or_symbol : TokenKind::punct});
        ++i;
    }
    return out;
}

namespace {

// Strip everything but letters/digits/'_' (and '#' when keep_hash) and
// lowercase; empty result means the token is dropped.
std::string clean_lda_token(std::string_view surface, bool keep_hash) {
    std::string out;
    for (char32_t cp : utf8::decode(surface)) {
        cp = utf8::to_lower(cp);
        CharClass c = utf8::classify(cp);
        if (c == CharClass::letter || c == CharClass::digit || cp == U'_' ||
            (keep_hash && cp == U'#'))
            utf8::append(out, cp);
    }
    return out;
}

bool looks_like_url(std::string_view s) {
    auto lower = utf8::lower(s);
    return lower.starts_with("http://") || lower.starts_with("https://") || lower.starts_with("www.");
}

} // namespace

LdaCleanOutput clean_for_lda(const Tweet& tweet, const std::set<std::string>& collection_hashtags) {
    LdaCleanOutput out;
    TokenStream stream = tokenize(tweet.text);

    auto add_hashtag = [&](std::string_view surface) {
        std::string cleaned = clean_lda_token(surface, /*keep_hash=*/true);
        if (cleaned.empty() || cleaned == "#") return;
        if (collection_hashtags.count(cleaned)) return;
        out.tokens.push_back(std::move(cleaned));
    };

    if (tweet.annotations && !tweet.annotations->empty()) {
        for (const TokenAnnotation& ann : *tweet.annotations) {
            if (kUposTags[static_cast<std::size_t>(ann.upos)] != "NOUN" &&
                kUposTags[static_cast<std::size_t>(ann.upos)] != "PROPN")
                continue;
            if (!ann.surface.empty() && (ann.surface[0] == '#' || ann.surface[0] == '@')) continue;
            if (looks_like_url(ann.surface)) continue;
            std::string cleaned = clean_lda_token(ann.surface, /*keep_hash=*/false);
            if (!cleaned.empty()) out.tokens.push_back(std::move(cleaned));
        }
        for (const Token& tok : stream)
            if (tok.kind == TokenKind::hashtag) add_hashtag(tok.surface);
        return out;
    }

    // No annotations: every non-stopword word token plus hashtags.
    out.used_fallback = true;
    for (const Token& tok : stream) {
        if (tok.kind == TokenKind::hashtag) {
            add_hashtag(tok.surface);
        } else if (tok.kind == TokenKind::word) {
            std::string cleaned = clean_lda_token(tok.surface, /*keep_hash=*/false);
            if (!cleaned.empty() && !is_stopword(cleaned)) out.tokens.push_back(std::move(cleaned));
        }
    }
    return out;
}

std::string clean_for_nli(std::string_view text) {
    std::vector<char32_t> kept;
    kept.reserve(text.size());
    for (char32_t cp : utf8::decode(text)) {
        CharClass c = utf8::classify(cp);
        if (c == CharClass::space) {
            kept.push_back(U' ');
        } else if (c == CharClass::letter || c == CharClass::digit || cp == U'.' || cp == U',') {
            kept.push_back(cp);
        }
    }

    // dot runs (>=2) -> one dot
    std::vector<char32_t> pass1;
    pass1.reserve(kept.size());
    for (std::size_t i = 0; i < kept.size();) {
        if (kept[i] == U'.') {
            std::size_t j = i;
            while (j < kept.size() && kept[j] == U'.') ++j;
            pass1.push_back(U'.');
            i = j;
        } else {
            pass1.push_back(kept[i]);
            ++i;
        }
    }

    // runs of >=3 identical characters -> one (spaces handled below)
    std::vector<char32_t> pass2;
    pass2.reserve(pass1.size());
    for (std::size_t i = 0; i < pass1.size();) {
        std::size_t j = i;
        while (j < pass1.size() && pass1[j] == pass1[i]) ++j;
        std::size_t run = j - i;
        if (pass1[i] == U' ' || run < 3) {
            for (std::size_t k = 0; k < run; ++k) pass2.push_back(pass1[i]);
        } else {
            pass2.push_back(pass1[i]);
        }
        i = j;
    }

    // whitespace runs -> single space; trim ends
    std::vector<char32_t> pass3;
    pass3.reserve(pass2.size());
    for (std::size_t i = 0; i < pass2.size();) {
        if (pass2[i] == U' ') {
            std::size_t j = i;
            while (j < pass2.size() && pass2[j] == U' ') ++j;
            if (!pass3.empty() && j < pass2.size()) pass3.push_back(U' ');
            i = j;
        } else {
            pass3.push_back(pass2[i]);
            ++i;
        }
    }
    return utf8::encode(pass3);
}

} // namespace trolllens
