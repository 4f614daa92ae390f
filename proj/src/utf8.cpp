#include "trolllens/utf8.hpp"

namespace trolllens::utf8 {

std::vector<char32_t> decode(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    while (i < s.size()) {
        unsigned char b0 = byte(i);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int len = 0;
        char32_t cp = 0;
        if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; }
        else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; }
        else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; }
        else { out.push_back(0xFFFD); ++i; continue; }
        if (i + len > s.size()) { out.push_back(0xFFFD); ++i; continue; }
        bool ok = true;
        for (int k = 1; k < len; ++k) {
            unsigned char bk = byte(i + k);
            if ((bk & 0xC0) != 0x80) { ok = false; break; }
            cp = (cp << 6) | (bk & 0x3F);
        }
        if (!ok || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) append(out, cp);
    return out;
}

CharClass classify(char32_t cp) {
    if (cp < 0x80) {
        if ((cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z')) return CharClass::letter;
        if (cp >= U'0' && cp <= U'9') return CharClass::digit;
        if (cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f' || cp == U'\v')
            return CharClass::space;
        return CharClass::punct;
    }
    if (cp == 0xA0) return CharClass::space;
    if (cp < 0xC0) return CharClass::symbol;              // Latin-1 signs: ¡ ¢ £ ...
    if (cp < 0x100) {
        if (cp == 0xD7 || cp == 0xF7) return CharClass::symbol;
        return CharClass::letter;                          // accented Latin-1
    }
    if (cp < 0x2000) return CharClass::letter;             // Latin ext, Greek, Cyrillic, ...
    if (cp >= 0x200B && cp <= 0x200F) return CharClass::symbol; // ZW(N)J, directional marks
    if (cp < 0x2070) return CharClass::punct;              // general punctuation
    if (cp < 0x2C00) return CharClass::symbol;             // arrows, math, dingbat-adjacent
    if (cp < 0xD800) return CharClass::letter;             // remaining BMP scripts (incl. CJK)
    if (cp < 0xF900) return CharClass::symbol;             // surrogates/private use
    if (cp < 0xFE00) return CharClass::letter;             // compat ideographs, presentation forms
    if (cp < 0xFF00) return CharClass::symbol;             // variation selectors, small forms
    if (cp < 0x10000) return CharClass::letter;            // halfwidth/fullwidth forms
    if (cp >= 0x1F000) return CharClass::symbol;           // emoji planes
    return CharClass::letter;                              // SMP scripts
}

bool is_upper(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return true;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return true;
    return false;
}

char32_t to_lower(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    return cp;
}

std::string lower(std::string_view s) {
    auto cps = decode(s);
    for (auto& cp : cps) cp = to_lower(cp);
    return encode(cps);
}

} // namespace trolllens::utf8
