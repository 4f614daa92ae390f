#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace trolllens::utf8 {

// Decode UTF-8 into codepoints; invalid byte sequences become U+FFFD.
std::vector<char32_t> decode(std::string_view s);
std::string encode(const std::vector<char32_t>& cps);
void append(std::string& out, char32_t cp);

// Coarse codepoint classes. This is a pragmatic tweet-oriented
// classifier, not a full Unicode category table: anything in the common
// script blocks counts as a letter, emoji/dingbat/arrow blocks count as
// symbols, the rest of the printable oddities as punctuation.
enum class CharClass { letter, digit, space, punct, symbol };

CharClass classify(char32_t cp);

inline bool is_letter(char32_t cp) { return classify(cp) == CharClass::letter; }
inline bool is_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }
inline bool is_space(char32_t cp) { return classify(cp) == CharClass::space; }

bool is_upper(char32_t cp);
char32_t to_lower(char32_t cp);

std::string lower(std::string_view s);

} // namespace trolllens::utf8
