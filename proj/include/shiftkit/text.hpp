#pragma once

#include <string>
#include <string_view>

namespace shiftkit::text {

/// Decodes UTF-8. Malformed sequences become U+FFFD.
std::u32string decode_utf8(std::string_view in);
std::string encode_utf8(std::u32string_view in);

/// Full Unicode simple lowercasing (per code point).
char32_t to_lower(char32_t c);
std::u32string to_lower(std::u32string_view in);
std::string to_lower_utf8(std::string_view in);

bool is_alnum(char32_t c);
bool is_space(char32_t c);

/// Letters, digits and underscore.
inline bool is_word(char32_t c) { return c == U'_' || is_alnum(c); }

} // namespace shiftkit::text
