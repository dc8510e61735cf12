#include "shiftkit/text.hpp"

#include <cwctype>
#include <locale>

namespace shiftkit::text {

namespace {

// wchar_t is UTF-32 on the platforms we build for; the C.UTF-8 locale gives
// glibc's Unicode tables without touching the global locale.
const std::ctype<wchar_t> *unicode_ctype() {
    static const std::locale loc = []() {
        for (const char *name : {"C.UTF-8", "C.utf8", "en_US.UTF-8"}) {
            try {
                return std::locale(name);
            } catch (const std::runtime_error &) {
            }
        }
        return std::locale::classic();
    }();
    static const std::ctype<wchar_t> *facet = &std::use_facet<std::ctype<wchar_t>>(loc);
    return facet;
}

constexpr char32_t kReplacement = 0xFFFD;

} // namespace

std::u32string decode_utf8(std::string_view in) {
    std::u32string out;
    out.reserve(in.size());
    std::size_t i = 0;
    const auto n = in.size();
    while (i < n) {
        auto b0 = static_cast<unsigned char>(in[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int len;
        char32_t cp;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        if (i + len > n) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        bool ok = true;
        for (int k = 1; k < len; ++k) {
            auto b = static_cast<unsigned char>(in[i + k]);
            if ((b & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (b & 0x3F);
        }
        static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
        if (!ok || cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(std::u32string_view in) {
    std::string out;
    out.reserve(in.size());
    for (char32_t cp : in) {
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
    return out;
}

char32_t to_lower(char32_t c) {
    if (c < 0x80)
        return (c >= U'A' && c <= U'Z') ? c + 32 : c;
    if (const auto *ct = unicode_ctype())
        return static_cast<char32_t>(ct->tolower(static_cast<wchar_t>(c)));
    return c;
}

std::u32string to_lower(std::u32string_view in) {
    std::u32string out(in);
    for (auto &c : out)
        c = to_lower(c);
    return out;
}

std::string to_lower_utf8(std::string_view in) { return encode_utf8(to_lower(decode_utf8(in))); }

bool is_alnum(char32_t c) {
    if (c < 0x80)
        return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9');
    if (c == kReplacement)
        return false;
    if (const auto *ct = unicode_ctype())
        return ct->is(std::ctype_base::alnum, static_cast<wchar_t>(c));
    return false;
}

bool is_space(char32_t c) {
    if (c < 0x80)
        return c == U' ' || (c >= U'\t' && c <= U'\r');
    if (const auto *ct = unicode_ctype())
        return ct->is(std::ctype_base::space, static_cast<wchar_t>(c)) || c == 0x00A0;
    return false;
}

} // namespace shiftkit::text
