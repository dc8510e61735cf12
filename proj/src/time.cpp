#include "shiftkit/time.hpp"

#include <cstdio>

namespace shiftkit {

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view s) : s_(s) {}

    bool done() const { return pos_ >= s_.size(); }
    char peek() const { return done() ? '\0' : s_[pos_]; }

    bool digits(int count, int &out) {
        if (pos_ + count > s_.size())
            return false;
        int value = 0;
        for (int i = 0; i < count; ++i) {
            char c = s_[pos_ + i];
            if (c < '0' || c > '9')
                return false;
            value = value * 10 + (c - '0');
        }
        pos_ += count;
        out = value;
        return true;
    }

    bool expect(char c) {
        if (peek() != c)
            return false;
        ++pos_;
        return true;
    }

    void skip() { ++pos_; }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace

std::optional<Instant> parse_iso8601(std::string_view text) {
    using namespace std::chrono;
    Cursor cur(text);
    int y, mo, d, h, mi, s;
    if (!cur.digits(4, y) || !cur.expect('-') || !cur.digits(2, mo) || !cur.expect('-') ||
        !cur.digits(2, d))
        return std::nullopt;
    if (!cur.expect('T') && !cur.expect(' '))
        return std::nullopt;
    if (!cur.digits(2, h) || !cur.expect(':') || !cur.digits(2, mi) || !cur.expect(':') ||
        !cur.digits(2, s))
        return std::nullopt;
    if (cur.expect('.')) {
        int frac;
        if (!cur.digits(1, frac))
            return std::nullopt;
        while (cur.peek() >= '0' && cur.peek() <= '9')
            cur.skip();
    }

    int offset_minutes = 0;
    if (cur.expect('Z')) {
    } else if (cur.peek() == '+' || cur.peek() == '-') {
        int sign = cur.peek() == '-' ? -1 : 1;
        cur.skip();
        int oh, om = 0;
        if (!cur.digits(2, oh))
            return std::nullopt;
        if (cur.expect(':')) {
            if (!cur.digits(2, om))
                return std::nullopt;
        } else if (!cur.done()) {
            if (!cur.digits(2, om))
                return std::nullopt;
        }
        if (oh > 23 || om > 59)
            return std::nullopt;
        offset_minutes = sign * (oh * 60 + om);
    } else {
        return std::nullopt;
    }
    if (!cur.done())
        return std::nullopt;

    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 60)
        return std::nullopt;
    // Leap seconds fold onto the next minute.
    auto local = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
    return Instant{local - minutes{offset_minutes}};
}

std::string format_iso8601(Instant t) {
    using namespace std::chrono;
    auto day_point = floor<days>(t);
    year_month_day ymd{day_point};
    hh_mm_ss hms{t - day_point};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                  static_cast<long>(hms.seconds().count()));
    return buf;
}

std::optional<std::chrono::seconds> parse_duration(std::string_view text) {
    if (text.empty())
        return std::nullopt;
    long long unit = 1;
    switch (text.back()) {
    case 's': unit = 1; text.remove_suffix(1); break;
    case 'm': unit = 60; text.remove_suffix(1); break;
    case 'h': unit = 3600; text.remove_suffix(1); break;
    case 'd': unit = 86400; text.remove_suffix(1); break;
    case 'w': unit = 7 * 86400; text.remove_suffix(1); break;
    default: break;
    }
    if (text.empty())
        return std::nullopt;
    long long value = 0;
    for (char c : text) {
        if (c < '0' || c > '9')
            return std::nullopt;
        value = value * 10 + (c - '0');
        if (value > (1LL << 40))
            return std::nullopt;
    }
    return std::chrono::seconds{value * unit};
}

Instant align_down(Instant t, std::chrono::seconds bin) {
    auto count = t.time_since_epoch().count();
    auto width = bin.count();
    auto q = count / width;
    if (count % width < 0)
        --q;
    return Instant{std::chrono::seconds{q * width}};
}

} // namespace shiftkit
