#include "shiftkit/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "shiftkit/text.hpp"

namespace shiftkit {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        auto item = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
        if (!item.empty())
            out.push_back(item);
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

class Reader {
public:
    Reader(RunConfig &cfg, std::vector<Finding> &findings) : cfg_(cfg), findings_(findings) {}

    void fail(const std::string &field, const std::string &msg) { findings_.push_back({field, msg}); }

    std::optional<double> real(const std::string &field, const std::string &v) {
        double out = 0.0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || ptr != v.data() + v.size()) {
            fail(field, "expected a number, got '" + v + "'");
            return std::nullopt;
        }
        return out;
    }

    std::optional<std::uint64_t> count(const std::string &field, const std::string &v) {
        std::uint64_t out = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || ptr != v.data() + v.size()) {
            fail(field, "expected a nonnegative integer, got '" + v + "'");
            return std::nullopt;
        }
        return out;
    }

    std::optional<bool> boolean(const std::string &field, const std::string &v) {
        if (v == "true" || v == "yes" || v == "1")
            return true;
        if (v == "false" || v == "no" || v == "0")
            return false;
        fail(field, "expected true or false, got '" + v + "'");
        return std::nullopt;
    }

    std::optional<Instant> instant(const std::string &field, const std::string &v) {
        auto t = parse_iso8601(v);
        if (!t)
            fail(field, "expected an ISO-8601 timestamp with zone, got '" + v + "'");
        return t;
    }

    void top(const std::string &key, const std::string &v) {
        if (key == "inputs") {
            for (auto &p : split_list(v))
                cfg_.inputs.emplace_back(p);
        } else if (key == "stoplist") {
            if (!v.empty())
                cfg_.stoplist = v;
        } else if (key == "output_dir") {
            cfg_.output_dir = v;
        } else if (key == "anchor_a") {
            cfg_.anchor_a = normalize_anchor(v);
        } else if (key == "anchor_b") {
            cfg_.anchor_b = normalize_anchor(v);
        } else if (key == "seed") {
            if (auto s = count(key, v))
                cfg_.seed = *s;
        } else {
            fail(key, "unknown key");
        }
    }

    void window(const std::string &label, const std::string &key, const std::string &v,
                WindowSpec &w, std::set<std::string> &seen_keys) {
        const auto field = "window." + label + "." + key;
        seen_keys.insert(key);
        if (key == "start") {
            if (auto t = instant(field, v))
                w.start = *t;
        } else if (key == "end") {
            if (auto t = instant(field, v))
                w.end = *t;
        } else {
            fail(field, "unknown key");
        }
    }

    void timeseries(const std::string &key, const std::string &v) {
        const auto field = "timeseries." + key;
        if (key == "bin") {
            auto d = parse_duration(v);
            if (!d || d->count() <= 0)
                fail(field, "expected a positive duration such as 1d or 3600, got '" + v + "'");
            else
                cfg_.timeseries_bin = *d;
        } else {
            fail(field, "unknown key");
        }
    }

    void shift(const std::string &key, const std::string &v) {
        const auto field = "shift." + key;
        auto &s = cfg_.shift;
        if (key == "top_k") {
            if (auto n = count(field, v))
                s.top_k = *n;
        } else if (key == "threshold_bits") {
            if (auto x = real(field, v))
                s.threshold_bits = *x;
        } else if (key == "weights") {
            if (v == "tokens")
                s.weights = WeightMode::Tokens;
            else if (v == "tweets")
                s.weights = WeightMode::Tweets;
            else if (v == "equal")
                s.weights = WeightMode::Equal;
            else
                fail(field, "expected tokens, tweets or equal, got '" + v + "'");
        } else if (key == "min_occurrences") {
            if (auto n = count(field, v))
                s.min_occurrences = *n;
        } else if (key == "dominance_share") {
            if (auto x = real(field, v))
                s.dominance_share = *x;
        } else if (key == "left") {
            if (v == "a")
                cfg_.shift_left = Direction::P;
            else if (v == "b")
                cfg_.shift_left = Direction::Q;
            else
                fail(field, "expected a or b, got '" + v + "'");
        } else {
            fail(field, "unknown key");
        }
    }

    void network(const std::string &key, const std::string &v) {
        const auto field = "network." + key;
        auto &n = cfg_.network;
        if (key == "alpha") {
            if (auto x = real(field, v))
                n.alpha = *x;
        } else if (key == "sweep") {
            n.sweep.clear();
            for (auto &item : split_list(v))
                if (auto x = real(field, item))
                    n.sweep.push_back(*x);
        } else if (key == "damping") {
            if (auto x = real(field, v))
                n.pagerank.damping = *x;
        } else if (key == "tol") {
            if (auto x = real(field, v))
                n.pagerank.tol = *x;
        } else if (key == "max_iter") {
            if (auto x = count(field, v))
                n.pagerank.max_iter = *x;
        } else if (key == "top_k") {
            if (auto x = count(field, v))
                n.top_k = *x;
        } else if (key == "size_scale") {
            if (auto x = real(field, v))
                n.size_scale = *x;
        } else {
            fail(field, "unknown key");
        }
    }

    void diversity(const std::string &key, const std::string &v) {
        const auto field = "diversity." + key;
        auto &d = cfg_.diversity;
        if (key == "sample_size") {
            if (auto x = count(field, v))
                d.sample_size = *x;
        } else if (key == "n_draws") {
            if (auto x = count(field, v))
                d.n_draws = *x;
        } else if (key == "start") {
            d.start = instant(field, v);
        } else if (key == "end") {
            d.end = instant(field, v);
        } else if (key == "lexical_exclude_all_hashtags") {
            if (auto b = boolean(field, v))
                d.options.lexical_exclude_all_hashtags = *b;
        } else if (key == "exclude_own_anchor") {
            if (auto b = boolean(field, v))
                d.options.exclude_own_anchor = *b;
        } else if (key == "with_replacement") {
            if (auto b = boolean(field, v))
                d.options.with_replacement = *b;
        } else {
            fail(field, "unknown key");
        }
    }

    static std::string normalize_anchor(std::string_view v) {
        if (!v.empty() && v.front() == '#')
            v.remove_prefix(1);
        return text::to_lower_utf8(v);
    }

private:
    RunConfig &cfg_;
    std::vector<Finding> &findings_;
};

} // namespace

std::filesystem::path resolve(const RunConfig &config, const std::filesystem::path &p) {
    return p.is_absolute() ? p : config.base_dir / p;
}

LoadedConfig parse_config(std::string_view text, const std::filesystem::path &base_dir) {
    LoadedConfig out;
    out.config.base_dir = base_dir;
    Reader reader(out.config, out.findings);

    std::string section;
    std::string window_label;
    std::map<std::string, std::set<std::string>> window_keys;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';')
            continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                out.findings.push_back({"line " + std::to_string(lineno), "unterminated section header"});
                continue;
            }
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            window_label.clear();
            for (const char *prefix : {"window.", "window "}) {
                if (section.rfind(prefix, 0) == 0) {
                    window_label = trim(std::string_view(section).substr(7));
                    section = "window";
                }
            }
            if (section == "window") {
                if (window_label.empty()) {
                    out.findings.push_back({"line " + std::to_string(lineno), "window section needs a label"});
                } else if (window_keys.contains(window_label)) {
                    out.findings.push_back({"window." + window_label, "duplicate window label"});
                } else {
                    window_keys[window_label];
                    out.config.windows.push_back({window_label, Instant{}, Instant{}});
                }
            } else if (section != "timeseries" && section != "shift" && section != "network" &&
                       section != "diversity") {
                out.findings.push_back({section, "unknown section"});
            }
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            out.findings.push_back({"line " + std::to_string(lineno), "expected key = value"});
            continue;
        }
        auto key = trim(std::string_view(line).substr(0, eq));
        auto value = trim(std::string_view(line).substr(eq + 1));
        if (section.empty())
            reader.top(key, value);
        else if (section == "window" && !window_label.empty())
            reader.window(window_label, key, value, out.config.windows.back(), window_keys[window_label]);
        else if (section == "timeseries")
            reader.timeseries(key, value);
        else if (section == "shift")
            reader.shift(key, value);
        else if (section == "network")
            reader.network(key, value);
        else if (section == "diversity")
            reader.diversity(key, value);
    }
    for (const auto &[label, keys] : window_keys)
        for (const char *k : {"start", "end"})
            if (!keys.contains(k))
                out.findings.push_back({"window." + label + "." + k, "missing"});

    for (auto &f : validate_config(out.config))
        out.findings.push_back(std::move(f));
    return out;
}

LoadedConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        LoadedConfig out;
        out.findings.push_back({"config", "cannot read " + path.string()});
        return out;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    auto base = path.parent_path();
    if (base.empty())
        base = ".";
    return parse_config(buf.str(), base);
}

std::vector<Finding> validate_config(const RunConfig &c) {
    std::vector<Finding> f;
    if (c.inputs.empty())
        f.push_back({"inputs", "at least one input file is required"});
    for (std::size_t i = 0; i < c.inputs.size(); ++i) {
        auto p = resolve(c, c.inputs[i]);
        if (!std::filesystem::is_regular_file(p))
            f.push_back({"inputs[" + std::to_string(i) + "]", "file not found: " + p.string()});
    }
    if (c.stoplist && !std::filesystem::is_regular_file(resolve(c, *c.stoplist)))
        f.push_back({"stoplist", "file not found: " + resolve(c, *c.stoplist).string()});
    if (c.output_dir.empty())
        f.push_back({"output_dir", "must not be empty"});

    auto anchor_ok = [](const std::string &a) {
        auto cps = text::decode_utf8(a);
        return !cps.empty() && std::all_of(cps.begin(), cps.end(), text::is_word);
    };
    if (!anchor_ok(c.anchor_a))
        f.push_back({"anchor_a", "must be a hashtag body of letters, digits or underscores"});
    if (!anchor_ok(c.anchor_b))
        f.push_back({"anchor_b", "must be a hashtag body of letters, digits or underscores"});
    if (!c.anchor_a.empty() && c.anchor_a == c.anchor_b)
        f.push_back({"anchor_b", "anchors must be distinct"});

    for (const auto &w : c.windows) {
        if (!(w.start < w.end) && !(w.start == Instant{} && w.end == Instant{}))
            f.push_back({"window." + w.label, "start must precede end"});
        for (char ch : w.label)
            if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_'))
                f.push_back({"window." + w.label, "label may only use letters, digits, '-' and '_'"});
    }

    const auto &s = c.shift;
    if (!(s.threshold_bits >= 0.0))
        f.push_back({"shift.threshold_bits", "must be nonnegative"});
    if (!(s.dominance_share > 0.0 && s.dominance_share < 1.0))
        f.push_back({"shift.dominance_share", "must lie in (0, 1)"});
    if (s.min_occurrences == 0)
        f.push_back({"shift.min_occurrences", "must be at least 1"});

    const auto &n = c.network;
    if (!(n.alpha > 0.0 && n.alpha < 1.0))
        f.push_back({"network.alpha", "out of range: must lie in (0, 1)"});
    for (double a : n.sweep)
        if (!(a > 0.0 && a < 1.0))
            f.push_back({"network.sweep", "out of range: every alpha must lie in (0, 1)"});
    if (!std::is_sorted(n.sweep.begin(), n.sweep.end()))
        f.push_back({"network.sweep", "must be sorted ascending"});
    if (!(n.pagerank.damping > 0.0 && n.pagerank.damping < 1.0))
        f.push_back({"network.damping", "out of range: must lie in (0, 1)"});
    if (!(n.pagerank.tol > 0.0))
        f.push_back({"network.tol", "must be positive"});
    if (n.pagerank.max_iter == 0)
        f.push_back({"network.max_iter", "must be positive"});
    if (!(n.size_scale > 0.0))
        f.push_back({"network.size_scale", "must be positive"});

    const auto &d = c.diversity;
    if (d.sample_size == 0)
        f.push_back({"diversity.sample_size", "must be positive"});
    if (d.n_draws < 5)
        f.push_back({"diversity.n_draws", "need at least 5 draws for box-plot statistics"});
    if (d.start && d.end && !(*d.start < *d.end))
        f.push_back({"diversity", "start must precede end"});
    return f;
}

} // namespace shiftkit
