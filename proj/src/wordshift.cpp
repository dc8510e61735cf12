#include "shiftkit/wordshift.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"
#include "shiftkit/error.hpp"

namespace shiftkit {

namespace {

struct TokenizedCorpus {
    std::vector<std::vector<std::string>> tweets;
    std::vector<const std::string *> texts;
    TokenBag bag;
    // token -> indices of tweets containing it (each tweet once)
    std::unordered_map<std::string, std::vector<std::size_t>> postings;
};

TokenizedCorpus tokenize_corpus(const CorpusWindow &w, const AnchorSet &anchors,
                                const StopList &stoplist) {
    TokenizedCorpus c;
    c.tweets.reserve(w.tweets.size());
    for (const auto &t : w.tweets) {
        c.tweets.push_back(tokenize(t.text, anchors, stoplist));
        c.texts.push_back(&t.text);
    }
    for (std::size_t i = 0; i < c.tweets.size(); ++i) {
        c.bag.add_all(c.tweets[i]);
        for (const auto &tok : c.tweets[i]) {
            auto &list = c.postings[tok];
            if (list.empty() || list.back() != i)
                list.push_back(i);
        }
    }
    return c;
}

struct SideContext {
    std::optional<double> diversity;
    double dominant_share = 0.0;
};

SideContext side_context(const TokenizedCorpus &c, const std::string &token,
                         const AnchorSet &anchors) {
    auto it = c.postings.find(token);
    if (it == c.postings.end())
        return {};
    std::vector<std::vector<std::string>> containing;
    containing.reserve(it->second.size());
    std::map<std::string_view, std::size_t> by_text;
    for (auto idx : it->second) {
        containing.push_back(c.tweets[idx]);
        ++by_text[*c.texts[idx]];
    }
    std::size_t top = 0;
    for (const auto &[text, n] : by_text)
        top = std::max(top, n);
    return {word_context_diversity(containing, token, anchors),
            static_cast<double>(top) / static_cast<double>(it->second.size())};
}

const char *direction_name(Direction d) {
    switch (d) {
    case Direction::P: return "P";
    case Direction::Q: return "Q";
    case Direction::None: return "none";
    }
    return "none";
}

Direction parse_direction(const std::string &s) {
    if (s == "P")
        return Direction::P;
    if (s == "Q")
        return Direction::Q;
    throw std::invalid_argument("word shift JSON: entry direction must be \"P\" or \"Q\"");
}

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

WordShiftReport build_word_shift(const CorpusWindow &corpus_p, const CorpusWindow &corpus_q,
                                 const StopList &stoplist, const ShiftConfig &config) {
    if (corpus_p.start != corpus_q.start || corpus_p.end != corpus_q.end)
        throw std::invalid_argument("build_word_shift: corpora must cover the same window");
    if (!(config.threshold_bits >= 0.0))
        throw std::invalid_argument("build_word_shift: threshold must be nonnegative");

    AnchorSet anchors{corpus_p.anchor, corpus_q.anchor};
    auto tp = tokenize_corpus(corpus_p, anchors, stoplist);
    auto tq = tokenize_corpus(corpus_q, anchors, stoplist);
    if (tp.bag.empty())
        throw EmptyCorpusError("corpus P (#" + corpus_p.anchor + ") has no tokens in window " +
                               format_iso8601(corpus_p.start) + " .. " +
                               format_iso8601(corpus_p.end));
    if (tq.bag.empty())
        throw EmptyCorpusError("corpus Q (#" + corpus_q.anchor + ") has no tokens in window " +
                               format_iso8601(corpus_q.start) + " .. " +
                               format_iso8601(corpus_q.end));

    auto p = build_distribution(tp.bag);
    auto q = build_distribution(tq.bag);
    JsdWeights weights = JsdWeights::equal();
    switch (config.weights) {
    case WeightMode::Tokens:
        weights = JsdWeights::proportional(static_cast<double>(tp.bag.total()),
                                           static_cast<double>(tq.bag.total()));
        break;
    case WeightMode::Tweets:
        weights = JsdWeights::proportional(static_cast<double>(corpus_p.tweets.size()),
                                           static_cast<double>(corpus_q.tweets.size()));
        break;
    case WeightMode::Equal: break;
    }

    WordShiftReport report;
    report.anchor_a = corpus_p.anchor;
    report.anchor_b = corpus_q.anchor;
    report.window_start = corpus_p.start;
    report.window_end = corpus_p.end;
    report.weights = weights;
    report.total_jsd_bits = jsd(p, q, weights).total;
    if (report.total_jsd_bits <= 0.0)
        return report;

    auto contributions = jsd_contributions(p, q, weights);
    std::erase_if(contributions, [&](const WordContribution &c) {
        if (c.direction == Direction::None || c.contribution <= 0.0)
            return true;
        auto count = [&](const TokenBag &bag) -> std::uint64_t {
            auto it = bag.counts().find(c.token);
            return it == bag.counts().end() ? 0 : it->second;
        };
        return count(tp.bag) + count(tq.bag) < config.min_occurrences;
    });
    std::sort(contributions.begin(), contributions.end(),
              [](const WordContribution &a, const WordContribution &b) {
                  if (a.contribution != b.contribution)
                      return a.contribution > b.contribution;
                  return a.token < b.token;
              });
    if (config.top_k > 0 && contributions.size() > config.top_k)
        contributions.resize(config.top_k);

    report.entries.reserve(contributions.size());
    for (const auto &c : contributions) {
        ShiftEntry e;
        e.token = c.token;
        e.percent = 100.0 * c.contribution / report.total_jsd_bits;
        e.direction = c.direction;
        auto side_p = side_context(tp, c.token, anchors);
        auto side_q = side_context(tq, c.token, anchors);
        e.diversity_p_bits = side_p.diversity;
        e.diversity_q_bits = side_q.diversity;
        e.retweet_driven = is_retweet_driven(e.direction_diversity(), config.threshold_bits);
        const auto &own = c.direction == Direction::P ? side_p : side_q;
        e.single_text_dominated = own.dominant_share > config.dominance_share;
        report.entries.push_back(std::move(e));
    }
    return report;
}

std::string export_word_shift_json(const WordShiftReport &report) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["anchor_a"] = report.anchor_a;
    doc["anchor_b"] = report.anchor_b;
    doc["window_start"] = format_iso8601(report.window_start);
    doc["window_end"] = format_iso8601(report.window_end);
    doc["total_jsd_bits"] = report.total_jsd_bits;
    doc["weights"] = ordered_json{{"pi1", report.weights.pi1()}, {"pi2", report.weights.pi2()}};
    auto entries = ordered_json::array();
    for (const auto &e : report.entries) {
        ordered_json j;
        j["token"] = e.token;
        j["percent"] = e.percent;
        j["direction"] = direction_name(e.direction);
        j["diversity_p_bits"] = e.diversity_p_bits ? ordered_json(*e.diversity_p_bits) : nullptr;
        j["diversity_q_bits"] = e.diversity_q_bits ? ordered_json(*e.diversity_q_bits) : nullptr;
        j["retweet_driven"] = e.retweet_driven;
        j["single_text_dominated"] = e.single_text_dominated;
        entries.push_back(std::move(j));
    }
    doc["entries"] = std::move(entries);
    return doc.dump(2) + "\n";
}

WordShiftReport import_word_shift_json(std::string_view document) {
    using nlohmann::json;
    json doc = json::parse(document, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw std::invalid_argument("word shift JSON: not a JSON object");
    try {
        WordShiftReport r;
        r.anchor_a = doc.at("anchor_a").get<std::string>();
        r.anchor_b = doc.at("anchor_b").get<std::string>();
        auto start = parse_iso8601(doc.at("window_start").get<std::string>());
        auto end = parse_iso8601(doc.at("window_end").get<std::string>());
        if (!start || !end)
            throw std::invalid_argument("word shift JSON: bad window timestamp");
        r.window_start = *start;
        r.window_end = *end;
        r.total_jsd_bits = doc.at("total_jsd_bits").get<double>();
        const auto &w = doc.at("weights");
        r.weights = JsdWeights(w.at("pi1").get<double>(), w.at("pi2").get<double>());
        for (const auto &j : doc.at("entries")) {
            ShiftEntry e;
            e.token = j.at("token").get<std::string>();
            e.percent = j.at("percent").get<double>();
            e.direction = parse_direction(j.at("direction").get<std::string>());
            if (!j.at("diversity_p_bits").is_null())
                e.diversity_p_bits = j.at("diversity_p_bits").get<double>();
            if (!j.at("diversity_q_bits").is_null())
                e.diversity_q_bits = j.at("diversity_q_bits").get<double>();
            e.retweet_driven = j.at("retweet_driven").get<bool>();
            e.single_text_dominated = j.value("single_text_dominated", false);
            r.entries.push_back(std::move(e));
        }
        return r;
    } catch (const json::exception &ex) {
        throw std::invalid_argument(std::string("word shift JSON: ") + ex.what());
    }
}

double shade_lightness(double bits, double ramp_max_bits) {
    double t = ramp_max_bits > 0.0 ? std::clamp(bits / ramp_max_bits, 0.0, 1.0) : 1.0;
    return 88.0 - 58.0 * t;
}

std::string render_word_shift_svg(const WordShiftReport &report, const SvgStyle &style) {
    constexpr double kMargin = 20.0;
    constexpr double kHeader = 48.0;
    constexpr double kAxis = 44.0;
    const double width = std::max(style.width, 2.0 * kMargin + 2.0 * style.label_width);
    const double center = width / 2.0;
    const double half = center - kMargin;
    const double rows = static_cast<double>(report.entries.size());
    const double height = kHeader + rows * style.row_height + kAxis;
    const double axis_y = kHeader + rows * style.row_height + 6.0;

    double max_percent = 0.0;
    for (const auto &e : report.entries)
        max_percent = std::max(max_percent, e.percent);
    if (max_percent <= 0.0)
        max_percent = 1.0;

    const Direction left = style.left == Direction::Q ? Direction::Q : Direction::P;
    const std::string &left_anchor = left == Direction::P ? report.anchor_a : report.anchor_b;
    const std::string &right_anchor = left == Direction::P ? report.anchor_b : report.anchor_a;

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(width) + "\" height=\"" +
           fmt2(height) + "\" viewBox=\"0 0 " + fmt2(width) + " " + fmt2(height) +
           "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt2(width) + "\" height=\"" + fmt2(height) +
           "\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt2(kMargin) + "\" y=\"18\" text-anchor=\"start\">#" +
           xml_escape(left_anchor) + "</text>\n";
    svg += "<text x=\"" + fmt2(width - kMargin) + "\" y=\"18\" text-anchor=\"end\">#" +
           xml_escape(right_anchor) + "</text>\n";
    svg += "<text x=\"" + fmt2(center) + "\" y=\"36\" text-anchor=\"middle\">total JSD " +
           fmt2(report.total_jsd_bits * 1000.0) + " mbits</text>\n";

    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const auto &e = report.entries[i];
        const bool to_left = e.direction == left;
        const double len = e.percent / max_percent * half;
        const double y = kHeader + static_cast<double>(i) * style.row_height;
        const double x = to_left ? center - len : center;
        const double hue = to_left ? 210.0 : 30.0;
        const double light = shade_lightness(e.direction_diversity(), style.ramp_max_bits);
        svg += "<rect class=\"bar\" x=\"" + fmt2(x) + "\" y=\"" + fmt2(y + 2.0) + "\" width=\"" +
               fmt2(len) + "\" height=\"" + fmt2(style.row_height - 4.0) + "\" fill=\"hsl(" +
               fmt2(hue) + ",70%," + fmt2(light) + "%)\" stroke=\"#555\" stroke-width=\"0.5\"/>\n";
        const double tx = to_left ? center + 4.0 : center - 4.0;
        svg += "<text x=\"" + fmt2(tx) + "\" y=\"" + fmt2(y + style.row_height - 5.0) +
               "\" text-anchor=\"" + (to_left ? "start" : "end") + "\">" +
               std::to_string(i + 1) + ". " + xml_escape(e.token) + "</text>\n";
    }

    svg += "<line class=\"axis\" x1=\"" + fmt2(kMargin) + "\" y1=\"" + fmt2(axis_y) + "\" x2=\"" +
           fmt2(width - kMargin) + "\" y2=\"" + fmt2(axis_y) + "\" stroke=\"black\"/>\n";
    svg += "<line class=\"axis\" x1=\"" + fmt2(center) + "\" y1=\"" + fmt2(kHeader) + "\" x2=\"" +
           fmt2(center) + "\" y2=\"" + fmt2(axis_y) + "\" stroke=\"black\"/>\n";
    for (int k = -2; k <= 2; ++k) {
        double x = center + k * half / 2.0;
        svg += "<line x1=\"" + fmt2(x) + "\" y1=\"" + fmt2(axis_y) + "\" x2=\"" + fmt2(x) +
               "\" y2=\"" + fmt2(axis_y + 4.0) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt2(x) + "\" y=\"" + fmt2(axis_y + 16.0) +
               "\" text-anchor=\"middle\">" + fmt2(std::abs(k) * max_percent / 2.0) + "</text>\n";
    }
    svg += "<text x=\"" + fmt2(center) + "\" y=\"" + fmt2(axis_y + 32.0) +
           "\" text-anchor=\"middle\">percent of total JSD</text>\n";
    svg += "</svg>\n";
    return svg;
}

} // namespace shiftkit
