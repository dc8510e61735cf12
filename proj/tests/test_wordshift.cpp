#include "doctest.h"

#include <cmath>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "json.hpp"
#include "shiftkit/error.hpp"
#include "shiftkit/wordshift.hpp"
#include "support/fixtures.hpp"

using namespace shiftkit;
using fixture::at;

namespace {

const Instant kStart = at("2015-01-01T00:00:00Z");
const Instant kEnd = at("2015-01-08T00:00:00Z");

CorpusWindow window(const std::string &anchor, const std::vector<std::string> &texts) {
    CorpusWindow w{anchor, kStart, kEnd, {}};
    for (std::size_t i = 0; i < texts.size(); ++i)
        w.tweets.push_back({anchor + std::to_string(i), kStart, "u", texts[i]});
    return w;
}

std::vector<std::string> repeat(const std::string &text, std::size_t n) {
    return std::vector<std::string>(n, text);
}

struct Bar {
    double x, width;
    std::string fill;
};

std::vector<Bar> bars(const std::string &svg) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(svg);
    pt::read_xml(in, tree); // throws on malformed XML
    std::vector<Bar> out;
    for (const auto &[name, node] : tree.get_child("svg")) {
        if (name != "rect" || node.get<std::string>("<xmlattr>.class", "") != "bar")
            continue;
        out.push_back({node.get<double>("<xmlattr>.x"), node.get<double>("<xmlattr>.width"),
                       node.get<std::string>("<xmlattr>.fill")});
    }
    return out;
}

double lightness_of(const std::string &fill) {
    // hsl(H,S%,L%)
    auto comma = fill.rfind(',');
    return std::stod(fill.substr(comma + 1));
}

} // namespace

TEST_CASE("identical corpora give an empty report") {
    auto p = window("a", repeat("x y z #a", 10));
    auto q = window("b", repeat("x y z #b", 10));
    auto r = build_word_shift(p, q, {});
    CHECK(r.total_jsd_bits == 0.0);
    CHECK(r.entries.empty());
}

TEST_CASE("alpha beta versus alpha gamma") {
    auto p = window("a", repeat("alpha beta", 100));
    auto q = window("b", repeat("alpha gamma", 100));
    auto r = build_word_shift(p, q, {});
    REQUIRE(r.entries.size() == 2);
    CHECK(r.entries[0].token == "beta");
    CHECK(r.entries[0].direction == Direction::P);
    CHECK(r.entries[1].token == "gamma");
    CHECK(r.entries[1].direction == Direction::Q);
    CHECK(r.entries[0].percent == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(r.entries[0].percent + r.entries[1].percent == doctest::Approx(100.0).epsilon(1e-12));
    // P = {alpha .5, beta .5}, Q = {alpha .5, gamma .5}: disjoint halves give 0.5 bit
    CHECK(r.total_jsd_bits == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r.entries[0].diversity_p_bits.value() == 0.0);
    CHECK_FALSE(r.entries[0].diversity_q_bits.has_value());
}

TEST_CASE("single repeated tweet is flagged retweet-driven") {
    std::vector<std::string> qt = repeat("lorem ipsum dolor sit", 40);
    auto rt = repeat("RT @x: hijack one two three #b", 30);
    qt.insert(qt.end(), rt.begin(), rt.end());
    std::vector<std::string> pt;
    for (int i = 0; i < 70; ++i)
        pt.push_back("lorem ipsum dolor sit w" + std::to_string(i % 20));
    auto r = build_word_shift(window("a", pt), window("b", qt), {});
    const ShiftEntry *hijack = nullptr;
    for (const auto &e : r.entries)
        if (e.token == "hijack")
            hijack = &e;
    REQUIRE(hijack != nullptr);
    CHECK(hijack->direction == Direction::Q);
    CHECK(hijack->diversity_q_bits.value() == doctest::Approx(std::log2(3.0)).epsilon(1e-14));
    CHECK(hijack->retweet_driven);
    CHECK(hijack->single_text_dominated);
}

TEST_CASE("retweet flag is a pure threshold on the direction side") {
    CHECK(is_retweet_driven(2.5, 3.0));
    CHECK_FALSE(is_retweet_driven(3.0, 3.0));
    CHECK_FALSE(is_retweet_driven(4.1, 3.0));
    CHECK(is_retweet_driven(4.1, 5.0));
}

TEST_CASE("empty side is named in the error") {
    auto p = window("a", repeat("#a", 3));
    auto q = window("b", repeat("words here", 3));
    try {
        build_word_shift(p, q, {});
        FAIL("expected EmptyCorpusError");
    } catch (const EmptyCorpusError &e) {
        CHECK(std::string(e.what()).find("corpus P") != std::string::npos);
    }
    CHECK_THROWS_AS(build_word_shift(q, p, {}), EmptyCorpusError);
}

TEST_CASE("report invariants on the planted fixture") {
    auto corpus = fixture::make_planted_corpus({.tweets_per_side = 1500, .hijack_copies = 40});
    auto p = filter_window(corpus.tweets, corpus.anchor_p, corpus.start, corpus.end);
    auto q = filter_window(corpus.tweets, corpus.anchor_q, corpus.start, corpus.end);
    ShiftConfig all;
    all.top_k = 0;
    auto r = build_word_shift(p, q, {}, all);
    REQUIRE(r.entries.size() > 50);

    double sum = 0;
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
        sum += r.entries[i].percent;
        if (i)
            CHECK(r.entries[i - 1].percent >= r.entries[i].percent);
        CHECK(r.entries[i].retweet_driven ==
              is_retweet_driven(r.entries[i].direction_diversity(), all.threshold_bits));
    }
    CHECK(std::abs(sum - 100.0) < 1e-6);

    SUBCASE("swap flips directions") {
        auto s = build_word_shift(q, p, {}, all);
        REQUIRE(s.entries.size() == r.entries.size());
        std::map<std::string, const ShiftEntry *> by_token;
        for (const auto &e : s.entries)
            by_token[e.token] = &e;
        for (const auto &e : r.entries) {
            auto *o = by_token.at(e.token);
            CHECK(o->direction != e.direction);
            CHECK(std::abs(o->percent - e.percent) < 1e-9);
        }
    }

    SUBCASE("duplicating every tweet changes nothing") {
        auto p3 = p, q3 = q;
        for (auto *w : {&p3, &q3}) {
            auto orig = w->tweets;
            for (int k = 0; k < 2; ++k)
                w->tweets.insert(w->tweets.end(), orig.begin(), orig.end());
        }
        auto s = build_word_shift(p3, q3, {}, all);
        REQUIRE(s.entries.size() == r.entries.size());
        for (std::size_t i = 0; i < r.entries.size(); ++i) {
            CHECK(s.entries[i].token == r.entries[i].token);
            CHECK(s.entries[i].direction == r.entries[i].direction);
            CHECK(std::abs(s.entries[i].percent - r.entries[i].percent) < 1e-9);
            CHECK(s.entries[i].diversity_p_bits.value_or(-1) ==
                  doctest::Approx(r.entries[i].diversity_p_bits.value_or(-1)).epsilon(1e-12));
            CHECK(s.entries[i].diversity_q_bits.value_or(-1) ==
                  doctest::Approx(r.entries[i].diversity_q_bits.value_or(-1)).epsilon(1e-12));
        }
    }

    SUBCASE("top-k truncation keeps the head") {
        auto t = build_word_shift(p, q, {});
        REQUIRE(t.entries.size() == 50);
        for (std::size_t i = 0; i < 50; ++i)
            CHECK(t.entries[i] == r.entries[i]);
    }
}

TEST_CASE("min_occurrences floor") {
    auto p = window("a", {"common rare1", "common"});
    auto q = window("b", {"common other", "common other"});
    ShiftConfig cfg;
    cfg.min_occurrences = 2;
    auto r = build_word_shift(p, q, {}, cfg);
    for (const auto &e : r.entries)
        CHECK(e.token != "rare1");
}

TEST_CASE("JSON export is deterministic and round-trips") {
    auto corpus = fixture::make_planted_corpus({.tweets_per_side = 600, .hijack_copies = 20});
    auto p = filter_window(corpus.tweets, corpus.anchor_p, corpus.start, corpus.end);
    auto q = filter_window(corpus.tweets, corpus.anchor_q, corpus.start, corpus.end);
    auto r = build_word_shift(p, q, {});
    auto doc = export_word_shift_json(r);
    CHECK(export_word_shift_json(import_word_shift_json(doc)) == doc);
    CHECK(import_word_shift_json(doc) == r);

    auto j = nlohmann::json::parse(doc);
    CHECK(j["entries"].size() == 50);
    for (const char *key : {"anchor_a", "anchor_b", "window_start", "window_end", "total_jsd_bits",
                            "weights", "entries"})
        CHECK(j.contains(key));
    for (const char *key : {"token", "percent", "direction", "diversity_p_bits", "diversity_q_bits",
                            "retweet_driven"})
        CHECK(j["entries"][0].contains(key));

    WordShiftReport empty;
    empty.anchor_a = "a";
    empty.anchor_b = "b";
    empty.window_start = kStart;
    empty.window_end = kEnd;
    auto edoc = export_word_shift_json(empty);
    CHECK(nlohmann::json::parse(edoc)["entries"].is_array());
    CHECK(nlohmann::json::parse(edoc)["entries"].empty());
    CHECK(export_word_shift_json(import_word_shift_json(edoc)) == edoc);

    CHECK_THROWS_AS(import_word_shift_json("{}"), std::invalid_argument);
    CHECK_THROWS_AS(import_word_shift_json("not json"), std::invalid_argument);
}

TEST_CASE("SVG rendering") {
    WordShiftReport r;
    r.anchor_a = "a&b";
    r.anchor_b = "c<d";
    r.window_start = kStart;
    r.window_end = kEnd;

    auto none = render_word_shift_svg(r);
    CHECK(bars(none).empty());
    CHECK(none.find("percent of total JSD") != std::string::npos);
    CHECK(none.find("class=\"axis\"") != std::string::npos);

    r.total_jsd_bits = 0.5;
    r.entries.push_back({"beta", 50.0, Direction::P, 0.0, std::nullopt, true, false});
    r.entries.push_back({"gamma", 50.0, Direction::Q, std::nullopt, 10.0, false, false});
    auto two = bars(render_word_shift_svg(r));
    REQUIRE(two.size() == 2);
    CHECK(two[0].width == two[1].width);
    CHECK(two[0].width > 0);
    CHECK(two[0].x < two[1].x); // P bar extends left of the centre line
    CHECK(two[0].x + two[0].width == doctest::Approx(two[1].x));
    CHECK(lightness_of(two[0].fill) > lightness_of(two[1].fill));

    SvgStyle flipped;
    flipped.left = Direction::Q;
    auto f = bars(render_word_shift_svg(r, flipped));
    CHECK(f[0].x > f[1].x);

    for (double b = 0.0; b < 14.0; b += 0.5)
        CHECK(shade_lightness(b, 12.0) >= shade_lightness(b + 0.5, 12.0));
    CHECK(shade_lightness(0.0, 12.0) > shade_lightness(10.0, 12.0));
}
