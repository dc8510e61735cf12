// Acceptance checks, one line per criterion. Exit status is nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "shiftkit/diversity.hpp"
#include "shiftkit/graphalgs.hpp"
#include "shiftkit/hashnet.hpp"
#include "shiftkit/infotheory.hpp"
#include "shiftkit/numeric.hpp"
#include "shiftkit/pipeline.hpp"
#include "shiftkit/rng.hpp"
#include "shiftkit/wordshift.hpp"
#include "support/fixtures.hpp"
#include "support/graphs.hpp"
#include "support/oracles.hpp"

using namespace shiftkit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char *spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

TokenDistribution fuzz_dist(Rng &rng, std::size_t vocab) {
    std::map<std::string, double> w;
    auto n = 1 + rng.below(vocab);
    for (std::uint64_t i = 0; i < n; ++i)
        w["t" + std::to_string(rng.below(vocab))] += static_cast<double>(1 + rng.below(100000));
    return TokenDistribution::from_weights(w);
}

bool contains_support(const TokenDistribution &p, const TokenDistribution &q) {
    for (const auto &e : p.entries())
        if (!q.contains(e.token))
            return false;
    return true;
}

oracle::Dist as_oracle(const TokenDistribution &d) {
    oracle::Dist out;
    for (const auto &e : d.entries())
        out[e.token] = e.prob;
    return out;
}

Outcome criterion1() {
    Outcome o;
    auto t0 = Clock::now();
    Rng rng(1);
    double worst_decomp = 0, max_jsd = 0;
    int equal_pairs = 0, infinite = 0;
    for (int i = 0; i < 1000; ++i) {
        auto p = fuzz_dist(rng, 40);
        // every tenth pair is an exact copy
        auto q = i % 10 == 0 ? p : fuzz_dist(rng, 40);
        bool same = i % 10 == 0;
        equal_pairs += same;
        auto total = jsd(p, q, JsdWeights::equal()).total;
        max_jsd = std::max(max_jsd, total);
        o.require(total >= 0.0 && total <= 1.0, "JSD outside [0, 1] at pair " + std::to_string(i));
        o.require(same ? total == 0.0 : total > 1e-12, "JSD = 0 iff equal violated at pair " + std::to_string(i));
        CompensatedSum s;
        for (const auto &c : jsd_contributions(p, q, JsdWeights::equal()))
            s += c.contribution;
        worst_decomp = std::max(worst_decomp, std::abs(s.value() - total));
        for (auto [a, b] : {std::pair{&p, &q}, std::pair{&q, &p}}) {
            bool inf = std::isinf(kl_divergence(*a, *b));
            infinite += inf;
            o.require(inf == !contains_support(*a, *b), "KL infinity does not match support containment");
        }
    }
    o.require(worst_decomp < 1e-9, "decomposition error " + fmt("%.3g", worst_decomp));
    double secs = seconds_since(t0);
    o.require(secs < 5.0, "took " + fmt("%.2f", secs) + " s");
    if (o.pass)
        o.detail = "1000 pairs, max decomposition error " + fmt("%.2e", worst_decomp) + ", " +
                   std::to_string(infinite) + " infinite KL, " + fmt("%.2f", secs) + " s";
    return o;
}

Outcome criterion2() {
    Outcome o;
    double worst = 0;
    auto uniform = [](std::size_t n) {
        std::map<std::string, double> w;
        for (std::size_t i = 0; i < n; ++i)
            w["w" + std::to_string(i)] = 1.0;
        return TokenDistribution::from_weights(w);
    };
    for (std::size_t n = 1; n <= 64; ++n) {
        double d1 = effective_diversity(shannon_entropy(uniform(n)));
        double d2 = effective_diversity(shannon_entropy(uniform(2 * n)));
        worst = std::max(worst, std::abs(d2 - 2.0 * d1));
    }
    o.require(worst <= 1e-12, "max deviation " + fmt("%.3g", worst));
    if (o.pass)
        o.detail = "n = 1..64, max |D(2n) - 2 D(n)| = " + fmt("%.2e", worst);
    return o;
}

Outcome criterion3() {
    Outcome o;
    auto p = TokenDistribution::from_probabilities({{"a", 1.0}});
    auto q = TokenDistribution::from_probabilities({{"a", 0.5}, {"b", 0.5}});
    auto w = JsdWeights::equal();
    auto total = jsd(p, q, w).total;
    auto contrib = jsd_contributions(p, q, w);
    auto ref = oracle::jsd(as_oracle(p), as_oracle(q), 0.5L, 0.5L);
    o.require(std::abs(total - static_cast<double>(ref.total)) < 1e-9, "total differs from brute force");
    o.require(std::abs(total - 0.311278) < 5e-7, "total " + fmt("%.9f", total));
    o.require(contrib.size() == 2, "expected two contributions");
    if (contrib.size() == 2) {
        o.require(contrib[0].token == "a" && contrib[0].direction == Direction::P, "a should lean to P");
        o.require(contrib[1].token == "b" && contrib[1].direction == Direction::Q, "b should lean to Q");
        o.require(std::abs(contrib[0].contribution - static_cast<double>(ref.contribution["a"])) < 1e-9,
                  "a contribution differs from brute force");
        o.require(std::abs(contrib[1].contribution - static_cast<double>(ref.contribution["b"])) < 1e-9,
                  "b contribution differs from brute force");
        o.require(std::abs(contrib[0].contribution - 0.061278) < 5e-7, "a contribution off");
        o.require(std::abs(contrib[1].contribution - 0.25) < 1e-12, "b contribution off");
    }
    if (o.pass)
        o.detail = "total " + fmt("%.6f", total) + ", a " + fmt("%.6f", contrib[0].contribution) + " -> P, b " +
                   fmt("%.6f", contrib[1].contribution) + " -> Q";
    return o;
}

Outcome criterion4() {
    Outcome o;
    double worst = 0;
    for (int k = 2; k <= 50; ++k)
        for (int i = 1; i <= 99; ++i) {
            double p = i / 100.0;
            worst = std::max(worst, std::abs(disparity_statistic(p, k) - oracle::disparity_by_integration(p, k)));
        }
    o.require(worst < 1e-9, "closed form vs integral " + fmt("%.3g", worst));

    Rng rng(4);
    for (int g = 0; g < 100; ++g) {
        WeightedGraph::Builder b;
        int n = 5 + static_cast<int>(rng.below(40));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.below(100) < 15)
                    b.add_edge("v" + std::to_string(i), "v" + std::to_string(j), 1 + rng.below(40));
        auto graph = b.build();
        std::set<std::pair<std::string, std::string>> prev;
        for (double alpha : {0.005, 0.01, 0.03, 0.05, 0.1, 0.2, 0.4, 0.8}) {
            auto f = disparity_filter(graph, alpha);
            std::set<std::pair<std::string, std::string>> kept;
            for (const auto &e : f.edges())
                kept.insert({f.label(e.u), f.label(e.v)});
            o.require(std::includes(kept.begin(), kept.end(), prev.begin(), prev.end()),
                      "kept edges shrank as alpha grew on graph " + std::to_string(g));
            prev = std::move(kept);
        }
    }

    std::size_t certified = 0;
    for (std::size_t k = 2; k <= 60; ++k) {
        WeightedGraph::Builder b;
        for (std::size_t i = 0; i < k; ++i)
            b.add_edge("hub", "leaf" + std::to_string(i), 5);
        certified += disparity_filter(b.build(), 0.03).edge_count();
    }
    o.require(certified == 0, std::to_string(certified) + " star edges kept");
    if (o.pass)
        o.detail = "max closed-form error " + fmt("%.2e", worst) + ", 100 graphs monotone, stars k = 2..60 empty";
    return o;
}

Outcome criterion5() {
    Outcome o;
    auto t0 = Clock::now();
    double worst_b = 0, worst_cf = 0, worst_tree = 0, worst_sum = 0, worst_regular = 0;
    std::size_t graphs = 0, trees = 0, regular = 0;
    auto diff = [](const std::vector<double> &a, const std::vector<double> &b) {
        double d = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            d = std::max(d, std::abs(a[i] - b[i]));
        return d;
    };
    for (int n = 1; n <= 6; ++n) {
        fixture::for_each_connected_graph(n, 1, [&](const fixture::SmallGraph &sg) {
            ++graphs;
            auto g = sg.weighted();
            auto d = sg.dense();
            auto b = betweenness(g).scores;
            auto cf = random_walk_betweenness(g).scores;
            worst_b = std::max(worst_b, diff(b, oracle::betweenness(d)));
            worst_cf = std::max(worst_cf, diff(cf, oracle::current_flow_betweenness(d)));
            if (fixture::is_tree(sg)) {
                ++trees;
                worst_tree = std::max(worst_tree, diff(b, cf));
            }
            auto pr = pagerank(g).scores;
            worst_sum = std::max(worst_sum, std::abs(std::accumulate(pr.begin(), pr.end(), 0.0) - 1.0));
            bool is_regular = true;
            for (std::size_t v = 1; v < g.node_count(); ++v)
                is_regular = is_regular && g.degree(v) == g.degree(0);
            if (is_regular) {
                ++regular;
                for (double s : pr)
                    worst_regular = std::max(worst_regular, std::abs(s - 1.0 / n));
            }
        });
        // weighted conductances on the same shapes
        fixture::for_each_connected_graph(n, 9, [&](const fixture::SmallGraph &sg) {
            worst_cf = std::max(worst_cf, diff(random_walk_betweenness(sg.weighted()).scores,
                                               oracle::current_flow_betweenness(sg.dense())));
        });
    }
    double secs = seconds_since(t0);
    o.require(worst_b < 1e-8, "betweenness off by " + fmt("%.3g", worst_b));
    o.require(worst_cf < 1e-8, "current-flow off by " + fmt("%.3g", worst_cf));
    o.require(worst_tree < 1e-9, "trees differ by " + fmt("%.3g", worst_tree));
    o.require(worst_sum < 1e-10, "PageRank sum off by " + fmt("%.3g", worst_sum));
    o.require(worst_regular < 1e-10, "PageRank not uniform on a regular graph");
    o.require(secs < 60.0, "took " + fmt("%.1f", secs) + " s");
    if (o.pass)
        o.detail = std::to_string(graphs) + " connected graphs (" + std::to_string(trees) + " trees, " +
                   std::to_string(regular) + " regular), worst errors " + fmt("%.1e", worst_b) + " / " +
                   fmt("%.1e", worst_cf) + ", " + fmt("%.1f", secs) + " s";
    return o;
}

Outcome criterion6() {
    Outcome o;
    std::vector<std::tuple<int, int, std::uint64_t>> edges;
    for (int base : {0, 4})
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                edges.emplace_back(base + i, base + j, 1);
    edges.emplace_back(3, 4, 1);
    fixture::SmallGraph sg{8, edges};
    auto g = sg.weighted();
    std::vector<int> best;
    double best_q = oracle::best_modularity(sg.dense(), &best);
    for (std::uint64_t seed : {0ULL, 1ULL, 7ULL, 12345ULL, 0xDEADBEEFULL}) {
        auto a = louvain(g, seed);
        auto b = louvain(g, seed);
        o.require(a.labels == b.labels && a.modularity == b.modularity, "not reproducible");
        std::vector<int> labels(a.labels.begin(), a.labels.end());
        o.require(labels == best, "partition differs from the brute-force optimum");
        o.require(std::abs(a.modularity - best_q) < 1e-12, "modularity differs from the optimum");
        for (std::size_t i = 1; i < a.level_modularity.size(); ++i)
            o.require(a.level_modularity[i] >= a.level_modularity[i - 1], "modularity decreased between phases");
    }
    Rng rng(6);
    for (int iter = 0; iter < 50; ++iter) {
        WeightedGraph::Builder b;
        int n = 10 + static_cast<int>(rng.below(80));
        for (int i = 1; i < n; ++i)
            b.add_edge("v" + std::to_string(i), "v" + std::to_string(rng.below(i)), 1 + rng.below(5));
        for (int k = 0; k < n; ++k) {
            auto u = rng.below(n), v = rng.below(n);
            if (u != v)
                b.add_edge("v" + std::to_string(u), "v" + std::to_string(v), 1 + rng.below(5));
        }
        auto c = louvain(b.build(), iter);
        for (std::size_t i = 1; i < c.level_modularity.size(); ++i)
            o.require(c.level_modularity[i] >= c.level_modularity[i - 1] - 1e-12,
                      "modularity decreased between phases on a random graph");
    }
    if (o.pass)
        o.detail = "two cliques recovered, Q = " + fmt("%.6f", best_q) + " (brute force over all 4140 partitions)";
    return o;
}

Outcome criterion7() {
    Outcome o;
    auto t0 = Clock::now();
    auto corpus = fixture::make_planted_corpus({.tweets_per_side = 10000, .hijack_copies = 200});
    auto p = filter_window(corpus.tweets, corpus.anchor_p, corpus.start, corpus.end);
    auto q = filter_window(corpus.tweets, corpus.anchor_q, corpus.start, corpus.end);
    auto report = build_word_shift(p, q, {});
    double secs = seconds_since(t0);

    std::map<std::string, std::size_t> rank;
    for (std::size_t i = 0; i < report.entries.size(); ++i)
        rank[report.entries[i].token] = i;
    auto check_planted = [&](const std::vector<std::string> &words, Direction dir) {
        for (const auto &w : words) {
            auto it = rank.find(w);
            o.require(it != rank.end() && it->second < 5, w + " not in the top 5");
            if (it != rank.end())
                o.require(report.entries[it->second].direction == dir, w + " has the wrong direction");
        }
    };
    check_planted(corpus.planted_p, Direction::P);
    check_planted(corpus.planted_q, Direction::Q);
    auto h = rank.find(corpus.hijack);
    o.require(h != rank.end(), "hijack word missing from the report");
    double hbits = -1;
    if (h != rank.end()) {
        const auto &e = report.entries[h->second];
        hbits = e.direction_diversity();
        o.require(e.direction == Direction::Q, "hijack word has the wrong direction");
        o.require(e.retweet_driven, "hijack word not flagged retweet-driven");
        o.require(hbits < 3.0, "hijack diversity " + fmt("%.3f", hbits));
    }
    for (const auto &w : corpus.planted_p)
        if (rank.count(w))
            o.require(!report.entries[rank[w]].retweet_driven, w + " wrongly flagged");
    o.require(p.tweets.size() + q.tweets.size() >= 20000, "fixture too small");
    o.require(secs < 30.0, "took " + fmt("%.1f", secs) + " s");
    if (o.pass)
        o.detail = std::to_string(p.tweets.size() + q.tweets.size()) + " tweets, planted words ranked " +
                   std::to_string(rank[corpus.planted_p[0]] + 1) + "," + std::to_string(rank[corpus.planted_p[1]] + 1) +
                   "," + std::to_string(rank[corpus.planted_q[0]] + 1) + "," +
                   std::to_string(rank[corpus.planted_q[1]] + 1) + ", hijack " + fmt("%.3f", hbits) + " bits, " +
                   fmt("%.2f", secs) + " s";
    return o;
}

Outcome criterion8() {
    Outcome o;
    const auto start = fixture::at("2015-04-01T00:00:00Z");
    const auto end = fixture::at("2015-05-01T00:00:00Z");
    auto eight = fixture::uniform_hashtag_corpus("eight", 8, 8000, start, 1);
    auto two = fixture::uniform_hashtag_corpus("two", 2, 8000, start, 2);
    CorpusWindow wa{"eight", start, end, eight};
    CorpusWindow wb{"two", start, end, two};
    const std::uint64_t seed = 20150401;
    auto a = subsample_diversity(wa, DiversityKind::Hashtag, 1000, 200, seed, {});
    auto b = subsample_diversity(wb, DiversityKind::Hashtag, 1000, 200, seed, {});
    auto cmp = compare_diversity(a, b);
    o.require(std::abs(cmp.mean_ratio - 4.0) <= 0.2, "ratio " + fmt("%.4f", cmp.mean_ratio));
    auto again = subsample_diversity(wa, DiversityKind::Hashtag, 1000, 200, seed, {});
    o.require(again.samples == a.samples, "same seed gave different samples");
    if (o.pass)
        o.detail = "mean ratio " + fmt("%.4f", cmp.mean_ratio) + " (" + fmt("%.4f", cmp.mean_a) + " / " +
                   fmt("%.4f", cmp.mean_b) + "), reseeded samples identical";
    return o;
}

Outcome criterion9() {
    Outcome o;
    auto dir = fixture::scratch_dir("acceptance_run");
    auto config = fixture::write_planted_project(dir);
    std::vector<std::string> manifests;
    for (const char *out : {"run1", "run2"}) {
        std::string cmd = std::string(SHIFTKIT_CLI_PATH) + " run --config " + config.string() + " --out " +
                          (dir / out).string() + " >/dev/null 2>&1";
        int rc = std::system(cmd.c_str());
        o.require(rc == 0, std::string("run exited with status ") + std::to_string(rc));
        try {
            manifests.push_back(fixture::read_file(dir / out / "manifest.json"));
        } catch (const std::exception &e) {
            o.require(false, e.what());
            return o;
        }
    }
    o.require(manifests[0] == manifests[1], "manifests differ");
    o.require(manifests[0].find("\"complete\": true") != std::string::npos, "run incomplete");
    if (o.pass)
        o.detail = "manifest sha256 " + sha256_hex(manifests[0]).substr(0, 16) + "... on both runs";
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"information-theory identities on 1000 fuzzed pairs", criterion1},
        {"perplexity doubling for uniform n vs 2n", criterion2},
        {"worked JSD case against a brute-force evaluator", criterion3},
        {"disparity filter closed form, monotonicity, uniform stars", criterion4},
        {"centralities against dense oracles on all connected graphs up to 6 nodes", criterion5},
        {"Louvain on the two-clique fixture", criterion6},
        {"planted divergence end to end", criterion7},
        {"diversity protocol, 8 vs 2 uniform hashtags", criterion8},
        {"determinism of full runs", criterion9},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::printf("%s criterion %zu: %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
