#include "shiftkit/hashnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <set>
#include <stdexcept>

namespace shiftkit {

WeightedGraph::Builder &WeightedGraph::Builder::add_node(std::string_view label, std::uint64_t usage) {
    if (label.empty())
        throw std::invalid_argument("WeightedGraph: empty node label");
    auto it = usage_.find(label);
    if (it == usage_.end())
        usage_.emplace(std::string(label), usage);
    else
        it->second += usage;
    return *this;
}

WeightedGraph::Builder &WeightedGraph::Builder::add_edge(std::string_view a, std::string_view b,
                                                         std::uint64_t weight) {
    if (a == b)
        throw std::invalid_argument("WeightedGraph: self-loop on '" + std::string(a) + "'");
    if (weight == 0)
        throw std::invalid_argument("WeightedGraph: edge weight must be positive");
    add_node(a);
    add_node(b);
    auto key = a < b ? std::make_pair(std::string(a), std::string(b))
                     : std::make_pair(std::string(b), std::string(a));
    edges_[key] += weight;
    return *this;
}

WeightedGraph WeightedGraph::Builder::build() const {
    WeightedGraph g;
    g.labels_.reserve(usage_.size());
    for (const auto &[label, usage] : usage_) {
        g.labels_.push_back(label);
        g.usage_.push_back(usage);
    }
    g.adj_.resize(g.labels_.size());
    for (const auto &[key, w] : edges_) {
        auto u = *g.index_of(key.first);
        auto v = *g.index_of(key.second);
        g.edges_.push_back({u, v, w});
        g.adj_[u].push_back({v, w});
        g.adj_[v].push_back({u, w});
    }
    std::sort(g.edges_.begin(), g.edges_.end(),
              [](const Edge &a, const Edge &b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    for (auto &list : g.adj_)
        std::sort(list.begin(), list.end(),
                  [](const Neighbor &a, const Neighbor &b) { return a.node < b.node; });
    return g;
}

std::optional<std::size_t> WeightedGraph::index_of(std::string_view label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label)
        return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

std::uint64_t WeightedGraph::strength(std::size_t i) const {
    std::uint64_t s = 0;
    for (const auto &n : adj_[i])
        s += n.weight;
    return s;
}

std::optional<std::uint64_t> WeightedGraph::weight(std::size_t u, std::size_t v) const {
    const auto &list = adj_[u];
    auto it = std::lower_bound(list.begin(), list.end(), v,
                               [](const Neighbor &n, std::size_t x) { return n.node < x; });
    if (it == list.end() || it->node != v)
        return std::nullopt;
    return it->weight;
}

WeightedGraph WeightedGraph::induced(std::span<const std::size_t> nodes) const {
    std::vector<bool> keep(node_count(), false);
    Builder b;
    for (auto i : nodes) {
        keep.at(i) = true;
        b.add_node(labels_[i], usage_[i]);
    }
    for (const auto &e : edges_)
        if (keep[e.u] && keep[e.v])
            b.add_edge(labels_[e.u], labels_[e.v], e.weight);
    return b.build();
}

WeightedGraph WeightedGraph::with_edges(std::span<const Edge> kept) const {
    std::set<std::size_t> touched;
    for (const auto &e : kept) {
        touched.insert(e.u);
        touched.insert(e.v);
    }
    Builder b;
    for (auto i : touched)
        b.add_node(labels_[i], usage_[i]);
    for (const auto &e : kept)
        b.add_edge(labels_[e.u], labels_[e.v], e.weight);
    return b.build();
}

WeightedGraph build_cooccurrence(std::span<const Tweet> tweets, const AnchorSet &anchors) {
    WeightedGraph::Builder b;
    for (const auto &t : tweets) {
        std::set<std::string> tags;
        for (auto &tag : extract_hashtags(t.text))
            if (!anchors.contains(tag))
                tags.insert(std::move(tag));
        for (const auto &tag : tags)
            b.add_node(tag, 1);
        for (auto i = tags.begin(); i != tags.end(); ++i)
            for (auto j = std::next(i); j != tags.end(); ++j)
                b.add_edge(*i, *j, 1);
    }
    return b.build();
}

double disparity_statistic(double normalized_weight, std::size_t degree) {
    if (degree <= 1)
        return 1.0;
    return std::pow(1.0 - normalized_weight, static_cast<double>(degree - 1));
}

WeightedGraph disparity_filter(const WeightedGraph &g, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("disparity_filter: alpha must lie in (0, 1)");
    auto edges = g.edges();
    std::vector<bool> keep(edges.size(), false);
    auto edge_index = [&](std::size_t a, std::size_t b) {
        Edge key{std::min(a, b), std::max(a, b), 0};
        auto it = std::lower_bound(edges.begin(), edges.end(), key, [](const Edge &x, const Edge &y) {
            return std::tie(x.u, x.v) < std::tie(y.u, y.v);
        });
        return static_cast<std::size_t>(it - edges.begin());
    };
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        const auto k = g.degree(v);
        if (k < 2)
            continue;
        const double s = static_cast<double>(g.strength(v));
        for (const auto &n : g.neighbors(v)) {
            if (disparity_statistic(static_cast<double>(n.weight) / s, k) < alpha)
                keep[edge_index(v, n.node)] = true;
        }
    }
    std::vector<Edge> kept;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (keep[i])
            kept.push_back(edges[i]);
    return g.with_edges(kept);
}

std::vector<std::vector<std::size_t>> connected_components(const WeightedGraph &g) {
    std::vector<std::vector<std::size_t>> comps;
    std::vector<bool> seen(g.node_count(), false);
    for (std::size_t s = 0; s < g.node_count(); ++s) {
        if (seen[s])
            continue;
        std::vector<std::size_t> comp;
        std::queue<std::size_t> frontier;
        frontier.push(s);
        seen[s] = true;
        while (!frontier.empty()) {
            auto v = frontier.front();
            frontier.pop();
            comp.push_back(v);
            for (const auto &n : g.neighbors(v)) {
                if (!seen[n.node]) {
                    seen[n.node] = true;
                    frontier.push(n.node);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

bool is_connected(const WeightedGraph &g) { return connected_components(g).size() <= 1; }

WeightedGraph largest_component(const WeightedGraph &g) {
    if (g.empty())
        return {};
    auto comps = connected_components(g);
    // Components come out ordered by smallest member, so the first of the
    // largest wins ties.
    const std::vector<std::size_t> *best = &comps.front();
    for (const auto &c : comps)
        if (c.size() > best->size())
            best = &c;
    return g.induced(*best);
}

double average_clustering(const WeightedGraph &g) {
    const auto n = g.node_count();
    if (n == 0)
        return 0.0;
    double sum = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        auto nbrs = g.neighbors(v);
        const auto k = nbrs.size();
        if (k < 2)
            continue;
        std::size_t links = 0;
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b)
                if (g.weight(nbrs[a].node, nbrs[b].node))
                    ++links;
        sum += static_cast<double>(links) / (static_cast<double>(k) * (k - 1) / 2.0);
    }
    return sum / static_cast<double>(n);
}

BackboneStats network_stats(const WeightedGraph &original, const WeightedGraph &topic) {
    BackboneStats s;
    s.nodes = topic.node_count();
    s.edges = topic.edge_count();
    s.pct_original_nodes = original.node_count() == 0
                               ? 0.0
                               : 100.0 * static_cast<double>(topic.node_count()) /
                                     static_cast<double>(original.node_count());
    s.clustering = average_clustering(topic);
    return s;
}

std::vector<SweepPoint> alpha_sweep(const WeightedGraph &g, std::span<const double> alphas) {
    if (!std::is_sorted(alphas.begin(), alphas.end()))
        throw std::invalid_argument("alpha_sweep: alphas must be sorted ascending");
    std::vector<SweepPoint> out;
    const double n = static_cast<double>(g.node_count());
    for (double a : alphas) {
        auto backbone = disparity_filter(g, a);
        auto topic = largest_component(backbone);
        out.push_back({a, n == 0 ? 0.0 : 100.0 * static_cast<double>(backbone.node_count()) / n,
                       n == 0 ? 0.0 : 100.0 * static_cast<double>(topic.node_count()) / n});
    }
    return out;
}

namespace {

std::string fmt(const char *spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace

std::string edge_list_csv(const WeightedGraph &g) {
    // Edges are already sorted by (u, v) and u < v, which is label order.
    std::string out = "source,target,weight\n";
    for (const auto &e : g.edges())
        out += g.label(e.u) + "," + g.label(e.v) + "," + std::to_string(e.weight) + "\n";
    return out;
}

std::string backbone_stats_csv(const BackboneStats &stats, double alpha) {
    return "alpha,nodes,pct_original_nodes,edges,clustering\n" + fmt("%g", alpha) + "," +
           std::to_string(stats.nodes) + "," + fmt("%.4f", stats.pct_original_nodes) + "," +
           std::to_string(stats.edges) + "," + fmt("%.4f", stats.clustering) + "\n";
}

std::string alpha_sweep_csv(std::span<const SweepPoint> sweep) {
    std::string out = "alpha,pct_backbone_nodes,pct_original_nodes\n";
    for (const auto &p : sweep)
        out += fmt("%g", p.alpha) + "," + fmt("%.4f", p.pct_backbone_nodes) + "," +
               fmt("%.4f", p.pct_original_nodes) + "\n";
    return out;
}

} // namespace shiftkit
