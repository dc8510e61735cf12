#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shiftkit/corpus.hpp"

namespace shiftkit {

struct Neighbor {
    std::size_t node;
    std::uint64_t weight;

    bool operator==(const Neighbor &) const = default;
};

struct Edge {
    std::size_t u; // u < v
    std::size_t v;
    std::uint64_t weight;

    bool operator==(const Edge &) const = default;
};

/// Undirected hashtag graph with positive integer edge weights. Nodes are
/// indexed in lexicographic label order, so index order doubles as the
/// deterministic tie-break everywhere.
class WeightedGraph {
public:
    class Builder {
    public:
        /// Adds `usage` to the node, creating it if needed.
        Builder &add_node(std::string_view label, std::uint64_t usage = 0);
        /// Adds `weight` to the edge between distinct labels, creating nodes
        /// as needed.
        Builder &add_edge(std::string_view a, std::string_view b, std::uint64_t weight = 1);
        WeightedGraph build() const;

    private:
        std::map<std::string, std::uint64_t, std::less<>> usage_;
        std::map<std::pair<std::string, std::string>, std::uint64_t> edges_;
    };

    WeightedGraph() = default;

    std::size_t node_count() const { return labels_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    bool empty() const { return labels_.empty(); }

    const std::string &label(std::size_t i) const { return labels_[i]; }
    std::span<const std::string> labels() const { return labels_; }
    std::uint64_t usage(std::size_t i) const { return usage_[i]; }
    std::optional<std::size_t> index_of(std::string_view label) const;

    std::span<const Neighbor> neighbors(std::size_t i) const { return adj_[i]; }
    std::size_t degree(std::size_t i) const { return adj_[i].size(); }
    std::uint64_t strength(std::size_t i) const;
    /// Sorted by (u, v).
    std::span<const Edge> edges() const { return edges_; }
    std::optional<std::uint64_t> weight(std::size_t u, std::size_t v) const;

    /// Subgraph induced by `nodes`.
    WeightedGraph induced(std::span<const std::size_t> nodes) const;
    /// Keeps only `kept` edges and the nodes they touch.
    WeightedGraph with_edges(std::span<const Edge> kept) const;

    bool operator==(const WeightedGraph &) const = default;

private:
    std::vector<std::string> labels_;
    std::vector<std::uint64_t> usage_;
    std::vector<std::vector<Neighbor>> adj_; // sorted by neighbor index
    std::vector<Edge> edges_;
};

/// One node per non-anchor hashtag (usage = number of tweets carrying it);
/// every distinct pair within a tweet adds 1 to its edge.
WeightedGraph build_cooccurrence(std::span<const Tweet> tweets, const AnchorSet &anchors);

/// Significance of edge (v,u) as seen from v: (1 - p)^(k - 1) with
/// p = w / strength(v), k = degree(v). Equals 1 for k = 1.
double disparity_statistic(double normalized_weight, std::size_t degree);

/// Keeps edges significant (statistic strictly below alpha) from either
/// endpoint; drops nodes left without edges. Throws std::domain_error unless
/// 0 < alpha < 1.
WeightedGraph disparity_filter(const WeightedGraph &g, double alpha);

/// Connected components as sorted node-index lists, ordered by smallest member.
std::vector<std::vector<std::size_t>> connected_components(const WeightedGraph &g);
bool is_connected(const WeightedGraph &g);

/// Largest component; ties go to the component holding the smallest label.
WeightedGraph largest_component(const WeightedGraph &g);

struct BackboneStats {
    std::size_t nodes = 0;
    double pct_original_nodes = 0.0;
    std::size_t edges = 0;
    double clustering = 0.0;
};

/// Mean over nodes of local clustering (0 for degree < 2).
double average_clustering(const WeightedGraph &g);

BackboneStats network_stats(const WeightedGraph &original, const WeightedGraph &topic);

struct SweepPoint {
    double alpha;
    double pct_backbone_nodes; // before component extraction
    double pct_original_nodes; // largest component
};

std::vector<SweepPoint> alpha_sweep(const WeightedGraph &g, std::span<const double> alphas);

/// `source,target,weight`, rows sorted by source then target, source < target.
std::string edge_list_csv(const WeightedGraph &g);

std::string backbone_stats_csv(const BackboneStats &stats, double alpha);
std::string alpha_sweep_csv(std::span<const SweepPoint> sweep);

} // namespace shiftkit
