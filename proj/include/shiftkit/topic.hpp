#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shiftkit/graphalgs.hpp"
#include "shiftkit/hashnet.hpp"

namespace shiftkit {

struct TopicParams {
    double alpha = 0.03;
    PageRankParams pagerank;
    std::uint64_t louvain_seed = 0;
    /// Display radius = size_scale * sqrt(usage).
    double size_scale = 1.0;
};

/// Largest component of the disparity backbone, annotated with communities,
/// the three centralities and display sizes.
struct TopicNetwork {
    WeightedGraph graph;
    double alpha = 0.03;
    CommunityAssignment community;
    std::vector<CentralityTable> centrality; // betweenness, random walk, pagerank
    std::vector<double> node_size;

    const CentralityTable &table(Measure m) const;
};

TopicNetwork build_topic_network(const WeightedGraph &original, const TopicParams &params = {});

/// Annotates an already-extracted connected graph.
TopicNetwork annotate_topic_network(WeightedGraph topic, const TopicParams &params);

struct CentralityRow {
    Measure measure;
    std::size_t rank; // 1-based
    std::string node;
    double score;
};

/// Top `k` nodes per measure (fewer when the network is smaller).
std::vector<CentralityRow> centrality_table(const TopicNetwork &net, std::size_t k = 10);

/// `measure,rank,node,score` with scores to four decimals.
std::string centrality_csv(const std::vector<CentralityRow> &rows);

/// GraphML with node attributes usage, community, size and one score per
/// measure, and the edge attribute weight.
std::string topic_graphml(const TopicNetwork &net);

} // namespace shiftkit
