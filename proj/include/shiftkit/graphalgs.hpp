#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shiftkit/hashnet.hpp"

namespace shiftkit {

enum class Measure { Betweenness, RandomWalkBetweenness, PageRank };

const char *measure_name(Measure m);

struct CentralityTable {
    Measure measure;
    std::vector<double> scores;       // by node index
    std::vector<std::size_t> ranking; // descending score, ties by label
};

/// Orders nodes by descending score; equal scores fall back to index
/// (label) order.
std::vector<std::size_t> rank_scores(const std::vector<double> &scores);

/// Shortest-path betweenness with hop-count path lengths, normalized by
/// 2 / ((n-1)(n-2)). All zeros for n < 3.
CentralityTable betweenness(const WeightedGraph &g);

/// Newman's current-flow betweenness with edge weights as conductances,
/// counting only intermediate nodes of each pair and normalized by
/// 2 / ((n-1)(n-2)). Throws DisconnectedGraphError for more than one
/// component; all zeros for n < 3.
CentralityTable random_walk_betweenness(const WeightedGraph &g);

/// Node count above which current-flow betweenness switches from a dense
/// inverse to conjugate-gradient solves.
inline constexpr std::size_t kDenseCurrentFlowLimit = 500;

/// Same as random_walk_betweenness but always takes the iterative path;
/// exposed for testing the large-graph code.
CentralityTable random_walk_betweenness_iterative(const WeightedGraph &g);

struct PageRankParams {
    double damping = 0.85;
    double tol = 1e-10;
    std::size_t max_iter = 1000;
};

/// Power iteration on the weight-proportional walk with uniform teleport.
/// Throws ConvergenceError carrying the last L1 change.
CentralityTable pagerank(const WeightedGraph &g, const PageRankParams &params = {});

struct CommunityAssignment {
    std::vector<std::size_t> labels; // community id per node, 0-based, dense
    double modularity = 0.0;
    /// Modularity after each aggregation level.
    std::vector<double> level_modularity;
};

/// Weighted Newman-Girvan modularity at resolution 1.
double modularity(const WeightedGraph &g, const std::vector<std::size_t> &labels);

/// Two-phase Louvain. The node visiting order is shuffled from `seed`;
/// community ids are renumbered by first appearance in label order.
CommunityAssignment louvain(const WeightedGraph &g, std::uint64_t seed);

} // namespace shiftkit
