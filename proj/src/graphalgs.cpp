#include "shiftkit/graphalgs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "shiftkit/error.hpp"
#include "shiftkit/numeric.hpp"
#include "shiftkit/rng.hpp"

namespace shiftkit {

const char *measure_name(Measure m) {
    switch (m) {
    case Measure::Betweenness: return "betweenness";
    case Measure::RandomWalkBetweenness: return "random_walk_betweenness";
    case Measure::PageRank: return "pagerank";
    }
    return "unknown";
}

std::vector<std::size_t> rank_scores(const std::vector<double> &scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return order;
}

CentralityTable betweenness(const WeightedGraph &g) {
    const auto n = g.node_count();
    std::vector<double> bc(n, 0.0);
    if (n >= 3) {
        std::vector<std::size_t> stack;
        std::vector<std::vector<std::size_t>> preds(n);
        std::vector<double> sigma(n), delta(n);
        std::vector<long> dist(n);
        for (std::size_t s = 0; s < n; ++s) {
            stack.clear();
            for (std::size_t v = 0; v < n; ++v) {
                preds[v].clear();
                sigma[v] = 0.0;
                delta[v] = 0.0;
                dist[v] = -1;
            }
            sigma[s] = 1.0;
            dist[s] = 0;
            std::queue<std::size_t> q;
            q.push(s);
            while (!q.empty()) {
                auto v = q.front();
                q.pop();
                stack.push_back(v);
                for (const auto &nb : g.neighbors(v)) {
                    auto w = nb.node;
                    if (dist[w] < 0) {
                        dist[w] = dist[v] + 1;
                        q.push(w);
                    }
                    if (dist[w] == dist[v] + 1) {
                        sigma[w] += sigma[v];
                        preds[w].push_back(v);
                    }
                }
            }
            while (!stack.empty()) {
                auto w = stack.back();
                stack.pop_back();
                for (auto v : preds[w])
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                if (w != s)
                    bc[w] += delta[w];
            }
        }
        // Each unordered pair was counted from both ends.
        const double scale = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
        for (auto &b : bc)
            b *= scale;
    }
    CentralityTable t{Measure::Betweenness, std::move(bc), {}};
    t.ranking = rank_scores(t.scores);
    return t;
}

namespace {

// Given the grounded Laplacian inverse C (n x n, zero row/column at the
// ground), accumulate intermediate-node throughput over all pairs.
std::vector<double> current_flow_from_inverse(const WeightedGraph &g, const Eigen::MatrixXd &c) {
    const auto n = g.node_count();
    std::vector<double> total(n, 0.0);
    std::vector<double> f(n);
    for (const auto &e : g.edges()) {
        const double w = static_cast<double>(e.weight);
        for (std::size_t s = 0; s < n; ++s)
            f[s] = w * (c(e.u, s) - c(e.v, s));
        std::sort(f.begin(), f.end());
        // sum_{s<t} |f_s - f_t| over the sorted vector
        CompensatedSum pairs;
        for (std::size_t i = 0; i < n; ++i)
            pairs.add((2.0 * static_cast<double>(i) - static_cast<double>(n) + 1.0) * f[i]);
        total[e.u] += pairs.value();
        total[e.v] += pairs.value();
    }
    // An endpoint passes exactly one unit of current per pair it belongs to;
    // half of its absolute incident current is therefore 1/2 for each of the
    // n-1 pairs and is removed here.
    const double norm = 2.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::max(0.0, 0.5 * total[i] - 0.5 * static_cast<double>(n - 1)) * norm;
    return out;
}

void require_connected(const WeightedGraph &g) {
    if (!is_connected(g))
        throw DisconnectedGraphError(
            "random_walk_betweenness needs a connected graph; run it per component");
}

Eigen::MatrixXd grounded_inverse_dense(const WeightedGraph &g) {
    const auto n = g.node_count();
    const auto r = static_cast<Eigen::Index>(n - 1);
    // Ground node 0; rows/columns 1..n-1 of the Laplacian.
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(r, r);
    for (const auto &e : g.edges()) {
        const double w = static_cast<double>(e.weight);
        auto u = static_cast<Eigen::Index>(e.u) - 1;
        auto v = static_cast<Eigen::Index>(e.v) - 1;
        if (u >= 0)
            lap(u, u) += w;
        if (v >= 0)
            lap(v, v) += w;
        if (u >= 0 && v >= 0) {
            lap(u, v) -= w;
            lap(v, u) -= w;
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(lap);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("random_walk_betweenness: grounded Laplacian is not positive definite");
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    c.bottomRightCorner(r, r) = llt.solve(Eigen::MatrixXd::Identity(r, r));
    return c;
}

Eigen::MatrixXd grounded_inverse_iterative(const WeightedGraph &g) {
    const auto n = g.node_count();
    const auto r = static_cast<Eigen::Index>(n - 1);
    std::vector<Eigen::Triplet<double>> trips;
    for (const auto &e : g.edges()) {
        const double w = static_cast<double>(e.weight);
        auto u = static_cast<Eigen::Index>(e.u) - 1;
        auto v = static_cast<Eigen::Index>(e.v) - 1;
        if (u >= 0)
            trips.emplace_back(u, u, w);
        if (v >= 0)
            trips.emplace_back(v, v, w);
        if (u >= 0 && v >= 0) {
            trips.emplace_back(u, v, -w);
            trips.emplace_back(v, u, -w);
        }
    }
    Eigen::SparseMatrix<double> lap(r, r);
    lap.setFromTriplets(trips.begin(), trips.end());
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-13);
    cg.setMaxIterations(static_cast<Eigen::Index>(std::max<std::size_t>(10 * n, 1000)));
    cg.compute(lap);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(r);
    for (Eigen::Index s = 0; s < r; ++s) {
        rhs.setZero();
        rhs(s) = 1.0;
        Eigen::VectorXd x = cg.solve(rhs);
        if (cg.info() != Eigen::Success)
            throw ConvergenceError("random_walk_betweenness: conjugate gradient did not converge",
                                   cg.error());
        c.col(s + 1).tail(r) = x;
    }
    return c;
}

CentralityTable current_flow(const WeightedGraph &g, bool iterative) {
    const auto n = g.node_count();
    CentralityTable t{Measure::RandomWalkBetweenness, std::vector<double>(n, 0.0), {}};
    if (n >= 2)
        require_connected(g);
    if (n >= 3) {
        auto c = iterative ? grounded_inverse_iterative(g) : grounded_inverse_dense(g);
        t.scores = current_flow_from_inverse(g, c);
    }
    t.ranking = rank_scores(t.scores);
    return t;
}

} // namespace

CentralityTable random_walk_betweenness(const WeightedGraph &g) {
    return current_flow(g, g.node_count() > kDenseCurrentFlowLimit);
}

CentralityTable random_walk_betweenness_iterative(const WeightedGraph &g) { return current_flow(g, true); }

CentralityTable pagerank(const WeightedGraph &g, const PageRankParams &params) {
    const auto n = g.node_count();
    if (n == 0)
        throw std::invalid_argument("pagerank: empty graph");
    if (!(params.damping > 0.0 && params.damping < 1.0))
        throw std::invalid_argument("pagerank: damping must lie in (0, 1)");
    if (!(params.tol > 0.0))
        throw std::invalid_argument("pagerank: tolerance must be positive");

    const double nd = static_cast<double>(n);
    std::vector<double> strength(n);
    for (std::size_t v = 0; v < n; ++v)
        strength[v] = static_cast<double>(g.strength(v));
    std::vector<double> x(n, 1.0 / nd), next(n);
    double residual = 0.0;
    for (std::size_t iter = 0; iter < params.max_iter; ++iter) {
        double dangling = 0.0;
        for (std::size_t v = 0; v < n; ++v)
            if (strength[v] == 0.0)
                dangling += x[v];
        const double base = (1.0 - params.damping) / nd + params.damping * dangling / nd;
        for (std::size_t v = 0; v < n; ++v) {
            double in = 0.0;
            for (const auto &nb : g.neighbors(v))
                in += x[nb.node] * static_cast<double>(nb.weight) / strength[nb.node];
            next[v] = base + params.damping * in;
        }
        residual = 0.0;
        for (std::size_t v = 0; v < n; ++v)
            residual += std::abs(next[v] - x[v]);
        x.swap(next);
        if (residual < params.tol) {
            double sum = std::accumulate(x.begin(), x.end(), 0.0);
            for (auto &v : x)
                v /= sum;
            CentralityTable t{Measure::PageRank, std::move(x), {}};
            t.ranking = rank_scores(t.scores);
            return t;
        }
    }
    throw ConvergenceError("pagerank did not converge within " + std::to_string(params.max_iter) +
                               " iterations (L1 change " + std::to_string(residual) + ")",
                           residual);
}

// ---------------------------------------------------------------------------
// Louvain

namespace {

struct WorkGraph {
    // adj[i] excludes self-loops; self[i] is the self-loop weight, so the
    // weighted degree is sum(adj) + 2 * self.
    std::vector<std::vector<std::pair<std::size_t, double>>> adj;
    std::vector<double> self;
    std::vector<double> degree;
    double total = 0.0; // m: every edge once, self-loops included

    std::size_t size() const { return adj.size(); }
};

WorkGraph to_work_graph(const WeightedGraph &g) {
    WorkGraph w;
    const auto n = g.node_count();
    w.adj.resize(n);
    w.self.assign(n, 0.0);
    w.degree.assign(n, 0.0);
    for (const auto &e : g.edges()) {
        const double wt = static_cast<double>(e.weight);
        w.adj[e.u].emplace_back(e.v, wt);
        w.adj[e.v].emplace_back(e.u, wt);
        w.degree[e.u] += wt;
        w.degree[e.v] += wt;
        w.total += wt;
    }
    return w;
}

double work_modularity(const WorkGraph &g, const std::vector<std::size_t> &comm) {
    if (g.total <= 0.0)
        return 0.0;
    const auto n = g.size();
    std::size_t ncomm = 0;
    for (auto c : comm)
        ncomm = std::max(ncomm, c + 1);
    std::vector<double> inside(ncomm, 0.0), tot(ncomm, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        tot[comm[i]] += g.degree[i];
        inside[comm[i]] += g.self[i];
        for (const auto &[j, w] : g.adj[i])
            if (i < j && comm[i] == comm[j])
                inside[comm[i]] += w;
    }
    const double m = g.total;
    CompensatedSum q;
    for (std::size_t c = 0; c < ncomm; ++c)
        q.add(inside[c] / m - (tot[c] / (2.0 * m)) * (tot[c] / (2.0 * m)));
    return q.value();
}

// Local moving phase. Returns true if any node changed community.
bool local_moves(const WorkGraph &g, std::vector<std::size_t> &comm, Rng &rng) {
    constexpr double kEps = 1e-12;
    const auto n = g.size();
    const double m2 = 2.0 * g.total;
    std::vector<double> tot(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        tot[comm[i]] += g.degree[i];

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);

    std::vector<double> link(n, 0.0);
    std::vector<std::size_t> touched;
    bool any_change = false;
    for (std::size_t pass = 0; pass < 10000; ++pass) {
        bool improved = false;
        for (auto i : order) {
            const auto own = comm[i];
            touched.clear();
            for (const auto &[j, w] : g.adj[i]) {
                auto c = comm[j];
                if (link[c] == 0.0)
                    touched.push_back(c);
                link[c] += w;
            }
            tot[own] -= g.degree[i];
            const double ki = g.degree[i];
            auto gain = [&](std::size_t c) { return link[c] - tot[c] * ki / m2; };
            std::size_t best = own;
            double best_gain = gain(own);
            const double stay_gain = best_gain;
            for (auto c : touched) {
                double gc = gain(c);
                if (gc > best_gain + kEps || (std::abs(gc - best_gain) <= kEps && c < best)) {
                    best = c;
                    best_gain = gc;
                }
            }
            tot[best] += ki;
            if (best != own) {
                comm[i] = best;
                any_change = true;
                if (best_gain > stay_gain + kEps)
                    improved = true;
            }
            for (auto c : touched)
                link[c] = 0.0;
            link[own] = 0.0;
        }
        if (!improved)
            break;
    }
    return any_change;
}

// Renumbers communities 0..k-1 by first appearance; returns k.
std::size_t renumber(std::vector<std::size_t> &comm) {
    std::map<std::size_t, std::size_t> remap;
    for (auto &c : comm) {
        auto [it, inserted] = remap.emplace(c, remap.size());
        c = it->second;
    }
    return remap.size();
}

WorkGraph aggregate(const WorkGraph &g, const std::vector<std::size_t> &comm, std::size_t k) {
    WorkGraph out;
    out.adj.resize(k);
    out.self.assign(k, 0.0);
    out.degree.assign(k, 0.0);
    out.total = g.total;
    std::vector<std::map<std::size_t, double>> links(k);
    for (std::size_t i = 0; i < g.size(); ++i) {
        out.self[comm[i]] += g.self[i];
        out.degree[comm[i]] += g.degree[i];
        for (const auto &[j, w] : g.adj[i]) {
            if (j <= i)
                continue;
            if (comm[i] == comm[j]) {
                out.self[comm[i]] += w;
            } else {
                links[comm[i]][comm[j]] += w;
                links[comm[j]][comm[i]] += w;
            }
        }
    }
    for (std::size_t c = 0; c < k; ++c)
        for (const auto &[d, w] : links[c])
            out.adj[c].emplace_back(d, w);
    return out;
}

} // namespace

double modularity(const WeightedGraph &g, const std::vector<std::size_t> &labels) {
    if (labels.size() != g.node_count())
        throw std::invalid_argument("modularity: one label per node required");
    return work_modularity(to_work_graph(g), labels);
}

CommunityAssignment louvain(const WeightedGraph &g, std::uint64_t seed) {
    const auto n = g.node_count();
    if (n == 0)
        throw std::invalid_argument("louvain: empty graph");
    CommunityAssignment result;
    result.labels.resize(n);
    std::iota(result.labels.begin(), result.labels.end(), std::size_t{0});

    WorkGraph level = to_work_graph(g);
    if (level.total <= 0.0) {
        result.modularity = 0.0;
        result.level_modularity.push_back(0.0);
        return result;
    }
    Rng rng(seed);
    result.level_modularity.push_back(work_modularity(level, result.labels));

    for (;;) {
        std::vector<std::size_t> comm(level.size());
        std::iota(comm.begin(), comm.end(), std::size_t{0});
        bool changed = local_moves(level, comm, rng);
        auto k = renumber(comm);
        for (auto &l : result.labels)
            l = comm[l];
        if (!changed || k == level.size())
            break;
        level = aggregate(level, comm, k);
        result.level_modularity.push_back(modularity(g, result.labels));
    }
    // Canonical ids: first appearance in label order.
    renumber(result.labels);
    result.modularity = modularity(g, result.labels);
    if (result.level_modularity.back() != result.modularity)
        result.level_modularity.push_back(result.modularity);
    return result;
}

} // namespace shiftkit
