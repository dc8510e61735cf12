#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shiftkit/corpus.hpp"

namespace shiftkit {

/// Mixture weights for the Jensen-Shannon divergence. Both strictly
/// positive, summing to one.
class JsdWeights {
public:
    JsdWeights(double pi1, double pi2);

    static JsdWeights equal() { return {0.5, 0.5}; }
    /// Proportional to the two corpus sizes (token mass or tweet count).
    static JsdWeights proportional(double size_p, double size_q);

    double pi1() const { return pi1_; }
    double pi2() const { return pi2_; }

    bool operator==(const JsdWeights &) const = default;

private:
    double pi1_;
    double pi2_;
};

struct MixedEntry {
    std::string token;
    double prob;
};

/// M = pi1 P + pi2 Q over the union support, sorted by token.
struct MixedDistribution {
    std::vector<MixedEntry> entries;
};

enum class Direction { P, Q, None };

struct WordContribution {
    std::string token;
    double contribution; // bits, >= 0
    Direction direction;
    double p;
    double q;
};

struct JsdResult {
    double total; // bits
    MixedDistribution mixed;
};

/// H = -sum p log2 p.
double shannon_entropy(const TokenDistribution &dist);

/// Entropy of raw (unnormalized) counts; 0 for an empty set.
double shannon_entropy_of_counts(std::span<const std::uint64_t> counts);

/// 2^H. Throws std::domain_error for negative H.
double effective_diversity(double entropy_bits);

/// KL(p || q) in bits, or +infinity when p's support is not contained in q's.
double kl_divergence(const TokenDistribution &p, const TokenDistribution &q);

/// pi1 KL(P || M) + pi2 KL(Q || M).
JsdResult jsd(const TokenDistribution &p, const TokenDistribution &q, const JsdWeights &w);

/// Per-token share of the divergence over the union support, sorted by token:
/// -m log2 m + pi1 p log2 p + pi2 q log2 q. Exactly zero where p == q.
std::vector<WordContribution> jsd_contributions(const TokenDistribution &p,
                                                const TokenDistribution &q, const JsdWeights &w);

/// Shannon index of all tokens co-occurring with `word` across the given
/// tokenized tweets, with `word` and anchor hashtags removed. 0 when nothing
/// remains.
double word_context_diversity(std::span<const std::vector<std::string>> tweets,
                              std::string_view word, const AnchorSet &anchors);

} // namespace shiftkit
