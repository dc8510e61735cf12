#include "shiftkit/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "shiftkit/numeric.hpp"

namespace shiftkit {

JsdWeights::JsdWeights(double pi1, double pi2) : pi1_(pi1), pi2_(pi2) {
    if (!(pi1 > 0.0) || !(pi2 > 0.0) || std::abs(pi1 + pi2 - 1.0) > 1e-12)
        throw std::invalid_argument("JsdWeights: need pi1, pi2 > 0 with pi1 + pi2 = 1");
}

JsdWeights JsdWeights::proportional(double size_p, double size_q) {
    if (!(size_p > 0.0) || !(size_q > 0.0))
        throw std::invalid_argument("JsdWeights: corpus sizes must be positive");
    double pi1 = size_p / (size_p + size_q);
    return {pi1, 1.0 - pi1};
}

double shannon_entropy(const TokenDistribution &dist) {
    CompensatedSum h;
    for (const auto &e : dist.entries())
        h.add(-xlog2x(e.prob));
    // Rounding can push a one-token distribution to -0 or a few ulps below.
    return std::max(0.0, h.value());
}

double shannon_entropy_of_counts(std::span<const std::uint64_t> counts) {
    std::uint64_t total = 0;
    for (auto c : counts)
        total += c;
    if (total == 0)
        return 0.0;
    // H = log2 N - (1/N) sum c log2 c
    CompensatedSum s;
    for (auto c : counts)
        s.add(xlog2x(static_cast<double>(c)));
    const double n = static_cast<double>(total);
    return std::max(0.0, std::log2(n) - s.value() / n);
}

double effective_diversity(double entropy_bits) {
    if (!(entropy_bits >= 0.0))
        throw std::domain_error("effective_diversity: entropy must be nonnegative");
    return std::exp2(entropy_bits);
}

double kl_divergence(const TokenDistribution &p, const TokenDistribution &q) {
    auto pe = p.entries();
    auto qe = q.entries();
    CompensatedSum kl;
    std::size_t j = 0;
    for (const auto &e : pe) {
        while (j < qe.size() && qe[j].token < e.token)
            ++j;
        if (j == qe.size() || qe[j].token != e.token)
            return std::numeric_limits<double>::infinity();
        kl.add(e.prob * std::log2(e.prob / qe[j].prob));
    }
    return std::max(0.0, kl.value());
}

namespace {

// Walks the union of two sorted supports.
template <class Fn>
void for_each_union(const TokenDistribution &p, const TokenDistribution &q, Fn &&fn) {
    auto pe = p.entries();
    auto qe = q.entries();
    std::size_t i = 0, j = 0;
    while (i < pe.size() || j < qe.size()) {
        if (j == qe.size() || (i < pe.size() && pe[i].token < qe[j].token)) {
            fn(pe[i].token, pe[i].prob, 0.0);
            ++i;
        } else if (i == pe.size() || qe[j].token < pe[i].token) {
            fn(qe[j].token, 0.0, qe[j].prob);
            ++j;
        } else {
            fn(pe[i].token, pe[i].prob, qe[j].prob);
            ++i;
            ++j;
        }
    }
}

} // namespace

JsdResult jsd(const TokenDistribution &p, const TokenDistribution &q, const JsdWeights &w) {
    JsdResult result{0.0, {}};
    CompensatedSum kl_p, kl_q;
    for_each_union(p, q, [&](const std::string &tok, double pi, double qi) {
        double m = w.pi1() * pi + w.pi2() * qi;
        result.mixed.entries.push_back({tok, m});
        if (pi > 0.0)
            kl_p.add(pi * std::log2(pi / m));
        if (qi > 0.0)
            kl_q.add(qi * std::log2(qi / m));
    });
    result.total = std::max(0.0, w.pi1() * kl_p.value() + w.pi2() * kl_q.value());
    return result;
}

std::vector<WordContribution> jsd_contributions(const TokenDistribution &p,
                                                const TokenDistribution &q, const JsdWeights &w) {
    std::vector<WordContribution> out;
    out.reserve(std::max(p.support_size(), q.support_size()));
    for_each_union(p, q, [&](const std::string &tok, double pi, double qi) {
        if (pi == qi) {
            out.push_back({tok, 0.0, Direction::None, pi, qi});
            return;
        }
        double m = w.pi1() * pi + w.pi2() * qi;
        // Same quantity as -m log m + pi1 p log p + pi2 q log q, written as
        // ratios so near-equal p and q do not cancel catastrophically.
        double c = 0.0;
        if (pi > 0.0)
            c += w.pi1() * pi * std::log2(pi / m);
        if (qi > 0.0)
            c += w.pi2() * qi * std::log2(qi / m);
        out.push_back({tok, std::max(0.0, c), pi > qi ? Direction::P : Direction::Q, pi, qi});
    });
    return out;
}

double word_context_diversity(std::span<const std::vector<std::string>> tweets,
                              std::string_view word, const AnchorSet &anchors) {
    std::map<std::string_view, std::uint64_t> counts;
    for (const auto &tokens : tweets) {
        for (const auto &tok : tokens) {
            if (tok == word)
                continue;
            if (is_hashtag_token(tok) && anchors.contains(std::string_view(tok).substr(1)))
                continue;
            ++counts[tok];
        }
    }
    std::vector<std::uint64_t> c;
    c.reserve(counts.size());
    for (const auto &[tok, n] : counts)
        c.push_back(n);
    return shannon_entropy_of_counts(c);
}

} // namespace shiftkit
