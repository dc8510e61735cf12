#include "shiftkit/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "shiftkit/error.hpp"
#include "shiftkit/infotheory.hpp"
#include "shiftkit/rng.hpp"

namespace shiftkit {

const char *diversity_kind_name(DiversityKind k) {
    return k == DiversityKind::Lexical ? "lexical" : "hashtag";
}

namespace {

// Each tweet reduced to interned token ids so that draws only touch counters.
struct InternedCorpus {
    std::vector<std::vector<std::uint32_t>> tweets;
    std::size_t vocabulary = 0;
};

InternedCorpus intern(const CorpusWindow &window, DiversityKind kind, const StopList &stoplist,
                      const DiversityOptions &options) {
    InternedCorpus out;
    std::unordered_map<std::string, std::uint32_t> ids;
    auto id_of = [&](std::string tok) {
        auto [it, inserted] = ids.emplace(std::move(tok), static_cast<std::uint32_t>(ids.size()));
        return it->second;
    };
    AnchorSet anchors = options.anchors;
    anchors.insert(window.anchor);
    out.tweets.reserve(window.tweets.size());
    for (const auto &t : window.tweets) {
        std::vector<std::uint32_t> row;
        if (kind == DiversityKind::Lexical) {
            for (auto &tok : tokenize(t.text, anchors, stoplist)) {
                if (options.lexical_exclude_all_hashtags && is_hashtag_token(tok))
                    continue;
                row.push_back(id_of(std::move(tok)));
            }
        } else {
            for (auto &tag : extract_hashtags(t.text)) {
                if (options.exclude_own_anchor && tag == window.anchor)
                    continue;
                row.push_back(id_of(std::move(tag)));
            }
        }
        out.tweets.push_back(std::move(row));
    }
    out.vocabulary = ids.size();
    return out;
}

double pooled_effective_diversity(const InternedCorpus &corpus, std::span<const std::size_t> draw,
                                  std::vector<std::uint64_t> &counts,
                                  std::vector<std::uint32_t> &touched) {
    touched.clear();
    for (auto idx : draw) {
        for (auto id : corpus.tweets[idx]) {
            if (counts[id]++ == 0)
                touched.push_back(id);
        }
    }
    // Sort so the entropy sum runs in a fixed order regardless of draw order.
    std::sort(touched.begin(), touched.end());
    std::vector<std::uint64_t> c;
    c.reserve(touched.size());
    for (auto id : touched) {
        c.push_back(counts[id]);
        counts[id] = 0;
    }
    return effective_diversity(shannon_entropy_of_counts(c));
}

std::string fmt(const char *spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace

DiversitySampleSet subsample_diversity(const CorpusWindow &window, DiversityKind kind,
                                       std::size_t sample_size, std::size_t n_draws,
                                       std::uint64_t seed, const StopList &stoplist,
                                       const DiversityOptions &options) {
    if (sample_size == 0)
        throw std::invalid_argument("subsample_diversity: sample_size must be positive");
    const auto available = window.tweets.size();
    if (!options.with_replacement && available < sample_size)
        throw InsufficientDataError("window for #" + window.anchor + " starting " +
                                    format_iso8601(window.start) + " has " +
                                    std::to_string(available) + " tweets, fewer than the " +
                                    std::to_string(sample_size) + " needed per draw");
    if (available == 0)
        throw InsufficientDataError("window for #" + window.anchor + " is empty");

    DiversitySampleSet set;
    set.anchor = window.anchor;
    set.period_start = window.start;
    set.period_end = window.end;
    set.kind = kind;
    set.sample_size = sample_size;
    set.n_draws = n_draws;
    set.seed = seed;
    set.samples.reserve(n_draws);

    auto corpus = intern(window, kind, stoplist, options);
    std::vector<std::uint64_t> counts(corpus.vocabulary, 0);
    std::vector<std::uint32_t> touched;
    std::vector<std::size_t> draw;
    for (std::size_t d = 0; d < n_draws; ++d) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(d)));
        if (options.with_replacement) {
            draw.resize(sample_size);
            for (auto &x : draw)
                x = rng.below(available);
        } else {
            draw = sample_without_replacement(available, sample_size, rng);
        }
        set.samples.push_back(pooled_effective_diversity(corpus, draw, counts, touched));
    }
    return set;
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty())
        throw std::invalid_argument("quantile of empty data");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BoxplotStats boxplot_stats(std::span<const double> samples) {
    if (samples.size() < 5)
        throw std::invalid_argument("boxplot_stats: need at least 5 samples, got " +
                                    std::to_string(samples.size()));
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    BoxplotStats b;
    b.q1 = quantile_sorted(s, 0.25);
    b.median = quantile_sorted(s, 0.5);
    b.q3 = quantile_sorted(s, 0.75);
    const double iqr = b.q3 - b.q1;
    const double half_notch = 1.57 * iqr / std::sqrt(static_cast<double>(s.size()));
    b.notch_lo = b.median - half_notch;
    b.notch_hi = b.median + half_notch;
    const double fence_lo = b.q1 - 1.5 * iqr;
    const double fence_hi = b.q3 + 1.5 * iqr;
    b.whisker_lo = b.q1;
    b.whisker_hi = b.q3;
    for (double x : s) {
        if (x < fence_lo || x > fence_hi) {
            b.outliers.push_back(x);
            continue;
        }
        b.whisker_lo = std::min(b.whisker_lo, x);
        b.whisker_hi = std::max(b.whisker_hi, x);
    }
    return b;
}

DiversityComparison compare_diversity(const DiversitySampleSet &a, const DiversitySampleSet &b) {
    if (a.kind != b.kind)
        throw std::invalid_argument("compare_diversity: sample sets are of different kinds");
    if (a.period_start != b.period_start || a.period_end != b.period_end)
        throw std::invalid_argument("compare_diversity: sample sets cover different periods");
    if (a.samples.empty() || b.samples.empty())
        throw std::invalid_argument("compare_diversity: empty sample set");
    DiversityComparison c;
    c.mean_a = std::accumulate(a.samples.begin(), a.samples.end(), 0.0) /
               static_cast<double>(a.samples.size());
    c.mean_b = std::accumulate(b.samples.begin(), b.samples.end(), 0.0) /
               static_cast<double>(b.samples.size());
    c.mean_ratio = c.mean_a / c.mean_b;
    c.box_a = boxplot_stats(a.samples);
    c.box_b = boxplot_stats(b.samples);
    c.notches_disjoint = c.box_a.notch_hi < c.box_b.notch_lo || c.box_b.notch_hi < c.box_a.notch_lo;
    return c;
}

std::vector<MonthPeriod> monthly_windows(Instant start, Instant end) {
    using namespace std::chrono;
    std::vector<MonthPeriod> out;
    if (!(start < end))
        return out;
    year_month_day first{floor<days>(start)};
    year_month ym{first.year(), first.month()};
    for (;;) {
        Instant ms{sys_days{ym / day{1}}};
        if (!(ms < end))
            break;
        auto next = ym + months{1};
        Instant me{sys_days{next / day{1}}};
        char label[16];
        std::snprintf(label, sizeof label, "%04d-%02u", static_cast<int>(ym.year()),
                      static_cast<unsigned>(ym.month()));
        out.push_back({label, ms, me});
        ym = next;
    }
    return out;
}

std::string diversity_samples_csv(const DiversitySampleSet &set) {
    std::string out = "draw_index,effective_diversity\n";
    for (std::size_t i = 0; i < set.samples.size(); ++i)
        out += std::to_string(i) + "," + fmt("%.10g", set.samples[i]) + "\n";
    return out;
}

std::string boxplot_csv_header() {
    return "anchor,period,kind,median,q1,q3,notch_lo,notch_hi,whisker_lo,whisker_hi,outliers\n";
}

std::string boxplot_csv_row(const std::string &anchor, const std::string &period,
                            DiversityKind kind, const BoxplotStats &b) {
    std::string outliers;
    for (std::size_t i = 0; i < b.outliers.size(); ++i) {
        if (i)
            outliers += ';';
        outliers += fmt("%.6f", b.outliers[i]);
    }
    return anchor + "," + period + "," + diversity_kind_name(kind) + "," + fmt("%.6f", b.median) +
           "," + fmt("%.6f", b.q1) + "," + fmt("%.6f", b.q3) + "," + fmt("%.6f", b.notch_lo) + "," +
           fmt("%.6f", b.notch_hi) + "," + fmt("%.6f", b.whisker_lo) + "," +
           fmt("%.6f", b.whisker_hi) + "," + outliers + "\n";
}

} // namespace shiftkit
