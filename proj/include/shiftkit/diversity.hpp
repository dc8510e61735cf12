#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shiftkit/corpus.hpp"

namespace shiftkit {

enum class DiversityKind { Lexical, Hashtag };

const char *diversity_kind_name(DiversityKind k);

struct DiversityOptions {
    /// Lexical pools drop every hashtag token; when false only the anchors
    /// in `anchors` (plus the window's own) are dropped.
    bool lexical_exclude_all_hashtags = true;
    /// Hashtag pools drop the window's own anchor.
    bool exclude_own_anchor = true;
    bool with_replacement = false;
    AnchorSet anchors;
};

struct DiversitySampleSet {
    std::string anchor;
    Instant period_start;
    Instant period_end;
    DiversityKind kind = DiversityKind::Lexical;
    std::vector<double> samples;
    std::size_t sample_size = 0;
    std::size_t n_draws = 0;
    std::uint64_t seed = 0;
};

/// `n_draws` independent subsamples of `sample_size` tweets, each drawn
/// from its own (seed, draw index) stream, returning the effective diversity
/// 2^H of each pooled token distribution (1 for an empty pool). Throws
/// InsufficientDataError when sampling without replacement from a window
/// with fewer than `sample_size` tweets.
DiversitySampleSet subsample_diversity(const CorpusWindow &window, DiversityKind kind,
                                       std::size_t sample_size, std::size_t n_draws,
                                       std::uint64_t seed, const StopList &stoplist,
                                       const DiversityOptions &options = {});

struct BoxplotStats {
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double notch_lo = 0.0;
    double notch_hi = 0.0;
    double whisker_lo = 0.0;
    double whisker_hi = 0.0;
    std::vector<double> outliers; // ascending
};

/// Linear-interpolation quantile (the "type 7" rule) of sorted data.
double quantile_sorted(std::span<const double> sorted, double q);

/// Quartiles by linear interpolation, notches at median +- 1.57 IQR/sqrt(n),
/// whiskers at the furthest points within 1.5 IQR of the box. Needs at
/// least 5 samples.
BoxplotStats boxplot_stats(std::span<const double> samples);

struct DiversityComparison {
    double mean_a = 0.0;
    double mean_b = 0.0;
    double mean_ratio = 0.0; // mean_a / mean_b
    BoxplotStats box_a;
    BoxplotStats box_b;
    bool notches_disjoint = false;
};

/// Throws std::invalid_argument when the kinds or periods differ.
DiversityComparison compare_diversity(const DiversitySampleSet &a, const DiversitySampleSet &b);

struct MonthPeriod {
    std::string label; // YYYY-MM
    Instant start;
    Instant end;
};

/// Calendar months (UTC) overlapping [start, end).
std::vector<MonthPeriod> monthly_windows(Instant start, Instant end);

/// `draw_index,effective_diversity`.
std::string diversity_samples_csv(const DiversitySampleSet &set);

std::string boxplot_csv_header();
std::string boxplot_csv_row(const std::string &anchor, const std::string &period,
                            DiversityKind kind, const BoxplotStats &stats);

} // namespace shiftkit
