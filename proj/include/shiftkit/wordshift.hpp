#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shiftkit/corpus.hpp"
#include "shiftkit/infotheory.hpp"

namespace shiftkit {

/// How the mixture weights are derived from the two corpora.
enum class WeightMode { Tokens, Tweets, Equal };

struct ShiftConfig {
    std::size_t top_k = 50; // 0 keeps every nonzero entry
    double threshold_bits = 3.0;
    WeightMode weights = WeightMode::Tokens;
    std::uint64_t min_occurrences = 1;
    /// A token is marked as dominated when more than this share of the
    /// direction-side tweets containing it have the same text.
    double dominance_share = 0.5;
};

struct ShiftEntry {
    std::string token;
    double percent = 0.0;
    Direction direction = Direction::P;
    std::optional<double> diversity_p_bits;
    std::optional<double> diversity_q_bits;
    bool retweet_driven = false;
    bool single_text_dominated = false;

    /// Diversity of the corpus the token leans towards.
    double direction_diversity() const {
        return (direction == Direction::P ? diversity_p_bits : diversity_q_bits).value_or(0.0);
    }

    bool operator==(const ShiftEntry &) const = default;
};

struct WordShiftReport {
    std::string anchor_a; // corpus P
    std::string anchor_b; // corpus Q
    Instant window_start;
    Instant window_end;
    double total_jsd_bits = 0.0;
    JsdWeights weights = JsdWeights::equal();
    std::vector<ShiftEntry> entries;

    bool operator==(const WordShiftReport &) const = default;
};

inline bool is_retweet_driven(double direction_side_bits, double threshold_bits) {
    return direction_side_bits < threshold_bits;
}

/// Tokenizes both windows (dropping both anchors), computes the divergence
/// and per-word contributions, and ranks the nonzero contributions by
/// descending share with lexicographic tie-breaks. Throws EmptyCorpusError
/// naming the side whose tokens are empty.
WordShiftReport build_word_shift(const CorpusWindow &corpus_p, const CorpusWindow &corpus_q,
                                 const StopList &stoplist, const ShiftConfig &config = {});

/// Deterministic JSON document (schema in README).
std::string export_word_shift_json(const WordShiftReport &report);
/// Throws std::invalid_argument on schema violations.
WordShiftReport import_word_shift_json(std::string_view document);

struct SvgStyle {
    Direction left = Direction::P;
    double width = 720.0;
    double row_height = 18.0;
    double label_width = 140.0;
    /// Diversity at which the fill reaches its darkest shade.
    double ramp_max_bits = 12.0;
};

/// Lightness (percent) used for a bar with the given diversity; decreasing
/// in `bits` up to `ramp_max_bits`.
double shade_lightness(double bits, double ramp_max_bits);

std::string render_word_shift_svg(const WordShiftReport &report, const SvgStyle &style = {});

} // namespace shiftkit
