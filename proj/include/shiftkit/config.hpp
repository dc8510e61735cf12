#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "shiftkit/diversity.hpp"
#include "shiftkit/graphalgs.hpp"
#include "shiftkit/time.hpp"
#include "shiftkit/wordshift.hpp"

namespace shiftkit {

struct WindowSpec {
    std::string label;
    Instant start;
    Instant end;
};

struct NetworkSettings {
    double alpha = 0.03;
    std::vector<double> sweep{0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.10};
    PageRankParams pagerank;
    std::size_t top_k = 10;
    double size_scale = 1.0;
};

struct DiversitySettings {
    std::size_t sample_size = 2000;
    std::size_t n_draws = 1000;
    std::optional<Instant> start; // defaults to the span of the data
    std::optional<Instant> end;
    DiversityOptions options;
};

struct RunConfig {
    std::filesystem::path base_dir; // relative paths resolve against this
    std::vector<std::filesystem::path> inputs;
    std::optional<std::filesystem::path> stoplist;
    std::filesystem::path output_dir = "out";
    std::string anchor_a;
    std::string anchor_b;
    std::uint64_t seed = 0;
    std::vector<WindowSpec> windows;
    std::chrono::seconds timeseries_bin{86400};
    ShiftConfig shift;
    Direction shift_left = Direction::P;
    NetworkSettings network;
    DiversitySettings diversity;
};

struct Finding {
    std::string field; // e.g. "network.alpha", "window.nov24.start"
    std::string message;
};

struct LoadedConfig {
    RunConfig config;
    std::vector<Finding> findings;
    bool ok() const { return findings.empty(); }
};

/// Parses the INI-style configuration text. Every problem is reported as a
/// finding rather than thrown, so callers can list all of them at once.
/// `base_dir` anchors relative paths.
LoadedConfig parse_config(std::string_view text, const std::filesystem::path &base_dir);

/// Reads and parses a configuration file; a missing file is a finding on
/// field "config".
LoadedConfig load_config(const std::filesystem::path &path);

/// Range and path checks on an already-parsed configuration.
std::vector<Finding> validate_config(const RunConfig &config);

std::filesystem::path resolve(const RunConfig &config, const std::filesystem::path &p);

} // namespace shiftkit
