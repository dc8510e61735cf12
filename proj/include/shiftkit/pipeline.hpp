#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shiftkit/config.hpp"

namespace shiftkit {

enum class Stage { Timeseries, Shift, Network, Diversity };

const char *stage_name(Stage s);
std::optional<Stage> parse_stage(std::string_view name);
/// Comma-separated stage names; throws ConfigError on an unknown name.
std::set<Stage> parse_stage_list(std::string_view list);
std::set<Stage> all_stages();

struct Artifact {
    std::string path; // relative to the output directory, '/'-separated
    std::string sha256;
    std::size_t bytes = 0;
};

struct StageFailure {
    std::string stage;
    std::string window;
    std::string anchor;
    std::string message;
};

struct RunResult {
    std::vector<Artifact> artifacts; // sorted by path
    std::vector<RejectedRecord> rejected;
    std::optional<StageFailure> failure;
    int exit_code = 0; // 0 ok, 2 data error, 3 internal error
};

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// Runs the requested stages and writes their artifacts plus
/// `manifest.json` (always last) into `config.output_dir`. A failing stage
/// stops the run; artifacts already written stay and the manifest is marked
/// incomplete. Expects a configuration that passed validation.
RunResult run_pipeline(const RunConfig &config, const std::set<Stage> &stages);

/// Manifest document as written to disk.
std::string manifest_json(const RunConfig &config, const std::set<Stage> &stages,
                          const RunResult &result);

} // namespace shiftkit
