// shiftkit: command-line driver for the corpus divergence pipeline.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "shiftkit/config.hpp"
#include "shiftkit/error.hpp"
#include "shiftkit/pipeline.hpp"

namespace fs = std::filesystem;
using namespace shiftkit;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct Options {
    std::string config;
    std::string out;
    std::string stages;
    std::optional<std::uint64_t> seed;
};

void print_findings(const std::vector<Finding> &findings) {
    for (const auto &f : findings)
        std::cerr << "  " << f.field << ": " << f.message << "\n";
}

// Loads, applies overrides, validates. Returns nullopt after printing on failure.
std::optional<RunConfig> prepare(const Options &opt) {
    auto loaded = load_config(opt.config);
    if (!loaded.ok()) {
        std::cerr << "shiftkit: " << opt.config << ": configuration errors\n";
        print_findings(loaded.findings);
        return std::nullopt;
    }
    auto cfg = std::move(loaded.config);
    if (!opt.out.empty())
        cfg.output_dir = fs::absolute(opt.out);
    if (opt.seed)
        cfg.seed = *opt.seed;
    auto findings = validate_config(cfg);
    if (!findings.empty()) {
        std::cerr << "shiftkit: " << opt.config << ": " << findings.size() << " finding(s)\n";
        print_findings(findings);
        return std::nullopt;
    }
    return cfg;
}

int cmd_validate(const Options &opt) {
    auto cfg = prepare(opt);
    if (!cfg)
        return kUsage;
    std::cout << opt.config << ": ok\n";
    return kOk;
}

int cmd_run(const Options &opt, const std::set<Stage> &stages) {
    auto cfg = prepare(opt);
    if (!cfg)
        return kUsage;
    auto result = run_pipeline(*cfg, stages);
    for (const auto &r : result.rejected)
        std::cerr << "shiftkit: skipped " << r.source << ":" << r.line << ": " << r.reason << "\n";
    if (result.failure) {
        const auto &f = *result.failure;
        std::cerr << "shiftkit: stage " << f.stage << " failed";
        if (!f.window.empty())
            std::cerr << " (window " << f.window << ")";
        if (!f.anchor.empty())
            std::cerr << " (anchor #" << f.anchor << ")";
        std::cerr << ": " << f.message << "\n";
    }
    std::cout << "wrote " << result.artifacts.size() << " artifact(s) to "
              << resolve(*cfg, cfg->output_dir).string() << "\n";
    return result.exit_code;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Two-corpus divergence analysis: word shifts, hashtag topic networks, "
                 "effective diversity"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", opt.config, "configuration file")->required();
        sub->add_option("--out", opt.out, "output directory (overrides output_dir)");
        sub->add_option("--seed", opt.seed, "random seed (overrides seed)");
    };

    auto *validate = app.add_subcommand("validate", "check a configuration file");
    add_common(validate);
    auto *run = app.add_subcommand("run", "run pipeline stages");
    add_common(run);
    run->add_option("--stages", opt.stages, "comma-separated subset of "
                                            "timeseries,shift,network,diversity");

    std::vector<std::pair<CLI::App *, Stage>> single;
    for (auto s : all_stages()) {
        auto *sub = app.add_subcommand(stage_name(s), std::string("run only the ") +
                                                          stage_name(s) + " stage");
        add_common(sub);
        single.emplace_back(sub, s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (validate->parsed())
            return cmd_validate(opt);
        if (run->parsed()) {
            auto stages = opt.stages.empty() ? all_stages() : parse_stage_list(opt.stages);
            return cmd_run(opt, stages);
        }
        for (auto &[sub, stage] : single)
            if (sub->parsed())
                return cmd_run(opt, {stage});
    } catch (const ConfigError &e) {
        std::cerr << "shiftkit: " << e.what() << "\n";
        return kUsage;
    } catch (const DataError &e) {
        std::cerr << "shiftkit: " << e.what() << "\n";
        return kData;
    } catch (const IoError &e) {
        std::cerr << "shiftkit: " << e.what() << "\n";
        return kData;
    } catch (const std::exception &e) {
        std::cerr << "shiftkit: internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}
