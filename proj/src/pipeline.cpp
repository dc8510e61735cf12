#include "shiftkit/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <future>
#include <map>

#include <openssl/evp.h>

#include "json.hpp"
#include "shiftkit/corpus.hpp"
#include "shiftkit/diversity.hpp"
#include "shiftkit/error.hpp"
#include "shiftkit/rng.hpp"
#include "shiftkit/topic.hpp"
#include "shiftkit/wordshift.hpp"

namespace shiftkit {

const char *stage_name(Stage s) {
    switch (s) {
    case Stage::Timeseries: return "timeseries";
    case Stage::Shift: return "shift";
    case Stage::Network: return "network";
    case Stage::Diversity: return "diversity";
    }
    return "unknown";
}

std::optional<Stage> parse_stage(std::string_view name) {
    for (auto s : all_stages())
        if (name == stage_name(s))
            return s;
    return std::nullopt;
}

std::set<Stage> all_stages() {
    return {Stage::Timeseries, Stage::Shift, Stage::Network, Stage::Diversity};
}

std::set<Stage> parse_stage_list(std::string_view list) {
    std::set<Stage> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        auto comma = list.find(',', start);
        auto item = list.substr(start, comma == std::string_view::npos ? list.npos : comma - start);
        while (!item.empty() && item.front() == ' ')
            item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ')
            item.remove_suffix(1);
        if (!item.empty()) {
            auto s = parse_stage(item);
            if (!s)
                throw ConfigError("unknown stage '" + std::string(item) +
                                  "' (expected timeseries, shift, network or diversity)");
            out.insert(*s);
        }
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    if (out.empty())
        throw ConfigError("no stages requested");
    return out;
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 computation failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

namespace {

struct PendingFile {
    std::string path;
    std::string content;
};

class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path root) : root_(std::move(root)) {}

    void write(const PendingFile &f) {
        write_atomic(root_ / f.path, f.content);
        artifacts_.push_back({f.path, sha256_hex(f.content), f.content.size()});
    }

    static void write_atomic(const std::filesystem::path &target, std::string_view content) {
        std::filesystem::create_directories(target.parent_path());
        auto tmp = target;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw IoError("cannot write " + tmp.string());
            out.write(content.data(), static_cast<std::streamsize>(content.size()));
            if (!out)
                throw IoError("short write to " + tmp.string());
        }
        std::filesystem::rename(tmp, target);
    }

    std::vector<Artifact> take() {
        std::sort(artifacts_.begin(), artifacts_.end(),
                  [](const Artifact &a, const Artifact &b) { return a.path < b.path; });
        return std::move(artifacts_);
    }

private:
    std::filesystem::path root_;
    std::vector<Artifact> artifacts_;
};

// A stage unit: produces files or throws; tagged for failure reporting.
struct Task {
    std::string window;
    std::string anchor;
    std::function<std::vector<PendingFile>()> run;
};

struct TaskError {
    std::string window;
    std::string anchor;
    std::string message;
    int exit_code;
};

int exit_code_for(const std::exception_ptr &ep, std::string &message) {
    try {
        std::rethrow_exception(ep);
    } catch (const DataError &e) {
        message = e.what();
        return 2;
    } catch (const IoError &e) {
        message = e.what();
        return 2;
    } catch (const ConvergenceError &e) {
        message = e.what();
        return 2;
    } catch (const std::exception &e) {
        message = e.what();
        return 3;
    } catch (...) {
        message = "unknown error";
        return 3;
    }
}

// Runs tasks concurrently, then writes their files in task order up to the
// first failure.
std::optional<TaskError> run_tasks(std::vector<Task> &tasks, ArtifactWriter &writer) {
    std::vector<std::future<std::vector<PendingFile>>> futures;
    futures.reserve(tasks.size());
    for (auto &t : tasks)
        futures.push_back(std::async(std::launch::async, t.run));
    std::optional<TaskError> failure;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        try {
            auto files = futures[i].get();
            if (!failure)
                for (const auto &f : files)
                    writer.write(f);
        } catch (...) {
            if (!failure) {
                std::string msg;
                int code = exit_code_for(std::current_exception(), msg);
                failure = TaskError{tasks[i].window, tasks[i].anchor, msg, code};
            }
        }
    }
    return failure;
}

std::string comparison_csv_header() {
    return "period,kind,anchor_a,anchor_b,mean_a,mean_b,mean_ratio,notches_disjoint\n";
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace

std::string manifest_json(const RunConfig &config, const std::set<Stage> &stages,
                          const RunResult &result) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["complete"] = !result.failure.has_value();
    doc["seed"] = config.seed;
    auto st = ordered_json::array();
    for (auto s : stages)
        st.push_back(stage_name(s));
    doc["stages"] = st;
    if (result.failure) {
        doc["failure"] = ordered_json{{"stage", result.failure->stage},
                                      {"window", result.failure->window},
                                      {"anchor", result.failure->anchor},
                                      {"message", result.failure->message}};
    }
    auto rej = ordered_json::array();
    for (const auto &r : result.rejected)
        rej.push_back(ordered_json{{"source", r.source}, {"line", r.line}, {"reason", r.reason}});
    doc["rejected_records"] = rej;
    auto arts = ordered_json::array();
    for (const auto &a : result.artifacts)
        arts.push_back(ordered_json{{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
    doc["artifacts"] = arts;
    return doc.dump(2) + "\n";
}

RunResult run_pipeline(const RunConfig &config, const std::set<Stage> &stages) {
    RunResult result;
    const auto out_dir = resolve(config, config.output_dir);
    ArtifactWriter writer(out_dir);

    auto finish = [&](std::optional<StageFailure> failure, int code) {
        result.failure = std::move(failure);
        result.exit_code = code;
        result.artifacts = writer.take();
        std::filesystem::create_directories(out_dir);
        ArtifactWriter::write_atomic(out_dir / "manifest.json", manifest_json(config, stages, result));
        return result;
    };

    // Ingest.
    StopList stoplist;
    std::vector<Tweet> tweets;
    try {
        if (config.stoplist)
            stoplist = StopList::load(resolve(config, *config.stoplist));
        std::vector<std::filesystem::path> paths;
        std::map<std::string, std::string> display;
        for (const auto &p : config.inputs) {
            auto full = resolve(config, p);
            display[full.string()] = p.generic_string();
            paths.push_back(full);
        }
        auto parsed = parse_tweet_files(paths);
        for (auto &r : parsed.rejected)
            if (auto it = display.find(r.source); it != display.end())
                r.source = it->second;
        result.rejected = std::move(parsed.rejected);
        tweets = std::move(parsed.tweets);
    } catch (...) {
        std::string msg;
        int code = exit_code_for(std::current_exception(), msg);
        return finish(StageFailure{"ingest", "", "", msg}, code);
    }

    auto [corpus_a, corpus_b] = partition_by_anchor(tweets, config.anchor_a, config.anchor_b);
    const std::vector<std::pair<std::string, const std::vector<Tweet> *>> corpora{
        {config.anchor_a, &corpus_a}, {config.anchor_b, &corpus_b}};

    auto fail_stage = [&](Stage s, const TaskError &e) {
        return finish(StageFailure{stage_name(s), e.window, e.anchor, e.message}, e.exit_code);
    };

    if (stages.contains(Stage::Timeseries)) {
        std::vector<Task> tasks;
        for (const auto &[anchor, corpus] : corpora) {
            tasks.push_back({"", anchor, [&config, anchor = anchor, corpus = corpus] {
                                 auto series = frequency_timeseries(*corpus, config.timeseries_bin);
                                 return std::vector<PendingFile>{
                                     {"timeseries/" + anchor + ".csv", timeseries_csv(series)}};
                             }});
        }
        if (auto err = run_tasks(tasks, writer))
            return fail_stage(Stage::Timeseries, *err);
    }

    if (stages.contains(Stage::Shift)) {
        std::vector<Task> tasks;
        for (const auto &w : config.windows) {
            tasks.push_back({w.label, "", [&, w] {
                                 auto wa = filter_window(corpus_a, config.anchor_a, w.start, w.end);
                                 auto wb = filter_window(corpus_b, config.anchor_b, w.start, w.end);
                                 auto report = build_word_shift(wa, wb, stoplist, config.shift);
                                 SvgStyle style;
                                 style.left = config.shift_left;
                                 return std::vector<PendingFile>{
                                     {"shift/" + w.label + ".json", export_word_shift_json(report)},
                                     {"shift/" + w.label + ".svg", render_word_shift_svg(report, style)}};
                             }});
        }
        if (auto err = run_tasks(tasks, writer))
            return fail_stage(Stage::Shift, *err);
    }

    if (stages.contains(Stage::Network)) {
        std::vector<Task> tasks;
        for (const auto &w : config.windows) {
            for (const auto &[anchor, corpus] : corpora) {
                tasks.push_back({w.label, anchor, [&config, w, anchor = anchor, corpus = corpus] {
                    auto window = filter_window(*corpus, anchor, w.start, w.end);
                    auto original = build_cooccurrence(window.tweets, AnchorSet{anchor});
                    TopicParams params;
                    params.alpha = config.network.alpha;
                    params.pagerank = config.network.pagerank;
                    params.size_scale = config.network.size_scale;
                    params.louvain_seed =
                        derive_seed(config.seed, "network/" + w.label + "/" + anchor);
                    auto net = build_topic_network(original, params);
                    auto stats = network_stats(original, net.graph);
                    auto sweep = alpha_sweep(original, config.network.sweep);
                    const auto stem = "network/" + w.label + "/" + anchor;
                    return std::vector<PendingFile>{
                        {stem + ".graphml", topic_graphml(net)},
                        {stem + "_edges.csv", edge_list_csv(net.graph)},
                        {stem + "_stats.csv", backbone_stats_csv(stats, config.network.alpha)},
                        {stem + "_centrality.csv",
                         centrality_csv(centrality_table(net, config.network.top_k))},
                        {stem + "_sweep.csv", alpha_sweep_csv(sweep)}};
                }});
            }
        }
        if (auto err = run_tasks(tasks, writer))
            return fail_stage(Stage::Network, *err);
    }

    if (stages.contains(Stage::Diversity)) {
        Instant span_start = Instant::max(), span_end = Instant::min();
        for (const auto *c : {&corpus_a, &corpus_b}) {
            for (const auto &t : *c) {
                span_start = std::min(span_start, t.timestamp);
                span_end = std::max(span_end, t.timestamp + std::chrono::seconds{1});
            }
        }
        if (config.diversity.start)
            span_start = *config.diversity.start;
        if (config.diversity.end)
            span_end = *config.diversity.end;
        auto months = monthly_windows(span_start, span_end);

        struct Slot {
            MonthPeriod month;
            DiversityKind kind;
        };
        std::vector<Slot> slots;
        for (const auto &m : months)
            for (auto kind : {DiversityKind::Lexical, DiversityKind::Hashtag})
                slots.push_back({m, kind});

        // Sample sets are kept for the summary files; index = slot * 2 + anchor.
        std::vector<DiversitySampleSet> sets(slots.size() * 2);
        std::vector<Task> tasks;
        for (std::size_t s = 0; s < slots.size(); ++s) {
            for (std::size_t a = 0; a < 2; ++a) {
                const auto &anchor = corpora[a].first;
                const auto *corpus = corpora[a].second;
                tasks.push_back({slots[s].month.label, anchor, [&, s, a, anchor, corpus] {
                    const auto &slot = slots[s];
                    auto window = filter_window(*corpus, anchor, slot.month.start, slot.month.end);
                    auto options = config.diversity.options;
                    options.anchors.insert(config.anchor_a);
                    options.anchors.insert(config.anchor_b);
                    auto seed = derive_seed(config.seed, "diversity/" + slot.month.label + "/" +
                                                             anchor + "/" +
                                                             diversity_kind_name(slot.kind));
                    sets[s * 2 + a] = subsample_diversity(window, slot.kind,
                                                          config.diversity.sample_size,
                                                          config.diversity.n_draws, seed, stoplist,
                                                          options);
                    return std::vector<PendingFile>{
                        {"diversity/" + anchor + "/" + slot.month.label + "_" +
                             diversity_kind_name(slot.kind) + ".csv",
                         diversity_samples_csv(sets[s * 2 + a])}};
                }});
            }
        }
        if (auto err = run_tasks(tasks, writer))
            return fail_stage(Stage::Diversity, *err);

        std::string boxes = boxplot_csv_header();
        std::string comparison = comparison_csv_header();
        for (std::size_t s = 0; s < slots.size(); ++s) {
            const auto &sa = sets[s * 2];
            const auto &sb = sets[s * 2 + 1];
            auto cmp = compare_diversity(sa, sb);
            boxes += boxplot_csv_row(config.anchor_a, slots[s].month.label, slots[s].kind, cmp.box_a);
            boxes += boxplot_csv_row(config.anchor_b, slots[s].month.label, slots[s].kind, cmp.box_b);
            comparison += slots[s].month.label + "," + diversity_kind_name(slots[s].kind) + "," +
                          config.anchor_a + "," + config.anchor_b + "," + fmt6(cmp.mean_a) + "," +
                          fmt6(cmp.mean_b) + "," + fmt6(cmp.mean_ratio) + "," +
                          (cmp.notches_disjoint ? "true" : "false") + "\n";
        }
        writer.write({"diversity/boxplots.csv", boxes});
        writer.write({"diversity/comparison.csv", comparison});
    }

    return finish(std::nullopt, 0);
}

} // namespace shiftkit
