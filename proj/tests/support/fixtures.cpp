#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "shiftkit/rng.hpp"

namespace fixture {

Instant at(const char *iso) {
    auto t = shiftkit::parse_iso8601(iso);
    if (!t)
        throw std::invalid_argument(std::string("bad fixture time ") + iso);
    return *t;
}

namespace {

// Inverse-CDF sampling from a Zipf(1) law over `n` ranks.
class Zipf {
public:
    explicit Zipf(std::size_t n) : cdf_(n) {
        double acc = 0;
        for (std::size_t i = 0; i < n; ++i)
            cdf_[i] = acc += 1.0 / static_cast<double>(i + 1);
        for (auto &c : cdf_)
            c /= acc;
    }
    std::size_t draw(shiftkit::Rng &rng) const {
        double u = static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
        return static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
    }

private:
    std::vector<double> cdf_;
};

double uniform01(shiftkit::Rng &rng) { return static_cast<double>(rng.next() >> 11) * 0x1.0p-53; }

std::string background_word(std::size_t i) {
    // letters only so nothing collides with a planted word
    static const char *syll[] = {"ka", "lo", "mi", "ne", "ru", "sa", "to", "vi", "xe", "zu"};
    std::string w;
    do {
        w += syll[i % 10];
        i /= 10;
    } while (i);
    return w + "n";
}

} // namespace

PlantedCorpus make_planted_corpus(const PlantedSpec &spec) {
    PlantedCorpus c;
    c.start = spec.start;
    c.end = spec.end;
    shiftkit::Rng rng(spec.seed);
    Zipf words(400);
    const auto span = (spec.end - spec.start).count();

    auto stamp = [&] {
        return spec.start + std::chrono::seconds{static_cast<long>(rng.below(static_cast<std::uint64_t>(span)))};
    };
    auto make_side = [&](const std::string &anchor, const std::vector<std::string> &planted,
                         int tag_offset, char prefix) {
        for (std::size_t i = 0; i < spec.tweets_per_side; ++i) {
            std::string text;
            if (rng.below(4) == 0)
                text += "RT @user" + std::to_string(rng.below(500)) + ": ";
            const auto n_words = 6 + rng.below(6);
            for (std::size_t k = 0; k < n_words; ++k)
                text += background_word(words.draw(rng)) + " ";
            for (const auto &p : planted)
                if (uniform01(rng) < 0.3)
                    text += p + " ";
            if (rng.below(5) == 0)
                text += "https://t.co/x" + std::to_string(rng.below(1000)) + " ";
            text += "#" + anchor;
            // tags in pairs from a small pool so some edges are heavy
            const auto n_tags = rng.below(3);
            for (std::size_t k = 0; k < n_tags; ++k) {
                auto base = static_cast<int>(rng.below(6)) * 2 + tag_offset;
                text += " #tag" + std::to_string(base) + " #tag" + std::to_string(base + 1 + static_cast<int>(rng.below(2)));
            }
            Tweet t;
            t.id = prefix + std::to_string(i);
            t.timestamp = stamp();
            t.user_id = "u" + std::to_string(rng.below(3000));
            t.text = std::move(text);
            c.tweets.push_back(std::move(t));
        }
    };
    make_side(c.anchor_p, c.planted_p, 0, 'p');
    make_side(c.anchor_q, c.planted_q, 6, 'q');
    for (std::size_t i = 0; i < spec.hijack_copies; ++i) {
        Tweet t;
        t.id = "h" + std::to_string(i);
        t.timestamp = stamp();
        t.user_id = "u" + std::to_string(rng.below(3000));
        t.text = "RT @loudvoice: " + c.hijack + " echo chamber #" + c.anchor_q;
        c.tweets.push_back(std::move(t));
    }
    std::stable_sort(c.tweets.begin(), c.tweets.end(),
                     [](const Tweet &a, const Tweet &b) { return a.timestamp < b.timestamp; });
    return c;
}

std::vector<Tweet> uniform_hashtag_corpus(const std::string &anchor, std::size_t n_tags,
                                          std::size_t n_tweets, Instant start, std::uint64_t seed) {
    std::vector<std::size_t> tag(n_tweets);
    for (std::size_t i = 0; i < n_tweets; ++i)
        tag[i] = i % n_tags;
    shiftkit::Rng rng(seed);
    rng.shuffle(tag);
    std::vector<Tweet> out;
    out.reserve(n_tweets);
    for (std::size_t i = 0; i < n_tweets; ++i) {
        Tweet t;
        t.id = anchor + std::to_string(i);
        t.timestamp = start + std::chrono::minutes{static_cast<long>(i)};
        t.user_id = "u" + std::to_string(i % 97);
        t.text = "some words #" + anchor + " #topic" + std::to_string(tag[i]);
        out.push_back(std::move(t));
    }
    return out;
}

std::string to_ndjson(std::span<const Tweet> tweets) {
    std::string out;
    for (const auto &t : tweets) {
        nlohmann::ordered_json j{{"id", t.id},
                                 {"created_at", shiftkit::format_iso8601(t.timestamp)},
                                 {"user_id", t.user_id},
                                 {"text", t.text}};
        out += j.dump() + "\n";
    }
    return out;
}

void write_file(const std::filesystem::path &path, const std::string &content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path write_planted_project(const std::filesystem::path &dir,
                                            const PlantedSpec &spec) {
    auto corpus = make_planted_corpus(spec);
    // two shards so ingestion merges
    auto mid = corpus.tweets.begin() + static_cast<long>(corpus.tweets.size() / 2);
    write_file(dir / "data" / "part1.ndjson", to_ndjson({corpus.tweets.begin(), mid}));
    write_file(dir / "data" / "part2.ndjson", to_ndjson({mid, corpus.tweets.end()}));
    write_file(dir / "stop.txt", "# tiny stoplist\nthe\nand\n");
    const auto half = corpus.start + (corpus.end - corpus.start) / 2;
    std::string cfg;
    cfg += "inputs = data/part1.ndjson, data/part2.ndjson\n";
    cfg += "stoplist = stop.txt\n";
    cfg += "output_dir = out\n";
    cfg += "anchor_a = #" + corpus.anchor_p + "\n";
    cfg += "anchor_b = #" + corpus.anchor_q + "\n";
    cfg += "seed = 20150105\n\n";
    cfg += "[window.early]\nstart = " + shiftkit::format_iso8601(corpus.start) +
           "\nend = " + shiftkit::format_iso8601(half) + "\n\n";
    cfg += "[window.late]\nstart = " + shiftkit::format_iso8601(half) +
           "\nend = " + shiftkit::format_iso8601(corpus.end) + "\n\n";
    cfg += "[timeseries]\nbin = 1d\n\n";
    cfg += "[shift]\ntop_k = 30\n\n";
    cfg += "[network]\nalpha = 0.05\nsweep = 0.01, 0.03, 0.05, 0.1\n\n";
    cfg += "[diversity]\nsample_size = 200\nn_draws = 20\n";
    write_file(dir / "run.ini", cfg);
    return dir / "run.ini";
}

std::filesystem::path scratch_dir(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / ("shiftkit_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

shiftkit::WeightedGraph to_weighted(int n, const std::vector<std::tuple<int, int, std::uint64_t>> &edges) {
    shiftkit::WeightedGraph::Builder b;
    for (int i = 0; i < n; ++i)
        b.add_node("n" + std::to_string(i), 1);
    for (auto [u, v, w] : edges)
        b.add_edge("n" + std::to_string(u), "n" + std::to_string(v), w);
    return b.build();
}

} // namespace fixture
