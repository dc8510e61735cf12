#pragma once

// Synthetic corpora with known structure.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "shiftkit/corpus.hpp"
#include "shiftkit/hashnet.hpp"
#include "shiftkit/time.hpp"

namespace fixture {

using shiftkit::Instant;
using shiftkit::Tweet;

Instant at(const char *iso);

struct PlantedSpec {
    std::size_t tweets_per_side = 10000;
    std::size_t hijack_copies = 200;
    std::uint64_t seed = 7;
    Instant start = at("2015-01-05T00:00:00Z");
    Instant end = at("2015-01-12T00:00:00Z");
};

/// Two anchor corpora over one shared Zipf background vocabulary. Each side
/// gets two planted words used in 30% of its tweets; side Q also gets one
/// hijack word that only ever appears in a single tweet text repeated
/// `hijack_copies` times. Hashtags come from two overlapping pools so the
/// co-occurrence networks have structure.
struct PlantedCorpus {
    std::vector<Tweet> tweets; // both sides, time ordered
    std::string anchor_p = "protest";
    std::string anchor_q = "counter";
    std::vector<std::string> planted_p{"plantedalpha", "plantedbeta"};
    std::vector<std::string> planted_q{"plantedgamma", "planteddelta"};
    std::string hijack = "hijacked";
    Instant start;
    Instant end;
};

PlantedCorpus make_planted_corpus(const PlantedSpec &spec = {});

/// `n_tweets` tweets carrying the anchor plus exactly one tag, each of the
/// `n_tags` tags used equally often, in shuffled order.
std::vector<Tweet> uniform_hashtag_corpus(const std::string &anchor, std::size_t n_tags,
                                          std::size_t n_tweets, Instant start, std::uint64_t seed);

std::string to_ndjson(std::span<const Tweet> tweets);

void write_file(const std::filesystem::path &path, const std::string &content);
std::string read_file(const std::filesystem::path &path);

/// Writes the planted corpus as NDJSON plus a stoplist and a run
/// configuration with two windows into `dir`; returns the config path.
std::filesystem::path write_planted_project(const std::filesystem::path &dir,
                                            const PlantedSpec &spec = {.tweets_per_side = 2500,
                                                                       .hijack_copies = 60});

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string &name);

/// Labels "n0".."n9" so index order equals label order.
shiftkit::WeightedGraph to_weighted(int n, const std::vector<std::tuple<int, int, std::uint64_t>> &edges);

} // namespace fixture
