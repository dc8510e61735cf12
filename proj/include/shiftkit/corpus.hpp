#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shiftkit/time.hpp"

namespace shiftkit {

struct Tweet {
    std::string id;
    Instant timestamp;
    std::string user_id;
    std::string text;

    bool operator==(const Tweet &) const = default;
};

struct RejectedRecord {
    std::string source; // file path, empty for anonymous streams
    std::size_t line;   // 1-based
    std::string reason;
};

struct ParseResult {
    std::vector<Tweet> tweets;
    std::vector<RejectedRecord> rejected;
};

/// Reads newline-delimited JSON records with fields `id`, `created_at`,
/// `user_id` and `text`. Malformed lines, bad timestamps and duplicate ids
/// are reported in `rejected`; blank lines are skipped. Throws IoError if
/// the stream is unreadable.
ParseResult parse_tweet_stream(std::istream &in, std::string source = {});
ParseResult parse_tweet_file(const std::filesystem::path &path);

/// Parses shards concurrently and merges them in the given order. Ids must
/// be unique across all shards.
ParseResult parse_tweet_files(std::span<const std::filesystem::path> paths);

/// Lowercased hashtag bodies (without '#') in occurrence order, duplicates
/// kept.
std::vector<std::string> extract_hashtags(std::string_view text);

class StopList {
public:
    StopList() = default;
    explicit StopList(std::set<std::string> entries);

    /// One token per line; lines whose first non-blank character is '#'
    /// are comments.
    static StopList parse(std::istream &in);
    static StopList load(const std::filesystem::path &path);

    bool contains(std::string_view token) const;
    const std::set<std::string, std::less<>> &entries() const { return entries_; }

private:
    std::set<std::string, std::less<>> entries_;
};

using AnchorSet = std::set<std::string, std::less<>>;

/// Lowercases and splits `text`, dropping @-handles, URLs, the retweet
/// marker "rt", punctuation, stop words and any hashtag in `anchors`.
/// Remaining hashtags are kept as "#tag" tokens.
std::vector<std::string> tokenize(std::string_view text, const AnchorSet &anchors,
                                  const StopList &stoplist);

inline bool is_hashtag_token(std::string_view token) {
    return token.size() > 1 && token.front() == '#';
}

/// Tweets whose hashtags include `anchor_a` go to the first corpus, `anchor_b`
/// to the second; tweets carrying both land in both.
std::pair<std::vector<Tweet>, std::vector<Tweet>>
partition_by_anchor(std::span<const Tweet> tweets, std::string_view anchor_a,
                    std::string_view anchor_b);

bool has_hashtag(const Tweet &tweet, std::string_view tag);

struct CorpusWindow {
    std::string anchor;
    Instant start; // inclusive
    Instant end;   // exclusive
    std::vector<Tweet> tweets;
};

/// Keeps tweets with start <= timestamp < end that carry `anchor`, in input
/// order. Throws std::invalid_argument when start >= end.
CorpusWindow filter_window(std::span<const Tweet> tweets, std::string_view anchor, Instant start,
                           Instant end);

struct TimeBin {
    Instant start;
    std::uint64_t count;

    bool operator==(const TimeBin &) const = default;
};

/// Tweet counts per aligned bin, zero-filled between the first and last
/// occupied bins.
std::vector<TimeBin> frequency_timeseries(std::span<const Tweet> tweets, std::chrono::seconds bin);

/// CSV with header `bin_start,count`.
std::string timeseries_csv(std::span<const TimeBin> series);

class TokenBag {
public:
    TokenBag() = default;
    explicit TokenBag(std::span<const std::string> tokens);

    void add(std::string_view token, std::uint64_t count = 1);
    void add_all(std::span<const std::string> tokens);

    const std::map<std::string, std::uint64_t, std::less<>> &counts() const { return counts_; }
    std::uint64_t total() const { return total_; }
    bool empty() const { return total_ == 0; }

private:
    std::map<std::string, std::uint64_t, std::less<>> counts_;
    std::uint64_t total_ = 0;
};

/// Normalized token distribution with strictly positive probabilities,
/// stored sorted by token.
class TokenDistribution {
public:
    struct Entry {
        std::string token;
        double prob;
        std::uint64_t count; // 0 when built from probabilities
    };

    TokenDistribution() = default;

    /// Validates positivity and that the probabilities sum to 1 within 1e-12.
    static TokenDistribution from_probabilities(const std::map<std::string, double> &probs);
    /// Normalizes positive weights.
    static TokenDistribution from_weights(const std::map<std::string, double> &weights);

    std::span<const Entry> entries() const { return entries_; }
    std::size_t support_size() const { return entries_.size(); }
    std::uint64_t total_tokens() const { return total_tokens_; }
    double prob(std::string_view token) const;
    bool contains(std::string_view token) const;

private:
    friend TokenDistribution build_distribution(const TokenBag &bag);

    std::vector<Entry> entries_;
    std::uint64_t total_tokens_ = 0;
};

/// p_i = count_i / total. Throws EmptyCorpusError on an empty bag.
TokenDistribution build_distribution(const TokenBag &bag);

} // namespace shiftkit
