#include "shiftkit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"
#include "shiftkit/error.hpp"
#include "shiftkit/numeric.hpp"
#include "shiftkit/text.hpp"

namespace shiftkit {

using nlohmann::json;

namespace {

bool is_blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(),
                       [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

std::optional<std::string> string_field(const json &record, const char *key, std::string &why) {
    auto it = record.find(key);
    if (it == record.end()) {
        why = std::string("missing field '") + key + "'";
        return std::nullopt;
    }
    if (it->is_string())
        return it->get<std::string>();
    if (it->is_number_integer())
        return it->dump();
    why = std::string("field '") + key + "' is not a string";
    return std::nullopt;
}

std::optional<Tweet> parse_record(std::string_view line, std::string &why) {
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded()) {
        why = "not valid JSON";
        return std::nullopt;
    }
    if (!record.is_object()) {
        why = "record is not a JSON object";
        return std::nullopt;
    }
    auto id = string_field(record, "id", why);
    if (!id)
        return std::nullopt;
    if (id->empty()) {
        why = "empty id";
        return std::nullopt;
    }
    auto created = string_field(record, "created_at", why);
    if (!created)
        return std::nullopt;
    auto ts = parse_iso8601(*created);
    if (!ts) {
        why = "unparseable created_at '" + *created + "'";
        return std::nullopt;
    }
    auto user = string_field(record, "user_id", why);
    if (!user)
        return std::nullopt;
    auto it = record.find("text");
    if (it == record.end()) {
        why = "missing field 'text'";
        return std::nullopt;
    }
    if (!it->is_string()) {
        why = "field 'text' is not a string";
        return std::nullopt;
    }
    return Tweet{std::move(*id), *ts, std::move(*user), it->get<std::string>()};
}

// Scans lowercased code points; shared by extract_hashtags and tokenize.
std::size_t word_run_end(const std::u32string &s, std::size_t i) {
    while (i < s.size() && text::is_word(s[i]))
        ++i;
    return i;
}

bool starts_with_at(const std::u32string &s, std::size_t i, std::u32string_view prefix) {
    return s.compare(i, prefix.size(), prefix) == 0;
}

} // namespace

ParseResult parse_tweet_stream(std::istream &in, std::string source) {
    if (!in)
        throw IoError("cannot read tweet stream" + (source.empty() ? "" : " " + source));
    ParseResult result;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_blank(line))
            continue;
        std::string why;
        auto tweet = parse_record(line, why);
        if (!tweet) {
            result.rejected.push_back({source, lineno, why});
            continue;
        }
        if (!seen.insert(tweet->id).second) {
            result.rejected.push_back({source, lineno, "duplicate id '" + tweet->id + "'"});
            continue;
        }
        result.tweets.push_back(std::move(*tweet));
    }
    if (in.bad())
        throw IoError("I/O error while reading tweet stream" + (source.empty() ? "" : " " + source));
    return result;
}

ParseResult parse_tweet_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    return parse_tweet_stream(in, path.string());
}

ParseResult parse_tweet_files(std::span<const std::filesystem::path> paths) {
    std::vector<std::future<ParseResult>> shards;
    shards.reserve(paths.size());
    for (const auto &p : paths)
        shards.push_back(std::async(std::launch::async, [p] { return parse_tweet_file(p); }));

    ParseResult merged;
    std::unordered_set<std::string> seen;
    for (std::size_t s = 0; s < shards.size(); ++s) {
        auto shard = shards[s].get();
        // Shard-local line numbers are lost once merged; rejections for
        // cross-shard duplicates cannot point at a line, so use 0.
        for (auto &t : shard.tweets) {
            if (!seen.insert(t.id).second) {
                merged.rejected.push_back(
                    {paths[s].string(), 0, "duplicate id '" + t.id + "' across shards"});
                continue;
            }
            merged.tweets.push_back(std::move(t));
        }
        for (auto &r : shard.rejected)
            merged.rejected.push_back(std::move(r));
    }
    return merged;
}

std::vector<std::string> extract_hashtags(std::string_view input) {
    std::vector<std::string> tags;
    auto s = text::to_lower(text::decode_utf8(input));
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] == U'#') {
            auto end = word_run_end(s, i + 1);
            if (end > i + 1) {
                tags.push_back(text::encode_utf8(std::u32string_view(s).substr(i + 1, end - i - 1)));
                i = end;
                continue;
            }
        }
        ++i;
    }
    return tags;
}

StopList::StopList(std::set<std::string> entries) {
    for (const auto &e : entries) {
        auto lowered = text::to_lower_utf8(e);
        if (!lowered.empty())
            entries_.insert(std::move(lowered));
    }
}

StopList StopList::parse(std::istream &in) {
    std::set<std::string> entries;
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        auto last = line.find_last_not_of(" \t\r");
        entries.insert(line.substr(first, last - first + 1));
    }
    return StopList(std::move(entries));
}

StopList StopList::load(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open stoplist " + path.string());
    return parse(in);
}

bool StopList::contains(std::string_view token) const { return entries_.find(token) != entries_.end(); }

std::vector<std::string> tokenize(std::string_view input, const AnchorSet &anchors,
                                  const StopList &stoplist) {
    static constexpr std::u32string_view kHttp = U"http://";
    static constexpr std::u32string_view kHttps = U"https://";
    static constexpr std::u32string_view kWww = U"www.";

    std::vector<std::string> tokens;
    auto s = text::to_lower(text::decode_utf8(input));
    const auto n = s.size();

    auto emit_word = [&](std::size_t b, std::size_t e) {
        auto tok = text::encode_utf8(std::u32string_view(s).substr(b, e - b));
        if (tok == "rt" || stoplist.contains(tok))
            return;
        tokens.push_back(std::move(tok));
    };

    std::size_t i = 0;
    while (i < n) {
        char32_t c = s[i];
        bool at_boundary = i == 0 || !text::is_word(s[i - 1]);
        if (at_boundary && (starts_with_at(s, i, kHttp) || starts_with_at(s, i, kHttps) ||
                            starts_with_at(s, i, kWww))) {
            while (i < n && !text::is_space(s[i]))
                ++i;
            continue;
        }
        if (c == U'@') {
            i = word_run_end(s, i + 1);
            continue;
        }
        if (c == U'#') {
            auto end = word_run_end(s, i + 1);
            if (end > i + 1) {
                auto body = text::encode_utf8(std::u32string_view(s).substr(i + 1, end - i - 1));
                if (!anchors.contains(body)) {
                    auto tok = "#" + body;
                    if (!stoplist.contains(tok))
                        tokens.push_back(std::move(tok));
                }
                i = end;
            } else {
                ++i;
            }
            continue;
        }
        if (text::is_word(c)) {
            auto end = word_run_end(s, i);
            emit_word(i, end);
            i = end;
            continue;
        }
        ++i;
    }
    return tokens;
}

bool has_hashtag(const Tweet &tweet, std::string_view tag) {
    auto tags = extract_hashtags(tweet.text);
    return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

std::pair<std::vector<Tweet>, std::vector<Tweet>>
partition_by_anchor(std::span<const Tweet> tweets, std::string_view anchor_a,
                    std::string_view anchor_b) {
    if (anchor_a == anchor_b)
        throw std::invalid_argument("partition_by_anchor: anchors must be distinct");
    std::pair<std::vector<Tweet>, std::vector<Tweet>> out;
    for (const auto &t : tweets) {
        auto tags = extract_hashtags(t.text);
        bool in_a = std::find(tags.begin(), tags.end(), anchor_a) != tags.end();
        bool in_b = std::find(tags.begin(), tags.end(), anchor_b) != tags.end();
        if (in_a)
            out.first.push_back(t);
        if (in_b)
            out.second.push_back(t);
    }
    return out;
}

CorpusWindow filter_window(std::span<const Tweet> tweets, std::string_view anchor, Instant start,
                           Instant end) {
    if (!(start < end))
        throw std::invalid_argument("invalid interval: start " + format_iso8601(start) +
                                    " is not before end " + format_iso8601(end));
    CorpusWindow w{std::string(anchor), start, end, {}};
    for (const auto &t : tweets) {
        if (t.timestamp < start || !(t.timestamp < end))
            continue;
        if (!has_hashtag(t, anchor))
            continue;
        w.tweets.push_back(t);
    }
    return w;
}

std::vector<TimeBin> frequency_timeseries(std::span<const Tweet> tweets, std::chrono::seconds bin) {
    if (bin.count() <= 0)
        throw std::invalid_argument("frequency_timeseries: bin width must be positive");
    if (tweets.empty())
        return {};
    std::map<Instant, std::uint64_t> counts;
    for (const auto &t : tweets)
        ++counts[align_down(t.timestamp, bin)];
    std::vector<TimeBin> series;
    auto first = counts.begin()->first;
    auto last = counts.rbegin()->first;
    for (auto b = first; b <= last; b += bin) {
        auto it = counts.find(b);
        series.push_back({b, it == counts.end() ? 0 : it->second});
    }
    return series;
}

std::string timeseries_csv(std::span<const TimeBin> series) {
    std::string out = "bin_start,count\n";
    for (const auto &b : series) {
        out += format_iso8601(b.start);
        out += ',';
        out += std::to_string(b.count);
        out += '\n';
    }
    return out;
}

TokenBag::TokenBag(std::span<const std::string> tokens) { add_all(tokens); }

void TokenBag::add(std::string_view token, std::uint64_t count) {
    if (token.empty())
        throw std::invalid_argument("TokenBag: empty token");
    if (count == 0)
        return;
    auto it = counts_.find(token);
    if (it == counts_.end())
        counts_.emplace(std::string(token), count);
    else
        it->second += count;
    total_ += count;
}

void TokenBag::add_all(std::span<const std::string> tokens) {
    for (const auto &t : tokens)
        add(t);
}

TokenDistribution TokenDistribution::from_probabilities(const std::map<std::string, double> &probs) {
    TokenDistribution d;
    CompensatedSum sum;
    for (const auto &[tok, p] : probs) {
        if (tok.empty())
            throw std::invalid_argument("TokenDistribution: empty token");
        if (!(p > 0.0) || !std::isfinite(p))
            throw std::invalid_argument("TokenDistribution: probability of '" + tok +
                                        "' must be positive");
        sum += p;
        d.entries_.push_back({tok, p, 0});
    }
    if (d.entries_.empty() || std::abs(sum.value() - 1.0) > 1e-12)
        throw std::invalid_argument("TokenDistribution: probabilities must sum to 1");
    return d;
}

TokenDistribution TokenDistribution::from_weights(const std::map<std::string, double> &weights) {
    CompensatedSum sum;
    for (const auto &[tok, w] : weights) {
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("TokenDistribution: weight of '" + tok + "' must be positive");
        sum += w;
    }
    if (weights.empty())
        throw EmptyCorpusError("TokenDistribution: no weights");
    TokenDistribution d;
    for (const auto &[tok, w] : weights) {
        if (tok.empty())
            throw std::invalid_argument("TokenDistribution: empty token");
        d.entries_.push_back({tok, w / sum.value(), 0});
    }
    return d;
}

double TokenDistribution::prob(std::string_view token) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), token,
                               [](const Entry &e, std::string_view t) { return e.token < t; });
    return (it != entries_.end() && it->token == token) ? it->prob : 0.0;
}

bool TokenDistribution::contains(std::string_view token) const { return prob(token) > 0.0; }

TokenDistribution build_distribution(const TokenBag &bag) {
    if (bag.empty())
        throw EmptyCorpusError("cannot build a distribution from an empty token bag");
    TokenDistribution d;
    d.total_tokens_ = bag.total();
    const double total = static_cast<double>(bag.total());
    d.entries_.reserve(bag.counts().size());
    for (const auto &[tok, c] : bag.counts())
        d.entries_.push_back({tok, static_cast<double>(c) / total, c});
    return d;
}

} // namespace shiftkit
