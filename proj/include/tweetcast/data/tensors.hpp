#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/core/matrix.hpp"
#include "tweetcast/data/calendar.hpp"
#include "tweetcast/io/csv.hpp"

namespace tweetcast {

constexpr int kBinSeconds = 900;  // 15-minute grid everywhere

/// Network-wide traffic channels on a uniform 15-minute grid.
/// Each channel is a (steps x segments) matrix; row t is the network
/// snapshot at start_epoch + t * 900s.
struct TrafficTensor {
    std::vector<long> segment_ids;  // sorted ascending
    std::int64_t start_epoch = 0;
    Matrix tps;     // in [0, 1]
    Matrix volume;  // vehicles per interval, >= 0
    Matrix speed;   // >= 0

    std::size_t segments() const { return segment_ids.size(); }
    std::size_t steps() const { return tps.rows; }
    std::int64_t timestamp(std::size_t t) const {
        return start_epoch + static_cast<std::int64_t>(t) * kBinSeconds;
    }

    void validate() const {
        if (segment_ids.empty() || steps() == 0)
            throw ContractError("TrafficTensor: empty tensor");
        if (!std::is_sorted(segment_ids.begin(), segment_ids.end()))
            throw ContractError("TrafficTensor: segment ids must be sorted");
        if (tps.cols != segments() || !tps.same_shape(volume) || !tps.same_shape(speed))
            throw ShapeError("TrafficTensor: channel shapes disagree");
        for (double v : tps.data)
            if (!(v >= 0.0 && v <= 1.0))
                throw ContractError("TrafficTensor: tps outside [0,1]");
    }
};

/// Per-segment tweet feature channels on the same grid as the traffic.
struct TweetFeatureTensor {
    std::vector<long> segment_ids;
    std::int64_t start_epoch = 0;
    Matrix term_freq;
    Matrix accident;  // nonnegative integer counts
    Matrix culture;   // nonnegative integer counts

    std::size_t segments() const { return segment_ids.size(); }
    std::size_t steps() const { return term_freq.rows; }

    void validate() const {
        if (!term_freq.same_shape(accident) || !term_freq.same_shape(culture))
            throw ShapeError("TweetFeatureTensor: channel shapes disagree");
        for (double v : accident.data)
            if (v < 0.0 || v != std::floor(v))
                throw ContractError("TweetFeatureTensor: accident counts must be nonnegative integers");
        for (double v : culture.data)
            if (v < 0.0 || v != std::floor(v))
                throw ContractError("TweetFeatureTensor: culture counts must be nonnegative integers");
    }

    /// Both tensors must describe the same segments and timestamps.
    void check_aligned(const TrafficTensor& traffic) const {
        if (segment_ids != traffic.segment_ids)
            throw AlignmentError("tweet features and traffic disagree on segments");
        if (start_epoch != traffic.start_epoch || steps() != traffic.steps())
            throw AlignmentError("tweet features and traffic disagree on the time grid");
    }
};

inline std::string traffic_csv_header() { return "segment_id,bin_start_iso8601,tps,volume,speed"; }

inline std::string to_csv(const TrafficTensor& t) {
    std::ostringstream out;
    out << traffic_csv_header() << "\n";
    for (std::size_t step = 0; step < t.steps(); ++step) {
        const std::string ts = iso8601_from_epoch(t.timestamp(step));
        for (std::size_t m = 0; m < t.segments(); ++m) {
            out << t.segment_ids[m] << ',' << ts << ',' << format_double(t.tps.at(step, m)) << ','
                << format_double(t.volume.at(step, m)) << ','
                << format_double(t.speed.at(step, m)) << "\n";
        }
    }
    return out.str();
}

inline TrafficTensor traffic_from_csv(const std::string& path) {
    const auto rows = read_csv(path, traffic_csv_header());
    if (rows.empty()) throw ParseError(path + ": no data rows");
    std::map<long, std::size_t> seg_index;
    std::map<std::int64_t, std::size_t> ts_index;
    for (const auto& r : rows) {
        if (r.size() != 5) throw ParseError(path + ": expected 5 fields per row");
        seg_index.emplace(parse_long(r[0], path), 0);
        ts_index.emplace(epoch_from_iso8601(r[1]), 0);
    }
    TrafficTensor t;
    for (auto& [id, idx] : seg_index) {
        idx = t.segment_ids.size();
        t.segment_ids.push_back(id);
    }
    std::size_t k = 0;
    std::int64_t prev = 0;
    for (auto& [ts, idx] : ts_index) {
        if (k > 0 && ts - prev != kBinSeconds)
            throw AlignmentError(path + ": timestamps are not a uniform 15-minute grid");
        prev = ts;
        idx = k++;
    }
    t.start_epoch = ts_index.begin()->first;
    const std::size_t steps = ts_index.size();
    const std::size_t m = t.segment_ids.size();
    t.tps = Matrix(steps, m, std::nan(""));
    t.volume = Matrix(steps, m);
    t.speed = Matrix(steps, m);
    for (const auto& r : rows) {
        const std::size_t col = seg_index.at(parse_long(r[0], path));
        const std::size_t row = ts_index.at(epoch_from_iso8601(r[1]));
        t.tps.at(row, col) = parse_double(r[2], path);
        t.volume.at(row, col) = parse_double(r[3], path);
        t.speed.at(row, col) = parse_double(r[4], path);
    }
    for (double v : t.tps.data)
        if (std::isnan(v)) throw AlignmentError(path + ": missing (segment, time) cells");
    t.validate();
    return t;
}

inline std::string features_csv_header() {
    return "segment_id,bin_start_iso8601,term_freq,accident_count,culture_count";
}

inline std::string to_csv(const TweetFeatureTensor& t) {
    std::ostringstream out;
    out << features_csv_header() << "\n";
    for (std::size_t step = 0; step < t.steps(); ++step) {
        const std::string ts =
            iso8601_from_epoch(t.start_epoch + static_cast<std::int64_t>(step) * kBinSeconds);
        for (std::size_t m = 0; m < t.segments(); ++m) {
            out << t.segment_ids[m] << ',' << ts << ',' << format_double(t.term_freq.at(step, m))
                << ',' << format_double(t.accident.at(step, m)) << ','
                << format_double(t.culture.at(step, m)) << "\n";
        }
    }
    return out.str();
}

inline TweetFeatureTensor tweet_features_from_csv(const std::string& path) {
    const auto rows = read_csv(path, features_csv_header());
    if (rows.empty()) throw ParseError(path + ": no data rows");
    std::map<long, std::size_t> seg_index;
    std::map<std::int64_t, std::size_t> ts_index;
    for (const auto& r : rows) {
        if (r.size() != 5) throw ParseError(path + ": expected 5 fields per row");
        seg_index.emplace(parse_long(r[0], path), 0);
        ts_index.emplace(epoch_from_iso8601(r[1]), 0);
    }
    TweetFeatureTensor t;
    for (auto& [id, idx] : seg_index) {
        idx = t.segment_ids.size();
        t.segment_ids.push_back(id);
    }
    std::size_t k = 0;
    for (auto& [ts, idx] : ts_index) idx = k++;
    t.start_epoch = ts_index.begin()->first;
    t.term_freq = Matrix(ts_index.size(), t.segment_ids.size());
    t.accident = Matrix(ts_index.size(), t.segment_ids.size());
    t.culture = Matrix(ts_index.size(), t.segment_ids.size());
    for (const auto& r : rows) {
        const std::size_t col = seg_index.at(parse_long(r[0], path));
        const std::size_t row = ts_index.at(epoch_from_iso8601(r[1]));
        t.term_freq.at(row, col) = parse_double(r[2], path);
        t.accident.at(row, col) = parse_double(r[3], path);
        t.culture.at(row, col) = parse_double(r[4], path);
    }
    t.validate();
    return t;
}

} // namespace tweetcast
