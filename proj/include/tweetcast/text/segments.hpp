#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/io/csv.hpp"
#include "tweetcast/text/tweets.hpp"

namespace tweetcast {

struct SegmentCenter {
    long id = 0;
    double lat = 0.0;
    double lon = 0.0;
};

constexpr double kEarthRadiusKm = 6371.0;

/// Great-circle distance on a spherical Earth.
inline double haversine_km(double lat1, double lon1, double lat2, double lon2) {
    constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
    const double phi1 = lat1 * kDegToRad;
    const double phi2 = lat2 * kDegToRad;
    const double dphi = (lat2 - lat1) * kDegToRad;
    const double dlam = (lon2 - lon1) * kDegToRad;
    const double a = std::sin(dphi / 2.0) * std::sin(dphi / 2.0) +
                     std::cos(phi1) * std::cos(phi2) * std::sin(dlam / 2.0) * std::sin(dlam / 2.0);
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

/// Nearest center within radius_km, ties broken by lowest segment id.
inline std::optional<long> assign_to_segment(const TweetRecord& t,
                                             const std::vector<SegmentCenter>& centers,
                                             double radius_km) {
    if (radius_km <= 0.0) throw ContractError("assign_to_segment: radius must be > 0");
    std::optional<long> best;
    double best_dist = radius_km;
    for (const auto& c : centers) {
        const double d = haversine_km(t.lat, t.lon, c.lat, c.lon);
        if (d < best_dist || (d == best_dist && (!best || c.id < *best))) {
            if (d <= radius_km) {
                best = c.id;
                best_dist = d;
            }
        }
    }
    return best;
}

inline std::string segments_csv_header() { return "segment_id,lat,lon"; }

inline std::vector<SegmentCenter> segments_from_csv(const std::string& path) {
    const auto rows = read_csv(path, segments_csv_header());
    std::vector<SegmentCenter> out;
    for (const auto& r : rows) {
        if (r.size() != 3) throw ParseError(path + ": expected 3 fields per row");
        out.push_back({parse_long(r[0], path), parse_double(r[1], path), parse_double(r[2], path)});
    }
    if (out.empty()) throw ParseError(path + ": no segment centers");
    return out;
}

inline std::string to_csv(const std::vector<SegmentCenter>& centers) {
    std::ostringstream out;
    out << segments_csv_header() << "\n";
    for (const auto& c : centers)
        out << c.id << ',' << format_double(c.lat) << ',' << format_double(c.lon) << "\n";
    return out.str();
}

} // namespace tweetcast
