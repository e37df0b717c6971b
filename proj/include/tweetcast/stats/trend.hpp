#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/data/calendar.hpp"

namespace tweetcast {

/// Hour-of-day x day-of-week mean table used for seasonal detrending.
struct TrendTable {
    double means[24][7] = {};
    int counts[24][7] = {};

    bool has(int hour, int dow) const { return counts[hour][dow] > 0; }
    double mean(int hour, int dow) const { return means[hour][dow]; }
};

/// Regular 1-hour series. NaN marks a missing value before gap filling.
struct HourlySeries {
    std::int64_t start_epoch = 0;
    std::vector<double> values;

    std::int64_t timestamp(std::size_t i) const {
        return start_epoch + static_cast<std::int64_t>(i) * 3600;
    }
};

/// Mean-aggregate a regular sub-hourly series (e.g. 15-minute bins) into
/// hours, then linearly interpolate interior gaps and extend the edges
/// with the nearest observed value.
inline HourlySeries hourly_from_bins(std::int64_t start_epoch, const std::vector<double>& bin_values,
                                     int bin_seconds) {
    if (bin_seconds <= 0 || 3600 % bin_seconds != 0)
        throw ContractError("hourly_from_bins: bin width must divide one hour");
    if (start_epoch % 3600 != 0)
        throw AlignmentError("hourly_from_bins: series must start on an hour boundary");
    const std::size_t per_hour = static_cast<std::size_t>(3600 / bin_seconds);
    HourlySeries out;
    out.start_epoch = start_epoch;
    const std::size_t hours = bin_values.size() / per_hour;
    out.values.assign(hours, std::nan(""));
    for (std::size_t h = 0; h < hours; ++h) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t k = 0; k < per_hour; ++k) {
            const double v = bin_values[h * per_hour + k];
            if (std::isfinite(v)) {
                sum += v;
                ++n;
            }
        }
        if (n > 0) out.values[h] = sum / static_cast<double>(n);
    }
    // Interior gaps: linear interpolation between the flanking hours.
    std::size_t i = 0;
    const std::size_t n = out.values.size();
    while (i < n) {
        if (std::isfinite(out.values[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && !std::isfinite(out.values[j])) ++j;
        const bool have_left = i > 0;
        const bool have_right = j < n;
        for (std::size_t k = i; k < j; ++k) {
            if (have_left && have_right) {
                const double left = out.values[i - 1];
                const double right = out.values[j];
                const double t = static_cast<double>(k - (i - 1)) / static_cast<double>(j - (i - 1));
                out.values[k] = left + t * (right - left);
            } else if (have_left) {
                out.values[k] = out.values[i - 1];
            } else if (have_right) {
                out.values[k] = out.values[j];
            } else {
                throw ContractError("hourly_from_bins: series has no observed values");
            }
        }
        i = j;
    }
    return out;
}

/// Group-by mean over (hour, day-of-week) cells.
inline TrendTable compute_trend(const HourlySeries& series) {
    if (series.values.empty()) throw ContractError("compute_trend: empty series");
    TrendTable t;
    double sums[24][7] = {};
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const double v = series.values[i];
        if (!std::isfinite(v)) continue;
        const CivilDateTime c = civil_from_epoch(series.timestamp(i));
        sums[c.hour][c.day_of_week] += v;
        t.counts[c.hour][c.day_of_week] += 1;
    }
    for (int h = 0; h < 24; ++h)
        for (int d = 0; d < 7; ++d)
            if (t.counts[h][d] > 0) t.means[h][d] = sums[h][d] / t.counts[h][d];
    return t;
}

/// Subtract the (hour, day-of-week) mean from every sample.
inline HourlySeries detrend(const HourlySeries& series, const TrendTable& trend) {
    HourlySeries out;
    out.start_epoch = series.start_epoch;
    out.values.reserve(series.values.size());
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const CivilDateTime c = civil_from_epoch(series.timestamp(i));
        if (!trend.has(c.hour, c.day_of_week))
            throw ContractError("detrend: no trend cell for hour " + std::to_string(c.hour) +
                                ", day " + std::to_string(c.day_of_week));
        out.values.push_back(series.values[i] - trend.mean(c.hour, c.day_of_week));
    }
    return out;
}

} // namespace tweetcast
