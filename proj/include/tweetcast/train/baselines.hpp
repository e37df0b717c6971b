#pragma once

#include <string>
#include <vector>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/data/tensors.hpp"
#include "tweetcast/data/windows.hpp"
#include "tweetcast/stats/trend.hpp"
#include "tweetcast/train/metrics.hpp"

namespace tweetcast {

/// Per-segment (hour, day-of-week) mean tables over the first
/// `train_steps` bins of the traffic tensor.
inline std::vector<TrendTable> segment_trends(const TrafficTensor& traffic,
                                              std::size_t train_steps) {
    if (train_steps == 0 || train_steps > traffic.steps())
        throw ContractError("segment_trends: bad training span");
    std::vector<TrendTable> tables(traffic.segments());
    for (std::size_t m = 0; m < traffic.segments(); ++m) {
        double cell_sum[24][7] = {};
        int cell_count[24][7] = {};
        for (std::size_t t = 0; t < train_steps; ++t) {
            const CivilDateTime c = civil_from_epoch(traffic.timestamp(t));
            cell_sum[c.hour][c.day_of_week] += traffic.tps.at(t, m);
            cell_count[c.hour][c.day_of_week] += 1;
        }
        for (int h = 0; h < 24; ++h)
            for (int d = 0; d < 7; ++d) {
                tables[m].counts[h][d] = cell_count[h][d];
                if (cell_count[h][d] > 0) tables[m].means[h][d] = cell_sum[h][d] / cell_count[h][d];
            }
    }
    return tables;
}

/// Repeat the last observed TPS row across the horizon.
inline Matrix persistence_prediction(const WindowedSample& w) {
    Matrix out(w.target_tps.rows, w.target_tps.cols);
    for (std::size_t r = 0; r < out.rows; ++r)
        for (std::size_t m = 0; m < out.cols; ++m) out.at(r, m) = w.last_input_tps[m];
    return out;
}

/// Predict the per-segment (hour, day-of-week) training mean for each
/// target timestamp; falls back to the last observation when a cell was
/// never seen in training.
inline Matrix seasonal_mean_prediction(const WindowedSample& w,
                                       const std::vector<TrendTable>& tables) {
    Matrix out(w.target_tps.rows, w.target_tps.cols);
    for (std::size_t r = 0; r < out.rows; ++r) {
        const CivilDateTime c = civil_from_epoch(w.target_ts[r]);
        for (std::size_t m = 0; m < out.cols; ++m) {
            out.at(r, m) = tables[m].has(c.hour, c.day_of_week)
                               ? tables[m].mean(c.hour, c.day_of_week)
                               : w.last_input_tps[m];
        }
    }
    return out;
}

enum class BaselineKind { Persistence, SeasonalMean };

inline std::string baseline_name(BaselineKind k) {
    return k == BaselineKind::Persistence ? "persistence" : "seasonal_mean";
}

inline MetricsReport evaluate_baseline(BaselineKind kind, const std::vector<WindowedSample>& windows,
                                       const std::vector<TrendTable>& tables,
                                       std::size_t horizon, double mape_floor = 1e-3) {
    MetricsAccumulator acc(mape_floor);
    for (std::size_t s : report_horizons())
        if (s <= horizon) acc.track_horizon(s);
    for (const auto& w : windows) {
        const Matrix pred = kind == BaselineKind::Persistence
                                ? persistence_prediction(w)
                                : seasonal_mean_prediction(w, tables);
        acc.add(pred, w.target_tps);
    }
    return acc.report();
}

} // namespace tweetcast
