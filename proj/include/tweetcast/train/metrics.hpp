#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/core/matrix.hpp"
#include "tweetcast/io/csv.hpp"

namespace tweetcast {

struct MetricsBlock {
    double mse = 0.0;
    double mae = 0.0;
    double mape = 0.0;  // percent
};

/// Overall metrics plus the step-wise breakdown at 15/60/120/180 minutes
/// (horizon steps 1, 4, 8, 12 on the 15-minute grid).
struct MetricsReport {
    MetricsBlock overall;
    std::map<std::size_t, MetricsBlock> per_horizon;
    std::size_t count = 0;  // elements behind `overall`
};

inline const std::vector<std::size_t>& report_horizons() {
    static const std::vector<std::size_t> steps = {1, 4, 8, 12};
    return steps;
}

inline std::string horizon_label(std::size_t step) { return std::to_string(step * 15) + "min"; }

/// Streaming accumulator so evaluation can fold many windows into one report.
class MetricsAccumulator {
public:
    explicit MetricsAccumulator(double mape_floor = 1e-3) : floor_(mape_floor) {
        if (mape_floor <= 0.0) throw ContractError("MetricsAccumulator: mape_floor must be > 0");
    }

    void add(const Matrix& pred, const Matrix& truth) {
        if (!pred.same_shape(truth))
            throw ContractError("metrics: shapes disagree, " + pred.shape_str() + " vs " +
                                truth.shape_str());
        for (std::size_t r = 0; r < pred.rows; ++r)
            for (std::size_t c = 0; c < pred.cols; ++c) {
                const double err = truth.at(r, c) - pred.at(r, c);
                const double denom = std::max(std::abs(truth.at(r, c)), floor_);
                all_.add(err, denom);
                // Row r is the (r+1)-step-ahead prediction.
                auto it = rows_.find(r + 1);
                if (it != rows_.end()) it->second.add(err, denom);
            }
    }

    void track_horizon(std::size_t step) { rows_.emplace(step, Sums{}); }

    MetricsReport report() const {
        MetricsReport out;
        out.overall = all_.block();
        out.count = all_.n;
        for (const auto& [step, sums] : rows_)
            if (sums.n > 0) out.per_horizon[step] = sums.block();
        return out;
    }

private:
    struct Sums {
        double se = 0.0, ae = 0.0, ape = 0.0;
        std::size_t n = 0;
        void add(double err, double denom) {
            se += err * err;
            ae += std::abs(err);
            ape += std::abs(err) / denom;
            ++n;
        }
        MetricsBlock block() const {
            MetricsBlock b;
            if (n == 0) return b;
            const double dn = static_cast<double>(n);
            b.mse = se / dn;
            b.mae = ae / dn;
            b.mape = 100.0 * ape / dn;
            return b;
        }
    };

    double floor_;
    Sums all_;
    std::map<std::size_t, Sums> rows_;
};

/// MSE / MAE / MAPE of one prediction-truth pair, with the step-wise rows.
inline MetricsReport compute_metrics(const Matrix& pred, const Matrix& truth,
                                     double mape_floor = 1e-3) {
    MetricsAccumulator acc(mape_floor);
    for (std::size_t s : report_horizons()) acc.track_horizon(s);
    acc.add(pred, truth);
    return acc.report();
}

inline nlohmann::json to_json(const MetricsReport& r) {
    nlohmann::json j;
    j["overall"] = {{"mse", r.overall.mse}, {"mae", r.overall.mae}, {"mape", r.overall.mape}};
    nlohmann::json steps = nlohmann::json::object();
    for (const auto& [step, b] : r.per_horizon)
        steps[horizon_label(step)] = {{"mse", b.mse}, {"mae", b.mae}, {"mape", b.mape}};
    j["per_horizon"] = std::move(steps);
    j["count"] = r.count;
    return j;
}

inline std::string metrics_csv_header() { return "model,horizon,mse,mae,mape"; }

inline void append_metrics_csv(std::ostringstream& out, const std::string& model_name,
                               const MetricsReport& r) {
    out << model_name << ",overall," << format_double(r.overall.mse) << ','
        << format_double(r.overall.mae) << ',' << format_double(r.overall.mape) << "\n";
    for (const auto& [step, b] : r.per_horizon)
        out << model_name << ',' << horizon_label(step) << ',' << format_double(b.mse) << ','
            << format_double(b.mae) << ',' << format_double(b.mape) << "\n";
}

} // namespace tweetcast
