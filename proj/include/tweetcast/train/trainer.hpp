#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/data/windows.hpp"
#include "tweetcast/model/transformer.hpp"
#include "tweetcast/train/adam.hpp"
#include "tweetcast/train/metrics.hpp"

namespace tweetcast {

struct TrainConfig {
    AdamConfig adam;
    std::size_t batch_size = 32;
    std::size_t epochs = 50;
    std::size_t patience = 10;  // early stop on validation MSE
    std::uint64_t seed = 1;
    double mape_floor = 1e-3;
    // Validation regime: autoregressive rollout (matching the evaluation
    // protocol) or teacher-forced loss. Rollout validation subsamples to at
    // most val_max_windows windows, deterministically.
    bool val_rollout = true;
    std::size_t val_max_windows = 256;

    void validate() const {
        if (batch_size < 1) throw ContractError("TrainConfig: batch_size must be >= 1");
        if (epochs < 1) throw ContractError("TrainConfig: epochs must be >= 1");
    }
};

inline nlohmann::json to_json(const TrainConfig& c) {
    return nlohmann::json{{"learning_rate", c.adam.learning_rate},
                          {"beta1", c.adam.beta1},
                          {"beta2", c.adam.beta2},
                          {"eps", c.adam.eps},
                          {"batch_size", c.batch_size},
                          {"epochs", c.epochs},
                          {"patience", c.patience},
                          {"seed", c.seed},
                          {"mape_floor", c.mape_floor},
                          {"val_rollout", c.val_rollout},
                          {"val_max_windows", c.val_max_windows}};
}

inline TrainConfig train_config_from_json(const nlohmann::json& j) {
    TrainConfig c;
    c.adam.learning_rate = j.value("learning_rate", c.adam.learning_rate);
    c.adam.beta1 = j.value("beta1", c.adam.beta1);
    c.adam.beta2 = j.value("beta2", c.adam.beta2);
    c.adam.eps = j.value("eps", c.adam.eps);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.epochs = j.value("epochs", c.epochs);
    c.patience = j.value("patience", c.patience);
    c.seed = j.value("seed", c.seed);
    c.mape_floor = j.value("mape_floor", c.mape_floor);
    c.val_rollout = j.value("val_rollout", c.val_rollout);
    c.val_max_windows = j.value("val_max_windows", c.val_max_windows);
    return c;
}

struct EpochStats {
    std::size_t epoch = 0;
    double train_mse = 0.0;
    double val_mse = 0.0;
};

struct TrainResult {
    std::vector<EpochStats> history;
    std::size_t best_epoch = 0;
    double best_val_mse = 0.0;
};

/// Teacher-forced MSE of one window (forward only).
inline double window_loss(const ForecastModel& model, const WindowedSample& w) {
    auto tg = model.build_training_graph(w);
    return tg.graph.value(tg.loss).at(0, 0);
}

/// Validation MSE under the configured regime.
inline double validation_mse(const ForecastModel& model, const std::vector<WindowedSample>& val,
                             const TrainConfig& cfg) {
    if (!cfg.val_rollout) {
        double sum = 0.0;
        for (const auto& w : val) sum += window_loss(model, w);
        return sum / static_cast<double>(val.size());
    }
    const std::size_t stride =
        std::max<std::size_t>(1, (val.size() + cfg.val_max_windows - 1) / cfg.val_max_windows);
    double se = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < val.size(); i += stride) {
        const Matrix pred = model.predict(val[i]);
        const Matrix& truth = val[i].target_tps;
        for (std::size_t k = 0; k < pred.data.size(); ++k) {
            const double e = pred.data[k] - truth.data[k];
            se += e * e;
        }
        n += pred.data.size();
    }
    return se / static_cast<double>(n);
}

/// Mini-batch Adam training with teacher forcing and early stopping on the
/// validation loss; the model is left holding the best-validation epoch's
/// parameters.
inline TrainResult train(ForecastModel& model, const Dataset& data, const TrainConfig& cfg) {
    cfg.validate();
    if (data.train.empty()) throw ContractError("train: no training windows");
    if (data.val.empty()) throw ContractError("train: no validation windows");

    Adam adam(model, cfg.adam);
    RngState shuffle_rng = RngState(cfg.seed).derive(0xABCDULL);

    TrainResult result;
    std::vector<std::pair<std::string, Matrix>> best_params = model.parameters();
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t best_epoch = 0;
    std::size_t since_best = 0;

    std::vector<std::size_t> order(data.train.size());
    std::iota(order.begin(), order.end(), 0);

    const std::size_t n_params = model.parameters().size();
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double train_loss_sum = 0.0;
        std::size_t train_loss_n = 0;
        for (std::size_t batch_start = 0; batch_start < order.size();
             batch_start += cfg.batch_size) {
            const std::size_t batch_end = std::min(order.size(), batch_start + cfg.batch_size);
            std::vector<Matrix> grads;
            grads.reserve(n_params);
            for (const auto& [name, value] : model.parameters())
                grads.emplace_back(value.rows, value.cols, 0.0);
            for (std::size_t i = batch_start; i < batch_end; ++i) {
                auto tg = model.build_training_graph(data.train[order[i]]);
                const double loss = tg.graph.value(tg.loss).at(0, 0);
                if (!std::isfinite(loss))
                    throw TrainingError("training diverged (non-finite loss) at epoch " +
                                        std::to_string(epoch));
                train_loss_sum += loss;
                ++train_loss_n;
                tg.graph.backward(tg.loss);
                std::size_t pi = 0;
                for (const auto& [name, value] : model.parameters()) {
                    const Matrix& g = tg.graph.grad(tg.params.at(name));
                    for (std::size_t j = 0; j < g.data.size(); ++j) grads[pi].data[j] += g.data[j];
                    ++pi;
                }
            }
            const double inv = 1.0 / static_cast<double>(batch_end - batch_start);
            for (Matrix& g : grads)
                for (double& v : g.data) v *= inv;
            adam.step(model, grads);
        }

        const double val_mse = validation_mse(model, data.val, cfg);
        if (!std::isfinite(val_mse))
            throw TrainingError("training diverged (non-finite validation loss) at epoch " +
                                std::to_string(epoch));
        result.history.push_back(
            {epoch, train_loss_sum / static_cast<double>(std::max<std::size_t>(1, train_loss_n)),
             val_mse});

        if (val_mse < best_val) {
            best_val = val_mse;
            best_epoch = epoch;
            best_params = model.parameters();
            since_best = 0;
        } else {
            ++since_best;
            if (since_best >= cfg.patience) break;
        }
    }

    model.parameters() = best_params;
    result.best_epoch = best_epoch;
    result.best_val_mse = best_val;
    return result;
}

/// Autoregressive evaluation over a window set. Only input rows and the
/// target timestamps are read during rollout; target values enter the
/// metric computation alone.
inline MetricsReport evaluate(const ForecastModel& model, const std::vector<WindowedSample>& windows,
                              double mape_floor = 1e-3) {
    MetricsAccumulator acc(mape_floor);
    for (std::size_t s : report_horizons())
        if (s <= model.config().horizon) acc.track_horizon(s);
    for (const auto& w : windows) acc.add(model.predict(w), w.target_tps);
    return acc.report();
}

inline std::string loss_history_csv(const TrainResult& r) {
    std::ostringstream out;
    out << "epoch,train_mse,val_mse\n";
    for (const auto& e : r.history)
        out << e.epoch << ',' << format_double(e.train_mse) << ',' << format_double(e.val_mse)
            << "\n";
    return out.str();
}

} // namespace tweetcast
