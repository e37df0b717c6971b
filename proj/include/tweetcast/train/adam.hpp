#pragma once

#include <cmath>
#include <vector>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/core/matrix.hpp"
#include "tweetcast/model/transformer.hpp"

namespace tweetcast {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// First/second-moment optimizer with bias correction, one state slot per
/// model parameter matrix.
class Adam {
public:
    Adam(const ForecastModel& model, AdamConfig cfg) : cfg_(cfg) {
        if (cfg_.learning_rate < 0.0) throw ContractError("Adam: negative learning rate");
        for (const auto& [name, value] : model.parameters()) {
            m_.emplace_back(value.rows, value.cols, 0.0);
            v_.emplace_back(value.rows, value.cols, 0.0);
        }
    }

    /// Apply one update; `grads` must be ordered like model.parameters().
    void step(ForecastModel& model, const std::vector<Matrix>& grads) {
        auto& params = model.parameters();
        if (grads.size() != params.size())
            throw ContractError("Adam::step: gradient list length mismatch");
        ++t_;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        for (std::size_t i = 0; i < params.size(); ++i) {
            Matrix& p = params[i].second;
            const Matrix& g = grads[i];
            for (std::size_t j = 0; j < p.data.size(); ++j) {
                m_[i].data[j] = cfg_.beta1 * m_[i].data[j] + (1.0 - cfg_.beta1) * g.data[j];
                v_[i].data[j] =
                    cfg_.beta2 * v_[i].data[j] + (1.0 - cfg_.beta2) * g.data[j] * g.data[j];
                const double mhat = m_[i].data[j] / bc1;
                const double vhat = v_[i].data[j] / bc2;
                p.data[j] -= cfg_.learning_rate * mhat / (std::sqrt(vhat) + cfg_.eps);
            }
        }
    }

private:
    AdamConfig cfg_;
    std::vector<Matrix> m_, v_;
    std::size_t t_ = 0;
};

} // namespace tweetcast
