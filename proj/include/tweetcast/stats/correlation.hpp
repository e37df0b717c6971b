#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "tweetcast/core/errors.hpp"

namespace tweetcast {

/// Sample Pearson correlation coefficient.
inline double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw ContractError("pearson: lengths disagree, " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
    if (a.size() < 3) throw ContractError("pearson: need at least 3 samples");
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0)
        throw UndefinedStatError("pearson: zero variance input");
    return sab / std::sqrt(saa * sbb);
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    return pearson(std::span<const double>(a), std::span<const double>(b));
}

/// Correlation between v at time t and c at time t - lag, for lag = 0..max_lag.
/// Entry `lag` pairs v[lag..] with c[..n-lag].
inline std::vector<double> cross_correlation(const std::vector<double>& v,
                                             const std::vector<double>& c, int max_lag) {
    if (max_lag < 0) throw ContractError("cross_correlation: max_lag must be >= 0");
    if (v.size() != c.size())
        throw ContractError("cross_correlation: series lengths disagree");
    if (v.size() <= static_cast<std::size_t>(max_lag) + 2)
        throw ContractError("cross_correlation: series too short for max_lag " +
                            std::to_string(max_lag));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(max_lag) + 1);
    for (int lag = 0; lag <= max_lag; ++lag) {
        const std::size_t n = v.size() - static_cast<std::size_t>(lag);
        out.push_back(pearson(std::span<const double>(v).subspan(static_cast<std::size_t>(lag), n),
                              std::span<const double>(c).subspan(0, n)));
    }
    return out;
}

} // namespace tweetcast
