#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/core/matrix.hpp"
#include "tweetcast/data/calendar.hpp"

namespace tweetcast {

/// Interleaved sinusoid position features: column k of row `pos` is
/// sin(pos / 10000^(k/d)) for even k and cos(pos / 10000^((k-1)/d)) for
/// odd k.
inline Matrix sinusoidal_encoding(std::size_t seq_len, std::size_t d_tau) {
    if (d_tau < 2 || d_tau % 2 != 0)
        throw ContractError("sinusoidal_encoding: d_tau must be even and >= 2");
    Matrix out(seq_len, d_tau);
    for (std::size_t pos = 0; pos < seq_len; ++pos) {
        for (std::size_t k = 0; k < d_tau; ++k) {
            const std::size_t base = (k % 2 == 0) ? k : k - 1;
            const double angle =
                static_cast<double>(pos) /
                std::pow(10000.0, static_cast<double>(base) / static_cast<double>(d_tau));
            out.at(pos, k) = (k % 2 == 0) ? std::sin(angle) : std::cos(angle);
        }
    }
    return out;
}

/// One sinusoid row for an arbitrary position index.
inline std::vector<double> sinusoid_row(std::size_t pos, std::size_t d_tau) {
    if (d_tau < 2 || d_tau % 2 != 0)
        throw ContractError("sinusoid_row: d_tau must be even and >= 2");
    std::vector<double> out(d_tau);
    for (std::size_t k = 0; k < d_tau; ++k) {
        const std::size_t base = (k % 2 == 0) ? k : k - 1;
        const double angle = static_cast<double>(pos) /
                             std::pow(10000.0, static_cast<double>(base) / static_cast<double>(d_tau));
        out[k] = (k % 2 == 0) ? std::sin(angle) : std::cos(angle);
    }
    return out;
}

/// Row-wise calendar features for a run of timestamps.
inline Matrix time_feature_matrix(const std::vector<std::int64_t>& timestamps) {
    Matrix out(timestamps.size(), TimeFeatures::kCount);
    for (std::size_t i = 0; i < timestamps.size(); ++i) {
        const auto f = calendar_features(timestamps[i]).to_array();
        for (std::size_t j = 0; j < f.size(); ++j) out.at(i, j) = f[j];
    }
    return out;
}

/// Time-encoder projection: rows of (embedded ⊕ sinusoid ⊕ calendar)
/// multiplied by W^T, where W is d_tau x (2 d_tau + 7).
inline Matrix encode_input(const Matrix& embedded, const Matrix& sinusoids,
                           const Matrix& time_features, const Matrix& w) {
    if (embedded.rows != sinusoids.rows || embedded.rows != time_features.rows)
        throw ShapeError("encode_input: row counts disagree");
    if (embedded.cols != sinusoids.cols)
        throw ShapeError("encode_input: embedding and sinusoid widths disagree");
    if (time_features.cols != TimeFeatures::kCount)
        throw ShapeError("encode_input: time features must have 7 columns");
    const std::size_t d = embedded.cols;
    if (w.rows != d || w.cols != 2 * d + TimeFeatures::kCount)
        throw ShapeError("encode_input: W must be " + std::to_string(d) + "x" +
                         std::to_string(2 * d + TimeFeatures::kCount) + ", got " + w.shape_str());
    const Matrix joined = concat_cols(concat_cols(embedded, sinusoids), time_features);
    return matmul(joined, transpose(w));
}

} // namespace tweetcast
