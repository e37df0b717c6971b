#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/core/rng.hpp"

namespace tweetcast {

/// Dense row-major matrix of doubles, the numeric carrier for everything.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    Matrix(std::initializer_list<std::initializer_list<double>> init) {
        rows = init.size();
        cols = rows ? init.begin()->size() : 0;
        data.reserve(rows * cols);
        for (const auto& row : init) {
            if (row.size() != cols) throw ShapeError("ragged initializer for Matrix");
            data.insert(data.end(), row.begin(), row.end());
        }
    }

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::size_t size() const { return rows * cols; }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

    std::string shape_str() const {
        return std::to_string(rows) + "x" + std::to_string(cols);
    }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    static Matrix filled(std::size_t r, std::size_t c, double v) { return Matrix(r, c, v); }

    static Matrix random_uniform(std::size_t r, std::size_t c, double lo, double hi, RngState& rng) {
        Matrix m(r, c);
        for (double& v : m.data) v = rng.uniform(lo, hi);
        return m;
    }

    static Matrix random_normal(std::size_t r, std::size_t c, RngState& rng) {
        Matrix m(r, c);
        for (double& v : m.data) v = rng.normal();
        return m;
    }
};

/// Boolean matrix used for attention masks. True = position participates.
struct BoolMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> data;

    BoolMatrix() = default;
    BoolMatrix(std::size_t r, std::size_t c, bool fill = true)
        : rows(r), cols(c), data(r * c, fill ? 1 : 0) {}

    bool at(std::size_t r, std::size_t c) const { return data[r * cols + c] != 0; }
    void set(std::size_t r, std::size_t c, bool v) { data[r * cols + c] = v ? 1 : 0; }

    /// Lower-triangular causal mask: row i may attend to columns 0..i.
    static BoolMatrix causal(std::size_t n) {
        BoolMatrix m(n, n, false);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) m.set(i, j, true);
        return m;
    }
};

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows)
        throw ShapeError("matmul: inner dimensions disagree, " + a.shape_str() + " vs " + b.shape_str());
    Matrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = &a.data[i * a.cols];
        double* orow = &out.data[i * out.cols];
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = &b.data[k * b.cols];
            for (std::size_t j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

inline Matrix transpose(const Matrix& m) {
    Matrix out(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out.at(j, i) = m.at(i, j);
    return out;
}

inline Matrix add(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b))
        throw ShapeError("add: shapes disagree, " + a.shape_str() + " vs " + b.shape_str());
    Matrix out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
    return out;
}

inline Matrix sub(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b))
        throw ShapeError("sub: shapes disagree, " + a.shape_str() + " vs " + b.shape_str());
    Matrix out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
    return out;
}

inline Matrix scale(const Matrix& a, double c) {
    Matrix out = a;
    for (double& v : out.data) v *= c;
    return out;
}

inline Matrix hadamard(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b))
        throw ShapeError("hadamard: shapes disagree, " + a.shape_str() + " vs " + b.shape_str());
    Matrix out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] *= b.data[i];
    return out;
}

/// Add a 1 x cols row vector to every row.
inline Matrix add_rowvec(const Matrix& a, const Matrix& row) {
    if (row.rows != 1 || row.cols != a.cols)
        throw ShapeError("add_rowvec: need 1x" + std::to_string(a.cols) + " row, got " + row.shape_str());
    Matrix out = a;
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) out.at(i, j) += row.at(0, j);
    return out;
}

inline Matrix concat_cols(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows)
        throw ShapeError("concat_cols: row counts disagree, " + a.shape_str() + " vs " + b.shape_str());
    Matrix out(a.rows, a.cols + b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) out.at(i, j) = a.at(i, j);
        for (std::size_t j = 0; j < b.cols; ++j) out.at(i, a.cols + j) = b.at(i, j);
    }
    return out;
}

inline Matrix concat_rows(const Matrix& a, const Matrix& b) {
    if (a.cols != b.cols)
        throw ShapeError("concat_rows: col counts disagree, " + a.shape_str() + " vs " + b.shape_str());
    Matrix out(a.rows + b.rows, a.cols);
    std::copy(a.data.begin(), a.data.end(), out.data.begin());
    std::copy(b.data.begin(), b.data.end(), out.data.begin() + static_cast<std::ptrdiff_t>(a.data.size()));
    return out;
}

inline Matrix slice_cols(const Matrix& m, std::size_t c0, std::size_t c1) {
    if (c0 > c1 || c1 > m.cols) throw ShapeError("slice_cols: bad range on " + m.shape_str());
    Matrix out(m.rows, c1 - c0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = c0; j < c1; ++j) out.at(i, j - c0) = m.at(i, j);
    return out;
}

inline Matrix slice_rows(const Matrix& m, std::size_t r0, std::size_t r1) {
    if (r0 > r1 || r1 > m.rows) throw ShapeError("slice_rows: bad range on " + m.shape_str());
    Matrix out(r1 - r0, m.cols);
    std::copy(m.data.begin() + static_cast<std::ptrdiff_t>(r0 * m.cols),
              m.data.begin() + static_cast<std::ptrdiff_t>(r1 * m.cols), out.data.begin());
    return out;
}

inline double reduce_sum(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data) s += v;
    return s;
}

inline double reduce_mean(const Matrix& m) {
    if (m.size() == 0) throw ContractError("reduce_mean of empty matrix");
    return reduce_sum(m) / static_cast<double>(m.size());
}

/// Row-wise softmax with optional mask. Masked positions receive an
/// additive -1e30 before the exponent and are zeroed exactly afterwards,
/// so they can never contaminate the unmasked probabilities.
inline Matrix softmax_rows(const Matrix& m, const std::optional<BoolMatrix>& mask = std::nullopt) {
    if (mask && (mask->rows != m.rows || mask->cols != m.cols))
        throw ShapeError("softmax_rows: mask shape " + std::to_string(mask->rows) + "x" +
                         std::to_string(mask->cols) + " does not match " + m.shape_str());
    Matrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
        double rowmax = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m.cols; ++j) {
            const double v = m.at(i, j) + ((mask && !mask->at(i, j)) ? -1e30 : 0.0);
            if (v > rowmax) rowmax = v;
        }
        if (rowmax <= -1e29)
            throw ContractError("softmax_rows: fully masked row " + std::to_string(i));
        double denom = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) {
            const double v = m.at(i, j) + ((mask && !mask->at(i, j)) ? -1e30 : 0.0);
            const double e = std::exp(v - rowmax);
            out.at(i, j) = e;
            denom += e;
        }
        for (std::size_t j = 0; j < m.cols; ++j) {
            out.at(i, j) /= denom;
            if (mask && !mask->at(i, j)) out.at(i, j) = 0.0;
        }
    }
    return out;
}

/// Row-wise layer normalization with per-column gain and bias.
/// Variance is the population variance of the row.
inline Matrix layer_norm_rows(const Matrix& m, const std::vector<double>& gain,
                              const std::vector<double>& bias, double eps) {
    if (gain.size() != m.cols || bias.size() != m.cols)
        throw ShapeError("layer_norm_rows: gain/bias length " + std::to_string(gain.size()) + "/" +
                         std::to_string(bias.size()) + " vs cols " + std::to_string(m.cols));
    if (eps <= 0.0) throw ContractError("layer_norm_rows: eps must be > 0");
    Matrix out(m.rows, m.cols);
    const double n = static_cast<double>(m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) mean += m.at(i, j);
        mean /= n;
        double var = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) {
            const double d = m.at(i, j) - mean;
            var += d * d;
        }
        var /= n;
        const double inv = 1.0 / std::sqrt(var + eps);
        for (std::size_t j = 0; j < m.cols; ++j)
            out.at(i, j) = gain[j] * (m.at(i, j) - mean) * inv + bias[j];
    }
    return out;
}

inline Matrix map_tanh(const Matrix& m) {
    Matrix out = m;
    for (double& v : out.data) v = std::tanh(v);
    return out;
}

inline Matrix map_relu(const Matrix& m) {
    Matrix out = m;
    for (double& v : out.data) v = v > 0.0 ? v : 0.0;
    return out;
}

inline Matrix map_log(const Matrix& m) {
    Matrix out = m;
    for (double& v : out.data) v = std::log(v);
    return out;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b))
        throw ShapeError("max_abs_diff: shapes disagree, " + a.shape_str() + " vs " + b.shape_str());
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

inline double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data) s += v * v;
    return std::sqrt(s);
}

} // namespace tweetcast
