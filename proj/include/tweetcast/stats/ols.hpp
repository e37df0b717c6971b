#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/core/matrix.hpp"
#include "tweetcast/stats/tdist.hpp"

namespace tweetcast {

struct OlsResult {
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    std::vector<double> t_stats;
    std::vector<double> p_values;
    double r_squared = 0.0;
    std::size_t n_obs = 0;
    double dof = 0.0;
};

namespace detail {

/// Gauss-Jordan inverse with partial pivoting; throws on rank deficiency.
inline Matrix invert_spd(const Matrix& a) {
    const std::size_t n = a.rows;
    Matrix work = a;
    Matrix inv = Matrix::identity(n);
    double scale = 0.0;
    for (double v : a.data) scale = std::max(scale, std::abs(v));
    const double tol = std::max(scale, 1.0) * 1e-12;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(work.at(r, col)) > std::abs(work.at(pivot, col))) pivot = r;
        if (std::abs(work.at(pivot, col)) < tol)
            throw SingularDesignError("design matrix is rank deficient at column " +
                                      std::to_string(col));
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(work.at(pivot, j), work.at(col, j));
                std::swap(inv.at(pivot, j), inv.at(col, j));
            }
        }
        const double p = work.at(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            work.at(col, j) /= p;
            inv.at(col, j) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = work.at(r, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                work.at(r, j) -= f * work.at(col, j);
                inv.at(r, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

} // namespace detail

/// Ordinary least squares with classical standard errors and two-sided
/// Student-t p-values. `columns` are the design-matrix columns, including
/// the intercept column if one is wanted.
inline OlsResult ols_fit(const std::vector<double>& y,
                         const std::vector<std::vector<double>>& columns) {
    if (columns.empty()) throw ContractError("ols_fit: no regressors");
    const std::size_t n = y.size();
    const std::size_t p = columns.size();
    if (n <= p) throw ContractError("ols_fit: need more observations than regressors");
    for (const auto& col : columns)
        if (col.size() != n) throw ContractError("ols_fit: column length mismatch");

    Matrix x(n, p);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t i = 0; i < n; ++i) x.at(i, j) = columns[j][i];
    Matrix xt = transpose(x);
    Matrix xtx = matmul(xt, x);
    Matrix xtx_inv = detail::invert_spd(xtx);

    Matrix ym(n, 1);
    for (std::size_t i = 0; i < n; ++i) ym.at(i, 0) = y[i];
    Matrix beta = matmul(xtx_inv, matmul(xt, ym));

    Matrix fitted = matmul(x, beta);
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - fitted.at(i, 0);
        rss += r * r;
    }
    double mean_y = 0.0;
    for (double v : y) mean_y += v;
    mean_y /= static_cast<double>(n);
    double tss = 0.0;
    for (double v : y) tss += (v - mean_y) * (v - mean_y);

    OlsResult out;
    out.n_obs = n;
    out.dof = static_cast<double>(n - p);
    const double sigma2 = rss / out.dof;
    out.r_squared = tss > 0.0 ? 1.0 - rss / tss : 1.0;
    out.coefficients.resize(p);
    out.std_errors.resize(p);
    out.t_stats.resize(p);
    out.p_values.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        out.coefficients[j] = beta.at(j, 0);
        out.std_errors[j] = std::sqrt(sigma2 * xtx_inv.at(j, j));
        if (out.std_errors[j] > 0.0) {
            out.t_stats[j] = out.coefficients[j] / out.std_errors[j];
            out.p_values[j] = student_t_two_sided_p(out.t_stats[j], out.dof);
        } else {
            out.t_stats[j] = 0.0;
            out.p_values[j] = 1.0;
        }
    }
    return out;
}

/// The auto-regressive significance model: regress v'_t on
/// [1, v'_{t-1}, c'_t, c'_{t-1}].
inline OlsResult ols_lagged_model(const std::vector<double>& v_detrended,
                                  const std::vector<double>& c_detrended) {
    if (v_detrended.size() != c_detrended.size())
        throw ContractError("ols_lagged_model: series lengths disagree");
    if (v_detrended.size() < 6)
        throw ContractError("ols_lagged_model: series too short");
    const std::size_t n = v_detrended.size() - 1;
    std::vector<double> y(n), ones(n, 1.0), v_lag(n), c_now(n), c_lag(n);
    for (std::size_t t = 0; t < n; ++t) {
        y[t] = v_detrended[t + 1];
        v_lag[t] = v_detrended[t];
        c_now[t] = c_detrended[t + 1];
        c_lag[t] = c_detrended[t];
    }
    return ols_fit(y, {ones, v_lag, c_now, c_lag});
}

} // namespace tweetcast
