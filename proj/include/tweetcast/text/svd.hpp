#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/core/matrix.hpp"
#include "tweetcast/core/rng.hpp"
#include "tweetcast/text/doc_term.hpp"

namespace tweetcast {

/// A = U diag(sigma) V^T with r = min(rows, cols) components,
/// singular values sorted nonincreasing.
struct DenseSvd {
    Matrix u;                   // rows x r
    std::vector<double> sigma;  // length r
    Matrix v;                   // cols x r
};

namespace detail {

inline double column_dot(const Matrix& m, std::size_t a, std::size_t b) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) s += m.at(i, a) * m.at(i, b);
    return s;
}

inline void rotate_columns(Matrix& m, std::size_t p, std::size_t q, double c, double s) {
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double mp = m.at(i, p);
        const double mq = m.at(i, q);
        m.at(i, p) = c * mp - s * mq;
        m.at(i, q) = s * mp + c * mq;
    }
}

} // namespace detail

/// One-sided Jacobi SVD. Robust to machine precision on the small dense
/// matrices it is used for (factor blocks and test fixtures).
inline DenseSvd jacobi_svd(const Matrix& a) {
    if (a.rows == 0 || a.cols == 0) throw ContractError("jacobi_svd: empty matrix");
    const bool flipped = a.rows < a.cols;
    Matrix w = flipped ? transpose(a) : a;
    const std::size_t n = w.cols;
    Matrix v = Matrix::identity(n);

    constexpr double kTol = 1e-14;
    for (int sweep = 0; sweep < 64; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double alpha = detail::column_dot(w, p, p);
                const double beta = detail::column_dot(w, q, q);
                const double gamma = detail::column_dot(w, p, q);
                if (std::abs(gamma) <= kTol * std::sqrt(alpha * beta) || gamma == 0.0) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                detail::rotate_columns(w, p, q, c, s);
                detail::rotate_columns(v, p, q, c, s);
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(detail::column_dot(w, j, j));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    DenseSvd out;
    out.sigma.resize(n);
    out.u = Matrix(w.rows, n);
    out.v = Matrix(n, n);
    for (std::size_t jj = 0; jj < n; ++jj) {
        const std::size_t j = order[jj];
        out.sigma[jj] = sigma[j];
        if (sigma[j] > 0.0)
            for (std::size_t i = 0; i < w.rows; ++i) out.u.at(i, jj) = w.at(i, j) / sigma[j];
        for (std::size_t i = 0; i < n; ++i) out.v.at(i, jj) = v.at(i, j);
    }
    if (flipped) std::swap(out.u, out.v);
    return out;
}

namespace detail {

/// Two-pass modified Gram-Schmidt; near-null columns are zeroed.
inline void orthonormalize_columns(Matrix& y) {
    double largest = 0.0;
    for (std::size_t j = 0; j < y.cols; ++j)
        largest = std::max(largest, std::sqrt(column_dot(y, j, j)));
    const double drop_tol = largest * 1e-13;
    for (std::size_t j = 0; j < y.cols; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < j; ++i) {
                const double r = column_dot(y, i, j);
                if (r == 0.0) continue;
                for (std::size_t row = 0; row < y.rows; ++row) y.at(row, j) -= r * y.at(row, i);
            }
        }
        const double norm = std::sqrt(column_dot(y, j, j));
        if (norm <= drop_tol) {
            for (std::size_t row = 0; row < y.rows; ++row) y.at(row, j) = 0.0;
        } else {
            for (std::size_t row = 0; row < y.rows; ++row) y.at(row, j) /= norm;
        }
    }
}

} // namespace detail

/// Rank-k factors of a document-term matrix with the explained-variance
/// bookkeeping of the transformed coordinates.
struct SvdFactors {
    std::size_t k = 0;
    Matrix left;                                  // docs x k
    std::vector<double> singular_values;          // nonincreasing
    Matrix right;                                 // k x vocab
    std::vector<double> explained_variance_ratio; // per component, in [0,1]

    /// Transformed coordinates U * diag(sigma); row d is document d.
    Matrix transformed() const {
        Matrix t = left;
        for (std::size_t i = 0; i < t.rows; ++i)
            for (std::size_t j = 0; j < t.cols; ++j) t.at(i, j) *= singular_values[j];
        return t;
    }
};

/// Truncated SVD: exact one-sided Jacobi when the matrix is small, and the
/// randomized range finder (oversampling 10, two power iterations) at scale.
inline SvdFactors truncated_svd(const DocumentTermMatrix& m, std::size_t k, RngState rng) {
    const std::size_t docs = m.docs;
    const std::size_t vocab = m.vocab_size();
    const std::size_t min_dim = std::min(docs, vocab);
    if (k < 1 || k > min_dim)
        throw ContractError("truncated_svd: k=" + std::to_string(k) + " outside [1, " +
                            std::to_string(min_dim) + "]");

    constexpr std::size_t kOversample = 10;
    constexpr int kPowerIterations = 2;
    constexpr std::size_t kDenseCutoff = 64;
    const std::size_t l = std::min(k + kOversample, min_dim);

    SvdFactors out;
    out.k = k;
    if (min_dim <= kDenseCutoff) {
        DenseSvd full = jacobi_svd(m.dense());
        out.singular_values.assign(full.sigma.begin(),
                                   full.sigma.begin() + static_cast<std::ptrdiff_t>(k));
        out.left = slice_cols(full.u, 0, k);
        out.right = transpose(slice_cols(full.v, 0, k));
    } else {
        Matrix omega = Matrix::random_normal(vocab, l, rng);
        Matrix q = m.multiply_dense(omega);  // docs x l
        detail::orthonormalize_columns(q);
        for (int it = 0; it < kPowerIterations; ++it) {
            Matrix z = m.multiply_transposed_dense(q);  // vocab x l
            detail::orthonormalize_columns(z);
            q = m.multiply_dense(z);
            detail::orthonormalize_columns(q);
        }
        // B = Q^T A is l x vocab; decompose through its transpose so the
        // Jacobi sweep runs over l columns only.
        Matrix bt = m.multiply_transposed_dense(q);  // vocab x l  ==  B^T
        DenseSvd small = jacobi_svd(bt);             // B^T = U_s diag(s) V_s^T
        out.singular_values.assign(small.sigma.begin(),
                                   small.sigma.begin() + static_cast<std::ptrdiff_t>(k));
        // B = V_s diag(s) U_s^T, so A ~ (Q V_s) diag(s) U_s^T.
        Matrix vs_k = slice_cols(small.v, 0, k);
        out.left = matmul(q, vs_k);                       // docs x k
        out.right = transpose(slice_cols(small.u, 0, k)); // k x vocab
    }

    // Explained variance of the transformed coordinates against total
    // column variance of the counts (population variances).
    out.explained_variance_ratio.assign(k, 0.0);
    double total_var = 0.0;
    {
        std::vector<double> col_sum(vocab, 0.0), col_sq(vocab, 0.0);
        for (std::size_t d = 0; d < docs; ++d)
            for (const auto& [idx, count] : m.rows[d]) {
                col_sum[idx] += count;
                col_sq[idx] += static_cast<double>(count) * count;
            }
        const double n = static_cast<double>(docs);
        for (std::size_t j = 0; j < vocab; ++j) {
            const double mean = col_sum[j] / n;
            total_var += col_sq[j] / n - mean * mean;
        }
    }
    if (total_var > 0.0) {
        const double n = static_cast<double>(docs);
        for (std::size_t j = 0; j < k; ++j) {
            double mean = 0.0;
            for (std::size_t d = 0; d < docs; ++d)
                mean += out.left.at(d, j) * out.singular_values[j];
            mean /= n;
            double var = 0.0;
            for (std::size_t d = 0; d < docs; ++d) {
                const double x = out.left.at(d, j) * out.singular_values[j] - mean;
                var += x * x;
            }
            out.explained_variance_ratio[j] = std::clamp(var / n / total_var, 0.0, 1.0);
        }
    }
    return out;
}

/// Cumulative explained-variance curve; nondecreasing, final value <= 1.
inline std::vector<double> explained_variance_curve(const SvdFactors& f) {
    std::vector<double> out(f.explained_variance_ratio.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        acc += f.explained_variance_ratio[i];
        out[i] = std::min(acc, 1.0);
    }
    return out;
}

/// || A - U diag(s) V^T ||_F, densifying A (test- and report-scale use).
inline double reconstruction_error(const DocumentTermMatrix& m, const SvdFactors& f) {
    Matrix approx = matmul(f.transformed(), f.right);
    Matrix dense = m.dense();
    return frobenius_norm(sub(dense, approx));
}

} // namespace tweetcast
