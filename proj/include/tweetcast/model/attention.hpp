#pragma once

#include <optional>
#include <vector>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/core/matrix.hpp"

namespace tweetcast {

/// softmax(Q K^T / sqrt(d_k)) V with an optional attention mask.
inline Matrix scaled_dot_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                   const std::optional<BoolMatrix>& mask = std::nullopt) {
    if (q.cols != k.cols)
        throw ContractError("scaled_dot_attention: query/key widths disagree, " + q.shape_str() +
                            " vs " + k.shape_str());
    if (k.rows != v.rows)
        throw ContractError("scaled_dot_attention: key/value row counts disagree");
    const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(q.cols));
    Matrix scores = scale(matmul(q, transpose(k)), inv_sqrt_dk);
    Matrix probs = softmax_rows(scores, mask);
    return matmul(probs, v);
}

/// Per-head projection weights; W_O maps the concatenated heads back to
/// the model width.
struct AttentionParams {
    std::vector<Matrix> w_q;  // each d_model x d_k
    std::vector<Matrix> w_k;
    std::vector<Matrix> w_v;
    Matrix w_o;               // (heads * d_v) x d_model

    std::size_t heads() const { return w_q.size(); }
};

/// Concat(head_1 .. head_h) W_O with head_i computed from its own Q/K/V
/// projections of the two input sequences.
inline Matrix multi_head(const Matrix& x_q, const Matrix& x_kv, const AttentionParams& p,
                         const std::optional<BoolMatrix>& mask = std::nullopt) {
    const std::size_t h = p.heads();
    if (h == 0 || p.w_k.size() != h || p.w_v.size() != h)
        throw ContractError("multi_head: inconsistent head parameter lists");
    Matrix joined;
    for (std::size_t i = 0; i < h; ++i) {
        Matrix head = scaled_dot_attention(matmul(x_q, p.w_q[i]), matmul(x_kv, p.w_k[i]),
                                           matmul(x_kv, p.w_v[i]), mask);
        joined = i == 0 ? std::move(head) : concat_cols(joined, head);
    }
    return matmul(joined, p.w_o);
}

} // namespace tweetcast
