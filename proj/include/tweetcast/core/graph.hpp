#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "tweetcast/core/matrix.hpp"

namespace tweetcast {

/// Reverse-mode differentiation tape over a small fixed op vocabulary.
///
/// Nodes are appended in topological order (parents always precede
/// children), values are computed eagerly on construction, and backward()
/// accumulates gradients in reverse order. The tape can re-run its forward
/// pass from the leaves, which is what grad_check() uses for central
/// differences.
class DiffGraph {
public:
    using NodeId = int;

    enum class Op {
        Input,
        Param,
        MatMul,
        Add,
        Sub,
        Scale,
        AddRowVec,
        Hadamard,
        Tanh,
        Relu,
        Log,
        SoftmaxRows,
        LayerNormRows,
        ConcatCols,
        ConcatRows,
        SliceCols,
        SliceRows,
        Transpose,
        ReduceSum,
        ReduceMean,
    };

    struct Node {
        Op op;
        std::array<NodeId, 3> parents{-1, -1, -1};
        Matrix value;
        Matrix grad;
        double scalar = 0.0;               // Scale factor, LayerNorm eps
        std::size_t i0 = 0, i1 = 0;        // slice ranges
        std::optional<BoolMatrix> mask;    // SoftmaxRows
    };

    std::size_t node_count() const { return nodes_.size(); }
    const Node& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
    const Matrix& value(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].value; }
    const Matrix& grad(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].grad; }
    const std::vector<NodeId>& parameters() const { return params_; }

    /// Mutable access to a leaf's value (used by the optimizer between steps).
    Matrix& leaf_value(NodeId id) {
        Node& n = nodes_[static_cast<std::size_t>(id)];
        if (n.op != Op::Input && n.op != Op::Param)
            throw ContractError("leaf_value: node is not a leaf");
        return n.value;
    }

    NodeId input(Matrix v) {
        Node n;
        n.op = Op::Input;
        n.value = std::move(v);
        return push(std::move(n));
    }

    NodeId param(Matrix v) {
        Node n;
        n.op = Op::Param;
        n.value = std::move(v);
        NodeId id = push(std::move(n));
        params_.push_back(id);
        return id;
    }

    NodeId matmul(NodeId a, NodeId b) { return unary_or_binary(Op::MatMul, a, b); }
    NodeId add(NodeId a, NodeId b) { return unary_or_binary(Op::Add, a, b); }
    NodeId sub(NodeId a, NodeId b) { return unary_or_binary(Op::Sub, a, b); }
    NodeId hadamard(NodeId a, NodeId b) { return unary_or_binary(Op::Hadamard, a, b); }
    NodeId add_rowvec(NodeId a, NodeId row) { return unary_or_binary(Op::AddRowVec, a, row); }
    NodeId concat_cols(NodeId a, NodeId b) { return unary_or_binary(Op::ConcatCols, a, b); }
    NodeId concat_rows(NodeId a, NodeId b) { return unary_or_binary(Op::ConcatRows, a, b); }
    NodeId tanh(NodeId a) { return unary_or_binary(Op::Tanh, a, -1); }
    NodeId relu(NodeId a) { return unary_or_binary(Op::Relu, a, -1); }
    NodeId log(NodeId a) { return unary_or_binary(Op::Log, a, -1); }
    NodeId transpose(NodeId a) { return unary_or_binary(Op::Transpose, a, -1); }
    NodeId reduce_sum(NodeId a) { return unary_or_binary(Op::ReduceSum, a, -1); }
    NodeId reduce_mean(NodeId a) { return unary_or_binary(Op::ReduceMean, a, -1); }

    NodeId scale(NodeId a, double c) {
        Node n;
        n.op = Op::Scale;
        n.parents = {a, -1, -1};
        n.scalar = c;
        n.value = eval(n);
        return push(std::move(n));
    }

    NodeId softmax_rows(NodeId a, std::optional<BoolMatrix> mask = std::nullopt) {
        Node n;
        n.op = Op::SoftmaxRows;
        n.parents = {a, -1, -1};
        n.mask = std::move(mask);
        n.value = eval(n);
        return push(std::move(n));
    }

    NodeId layer_norm_rows(NodeId x, NodeId gain, NodeId bias, double eps) {
        Node n;
        n.op = Op::LayerNormRows;
        n.parents = {x, gain, bias};
        n.scalar = eps;
        n.value = eval(n);
        return push(std::move(n));
    }

    NodeId slice_cols(NodeId a, std::size_t c0, std::size_t c1) {
        Node n;
        n.op = Op::SliceCols;
        n.parents = {a, -1, -1};
        n.i0 = c0;
        n.i1 = c1;
        n.value = eval(n);
        return push(std::move(n));
    }

    NodeId slice_rows(NodeId a, std::size_t r0, std::size_t r1) {
        Node n;
        n.op = Op::SliceRows;
        n.parents = {a, -1, -1};
        n.i0 = r0;
        n.i1 = r1;
        n.value = eval(n);
        return push(std::move(n));
    }

    /// Re-run the forward pass for every non-leaf node, in tape order.
    void recompute() {
        for (Node& n : nodes_)
            if (n.op != Op::Input && n.op != Op::Param) n.value = eval(n);
    }

    /// Accumulate d(loss)/d(node) for every node, loss must be 1x1.
    void backward(NodeId loss_node) {
        Node& loss = nodes_[static_cast<std::size_t>(loss_node)];
        if (loss.value.rows != 1 || loss.value.cols != 1)
            throw ContractError("backward: loss node must be scalar, got " + loss.value.shape_str());
        for (Node& n : nodes_) {
            n.grad = Matrix(n.value.rows, n.value.cols, 0.0);
        }
        loss.grad.at(0, 0) = 1.0;
        for (std::size_t idx = static_cast<std::size_t>(loss_node) + 1; idx-- > 0;) {
            propagate(nodes_[idx]);
        }
    }

    /// Max over all parameter entries of the relative discrepancy between the
    /// analytic gradient and a central finite difference of the loss.
    double grad_check(NodeId loss_node, double step = 1e-5) {
        if (step < 1e-7 || step > 1e-4)
            throw ContractError("grad_check: step outside [1e-7, 1e-4]");
        backward(loss_node);
        std::vector<Matrix> analytic;
        analytic.reserve(params_.size());
        for (NodeId p : params_) analytic.push_back(nodes_[static_cast<std::size_t>(p)].grad);

        double worst = 0.0;
        for (std::size_t pi = 0; pi < params_.size(); ++pi) {
            Node& pn = nodes_[static_cast<std::size_t>(params_[pi])];
            for (std::size_t k = 0; k < pn.value.data.size(); ++k) {
                const double saved = pn.value.data[k];
                pn.value.data[k] = saved + step;
                recompute();
                const double up = nodes_[static_cast<std::size_t>(loss_node)].value.at(0, 0);
                pn.value.data[k] = saved - step;
                recompute();
                const double dn = nodes_[static_cast<std::size_t>(loss_node)].value.at(0, 0);
                pn.value.data[k] = saved;
                const double numeric = (up - dn) / (2.0 * step);
                const double a = analytic[pi].data[k];
                const double rel = std::abs(a - numeric) /
                                   std::max({1.0, std::abs(a), std::abs(numeric)});
                worst = std::max(worst, rel);
            }
        }
        recompute();
        return worst;
    }

private:
    NodeId push(Node n) {
        nodes_.push_back(std::move(n));
        return static_cast<NodeId>(nodes_.size() - 1);
    }

    NodeId unary_or_binary(Op op, NodeId a, NodeId b) {
        Node n;
        n.op = op;
        n.parents = {a, b, -1};
        n.value = eval(n);
        return push(std::move(n));
    }

    const Matrix& pval(const Node& n, int slot) const {
        return nodes_[static_cast<std::size_t>(n.parents[static_cast<std::size_t>(slot)])].value;
    }
    Matrix& pgrad(Node& n, int slot) {
        return nodes_[static_cast<std::size_t>(n.parents[static_cast<std::size_t>(slot)])].grad;
    }

    Matrix eval(const Node& n) const {
        switch (n.op) {
            case Op::Input:
            case Op::Param:
                return n.value;
            case Op::MatMul:
                return tweetcast::matmul(pval(n, 0), pval(n, 1));
            case Op::Add:
                return tweetcast::add(pval(n, 0), pval(n, 1));
            case Op::Sub:
                return tweetcast::sub(pval(n, 0), pval(n, 1));
            case Op::Scale:
                return tweetcast::scale(pval(n, 0), n.scalar);
            case Op::AddRowVec:
                return tweetcast::add_rowvec(pval(n, 0), pval(n, 1));
            case Op::Hadamard:
                return tweetcast::hadamard(pval(n, 0), pval(n, 1));
            case Op::Tanh:
                return tweetcast::map_tanh(pval(n, 0));
            case Op::Relu:
                return tweetcast::map_relu(pval(n, 0));
            case Op::Log:
                return tweetcast::map_log(pval(n, 0));
            case Op::SoftmaxRows:
                return tweetcast::softmax_rows(pval(n, 0), n.mask);
            case Op::LayerNormRows: {
                const Matrix& g = pval(n, 1);
                const Matrix& b = pval(n, 2);
                return tweetcast::layer_norm_rows(pval(n, 0),
                                                  std::vector<double>(g.data.begin(), g.data.end()),
                                                  std::vector<double>(b.data.begin(), b.data.end()),
                                                  n.scalar);
            }
            case Op::ConcatCols:
                return tweetcast::concat_cols(pval(n, 0), pval(n, 1));
            case Op::ConcatRows:
                return tweetcast::concat_rows(pval(n, 0), pval(n, 1));
            case Op::SliceCols:
                return tweetcast::slice_cols(pval(n, 0), n.i0, n.i1);
            case Op::SliceRows:
                return tweetcast::slice_rows(pval(n, 0), n.i0, n.i1);
            case Op::Transpose:
                return tweetcast::transpose(pval(n, 0));
            case Op::ReduceSum: {
                Matrix s(1, 1);
                s.at(0, 0) = tweetcast::reduce_sum(pval(n, 0));
                return s;
            }
            case Op::ReduceMean: {
                Matrix s(1, 1);
                s.at(0, 0) = tweetcast::reduce_mean(pval(n, 0));
                return s;
            }
        }
        throw ContractError("eval: unknown op");
    }

    void propagate(Node& n) {
        switch (n.op) {
            case Op::Input:
            case Op::Param:
                return;
            case Op::MatMul: {
                // dA += dC B^T ; dB += A^T dC
                const Matrix& a = pval(n, 0);
                const Matrix& b = pval(n, 1);
                Matrix da = tweetcast::matmul(n.grad, tweetcast::transpose(b));
                Matrix db = tweetcast::matmul(tweetcast::transpose(a), n.grad);
                accumulate(pgrad(n, 0), da);
                accumulate(pgrad(n, 1), db);
                return;
            }
            case Op::Add:
                accumulate(pgrad(n, 0), n.grad);
                accumulate(pgrad(n, 1), n.grad);
                return;
            case Op::Sub: {
                accumulate(pgrad(n, 0), n.grad);
                Matrix neg = tweetcast::scale(n.grad, -1.0);
                accumulate(pgrad(n, 1), neg);
                return;
            }
            case Op::Scale: {
                Matrix g = tweetcast::scale(n.grad, n.scalar);
                accumulate(pgrad(n, 0), g);
                return;
            }
            case Op::AddRowVec: {
                accumulate(pgrad(n, 0), n.grad);
                Matrix& rg = pgrad(n, 1);
                for (std::size_t i = 0; i < n.grad.rows; ++i)
                    for (std::size_t j = 0; j < n.grad.cols; ++j)
                        rg.at(0, j) += n.grad.at(i, j);
                return;
            }
            case Op::Hadamard: {
                Matrix da = tweetcast::hadamard(n.grad, pval(n, 1));
                Matrix db = tweetcast::hadamard(n.grad, pval(n, 0));
                accumulate(pgrad(n, 0), da);
                accumulate(pgrad(n, 1), db);
                return;
            }
            case Op::Tanh: {
                Matrix& pg = pgrad(n, 0);
                for (std::size_t i = 0; i < n.value.data.size(); ++i) {
                    const double y = n.value.data[i];
                    pg.data[i] += n.grad.data[i] * (1.0 - y * y);
                }
                return;
            }
            case Op::Relu: {
                const Matrix& x = pval(n, 0);
                Matrix& pg = pgrad(n, 0);
                for (std::size_t i = 0; i < x.data.size(); ++i)
                    if (x.data[i] > 0.0) pg.data[i] += n.grad.data[i];
                return;
            }
            case Op::Log: {
                const Matrix& x = pval(n, 0);
                Matrix& pg = pgrad(n, 0);
                for (std::size_t i = 0; i < x.data.size(); ++i)
                    pg.data[i] += n.grad.data[i] / x.data[i];
                return;
            }
            case Op::SoftmaxRows: {
                // dx = y * (dy - sum(dy*y)) per row; masked entries stay 0.
                const Matrix& y = n.value;
                Matrix& pg = pgrad(n, 0);
                for (std::size_t i = 0; i < y.rows; ++i) {
                    double dot = 0.0;
                    for (std::size_t j = 0; j < y.cols; ++j)
                        dot += n.grad.at(i, j) * y.at(i, j);
                    for (std::size_t j = 0; j < y.cols; ++j)
                        pg.at(i, j) += y.at(i, j) * (n.grad.at(i, j) - dot);
                }
                return;
            }
            case Op::LayerNormRows: {
                const Matrix& x = pval(n, 0);
                const Matrix& gain = pval(n, 1);
                const double eps = n.scalar;
                Matrix& dx = pgrad(n, 0);
                Matrix& dgain = pgrad(n, 1);
                Matrix& dbias = pgrad(n, 2);
                const double cols = static_cast<double>(x.cols);
                for (std::size_t i = 0; i < x.rows; ++i) {
                    double mean = 0.0;
                    for (std::size_t j = 0; j < x.cols; ++j) mean += x.at(i, j);
                    mean /= cols;
                    double var = 0.0;
                    for (std::size_t j = 0; j < x.cols; ++j) {
                        const double d = x.at(i, j) - mean;
                        var += d * d;
                    }
                    var /= cols;
                    const double inv = 1.0 / std::sqrt(var + eps);
                    // dxhat_j = dy_j * gain_j; then the standard two-moment correction.
                    double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
                    for (std::size_t j = 0; j < x.cols; ++j) {
                        const double xhat = (x.at(i, j) - mean) * inv;
                        const double dxhat = n.grad.at(i, j) * gain.at(0, j);
                        sum_dxhat += dxhat;
                        sum_dxhat_xhat += dxhat * xhat;
                        dgain.at(0, j) += n.grad.at(i, j) * xhat;
                        dbias.at(0, j) += n.grad.at(i, j);
                    }
                    for (std::size_t j = 0; j < x.cols; ++j) {
                        const double xhat = (x.at(i, j) - mean) * inv;
                        const double dxhat = n.grad.at(i, j) * gain.at(0, j);
                        dx.at(i, j) += inv * (dxhat - sum_dxhat / cols - xhat * sum_dxhat_xhat / cols);
                    }
                }
                return;
            }
            case Op::ConcatCols: {
                const Matrix& a = pval(n, 0);
                Matrix& ga = pgrad(n, 0);
                Matrix& gb = pgrad(n, 1);
                for (std::size_t i = 0; i < n.grad.rows; ++i) {
                    for (std::size_t j = 0; j < a.cols; ++j) ga.at(i, j) += n.grad.at(i, j);
                    for (std::size_t j = a.cols; j < n.grad.cols; ++j)
                        gb.at(i, j - a.cols) += n.grad.at(i, j);
                }
                return;
            }
            case Op::ConcatRows: {
                const Matrix& a = pval(n, 0);
                Matrix& ga = pgrad(n, 0);
                Matrix& gb = pgrad(n, 1);
                for (std::size_t i = 0; i < a.rows; ++i)
                    for (std::size_t j = 0; j < n.grad.cols; ++j) ga.at(i, j) += n.grad.at(i, j);
                for (std::size_t i = a.rows; i < n.grad.rows; ++i)
                    for (std::size_t j = 0; j < n.grad.cols; ++j)
                        gb.at(i - a.rows, j) += n.grad.at(i, j);
                return;
            }
            case Op::SliceCols: {
                Matrix& pg = pgrad(n, 0);
                for (std::size_t i = 0; i < n.grad.rows; ++i)
                    for (std::size_t j = 0; j < n.grad.cols; ++j)
                        pg.at(i, n.i0 + j) += n.grad.at(i, j);
                return;
            }
            case Op::SliceRows: {
                Matrix& pg = pgrad(n, 0);
                for (std::size_t i = 0; i < n.grad.rows; ++i)
                    for (std::size_t j = 0; j < n.grad.cols; ++j)
                        pg.at(n.i0 + i, j) += n.grad.at(i, j);
                return;
            }
            case Op::Transpose: {
                Matrix gt = tweetcast::transpose(n.grad);
                accumulate(pgrad(n, 0), gt);
                return;
            }
            case Op::ReduceSum: {
                Matrix& pg = pgrad(n, 0);
                const double g = n.grad.at(0, 0);
                for (double& v : pg.data) v += g;
                return;
            }
            case Op::ReduceMean: {
                Matrix& pg = pgrad(n, 0);
                const double g = n.grad.at(0, 0) / static_cast<double>(pg.data.size());
                for (double& v : pg.data) v += g;
                return;
            }
        }
    }

    static void accumulate(Matrix& target, const Matrix& g) {
        for (std::size_t i = 0; i < target.data.size(); ++i) target.data[i] += g.data[i];
    }

    std::vector<Node> nodes_;
    std::vector<NodeId> params_;
};

} // namespace tweetcast
