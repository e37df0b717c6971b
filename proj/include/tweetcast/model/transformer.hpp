#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tweetcast/core/graph.hpp"
#include "tweetcast/core/matrix.hpp"
#include "tweetcast/core/rng.hpp"
#include "tweetcast/data/encoding.hpp"
#include "tweetcast/data/windows.hpp"
#include "tweetcast/model/attention.hpp"
#include "tweetcast/model/config.hpp"

namespace tweetcast {

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace detail

/// Encoder-decoder attention forecaster over fused traffic/tweet windows.
///
/// The encoder consumes time-encoded fused feature rows; the decoder is
/// autoregressive over per-segment TPS rows with a causal mask, starting
/// from the last observed step. Every forward pass is built on a DiffGraph,
/// so training and inference share one numeric path.
class ForecastModel {
public:
    using NodeId = DiffGraph::NodeId;
    using ParamMap = std::map<std::string, NodeId>;

    explicit ForecastModel(ModelConfig cfg) : cfg_(cfg) {
        cfg_.validate();
        init_params();
    }

    const ModelConfig& config() const { return cfg_; }

    std::vector<std::pair<std::string, Matrix>>& parameters() { return params_; }
    const std::vector<std::pair<std::string, Matrix>>& parameters() const { return params_; }

    const Matrix& param(const std::string& name) const {
        for (const auto& [n, m] : params_)
            if (n == name) return m;
        throw ContractError("no parameter named '" + name + "'");
    }

    Matrix& param(const std::string& name) {
        for (auto& [n, m] : params_)
            if (n == name) return m;
        throw ContractError("no parameter named '" + name + "'");
    }

    std::size_t parameter_count() const {
        std::size_t total = 0;
        for (const auto& [n, m] : params_) total += m.size();
        return total;
    }

    /// Closed-form scalar parameter count for a config.
    static std::size_t expected_parameter_count(const ModelConfig& c) {
        const std::size_t d = c.d_model, ff = c.ff(), m = c.segments;
        const std::size_t attn = 4 * d * d;  // q,k,v over heads plus the output projection
        const std::size_t ffn = d * ff + ff + ff * d + d;
        const std::size_t ln = 2 * d;
        std::size_t total = 0;
        total += c.fused_dim() * d + d;  // encoder embedding
        total += m * d + d;              // decoder token embedding
        if (c.use_time_encoder) total += 2 * d * (2 * d + TimeFeatures::kCount);
        total += c.encoder_layers * (attn + ln + ffn + ln);
        total += c.decoder_layers * (attn + ln + attn + ln + ffn + ln);
        total += d * m + m;  // output head
        return total;
    }

    // ---- graph builders ----------------------------------------------

    ParamMap push_params(DiffGraph& g) const {
        ParamMap map;
        for (const auto& [name, value] : params_) map.emplace(name, g.param(value));
        return map;
    }

    /// Embedding + time encoding of one side's raw rows.
    NodeId graph_encode_side(DiffGraph& g, const ParamMap& p, NodeId raw,
                             const std::vector<std::int64_t>& timestamps, std::size_t pos0,
                             bool decoder_side) const {
        const std::string side = decoder_side ? "dec" : "enc";
        NodeId emb = g.add_rowvec(g.matmul(raw, p.at("embed_" + side + ".w")),
                                  p.at("embed_" + side + ".b"));
        const std::size_t len = timestamps.size();
        Matrix tau(len, cfg_.d_model);
        for (std::size_t i = 0; i < len; ++i) {
            const auto row = sinusoid_row(pos0 + i, cfg_.d_model);
            for (std::size_t j = 0; j < row.size(); ++j) tau.at(i, j) = row[j];
        }
        NodeId tau_node = g.input(std::move(tau));
        if (!cfg_.use_time_encoder) return g.add(emb, tau_node);
        NodeId tf_node = g.input(time_feature_matrix(timestamps));
        NodeId joined = g.concat_cols(g.concat_cols(emb, tau_node), tf_node);
        return g.matmul(joined, g.transpose(p.at("time_" + side + ".w")));
    }

    NodeId graph_multi_head(DiffGraph& g, const ParamMap& p, const std::string& prefix, NodeId x_q,
                            NodeId x_kv, const std::optional<BoolMatrix>& mask) const {
        const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(cfg_.d_k()));
        NodeId joined = -1;
        for (std::size_t h = 0; h < cfg_.heads; ++h) {
            const std::string hs = std::to_string(h);
            NodeId q = g.matmul(x_q, p.at(prefix + ".q" + hs));
            NodeId k = g.matmul(x_kv, p.at(prefix + ".k" + hs));
            NodeId v = g.matmul(x_kv, p.at(prefix + ".v" + hs));
            NodeId probs = g.softmax_rows(g.scale(g.matmul(q, g.transpose(k)), inv_sqrt_dk), mask);
            NodeId head = g.matmul(probs, v);
            joined = h == 0 ? head : g.concat_cols(joined, head);
        }
        return g.matmul(joined, p.at(prefix + ".o"));
    }

    NodeId graph_layer_norm(DiffGraph& g, const ParamMap& p, const std::string& prefix,
                            NodeId x) const {
        return g.layer_norm_rows(x, p.at(prefix + ".g"), p.at(prefix + ".b"), cfg_.layer_norm_eps);
    }

    NodeId graph_ffn(DiffGraph& g, const ParamMap& p, const std::string& prefix, NodeId x) const {
        NodeId hidden = g.relu(g.add_rowvec(g.matmul(x, p.at(prefix + ".w1")), p.at(prefix + ".b1")));
        return g.add_rowvec(g.matmul(hidden, p.at(prefix + ".w2")), p.at(prefix + ".b2"));
    }

    /// Encoder stack over already-encoded inputs; post-norm residual blocks.
    NodeId graph_encoder(DiffGraph& g, const ParamMap& p, NodeId encoded) const {
        NodeId x = encoded;
        for (std::size_t layer = 0; layer < cfg_.encoder_layers; ++layer) {
            const std::string lp = "enc" + std::to_string(layer);
            NodeId attn = graph_multi_head(g, p, lp + ".attn", x, x, std::nullopt);
            x = graph_layer_norm(g, p, lp + ".ln1", g.add(x, attn));
            NodeId ff = graph_ffn(g, p, lp + ".ff", x);
            x = graph_layer_norm(g, p, lp + ".ln2", g.add(x, ff));
        }
        return x;
    }

    /// Decoder stack over raw TPS token rows; returns unclamped per-position
    /// predictions (L x segments).
    NodeId graph_decoder(DiffGraph& g, const ParamMap& p, NodeId memory, NodeId tokens,
                         const std::vector<std::int64_t>& token_ts) const {
        const std::size_t len = token_ts.size();
        NodeId x = graph_encode_side(g, p, tokens, token_ts, cfg_.input_len - 1, true);
        const BoolMatrix causal = BoolMatrix::causal(len);
        for (std::size_t layer = 0; layer < cfg_.decoder_layers; ++layer) {
            const std::string lp = "dec" + std::to_string(layer);
            NodeId self = graph_multi_head(g, p, lp + ".self", x, x, causal);
            x = graph_layer_norm(g, p, lp + ".ln1", g.add(x, self));
            NodeId cross = graph_multi_head(g, p, lp + ".cross", x, memory, std::nullopt);
            x = graph_layer_norm(g, p, lp + ".ln2", g.add(x, cross));
            NodeId ff = graph_ffn(g, p, lp + ".ff", x);
            x = graph_layer_norm(g, p, lp + ".ln3", g.add(x, ff));
        }
        return g.add_rowvec(g.matmul(x, p.at("head.w")), p.at("head.b"));
    }

    // ---- training graph ----------------------------------------------

    struct TrainingGraph {
        DiffGraph graph;
        ParamMap params;
        NodeId predictions = -1;  // horizon x segments, unclamped
        NodeId loss = -1;         // scalar MSE
    };

    /// Teacher-forced forward pass with the MSE loss on the full horizon.
    TrainingGraph build_training_graph(const WindowedSample& w) const {
        check_window(w);
        TrainingGraph tg;
        DiffGraph& g = tg.graph;
        tg.params = push_params(g);
        NodeId enc_in =
            graph_encode_side(g, tg.params, g.input(w.input), w.input_ts, 0, false);
        NodeId memory = graph_encoder(g, tg.params, enc_in);

        Matrix tokens(cfg_.horizon, cfg_.segments);
        std::vector<std::int64_t> token_ts(cfg_.horizon);
        for (std::size_t m = 0; m < cfg_.segments; ++m) tokens.at(0, m) = w.last_input_tps[m];
        token_ts[0] = w.input_ts.back();
        for (std::size_t j = 1; j < cfg_.horizon; ++j) {
            for (std::size_t m = 0; m < cfg_.segments; ++m)
                tokens.at(j, m) = w.target_tps.at(j - 1, m);
            token_ts[j] = w.target_ts[j - 1];
        }
        tg.predictions = graph_decoder(g, tg.params, memory, g.input(std::move(tokens)), token_ts);
        NodeId diff = g.sub(tg.predictions, g.input(w.target_tps));
        tg.loss = g.reduce_mean(g.hadamard(diff, diff));
        return tg;
    }

    // ---- value-level API ----------------------------------------------

    /// Encoder over already-encoded inputs (one row per input position).
    Matrix encoder_forward(const Matrix& encoded_inputs) const {
        if (encoded_inputs.rows != cfg_.input_len || encoded_inputs.cols != cfg_.d_model)
            throw ContractError("encoder_forward: expected " + std::to_string(cfg_.input_len) +
                                "x" + std::to_string(cfg_.d_model) + ", got " +
                                encoded_inputs.shape_str());
        DiffGraph g;
        ParamMap p = push_params(g);
        return g.value(graph_encoder(g, p, g.input(encoded_inputs)));
    }

    /// Embedding plus time encoding of a window's input rows.
    Matrix encode_encoder_inputs(const WindowedSample& w) const {
        check_window(w);
        DiffGraph g;
        ParamMap p = push_params(g);
        return g.value(graph_encode_side(g, p, g.input(w.input), w.input_ts, 0, false));
    }

    Matrix encoder_memory(const WindowedSample& w) const {
        check_window(w);
        DiffGraph g;
        ParamMap p = push_params(g);
        NodeId enc_in = graph_encode_side(g, p, g.input(w.input), w.input_ts, 0, false);
        return g.value(graph_encoder(g, p, enc_in));
    }

    /// Per-position decoder outputs for a token prefix (unclamped).
    Matrix decoder_forward(const Matrix& memory, const Matrix& prefix_tokens,
                           const std::vector<std::int64_t>& token_ts) const {
        if (prefix_tokens.rows == 0) throw ContractError("decoder_forward: empty prefix");
        if (prefix_tokens.rows != token_ts.size())
            throw ContractError("decoder_forward: token/timestamp length mismatch");
        if (prefix_tokens.cols != cfg_.segments)
            throw ContractError("decoder_forward: prefix must have one column per segment");
        DiffGraph g;
        ParamMap p = push_params(g);
        return g.value(
            graph_decoder(g, p, g.input(memory), g.input(prefix_tokens), token_ts));
    }

    /// Next-step prediction: the last row of the per-position outputs.
    std::vector<double> decoder_step(const Matrix& memory, const Matrix& prefix_tokens,
                                     const std::vector<std::int64_t>& token_ts) const {
        const Matrix all = decoder_forward(memory, prefix_tokens, token_ts);
        std::vector<double> out(all.cols);
        for (std::size_t m = 0; m < all.cols; ++m) out[m] = all.at(all.rows - 1, m);
        return out;
    }

    /// Autoregressive rollout over the full horizon. Each step's prediction
    /// is clamped to [0, 1] (TPS domain) and that clamped value is both the
    /// output row and the token fed back to the decoder.
    Matrix predict(const WindowedSample& w) const {
        check_window(w);
        DiffGraph g;
        ParamMap p = push_params(g);
        NodeId enc_in = graph_encode_side(g, p, g.input(w.input), w.input_ts, 0, false);
        NodeId memory = graph_encoder(g, p, enc_in);

        Matrix tokens(1, cfg_.segments);
        for (std::size_t m = 0; m < cfg_.segments; ++m) tokens.at(0, m) = w.last_input_tps[m];
        std::vector<std::int64_t> token_ts = {w.input_ts.back()};

        Matrix out(cfg_.horizon, cfg_.segments);
        for (std::size_t j = 0; j < cfg_.horizon; ++j) {
            NodeId step = graph_decoder(g, p, memory, g.input(tokens), token_ts);
            const Matrix& all = g.value(step);
            Matrix next(1, cfg_.segments);
            for (std::size_t m = 0; m < cfg_.segments; ++m) {
                const double clamped = std::min(1.0, std::max(0.0, all.at(all.rows - 1, m)));
                next.at(0, m) = clamped;
                out.at(j, m) = clamped;
            }
            if (j + 1 < cfg_.horizon) {
                tokens = concat_rows(tokens, next);
                token_ts.push_back(w.target_ts[j]);
            }
        }
        return out;
    }

private:
    void check_window(const WindowedSample& w) const {
        if (w.input.rows != cfg_.input_len || w.input.cols != cfg_.fused_dim())
            throw ContractError("window input is " + w.input.shape_str() + ", model expects " +
                                std::to_string(cfg_.input_len) + "x" +
                                std::to_string(cfg_.fused_dim()));
        if (w.target_ts.size() < cfg_.horizon)
            throw ContractError("window target span shorter than the model horizon");
    }

    void add_param(const std::string& name, std::size_t rows, std::size_t cols,
                   std::size_t fan_in) {
        RngState rng = RngState(cfg_.init_seed).derive(detail::fnv1a(name));
        const double lim = std::sqrt(1.0 / static_cast<double>(fan_in));
        params_.emplace_back(name, Matrix::random_uniform(rows, cols, -lim, lim, rng));
    }

    void add_const_param(const std::string& name, std::size_t rows, std::size_t cols, double v) {
        params_.emplace_back(name, Matrix(rows, cols, v));
    }

    void add_attention(const std::string& prefix) {
        const std::size_t d = cfg_.d_model, dk = cfg_.d_k();
        for (std::size_t h = 0; h < cfg_.heads; ++h) {
            const std::string hs = std::to_string(h);
            add_param(prefix + ".q" + hs, d, dk, d);
            add_param(prefix + ".k" + hs, d, dk, d);
            add_param(prefix + ".v" + hs, d, dk, d);
        }
        add_param(prefix + ".o", cfg_.heads * dk, d, cfg_.heads * dk);
    }

    void add_layer_norm(const std::string& prefix) {
        add_const_param(prefix + ".g", 1, cfg_.d_model, 1.0);
        add_const_param(prefix + ".b", 1, cfg_.d_model, 0.0);
    }

    void add_ffn(const std::string& prefix) {
        const std::size_t d = cfg_.d_model, ff = cfg_.ff();
        add_param(prefix + ".w1", d, ff, d);
        add_const_param(prefix + ".b1", 1, ff, 0.0);
        add_param(prefix + ".w2", ff, d, ff);
        add_const_param(prefix + ".b2", 1, d, 0.0);
    }

    void init_params() {
        const std::size_t d = cfg_.d_model;
        add_param("embed_enc.w", cfg_.fused_dim(), d, cfg_.fused_dim());
        add_const_param("embed_enc.b", 1, d, 0.0);
        add_param("embed_dec.w", cfg_.segments, d, cfg_.segments);
        add_const_param("embed_dec.b", 1, d, 0.0);
        if (cfg_.use_time_encoder) {
            const std::size_t w_cols = 2 * d + TimeFeatures::kCount;
            add_param("time_enc.w", d, w_cols, w_cols);
            add_param("time_dec.w", d, w_cols, w_cols);
        }
        for (std::size_t layer = 0; layer < cfg_.encoder_layers; ++layer) {
            const std::string lp = "enc" + std::to_string(layer);
            add_attention(lp + ".attn");
            add_layer_norm(lp + ".ln1");
            add_ffn(lp + ".ff");
            add_layer_norm(lp + ".ln2");
        }
        for (std::size_t layer = 0; layer < cfg_.decoder_layers; ++layer) {
            const std::string lp = "dec" + std::to_string(layer);
            add_attention(lp + ".self");
            add_layer_norm(lp + ".ln1");
            add_attention(lp + ".cross");
            add_layer_norm(lp + ".ln2");
            add_ffn(lp + ".ff");
            add_layer_norm(lp + ".ln3");
        }
        add_param("head.w", d, cfg_.segments, d);
        add_const_param("head.b", 1, cfg_.segments, 0.0);
    }

    ModelConfig cfg_;
    std::vector<std::pair<std::string, Matrix>> params_;
};

} // namespace tweetcast
