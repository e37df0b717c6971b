#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "test_util.hpp"
#include "tweetcast/core/rng.hpp"
#include "tweetcast/model/attention.hpp"
#include "tweetcast/model/checkpoint.hpp"
#include "tweetcast/model/config.hpp"
#include "tweetcast/model/transformer.hpp"

using namespace tweetcast;

namespace {

ModelConfig toy_config(std::size_t segments = 2, std::size_t d = 8, std::size_t heads = 2,
                       std::size_t in_len = 4, std::size_t horizon = 3) {
    ModelConfig c;
    c.segments = segments;
    c.features = 6;
    c.d_model = d;
    c.heads = heads;
    c.encoder_layers = 1;
    c.decoder_layers = 1;
    c.ff_dim = 2 * d;
    c.input_len = in_len;
    c.horizon = horizon;
    c.init_seed = 7;
    return c;
}

WindowedSample random_window(const ModelConfig& cfg, RngState& rng) {
    WindowedSample w;
    const std::int64_t start = epoch_from_civil(2020, 5, 1);
    w.input = Matrix::random_uniform(cfg.input_len, cfg.fused_dim(), -1.0, 1.0, rng);
    for (std::size_t i = 0; i < cfg.input_len; ++i)
        w.input_ts.push_back(start + static_cast<std::int64_t>(i) * kBinSeconds);
    w.target_tps = Matrix::random_uniform(cfg.horizon, cfg.segments, 0.0, 1.0, rng);
    for (std::size_t i = 0; i < cfg.horizon; ++i)
        w.target_ts.push_back(start + static_cast<std::int64_t>(cfg.input_len + i) * kBinSeconds);
    w.last_input_tps.assign(cfg.segments, 0.0);
    for (std::size_t m = 0; m < cfg.segments; ++m) w.last_input_tps[m] = rng.uniform(0.0, 1.0);
    return w;
}

void zero_all_params(ForecastModel& model) {
    for (auto& [name, m] : model.parameters()) {
        const bool is_norm_gain = name.size() > 2 && name.substr(name.size() - 2) == ".g";
        for (double& v : m.data) v = is_norm_gain ? 1.0 : 0.0;
    }
}

} // namespace

TEST_CASE("scaled_dot_attention base cases") {
    Matrix q{{1.0, 0.0}};
    Matrix k{{1.0, 0.0}};
    Matrix v{{3.0, -2.0, 5.0}};
    Matrix out = scaled_dot_attention(q, k, v);
    CHECK(out.rows == 1);
    CHECK(max_abs_diff(out, v) == 0.0);

    // Zero queries give uniform attention: output is the mean row of V.
    Matrix q0(2, 3, 0.0);
    RngState rng(5);
    Matrix keys = Matrix::random_uniform(4, 3, -1.0, 1.0, rng);
    Matrix vals = Matrix::random_uniform(4, 5, -1.0, 1.0, rng);
    Matrix got = scaled_dot_attention(q0, keys, vals);
    for (std::size_t j = 0; j < 5; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < 4; ++i) mean += vals.at(i, j) / 4.0;
        CHECK(got.at(0, j) == doctest::Approx(mean).epsilon(1e-12));
        CHECK(got.at(1, j) == doctest::Approx(mean).epsilon(1e-12));
    }
}

TEST_CASE("scaled_dot_attention equals explicit composition") {
    RngState rng(11);
    Matrix q = Matrix::random_uniform(4, 8, -1.0, 1.0, rng);
    Matrix k = Matrix::random_uniform(4, 8, -1.0, 1.0, rng);
    Matrix v = Matrix::random_uniform(4, 8, -1.0, 1.0, rng);
    Matrix want = matmul(softmax_rows(scale(matmul(q, transpose(k)), 1.0 / std::sqrt(8.0))), v);
    CHECK(max_abs_diff(scaled_dot_attention(q, k, v), want) < 1e-12);
}

TEST_CASE("attention rows sum to one under the causal mask") {
    RngState rng(3);
    Matrix q = Matrix::random_uniform(6, 4, -2.0, 2.0, rng);
    Matrix scores = scale(matmul(q, transpose(q)), 0.5);
    Matrix probs = softmax_rows(scores, BoolMatrix::causal(6));
    for (std::size_t i = 0; i < 6; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < 6; ++j) {
            sum += probs.at(i, j);
            if (j > i) CHECK(probs.at(i, j) == 0.0);
        }
        CHECK(std::abs(sum - 1.0) < 1e-9);
    }
}

TEST_CASE("multi_head with one identity head reduces to scaled_dot_attention") {
    RngState rng(13);
    const std::size_t d = 6;
    AttentionParams p;
    p.w_q = {Matrix::identity(d)};
    p.w_k = {Matrix::identity(d)};
    p.w_v = {Matrix::identity(d)};
    p.w_o = Matrix::identity(d);
    Matrix x = Matrix::random_uniform(5, d, -1.0, 1.0, rng);
    CHECK(max_abs_diff(multi_head(x, x, p), scaled_dot_attention(x, x, x)) < 1e-12);
}

TEST_CASE("multi_head with zero output projection is zero") {
    RngState rng(17);
    const std::size_t d = 8, h = 2;
    AttentionParams p;
    for (std::size_t i = 0; i < h; ++i) {
        p.w_q.push_back(Matrix::random_uniform(d, d / h, -1.0, 1.0, rng));
        p.w_k.push_back(Matrix::random_uniform(d, d / h, -1.0, 1.0, rng));
        p.w_v.push_back(Matrix::random_uniform(d, d / h, -1.0, 1.0, rng));
    }
    p.w_o = Matrix(d, d, 0.0);
    Matrix x = Matrix::random_uniform(4, d, -1.0, 1.0, rng);
    Matrix out = multi_head(x, x, p);
    for (double v : out.data) CHECK(v == 0.0);
}

TEST_CASE("multi_head equals a hand-rolled per-head loop") {
    RngState rng(19);
    const std::size_t d = 16, h = 8, dk = d / h;
    AttentionParams p;
    for (std::size_t i = 0; i < h; ++i) {
        p.w_q.push_back(Matrix::random_uniform(d, dk, -0.7, 0.7, rng));
        p.w_k.push_back(Matrix::random_uniform(d, dk, -0.7, 0.7, rng));
        p.w_v.push_back(Matrix::random_uniform(d, dk, -0.7, 0.7, rng));
    }
    p.w_o = Matrix::random_uniform(h * dk, d, -0.7, 0.7, rng);
    Matrix xq = Matrix::random_uniform(5, d, -1.0, 1.0, rng);
    Matrix xkv = Matrix::random_uniform(7, d, -1.0, 1.0, rng);

    Matrix joined;
    for (std::size_t i = 0; i < h; ++i) {
        Matrix q = matmul(xq, p.w_q[i]);
        Matrix k = matmul(xkv, p.w_k[i]);
        Matrix v = matmul(xkv, p.w_v[i]);
        Matrix head = matmul(softmax_rows(scale(matmul(q, transpose(k)),
                                                1.0 / std::sqrt(static_cast<double>(dk)))),
                             v);
        joined = i == 0 ? head : concat_cols(joined, head);
    }
    Matrix want = matmul(joined, p.w_o);
    CHECK(max_abs_diff(multi_head(xq, xkv, p), want) < 1e-12);
}

TEST_CASE("encoder memory of identical encoded rows is constant across positions") {
    ModelConfig cfg = toy_config();
    ForecastModel model(cfg);
    Matrix zeros(cfg.input_len, cfg.d_model, 0.0);
    Matrix memory = model.encoder_forward(zeros);
    for (std::size_t i = 1; i < memory.rows; ++i)
        for (std::size_t j = 0; j < memory.cols; ++j)
            CHECK(memory.at(i, j) == memory.at(0, j));
}

TEST_CASE("encoder is permutation equivariant over encoded rows") {
    ModelConfig cfg = toy_config();
    ForecastModel model(cfg);
    RngState rng(23);
    Matrix x = Matrix::random_uniform(cfg.input_len, cfg.d_model, -1.0, 1.0, rng);
    Matrix base = model.encoder_forward(x);
    Matrix perm = x;
    for (std::size_t j = 0; j < x.cols; ++j) std::swap(perm.at(1, j), perm.at(3, j));
    Matrix swapped = model.encoder_forward(perm);
    for (std::size_t j = 0; j < x.cols; ++j) {
        CHECK(std::abs(swapped.at(1, j) - base.at(3, j)) < 1e-12);
        CHECK(std::abs(swapped.at(3, j) - base.at(1, j)) < 1e-12);
        CHECK(std::abs(swapped.at(0, j) - base.at(0, j)) < 1e-12);
    }
}

TEST_CASE("encoder memory is bitwise deterministic") {
    ModelConfig cfg = toy_config(3);
    ForecastModel model(cfg);
    RngState rng(31);
    WindowedSample w = random_window(cfg, rng);
    Matrix m1 = model.encoder_memory(w);
    Matrix m2 = model.encoder_memory(w);
    CHECK(m1.data == m2.data);
}

TEST_CASE("decoder causality is exact to the bit") {
    ModelConfig cfg = toy_config(2, 8, 2, 4, 6);
    ForecastModel model(cfg);
    RngState rng(41);
    Matrix memory = Matrix::random_uniform(cfg.input_len, cfg.d_model, -1.0, 1.0, rng);
    const std::int64_t t0 = epoch_from_civil(2020, 5, 2);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t len = 6;
        Matrix prefix = Matrix::random_uniform(len, cfg.segments, 0.0, 1.0, rng);
        std::vector<std::int64_t> ts;
        for (std::size_t i = 0; i < len; ++i)
            ts.push_back(t0 + static_cast<std::int64_t>(i) * kBinSeconds);
        Matrix base = model.decoder_forward(memory, prefix, ts);
        const std::size_t p = rng.below(len - 1);  // positions 0..p must stay fixed
        Matrix perturbed = prefix;
        for (std::size_t i = p + 1; i < len; ++i)
            for (std::size_t m = 0; m < cfg.segments; ++m)
                perturbed.at(i, m) = rng.uniform(0.0, 1.0);
        Matrix after = model.decoder_forward(memory, perturbed, ts);
        for (std::size_t i = 0; i <= p; ++i)
            for (std::size_t m = 0; m < cfg.segments; ++m)
                CHECK(after.at(i, m) == base.at(i, m));
    }
}

TEST_CASE("zeroed model emits exactly the output head bias") {
    ModelConfig cfg = toy_config();
    ForecastModel model(cfg);
    zero_all_params(model);
    Matrix& bias = model.param("head.b");
    bias.at(0, 0) = 0.25;
    bias.at(0, 1) = 0.75;
    Matrix memory(cfg.input_len, cfg.d_model, 0.0);
    Matrix prefix(1, cfg.segments, 0.0);
    const auto out = model.decoder_step(memory, prefix, {epoch_from_civil(2020, 5, 2)});
    CHECK(out[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("predict equals sequential decoder_step rollout") {
    ModelConfig cfg = toy_config(2, 8, 2, 4, 5);
    ForecastModel model(cfg);
    RngState rng(47);
    WindowedSample w = random_window(cfg, rng);
    Matrix predicted = model.predict(w);

    Matrix memory = model.encoder_memory(w);
    Matrix tokens(1, cfg.segments);
    for (std::size_t m = 0; m < cfg.segments; ++m) tokens.at(0, m) = w.last_input_tps[m];
    std::vector<std::int64_t> ts = {w.input_ts.back()};
    Matrix manual(cfg.horizon, cfg.segments);
    for (std::size_t j = 0; j < cfg.horizon; ++j) {
        const auto next = model.decoder_step(memory, tokens, ts);
        Matrix row(1, cfg.segments);
        for (std::size_t m = 0; m < cfg.segments; ++m) {
            const double clamped = std::min(1.0, std::max(0.0, next[m]));
            manual.at(j, m) = clamped;
            row.at(0, m) = clamped;  // the clamped prediction is what feeds back
        }
        if (j + 1 < cfg.horizon) {
            tokens = concat_rows(tokens, row);
            ts.push_back(w.target_ts[j]);
        }
    }
    CHECK(max_abs_diff(predicted, manual) == 0.0);
}

TEST_CASE("predict with horizon one is a single decoder step") {
    ModelConfig cfg = toy_config(2, 8, 2, 4, 1);
    ForecastModel model(cfg);
    RngState rng(53);
    WindowedSample w = random_window(cfg, rng);
    Matrix predicted = model.predict(w);
    REQUIRE(predicted.rows == 1);

    Matrix memory = model.encoder_memory(w);
    Matrix tokens(1, cfg.segments);
    for (std::size_t m = 0; m < cfg.segments; ++m) tokens.at(0, m) = w.last_input_tps[m];
    auto step = model.decoder_step(memory, tokens, {w.input_ts.back()});
    for (std::size_t m = 0; m < cfg.segments; ++m)
        CHECK(predicted.at(0, m) == std::min(1.0, std::max(0.0, step[m])));
}

TEST_CASE("untrained model output is finite, clamped and deterministic") {
    ModelConfig cfg = toy_config(3, 8, 2, 12, 12);
    cfg.init_seed = 7;
    ForecastModel model(cfg);
    RngState rng(59);
    WindowedSample w = random_window(cfg, rng);
    Matrix out1 = model.predict(w);
    Matrix out2 = model.predict(w);
    CHECK(out1.data == out2.data);
    CHECK(out1.rows == 12);
    CHECK(out1.cols == 3);
    for (double v : out1.data) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("parameter count matches the closed form") {
    for (bool use_te : {true, false}) {
        ModelConfig cfg = toy_config(3, 8, 2, 4, 3);
        cfg.use_time_encoder = use_te;
        cfg.encoder_layers = 2;
        cfg.decoder_layers = 2;
        ForecastModel model(cfg);
        CHECK(model.parameter_count() == ForecastModel::expected_parameter_count(cfg));
    }
}

TEST_CASE("attention weight rows sum to one in every layer of the model graph") {
    ModelConfig cfg = toy_config(2, 8, 2, 4, 3);
    ForecastModel model(cfg);
    RngState rng(61);
    WindowedSample w = random_window(cfg, rng);
    auto tg = model.build_training_graph(w);
    std::size_t softmax_nodes = 0;
    for (std::size_t i = 0; i < tg.graph.node_count(); ++i) {
        const auto& node = tg.graph.node(static_cast<DiffGraph::NodeId>(i));
        if (node.op != DiffGraph::Op::SoftmaxRows) continue;
        ++softmax_nodes;
        for (std::size_t r = 0; r < node.value.rows; ++r) {
            double sum = 0.0;
            for (std::size_t c = 0; c < node.value.cols; ++c) sum += node.value.at(r, c);
            CHECK(std::abs(sum - 1.0) < 1e-9);
        }
    }
    // One self-attention block and one cross block per decoder layer plus the
    // encoder blocks, times the head count.
    CHECK(softmax_nodes == cfg.heads * (cfg.encoder_layers + 2 * cfg.decoder_layers));
}

TEST_CASE("full model gradients match finite differences on a small toy") {
    ModelConfig cfg = toy_config(2, 8, 2, 4, 3);
    ForecastModel model(cfg);
    RngState rng(67);
    WindowedSample w = random_window(cfg, rng);
    auto tg = model.build_training_graph(w);
    CHECK(tg.graph.grad_check(tg.loss, 1e-5) < 1e-4);
}

TEST_CASE("training loss decreases under plain gradient steps") {
    ModelConfig cfg = toy_config(2, 8, 2, 4, 3);
    ForecastModel model(cfg);
    RngState rng(71);
    WindowedSample w = random_window(cfg, rng);
    double first = 0.0, last = 0.0;
    for (int iter = 0; iter < 30; ++iter) {
        auto tg = model.build_training_graph(w);
        tg.graph.backward(tg.loss);
        const double loss = tg.graph.value(tg.loss).at(0, 0);
        if (iter == 0) first = loss;
        last = loss;
        for (auto& [name, value] : model.parameters()) {
            const auto node = tg.params.at(name);
            const Matrix& grad = tg.graph.grad(node);
            for (std::size_t i = 0; i < value.data.size(); ++i)
                value.data[i] -= 0.05 * grad.data[i];
        }
    }
    CHECK(last < 0.5 * first);
}

TEST_CASE("checkpoint round trip reproduces predictions bit-exactly") {
    ModelConfig cfg = toy_config(2, 8, 2, 4, 3);
    ForecastModel model(cfg);
    RngState rng(73);
    // Make the parameters "trained-looking" rather than fresh-initialized.
    for (auto& [name, value] : model.parameters())
        for (double& v : value.data) v += 0.01 * rng.normal();
    WindowedSample w = random_window(cfg, rng);
    Matrix before = model.predict(w);

    NormalizationInfo norm;
    norm.channels = {"tps", "volume", "speed", "term_freq", "accident", "culture"};
    norm.mean = {0.5, 100.0, 30.0, 0.0, 0.1, 0.05};
    norm.stddev = {0.2, 25.0, 10.0, 1.0, 0.3, 0.2};
    const std::string path = (std::filesystem::temp_directory_path() / "tc_ckpt.json").string();
    save_checkpoint(path, model, norm);
    LoadedCheckpoint loaded = load_checkpoint(path);
    Matrix after = loaded.model.predict(w);
    CHECK(after.data == before.data);
    CHECK(loaded.norm.mean == norm.mean);
    CHECK(loaded.norm.channels == norm.channels);
    std::filesystem::remove(path);
}
