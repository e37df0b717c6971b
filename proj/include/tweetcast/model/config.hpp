#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "tweetcast/core/errors.hpp"

namespace tweetcast {

/// Architecture hyperparameters of the forecast model.
struct ModelConfig {
    std::size_t d_model = 64;
    std::size_t heads = 8;
    std::size_t encoder_layers = 2;
    std::size_t decoder_layers = 2;
    std::size_t ff_dim = 0;  // 0 means 4 * d_model
    std::size_t input_len = 12;
    std::size_t horizon = 12;
    std::size_t segments = 0;   // M
    std::size_t features = 6;   // per-segment channels F
    bool use_time_encoder = true;  // false: plain sinusoid positional encoding
    double layer_norm_eps = 1e-5;
    std::uint64_t init_seed = 1;

    std::size_t ff() const { return ff_dim == 0 ? 4 * d_model : ff_dim; }
    std::size_t d_k() const { return d_model / heads; }
    std::size_t fused_dim() const { return segments * features; }

    void validate() const {
        if (segments == 0) throw ContractError("ModelConfig: segments must be set");
        if (features == 0) throw ContractError("ModelConfig: features must be >= 1");
        if (d_model == 0 || heads == 0 || d_model % heads != 0)
            throw ContractError("ModelConfig: d_model must be a positive multiple of heads");
        if (d_model % 2 != 0)
            throw ContractError("ModelConfig: d_model must be even for the sinusoid table");
        if (encoder_layers == 0 || decoder_layers == 0)
            throw ContractError("ModelConfig: need at least one encoder and decoder layer");
        if (input_len == 0 || horizon == 0)
            throw ContractError("ModelConfig: input_len and horizon must be >= 1");
        if (layer_norm_eps <= 0.0) throw ContractError("ModelConfig: layer_norm_eps must be > 0");
    }
};

inline nlohmann::json to_json(const ModelConfig& c) {
    return nlohmann::json{{"d_model", c.d_model},
                          {"heads", c.heads},
                          {"encoder_layers", c.encoder_layers},
                          {"decoder_layers", c.decoder_layers},
                          {"ff_dim", c.ff_dim},
                          {"input_len", c.input_len},
                          {"horizon", c.horizon},
                          {"segments", c.segments},
                          {"features", c.features},
                          {"use_time_encoder", c.use_time_encoder},
                          {"layer_norm_eps", c.layer_norm_eps},
                          {"init_seed", c.init_seed}};
}

inline ModelConfig model_config_from_json(const nlohmann::json& j) {
    ModelConfig c;
    c.d_model = j.value("d_model", c.d_model);
    c.heads = j.value("heads", c.heads);
    c.encoder_layers = j.value("encoder_layers", c.encoder_layers);
    c.decoder_layers = j.value("decoder_layers", c.decoder_layers);
    c.ff_dim = j.value("ff_dim", c.ff_dim);
    c.input_len = j.value("input_len", c.input_len);
    c.horizon = j.value("horizon", c.horizon);
    c.segments = j.value("segments", c.segments);
    c.features = j.value("features", c.features);
    c.use_time_encoder = j.value("use_time_encoder", c.use_time_encoder);
    c.layer_norm_eps = j.value("layer_norm_eps", c.layer_norm_eps);
    c.init_seed = j.value("init_seed", c.init_seed);
    return c;
}

} // namespace tweetcast
