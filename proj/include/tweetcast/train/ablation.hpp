#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/data/fusion.hpp"
#include "tweetcast/data/tensors.hpp"
#include "tweetcast/data/windows.hpp"
#include "tweetcast/model/transformer.hpp"
#include "tweetcast/train/trainer.hpp"

namespace tweetcast {

enum class AblationVariant { Full, DropCulture, DropTermFrequency, DropAccident, DropTimeEncoder };

inline const std::vector<AblationVariant>& all_ablation_variants() {
    static const std::vector<AblationVariant> v = {
        AblationVariant::Full, AblationVariant::DropCulture, AblationVariant::DropTermFrequency,
        AblationVariant::DropAccident, AblationVariant::DropTimeEncoder};
    return v;
}

inline std::string ablation_name(AblationVariant v) {
    switch (v) {
        case AblationVariant::Full: return "full";
        case AblationVariant::DropCulture: return "drop_culture";
        case AblationVariant::DropTermFrequency: return "drop_term_frequency";
        case AblationVariant::DropAccident: return "drop_accident";
        case AblationVariant::DropTimeEncoder: return "drop_time_encoder";
    }
    throw ContractError("unknown ablation variant");
}

inline AblationVariant ablation_from_name(const std::string& name) {
    for (AblationVariant v : all_ablation_variants())
        if (ablation_name(v) == name) return v;
    throw ContractError("unknown ablation variant '" + name + "'");
}

/// Channel set of a variant: drop_* removes its channel (shrinking F);
/// drop_time_encoder keeps all channels but swaps the time encoder for the
/// plain sinusoid positional encoding.
inline std::vector<std::string> ablation_channels(AblationVariant v) {
    std::vector<std::string> channels = all_channel_names();
    const auto drop = [&](const std::string& name) {
        channels.erase(std::remove(channels.begin(), channels.end(), name), channels.end());
    };
    switch (v) {
        case AblationVariant::DropCulture: drop("culture"); break;
        case AblationVariant::DropTermFrequency: drop("term_freq"); break;
        case AblationVariant::DropAccident: drop("accident"); break;
        case AblationVariant::Full:
        case AblationVariant::DropTimeEncoder: break;
    }
    return channels;
}

struct AblationRun {
    AblationVariant variant;
    std::string name;
    MetricsReport metrics;
    TrainResult training;
    std::size_t features = 0;
};

/// Train and evaluate one variant from a fixed seed.
inline AblationRun run_ablation_variant(AblationVariant variant, const TrafficTensor& traffic,
                                        const TweetFeatureTensor& tweets, ModelConfig model_cfg,
                                        const TrainConfig& train_cfg, const SplitSpec& split,
                                        const WindowParams& window) {
    const auto channels = ablation_channels(variant);
    const FeatureLayout layout = FeatureLayout::subset(traffic.segments(), channels);
    Dataset data = build_dataset(traffic, tweets, layout, split, window);

    model_cfg.segments = traffic.segments();
    model_cfg.features = layout.channels.size();
    model_cfg.use_time_encoder = variant != AblationVariant::DropTimeEncoder;
    model_cfg.validate();

    ForecastModel model(model_cfg);
    AblationRun run;
    run.variant = variant;
    run.name = ablation_name(variant);
    run.features = layout.channels.size();
    run.training = train(model, data, train_cfg);
    run.metrics = evaluate(model, data.test, train_cfg.mape_floor);
    return run;
}

inline std::vector<AblationRun> run_ablation(const TrafficTensor& traffic,
                                             const TweetFeatureTensor& tweets,
                                             const ModelConfig& model_cfg,
                                             const TrainConfig& train_cfg, const SplitSpec& split,
                                             const WindowParams& window) {
    std::vector<AblationRun> runs;
    for (AblationVariant v : all_ablation_variants())
        runs.push_back(
            run_ablation_variant(v, traffic, tweets, model_cfg, train_cfg, split, window));
    return runs;
}

inline std::string ablation_csv(const std::vector<AblationRun>& runs) {
    std::ostringstream out;
    out << "variant,mse,mae,mape\n";
    for (const auto& r : runs)
        out << r.name << ',' << format_double(r.metrics.overall.mse) << ','
            << format_double(r.metrics.overall.mae) << ','
            << format_double(r.metrics.overall.mape) << "\n";
    return out.str();
}

} // namespace tweetcast
