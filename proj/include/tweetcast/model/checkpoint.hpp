#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/io/csv.hpp"
#include "tweetcast/model/transformer.hpp"

namespace tweetcast {

/// Channel normalization snapshot persisted with the model so inference
/// reproduces the training-time encoding exactly.
struct NormalizationInfo {
    std::vector<std::string> channels;
    std::vector<double> mean;
    std::vector<double> stddev;
};

constexpr int kCheckpointFormatVersion = 1;

inline nlohmann::json checkpoint_json(const ForecastModel& model, const NormalizationInfo& norm) {
    nlohmann::json j;
    j["format_version"] = kCheckpointFormatVersion;
    j["byte_order"] = "n/a (decimal text, round-trip exact)";
    j["config"] = to_json(model.config());
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [name, m] : model.parameters()) {
        params[name] = {{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
    }
    j["parameters"] = std::move(params);
    j["normalization"] = {{"channels", norm.channels}, {"mean", norm.mean},
                          {"std", norm.stddev}};
    return j;
}

inline void save_checkpoint(const std::string& path, const ForecastModel& model,
                            const NormalizationInfo& norm) {
    write_text_file(path, checkpoint_json(model, norm).dump(2) + "\n");
}

struct LoadedCheckpoint {
    ForecastModel model;
    NormalizationInfo norm;
};

inline LoadedCheckpoint load_checkpoint(const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(read_text_file(path));
    if (j.value("format_version", -1) != kCheckpointFormatVersion)
        throw ParseError(path + ": unsupported checkpoint format version");
    ForecastModel model(model_config_from_json(j.at("config")));
    for (auto& [name, value] : model.parameters()) {
        const auto& pj = j.at("parameters").at(name);
        if (pj.at("rows").get<std::size_t>() != value.rows ||
            pj.at("cols").get<std::size_t>() != value.cols)
            throw ParseError(path + ": parameter '" + name + "' has unexpected shape");
        value.data = pj.at("data").get<std::vector<double>>();
    }
    NormalizationInfo norm;
    norm.channels = j.at("normalization").at("channels").get<std::vector<std::string>>();
    norm.mean = j.at("normalization").at("mean").get<std::vector<double>>();
    norm.stddev = j.at("normalization").at("std").get<std::vector<double>>();
    return {std::move(model), std::move(norm)};
}

} // namespace tweetcast
