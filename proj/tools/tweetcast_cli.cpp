// Batch pipeline driver: synthetic scenarios, tweet feature extraction,
// correlation reports, model training/evaluation and the feature ablation
// sweep. Every command is deterministic given its config and seed and
// writes one run manifest next to its outputs.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/data/tensors.hpp"
#include "tweetcast/data/windows.hpp"
#include "tweetcast/io/csv.hpp"
#include "tweetcast/io/svg.hpp"
#include "tweetcast/model/checkpoint.hpp"
#include "tweetcast/model/config.hpp"
#include "tweetcast/model/transformer.hpp"
#include "tweetcast/stats/correlation.hpp"
#include "tweetcast/stats/ols.hpp"
#include "tweetcast/stats/pipeline.hpp"
#include "tweetcast/stats/trend.hpp"
#include "tweetcast/synth/scenario.hpp"
#include "tweetcast/text/features.hpp"
#include "tweetcast/text/lexicon.hpp"
#include "tweetcast/text/segments.hpp"
#include "tweetcast/text/svd.hpp"
#include "tweetcast/text/tweets.hpp"
#include "tweetcast/train/ablation.hpp"
#include "tweetcast/train/baselines.hpp"
#include "tweetcast/train/metrics.hpp"
#include "tweetcast/train/trainer.hpp"
#include "tweetcast/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tweetcast;

namespace {

std::optional<std::uint64_t> env_seed_override() {
    const char* v = std::getenv("FORECAST_SEED");
    if (v == nullptr || *v == '\0') return std::nullopt;
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(v, &end, 10);
    if (end == v || *end != '\0')
        throw ParseError("FORECAST_SEED must be an unsigned integer, got '" + std::string(v) + "'");
    return static_cast<std::uint64_t>(parsed);
}

void check_allowed_keys(const json& j, const std::set<std::string>& allowed,
                        const std::string& context) {
    if (!j.is_object()) throw ParseError(context + ": expected a JSON object");
    for (const auto& [key, value] : j.items())
        if (allowed.find(key) == allowed.end())
            throw ParseError(context + ": unknown key '" + key + "'");
}

json load_json_file(const std::string& path) {
    json j = json::parse(read_text_file(path), nullptr, false);
    if (j.is_discarded()) throw ParseError(path + ": invalid JSON");
    return j;
}

void validate_scenario_json(const json& j, const std::string& ctx) {
    check_allowed_keys(j, {"segments", "days", "start", "seed", "tps_base", "daily_amplitude",
                           "weekly_amplitude", "noise_scale", "common_noise_scale",
                           "common_noise_phi", "tweet_base_rate", "planted_lag_hours",
                           "target_correlation", "volume_base", "volume_span", "speed_max",
                           "random_events", "events"},
                       ctx);
    if (j.contains("random_events"))
        check_allowed_keys(j["random_events"],
                           {"accident_count", "culture_count", "min_drop", "max_drop",
                            "culture_min_drop", "culture_max_drop", "min_duration_hours",
                            "max_duration_hours", "tweet_burst"},
                           ctx + ".random_events");
    if (j.contains("events"))
        for (const auto& e : j["events"])
            check_allowed_keys(e, {"kind", "segment_id", "start", "duration_hours", "tps_drop",
                                   "tweet_burst"},
                               ctx + ".events[]");
}

void validate_model_json(const json& j, const std::string& ctx) {
    check_allowed_keys(j, {"d_model", "heads", "encoder_layers", "decoder_layers", "ff_dim",
                           "input_len", "horizon", "use_time_encoder", "layer_norm_eps",
                           "init_seed", "channels", "segments", "features"},
                       ctx);
}

struct ExperimentSpec {
    SplitSpec split = SplitSpec::from_days(60, 15, 15);
    WindowParams window;       // stride = training stride
    std::size_t eval_stride = 1;
};

ExperimentSpec experiment_from_json(const json& j, const std::string& ctx) {
    ExperimentSpec spec;
    if (j.contains("split")) {
        check_allowed_keys(j["split"], {"train_days", "val_days", "test_days"}, ctx + ".split");
        spec.split = SplitSpec::from_days(j["split"].value("train_days", 60.0),
                                          j["split"].value("val_days", 15.0),
                                          j["split"].value("test_days", 15.0));
    }
    if (j.contains("window")) {
        check_allowed_keys(j["window"], {"input_len", "output_len", "train_stride", "eval_stride"},
                           ctx + ".window");
        spec.window.input_len = j["window"].value("input_len", spec.window.input_len);
        spec.window.output_len = j["window"].value("output_len", spec.window.output_len);
        spec.window.stride = j["window"].value("train_stride", spec.window.stride);
        spec.eval_stride = j["window"].value("eval_stride", spec.eval_stride);
    }
    return spec;
}

void validate_train_json(const json& j, const std::string& ctx) {
    check_allowed_keys(j, {"learning_rate", "beta1", "beta2", "eps", "batch_size", "epochs",
                           "patience", "seed", "mape_floor", "val_rollout", "val_max_windows",
                           "split", "window"},
                       ctx);
}

struct RunTimer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

void write_run_manifest(const fs::path& out_dir, const std::string& command, const json& config,
                        std::uint64_t seed, const json& inputs, const std::vector<std::string>& outputs,
                        const RunTimer& timer) {
    json manifest;
    manifest["command"] = command;
    manifest["config"] = config;
    manifest["seed"] = seed;
    manifest["inputs"] = inputs;
    manifest["outputs"] = outputs;
    manifest["tool_version"] = kToolVersion;
    manifest["duration_ms"] = timer.ms();
    write_text_file((out_dir / "run_manifest.json").string(), manifest.dump(2) + "\n");
}

struct LoadedData {
    TrafficTensor traffic;
    TweetFeatureTensor features;
};

LoadedData load_data_dir(const std::string& dir) {
    LoadedData d;
    d.traffic = traffic_from_csv((fs::path(dir) / "traffic.csv").string());
    d.features = tweet_features_from_csv((fs::path(dir) / "features.csv").string());
    d.features.check_aligned(d.traffic);
    return d;
}

FeatureLayout layout_from_channels(const json& model_json, std::size_t segments) {
    if (model_json.contains("channels"))
        return FeatureLayout::subset(segments,
                                     model_json["channels"].get<std::vector<std::string>>());
    return FeatureLayout::full(segments);
}

// ---- synth ------------------------------------------------------------

int cmd_synth(const std::string& config_path, const std::string& out) {
    RunTimer timer;
    json cfg_json = load_json_file(config_path);
    validate_scenario_json(cfg_json, config_path);
    ScenarioConfig cfg = scenario_config_from_json(cfg_json);
    if (const auto seed = env_seed_override()) cfg.seed = *seed;
    cfg.validate();

    Scenario s = generate(cfg);
    fs::create_directories(out);
    write_text_file((fs::path(out) / "traffic.csv").string(), to_csv(s.traffic));
    write_text_file((fs::path(out) / "tweets.jsonl").string(), tweets_to_jsonl(s.tweets));
    write_text_file((fs::path(out) / "segments.csv").string(), to_csv(s.centers));
    write_text_file((fs::path(out) / "manifest.json").string(), s.manifest.dump(2) + "\n");
    write_run_manifest(out, "synth", cfg_json, cfg.seed, {{"config", config_path}},
                       {"traffic.csv", "tweets.jsonl", "segments.csv", "manifest.json"}, timer);
    std::printf("synth: %zu segments, %zu days, %zu tweets -> %s\n", cfg.segments, cfg.days,
                s.tweets.size(), out.c_str());
    return 0;
}

// ---- features ----------------------------------------------------------

int cmd_features(const std::string& tweets_path, const std::string& segments_path,
                 const std::string& lexicons_dir, const std::string& out,
                 const std::string& traffic_path, int min_count, std::size_t svd_k,
                 double radius_km, const std::string& term_freq_mode) {
    RunTimer timer;
    const auto tweets = tweets_from_jsonl(tweets_path);
    const auto centers = segments_from_csv(segments_path);
    KeywordLexicon accident =
        KeywordLexicon::load((fs::path(lexicons_dir) / "accident.txt").string(), "accident");
    KeywordLexicon culture =
        KeywordLexicon::load((fs::path(lexicons_dir) / "culture.txt").string(), "culture");

    std::int64_t start = 0;
    std::size_t bins = 0;
    if (!traffic_path.empty()) {
        TrafficTensor traffic = traffic_from_csv(traffic_path);
        start = traffic.start_epoch;
        bins = traffic.steps();
    } else {
        if (tweets.empty()) throw ContractError("features: empty tweet file and no --traffic grid");
        std::int64_t lo = tweets.front().ts, hi = tweets.front().ts;
        for (const auto& t : tweets) {
            lo = std::min(lo, t.ts);
            hi = std::max(hi, t.ts);
        }
        start = lo - (lo % (24 * 3600));  // midnight before the first tweet
        bins = static_cast<std::size_t>((hi - start) / kBinSeconds) + 1;
    }

    FeaturePipelineConfig cfg;
    cfg.min_count = min_count;
    cfg.svd_k = svd_k;
    cfg.radius_km = radius_km;
    cfg.term_freq_mode =
        term_freq_mode == "raw_counts" ? TermFreqMode::RawCounts : TermFreqMode::SvdSum;
    if (term_freq_mode != "raw_counts" && term_freq_mode != "svd_sum")
        throw ContractError("features: --term-freq-mode must be svd_sum or raw_counts");
    if (const auto seed = env_seed_override()) cfg.svd_seed = *seed;

    auto result = build_tweet_features(tweets, centers, accident, culture, start, bins, cfg);
    fs::create_directories(out);
    write_text_file((fs::path(out) / "features.csv").string(), to_csv(result.features));

    std::ostringstream ev;
    ev << "k,singular_value,explained_variance_ratio,cumulative\n";
    const auto curve = explained_variance_curve(result.factors);
    for (std::size_t i = 0; i < curve.size(); ++i)
        ev << (i + 1) << ',' << format_double(result.factors.singular_values[i]) << ','
           << format_double(result.factors.explained_variance_ratio[i]) << ','
           << format_double(curve[i]) << "\n";
    write_text_file((fs::path(out) / "explained_variance.csv").string(), ev.str());

    json cfg_json = {{"min_count", min_count},      {"svd_k", svd_k},
                     {"radius_km", radius_km},      {"term_freq_mode", term_freq_mode},
                     {"svd_seed", cfg.svd_seed},    {"bins", bins},
                     {"start", iso8601_from_epoch(start)}};
    write_run_manifest(out, "features", cfg_json, cfg.svd_seed,
                       {{"tweets", tweets_path},
                        {"segments", segments_path},
                        {"lexicons", lexicons_dir},
                        {"traffic", traffic_path}},
                       {"features.csv", "explained_variance.csv"}, timer);
    std::printf("features: %zu tweets, %zu assigned, rank %zu -> %s\n", tweets.size(),
                result.assigned_docs, result.factors.k, out.c_str());
    return 0;
}

// ---- correlate ----------------------------------------------------------

int cmd_correlate(const std::string& traffic_path, const std::string& features_path,
                  const std::string& out, const std::string& channel, int max_lag, bool svg) {
    RunTimer timer;
    TrafficTensor traffic = traffic_from_csv(traffic_path);
    TweetFeatureTensor features = tweet_features_from_csv(features_path);
    features.check_aligned(traffic);

    HourlySeries v = network_tps_hourly(traffic);
    HourlySeries c = channel_hourly(features, channel);
    HourlySeries v_det = detrend(v, compute_trend(v));
    HourlySeries c_det = detrend(c, compute_trend(c));

    const auto corr = cross_correlation(v_det.values, c_det.values, max_lag);
    OlsResult ols = ols_lagged_model(v_det.values, c_det.values);

    fs::create_directories(out);
    std::ostringstream det_csv;
    det_csv << "hour_start_iso8601,tps_detrended,tweet_detrended\n";
    for (std::size_t i = 0; i < v_det.values.size(); ++i)
        det_csv << iso8601_from_epoch(v_det.timestamp(i)) << ',' << format_double(v_det.values[i])
                << ',' << format_double(c_det.values[i]) << "\n";
    write_text_file((fs::path(out) / "detrended.csv").string(), det_csv.str());

    std::ostringstream lag_csv;
    lag_csv << "lag_hours,correlation\n";
    for (std::size_t lag = 0; lag < corr.size(); ++lag)
        lag_csv << lag << ',' << format_double(corr[lag]) << "\n";
    write_text_file((fs::path(out) / "lag_correlation.csv").string(), lag_csv.str());

    const char* term_names[4] = {"alpha", "beta1_tps_lag1", "beta2_tweet", "beta3_tweet_lag1"};
    json ols_json;
    ols_json["r_squared"] = ols.r_squared;
    ols_json["n_obs"] = ols.n_obs;
    ols_json["dof"] = ols.dof;
    json terms = json::object();
    for (std::size_t j = 0; j < 4; ++j)
        terms[term_names[j]] = {{"coefficient", ols.coefficients[j]},
                                {"std_error", ols.std_errors[j]},
                                {"t_stat", ols.t_stats[j]},
                                {"p_value", ols.p_values[j]}};
    ols_json["terms"] = std::move(terms);
    write_text_file((fs::path(out) / "ols.json").string(), ols_json.dump(2) + "\n");

    std::vector<std::string> outputs = {"detrended.csv", "lag_correlation.csv", "ols.json"};
    if (svg) {
        write_text_file((fs::path(out) / "lag_correlation.svg").string(),
                        svg_line_chart("cross-correlation by lag (hours)", {{"corr", corr}}));
        write_text_file(
            (fs::path(out) / "detrended.svg").string(),
            svg_line_chart("detrended hourly series",
                           {{"tps", v_det.values}, {"tweets", c_det.values}}));
        outputs.push_back("lag_correlation.svg");
        outputs.push_back("detrended.svg");
    }
    json cfg_json = {{"channel", channel}, {"max_lag", max_lag}, {"svg", svg}};
    write_run_manifest(out, "correlate", cfg_json, 0,
                       {{"traffic", traffic_path}, {"features", features_path}}, outputs, timer);
    std::printf("correlate: %zu hours, lag0 %.4f, min at lag %zu -> %s\n", v_det.values.size(),
                corr[0],
                static_cast<std::size_t>(std::min_element(corr.begin(), corr.end()) - corr.begin()),
                out.c_str());
    return 0;
}

// ---- train ---------------------------------------------------------------

int cmd_train(const std::string& data_dir, const std::string& model_config_path,
              const std::string& train_config_path, const std::string& out) {
    RunTimer timer;
    json model_json = load_json_file(model_config_path);
    validate_model_json(model_json, model_config_path);
    json train_json = load_json_file(train_config_path);
    validate_train_json(train_json, train_config_path);

    LoadedData data = load_data_dir(data_dir);
    const FeatureLayout layout = layout_from_channels(model_json, data.traffic.segments());
    const ExperimentSpec spec = experiment_from_json(train_json, train_config_path);
    TrainConfig train_cfg = train_config_from_json(train_json);

    ModelConfig model_cfg = model_config_from_json(model_json);
    model_cfg.segments = data.traffic.segments();
    model_cfg.features = layout.channels.size();
    model_cfg.input_len = spec.window.input_len;
    model_cfg.horizon = spec.window.output_len;
    if (const auto seed = env_seed_override()) {
        train_cfg.seed = *seed;
        model_cfg.init_seed = *seed;
    }
    model_cfg.validate();

    Dataset dataset =
        build_dataset(data.traffic, data.features, layout, spec.split, spec.window, spec.eval_stride);
    ForecastModel model(model_cfg);
    TrainResult result = train(model, dataset, train_cfg);

    fs::create_directories(out);
    NormalizationInfo norm{dataset.layout.channels, dataset.channel_mean, dataset.channel_std};
    save_checkpoint((fs::path(out) / "checkpoint.json").string(), model, norm);
    write_text_file((fs::path(out) / "loss_history.csv").string(), loss_history_csv(result));
    json summary = {{"best_epoch", result.best_epoch},
                    {"best_val_mse", result.best_val_mse},
                    {"epochs_run", result.history.size()},
                    {"train_windows", dataset.train.size()},
                    {"val_windows", dataset.val.size()},
                    {"parameters", model.parameter_count()}};
    write_text_file((fs::path(out) / "train_summary.json").string(), summary.dump(2) + "\n");

    json cfg_json = {{"model", model_json}, {"train", train_json}};
    write_run_manifest(out, "train", cfg_json, train_cfg.seed, {{"data", data_dir}},
                       {"checkpoint.json", "loss_history.csv", "train_summary.json"}, timer);
    std::printf("train: best epoch %zu, val mse %.6g, %zu parameters -> %s\n", result.best_epoch,
                result.best_val_mse, model.parameter_count(), out.c_str());
    return 0;
}

// ---- evaluate --------------------------------------------------------------

int cmd_evaluate(const std::string& data_dir, const std::string& checkpoint_path,
                 const std::string& train_config_path, const std::string& out,
                 const std::string& stub) {
    RunTimer timer;
    json train_json = load_json_file(train_config_path);
    validate_train_json(train_json, train_config_path);
    const ExperimentSpec spec = experiment_from_json(train_json, train_config_path);
    const TrainConfig train_cfg = train_config_from_json(train_json);
    LoadedData data = load_data_dir(data_dir);

    fs::create_directories(out);
    json metrics_json;
    std::ostringstream csv;
    csv << metrics_csv_header() << "\n";

    const auto tables = segment_trends(data.traffic, spec.split.train_steps);

    if (!stub.empty()) {
        // Harness self-test paths: metrics machinery without a model.
        const FeatureLayout layout = FeatureLayout::full(data.traffic.segments());
        Dataset dataset = build_dataset(data.traffic, data.features, layout, spec.split,
                                        spec.window, spec.eval_stride);
        MetricsAccumulator acc(train_cfg.mape_floor);
        for (std::size_t s : report_horizons())
            if (s <= spec.window.output_len) acc.track_horizon(s);
        for (const auto& w : dataset.test) {
            if (stub == "oracle") {
                acc.add(w.target_tps, w.target_tps);
            } else if (stub == "persistence") {
                acc.add(persistence_prediction(w), w.target_tps);
            } else {
                throw ContractError("evaluate: --stub must be 'oracle' or 'persistence'");
            }
        }
        MetricsReport r = acc.report();
        metrics_json[stub + "_stub"] = to_json(r);
        append_metrics_csv(csv, stub + "_stub", r);
    } else {
        if (checkpoint_path.empty())
            throw ContractError("evaluate: --checkpoint is required without --stub");
        LoadedCheckpoint ckpt = load_checkpoint(checkpoint_path);
        const FeatureLayout layout =
            FeatureLayout::subset(data.traffic.segments(), ckpt.norm.channels);
        const auto fixed_norm = std::make_pair(ckpt.norm.mean, ckpt.norm.stddev);
        Dataset dataset = build_dataset(data.traffic, data.features, layout, spec.split,
                                        spec.window, spec.eval_stride, &fixed_norm);
        MetricsReport model_metrics =
            evaluate(ckpt.model, dataset.test, train_cfg.mape_floor);
        metrics_json["model"] = to_json(model_metrics);
        append_metrics_csv(csv, "model", model_metrics);
    }

    // Baselines ride along in every evaluation for side-by-side reading.
    {
        const FeatureLayout layout = FeatureLayout::full(data.traffic.segments());
        Dataset dataset = build_dataset(data.traffic, data.features, layout, spec.split,
                                        spec.window, spec.eval_stride);
        for (BaselineKind kind : {BaselineKind::Persistence, BaselineKind::SeasonalMean}) {
            MetricsReport r = evaluate_baseline(kind, dataset.test, tables,
                                                spec.window.output_len, train_cfg.mape_floor);
            metrics_json[baseline_name(kind)] = to_json(r);
            append_metrics_csv(csv, baseline_name(kind), r);
        }
    }

    write_text_file((fs::path(out) / "metrics.json").string(), metrics_json.dump(2) + "\n");
    write_text_file((fs::path(out) / "metrics.csv").string(), csv.str());
    json cfg_json = {{"train", train_json}, {"stub", stub}};
    write_run_manifest(out, "evaluate", cfg_json, train_cfg.seed,
                       {{"data", data_dir}, {"checkpoint", checkpoint_path}},
                       {"metrics.json", "metrics.csv"}, timer);
    std::printf("evaluate -> %s\n", out.c_str());
    return 0;
}

// ---- ablate ---------------------------------------------------------------

int cmd_ablate(const std::string& data_dir, const std::string& model_config_path,
               const std::string& train_config_path, const std::string& out) {
    RunTimer timer;
    json model_json = load_json_file(model_config_path);
    validate_model_json(model_json, model_config_path);
    json train_json = load_json_file(train_config_path);
    validate_train_json(train_json, train_config_path);
    const ExperimentSpec spec = experiment_from_json(train_json, train_config_path);
    TrainConfig train_cfg = train_config_from_json(train_json);
    LoadedData data = load_data_dir(data_dir);

    ModelConfig model_cfg = model_config_from_json(model_json);
    model_cfg.input_len = spec.window.input_len;
    model_cfg.horizon = spec.window.output_len;
    if (const auto seed = env_seed_override()) {
        train_cfg.seed = *seed;
        model_cfg.init_seed = *seed;
    }

    const auto runs =
        run_ablation(data.traffic, data.features, model_cfg, train_cfg, spec.split, spec.window);

    fs::create_directories(out);
    write_text_file((fs::path(out) / "ablation.csv").string(), ablation_csv(runs));
    json detail = json::object();
    for (const auto& r : runs) {
        detail[r.name] = {{"metrics", to_json(r.metrics)},
                          {"features", r.features},
                          {"best_epoch", r.training.best_epoch},
                          {"best_val_mse", r.training.best_val_mse}};
    }
    write_text_file((fs::path(out) / "ablation.json").string(), detail.dump(2) + "\n");
    json cfg_json = {{"model", model_json}, {"train", train_json}};
    write_run_manifest(out, "ablate", cfg_json, train_cfg.seed, {{"data", data_dir}},
                       {"ablation.csv", "ablation.json"}, timer);
    std::printf("ablate: %zu variants -> %s\n", runs.size(), out.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tweet-informed network-wide traffic forecasting pipeline"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    auto* synth = app.add_subcommand("synth", "generate a synthetic scenario");
    synth->add_option("--config", config_path, "scenario config JSON")->required();
    synth->add_option("--out", out_dir, "output directory")->required();

    std::string tweets_path, segments_path, lexicons_dir, traffic_path = "";
    int min_count = 3;
    std::size_t svd_k = 100;
    double radius_km = 5.0;
    std::string term_freq_mode = "svd_sum";
    auto* features = app.add_subcommand("features", "extract tweet feature channels");
    features->add_option("--tweets", tweets_path, "tweets JSONL")->required();
    features->add_option("--segments", segments_path, "segment centers CSV")->required();
    features->add_option("--lexicons", lexicons_dir, "directory with accident.txt/culture.txt")
        ->required();
    features->add_option("--out", out_dir, "output directory")->required();
    features->add_option("--traffic", traffic_path, "traffic CSV defining the time grid");
    features->add_option("--min-count", min_count, "vocabulary count threshold");
    features->add_option("--svd-k", svd_k, "truncated SVD rank");
    features->add_option("--radius-km", radius_km, "segment assignment radius");
    features->add_option("--term-freq-mode", term_freq_mode, "svd_sum or raw_counts");

    std::string features_path, channel = "term_freq";
    int max_lag = 24;
    bool svg = false;
    auto* correlate = app.add_subcommand("correlate", "detrended correlation study");
    correlate->add_option("--traffic", traffic_path, "traffic CSV")->required();
    correlate->add_option("--features", features_path, "features CSV")->required();
    correlate->add_option("--out", out_dir, "output directory")->required();
    correlate->add_option("--channel", channel, "tweet intensity channel");
    correlate->add_option("--max-lag", max_lag, "max lag in hours");
    correlate->add_flag("--svg", svg, "also write SVG charts");

    std::string data_dir, model_config_path, train_config_path;
    auto* train_cmd = app.add_subcommand("train", "train the forecast model");
    train_cmd->add_option("--data", data_dir, "directory with traffic.csv and features.csv")
        ->required();
    train_cmd->add_option("--model-config", model_config_path, "model config JSON")->required();
    train_cmd->add_option("--train-config", train_config_path, "train config JSON")->required();
    train_cmd->add_option("--out", out_dir, "output directory")->required();

    std::string checkpoint_path, stub;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "evaluate on the test split");
    evaluate_cmd->add_option("--data", data_dir, "directory with traffic.csv and features.csv")
        ->required();
    evaluate_cmd->add_option("--checkpoint", checkpoint_path, "trained checkpoint JSON");
    evaluate_cmd->add_option("--train-config", train_config_path, "train config JSON")->required();
    evaluate_cmd->add_option("--out", out_dir, "output directory")->required();
    evaluate_cmd->add_option("--stub", stub, "harness self-test: oracle or persistence");

    auto* ablate_cmd = app.add_subcommand("ablate", "feature/time-encoder ablation sweep");
    ablate_cmd->add_option("--data", data_dir, "directory with traffic.csv and features.csv")
        ->required();
    ablate_cmd->add_option("--model-config", model_config_path, "model config JSON")->required();
    ablate_cmd->add_option("--train-config", train_config_path, "train config JSON")->required();
    ablate_cmd->add_option("--out", out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(config_path, out_dir);
        if (features->parsed())
            return cmd_features(tweets_path, segments_path, lexicons_dir, out_dir, traffic_path,
                                min_count, svd_k, radius_km, term_freq_mode);
        if (correlate->parsed())
            return cmd_correlate(traffic_path, features_path, out_dir, channel, max_lag, svg);
        if (train_cmd->parsed())
            return cmd_train(data_dir, model_config_path, train_config_path, out_dir);
        if (evaluate_cmd->parsed())
            return cmd_evaluate(data_dir, checkpoint_path, train_config_path, out_dir, stub);
        if (ablate_cmd->parsed())
            return cmd_ablate(data_dir, model_config_path, train_config_path, out_dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
