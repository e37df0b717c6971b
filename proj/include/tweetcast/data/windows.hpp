#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/core/matrix.hpp"
#include "tweetcast/data/fusion.hpp"
#include "tweetcast/data/tensors.hpp"

namespace tweetcast {

/// One supervised sample: a contiguous input window and the horizon of
/// TPS rows that starts exactly one step after it.
struct WindowedSample {
    std::size_t input_start = 0;           // step index of the first input row
    Matrix input;                          // in_len x layout.dim(), possibly normalized
    std::vector<std::int64_t> input_ts;    // one timestamp per input row
    Matrix target_tps;                     // out_len x segments, raw TPS
    std::vector<std::int64_t> target_ts;   // one timestamp per target row
    std::vector<double> last_input_tps;    // raw TPS at the final input step
};

struct WindowParams {
    std::size_t input_len = 12;
    std::size_t output_len = 12;
    std::size_t stride = 1;
};

namespace detail {

inline std::vector<WindowedSample> windows_over(const Matrix& fused, const TrafficTensor& traffic,
                                                std::size_t begin_step, std::size_t end_step,
                                                const WindowParams& p) {
    if (p.stride == 0) throw ContractError("make_windows: stride must be >= 1");
    const std::size_t need = p.input_len + p.output_len;
    std::vector<WindowedSample> out;
    if (end_step < begin_step || end_step - begin_step < need) return out;
    for (std::size_t s = begin_step; s + need <= end_step; s += p.stride) {
        WindowedSample w;
        w.input_start = s;
        w.input = slice_rows(fused, s, s + p.input_len);
        w.target_tps = slice_rows(traffic.tps, s + p.input_len, s + need);
        w.input_ts.reserve(p.input_len);
        for (std::size_t i = 0; i < p.input_len; ++i) w.input_ts.push_back(traffic.timestamp(s + i));
        w.target_ts.reserve(p.output_len);
        for (std::size_t i = 0; i < p.output_len; ++i)
            w.target_ts.push_back(traffic.timestamp(s + p.input_len + i));
        w.last_input_tps.resize(traffic.segments());
        for (std::size_t m = 0; m < traffic.segments(); ++m)
            w.last_input_tps[m] = traffic.tps.at(s + p.input_len - 1, m);
        out.push_back(std::move(w));
    }
    return out;
}

} // namespace detail

/// Sliding windows over the full span of the tensors, raw (unnormalized).
inline std::vector<WindowedSample> make_windows(const TrafficTensor& traffic,
                                                const TweetFeatureTensor& tweets,
                                                const FeatureLayout& layout,
                                                const WindowParams& p) {
    if (traffic.steps() < p.input_len + p.output_len)
        throw ContractError("make_windows: series has " + std::to_string(traffic.steps()) +
                            " steps, need at least " + std::to_string(p.input_len + p.output_len));
    const Matrix fused = fuse_all(traffic, tweets, layout);
    return detail::windows_over(fused, traffic, 0, traffic.steps(), p);
}

/// Chronological split expressed in steps of the 15-minute grid.
struct SplitSpec {
    std::size_t train_steps = 0;
    std::size_t val_steps = 0;
    std::size_t test_steps = 0;

    static SplitSpec from_days(double train_days, double val_days, double test_days) {
        const auto steps = [](double days) {
            return static_cast<std::size_t>(days * 86400.0 / kBinSeconds + 0.5);
        };
        return SplitSpec{steps(train_days), steps(val_days), steps(test_days)};
    }
};

/// Normalized, windowed dataset with the bookkeeping needed to reproduce
/// the encoding at inference time.
struct Dataset {
    FeatureLayout layout;
    WindowParams window;
    SplitSpec split;
    std::int64_t start_epoch = 0;
    std::vector<long> segment_ids;
    std::vector<double> channel_mean;  // one per layout channel
    std::vector<double> channel_std;   // one per layout channel, >= kMinStd
    std::vector<WindowedSample> train;
    std::vector<WindowedSample> val;
    std::vector<WindowedSample> test;

    static constexpr double kMinStd = 1e-9;
};

/// Fuse, z-score per channel on training-span statistics only, and window
/// each split separately so no sample straddles a boundary. Passing
/// `fixed_norm` (mean, std per channel) replays previously computed
/// statistics, e.g. from a checkpoint, instead of recomputing them.
inline Dataset build_dataset(
    const TrafficTensor& traffic, const TweetFeatureTensor& tweets, const FeatureLayout& layout,
    const SplitSpec& split, const WindowParams& params, std::size_t eval_stride = 1,
    const std::pair<std::vector<double>, std::vector<double>>* fixed_norm = nullptr) {
    tweets.check_aligned(traffic);
    const std::size_t total = split.train_steps + split.val_steps + split.test_steps;
    if (total > traffic.steps())
        throw ContractError("build_dataset: split spans " + std::to_string(total) +
                            " steps but the tensor has " + std::to_string(traffic.steps()));
    if (split.train_steps < params.input_len + params.output_len)
        throw ContractError("build_dataset: training span too short for one window");

    Dataset d;
    d.layout = layout;
    d.window = params;
    d.split = split;
    d.start_epoch = traffic.start_epoch;
    d.segment_ids = traffic.segment_ids;

    Matrix fused = fuse_all(traffic, tweets, layout);
    const std::size_t m = layout.segments;
    d.channel_mean.assign(layout.channels.size(), 0.0);
    d.channel_std.assign(layout.channels.size(), 1.0);
    if (fixed_norm != nullptr) {
        if (fixed_norm->first.size() != layout.channels.size() ||
            fixed_norm->second.size() != layout.channels.size())
            throw ContractError("build_dataset: fixed normalization length mismatch");
        d.channel_mean = fixed_norm->first;
        d.channel_std = fixed_norm->second;
    } else {
        for (std::size_t ch = 0; ch < layout.channels.size(); ++ch) {
            double sum = 0.0, sq = 0.0;
            const double n = static_cast<double>(split.train_steps * m);
            for (std::size_t t = 0; t < split.train_steps; ++t)
                for (std::size_t seg = 0; seg < m; ++seg)
                    sum += fused.at(t, layout.index_of(ch, seg));
            const double mean = sum / n;
            for (std::size_t t = 0; t < split.train_steps; ++t)
                for (std::size_t seg = 0; seg < m; ++seg) {
                    const double dlt = fused.at(t, layout.index_of(ch, seg)) - mean;
                    sq += dlt * dlt;
                }
            d.channel_mean[ch] = mean;
            const double sd = std::sqrt(sq / n);
            // A (near-)constant channel carries no signal; unit scale avoids
            // blowing rounding noise up by 1/std.
            d.channel_std[ch] = sd < Dataset::kMinStd ? 1.0 : sd;
        }
    }
    for (std::size_t ch = 0; ch < layout.channels.size(); ++ch)
        for (std::size_t t = 0; t < fused.rows; ++t)
            for (std::size_t seg = 0; seg < m; ++seg) {
                double& v = fused.at(t, layout.index_of(ch, seg));
                v = (v - d.channel_mean[ch]) / d.channel_std[ch];
            }

    const std::size_t train_end = split.train_steps;
    const std::size_t val_end = train_end + split.val_steps;
    const std::size_t test_end = val_end + split.test_steps;
    d.train = detail::windows_over(fused, traffic, 0, train_end, params);
    WindowParams eval_params = params;
    eval_params.stride = eval_stride;
    d.val = detail::windows_over(fused, traffic, train_end, val_end, eval_params);
    d.test = detail::windows_over(fused, traffic, val_end, test_end, eval_params);
    return d;
}

inline nlohmann::json dataset_manifest(const Dataset& d) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["channels"] = d.layout.channels;
    j["segments"] = d.segment_ids;
    j["start_epoch"] = d.start_epoch;
    j["bin_seconds"] = kBinSeconds;
    j["window"] = {{"input_len", d.window.input_len},
                   {"output_len", d.window.output_len},
                   {"stride", d.window.stride}};
    j["split_steps"] = {{"train", d.split.train_steps},
                        {"val", d.split.val_steps},
                        {"test", d.split.test_steps}};
    j["normalization"] = {{"mean", d.channel_mean}, {"std", d.channel_std}};
    j["samples"] = {{"train", d.train.size()}, {"val", d.val.size()}, {"test", d.test.size()}};
    return j;
}

} // namespace tweetcast
