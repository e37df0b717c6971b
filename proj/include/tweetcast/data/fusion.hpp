#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/core/matrix.hpp"
#include "tweetcast/data/tensors.hpp"

namespace tweetcast {

/// Names of the per-segment channels in canonical fusion order.
inline const std::vector<std::string>& all_channel_names() {
    static const std::vector<std::string> names = {"tps",       "volume",   "speed",
                                                   "term_freq", "accident", "culture"};
    return names;
}

/// Bijection between fused-vector indices and (segment, channel) pairs.
/// Channels are laid out block-wise: index = channel * segments + segment,
/// which for one segment reads [tps, volume, speed, term_freq, accident,
/// culture] left to right.
struct FeatureLayout {
    std::vector<std::string> channels;  // ordered subset of all_channel_names()
    std::size_t segments = 0;

    std::size_t dim() const { return channels.size() * segments; }

    std::size_t index_of(std::size_t channel, std::size_t segment) const {
        return channel * segments + segment;
    }

    std::pair<std::size_t, std::size_t> channel_segment_of(std::size_t index) const {
        return {index / segments, index % segments};
    }

    static FeatureLayout full(std::size_t segments) {
        return FeatureLayout{all_channel_names(), segments};
    }

    static FeatureLayout subset(std::size_t segments, const std::vector<std::string>& keep) {
        FeatureLayout l;
        l.segments = segments;
        for (const auto& name : all_channel_names())
            if (std::find(keep.begin(), keep.end(), name) != keep.end())
                l.channels.push_back(name);
        if (l.channels.empty()) throw ContractError("FeatureLayout: no channels selected");
        return l;
    }

    bool has(const std::string& name) const {
        return std::find(channels.begin(), channels.end(), name) != channels.end();
    }
};

namespace detail {

inline const Matrix& channel_matrix(const TrafficTensor& x, const TweetFeatureTensor& c,
                                    const std::string& name) {
    if (name == "tps") return x.tps;
    if (name == "volume") return x.volume;
    if (name == "speed") return x.speed;
    if (name == "term_freq") return c.term_freq;
    if (name == "accident") return c.accident;
    if (name == "culture") return c.culture;
    throw ContractError("unknown channel '" + name + "'");
}

} // namespace detail

/// Column-wise concatenation of the selected channels at one timestep.
inline std::vector<double> fuse_step(const TrafficTensor& x, const TweetFeatureTensor& c,
                                     std::size_t step, const FeatureLayout& layout) {
    c.check_aligned(x);
    if (layout.segments != x.segments())
        throw AlignmentError("fuse_step: layout segment count disagrees with tensors");
    std::vector<double> out(layout.dim());
    for (std::size_t ch = 0; ch < layout.channels.size(); ++ch) {
        const Matrix& src = detail::channel_matrix(x, c, layout.channels[ch]);
        for (std::size_t m = 0; m < layout.segments; ++m)
            out[layout.index_of(ch, m)] = src.at(step, m);
    }
    return out;
}

/// Fuse every timestep into a (steps x dim) matrix.
inline Matrix fuse_all(const TrafficTensor& x, const TweetFeatureTensor& c,
                       const FeatureLayout& layout) {
    c.check_aligned(x);
    Matrix out(x.steps(), layout.dim());
    for (std::size_t t = 0; t < x.steps(); ++t) {
        const auto row = fuse_step(x, c, t, layout);
        for (std::size_t j = 0; j < row.size(); ++j) out.at(t, j) = row[j];
    }
    return out;
}

/// Exact inverse of fuse_step for a full six-channel layout.
inline void unfuse_step(const std::vector<double>& fused, const FeatureLayout& layout,
                        std::size_t step, TrafficTensor& x, TweetFeatureTensor& c) {
    if (fused.size() != layout.dim())
        throw ShapeError("unfuse_step: vector length " + std::to_string(fused.size()) +
                         " vs layout dim " + std::to_string(layout.dim()));
    for (std::size_t ch = 0; ch < layout.channels.size(); ++ch) {
        Matrix& dst = const_cast<Matrix&>(detail::channel_matrix(x, c, layout.channels[ch]));
        for (std::size_t m = 0; m < layout.segments; ++m)
            dst.at(step, m) = fused[layout.index_of(ch, m)];
    }
}

} // namespace tweetcast
