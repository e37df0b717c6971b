#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/data/tensors.hpp"
#include "tweetcast/stats/trend.hpp"
#include "tweetcast/text/tweets.hpp"

namespace tweetcast {

/// Network-mean TPS per 15-minute bin, aggregated to hours.
inline HourlySeries network_tps_hourly(const TrafficTensor& traffic) {
    std::vector<double> bins(traffic.steps());
    for (std::size_t t = 0; t < traffic.steps(); ++t) {
        double sum = 0.0;
        for (std::size_t m = 0; m < traffic.segments(); ++m) sum += traffic.tps.at(t, m);
        bins[t] = sum / static_cast<double>(traffic.segments());
    }
    return hourly_from_bins(traffic.start_epoch, bins, kBinSeconds);
}

/// Network sum of one tweet feature channel per bin, aggregated to hours.
inline HourlySeries channel_hourly(const TweetFeatureTensor& features, const std::string& channel) {
    const Matrix* src = nullptr;
    if (channel == "term_freq") src = &features.term_freq;
    else if (channel == "accident") src = &features.accident;
    else if (channel == "culture") src = &features.culture;
    else throw ContractError("channel_hourly: unknown channel '" + channel + "'");
    std::vector<double> bins(features.steps());
    for (std::size_t t = 0; t < features.steps(); ++t) {
        double sum = 0.0;
        for (std::size_t m = 0; m < features.segments(); ++m) sum += src->at(t, m);
        bins[t] = sum;
    }
    return hourly_from_bins(features.start_epoch, bins, kBinSeconds);
}

/// Raw tweet arrival counts per bin over the whole network, hourly.
inline HourlySeries tweet_counts_hourly(const std::vector<TweetRecord>& tweets,
                                        std::int64_t start_epoch, std::size_t bins) {
    std::vector<double> counts(bins, 0.0);
    const std::int64_t end = start_epoch + static_cast<std::int64_t>(bins) * kBinSeconds;
    for (const auto& t : tweets) {
        if (t.ts < start_epoch || t.ts >= end) continue;
        counts[static_cast<std::size_t>((t.ts - start_epoch) / kBinSeconds)] += 1.0;
    }
    return hourly_from_bins(start_epoch, counts, kBinSeconds);
}

} // namespace tweetcast
