#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "tweetcast/core/errors.hpp"
#include "tweetcast/core/rng.hpp"
#include "tweetcast/data/calendar.hpp"
#include "tweetcast/data/tensors.hpp"
#include "tweetcast/text/segments.hpp"
#include "tweetcast/text/tweets.hpp"

namespace tweetcast {

struct EventSpec {
    std::string kind;  // "accident" or "culture"
    long segment_id = 0;
    std::int64_t start_epoch = 0;
    std::int64_t duration_seconds = 0;
    double tps_drop = 0.2;     // in (0, 1)
    double tweet_burst = 5.0;  // keyword-tweet rate multiplier during the event
};

/// Deterministic auto-generated event load, materialized into EventSpecs.
/// Culture events can get their own drop range (e.g. heavy tweet bursts
/// with barely any traffic impact).
struct RandomEventLoad {
    std::size_t accident_count = 0;
    std::size_t culture_count = 0;
    double min_drop = 0.12, max_drop = 0.3;
    double culture_min_drop = -1.0, culture_max_drop = -1.0;  // < 0: use main range
    double min_duration_hours = 2.0, max_duration_hours = 6.0;
    double tweet_burst = 6.0;
};

struct ScenarioConfig {
    std::size_t segments = 5;
    std::size_t days = 30;
    std::int64_t start_epoch = epoch_from_civil(2020, 5, 1);
    std::uint64_t seed = 1;

    double tps_base = 0.68;
    double daily_amplitude = 0.16;
    double weekly_amplitude = 0.04;
    double noise_scale = 0.02;         // per-segment white noise
    double common_noise_scale = 0.04;  // shared hourly AR(1) fluctuation
    double common_noise_phi = 0.9;

    double tweet_base_rate = 3.0;  // tweets/hour/segment
    int planted_lag_hours = 10;
    double target_correlation = 0.0;  // 0 disables the lagged modulation

    double volume_base = 40.0, volume_span = 120.0, speed_max = 62.0;

    std::vector<EventSpec> events;
    RandomEventLoad random_events;

    std::size_t steps() const { return days * 96; }
    std::int64_t end_epoch() const {
        return start_epoch + static_cast<std::int64_t>(steps()) * kBinSeconds;
    }

    void validate() const {
        if (segments < 1 || days < 2)
            throw ContractError("ScenarioConfig: need at least 1 segment and 2 days");
        if (!(target_correlation > -1.0 && target_correlation < 1.0))
            throw ContractError("ScenarioConfig: target correlation must be in (-1, 1)");
        if (tweet_base_rate < 0.0 || noise_scale < 0.0 || common_noise_scale < 0.0)
            throw ContractError("ScenarioConfig: negative scales");
        if (planted_lag_hours < 0) throw ContractError("ScenarioConfig: negative lag");
    }
};

struct Scenario {
    TrafficTensor traffic;
    std::vector<TweetRecord> tweets;
    std::vector<SegmentCenter> centers;
    nlohmann::json manifest;
};

namespace detail {

inline const std::vector<std::string>& neutral_templates() {
    // Deliberately free of every term in the shipped keyword lists.
    static const std::vector<std::string> t = {
        "lovely sunny afternoon by the lake",
        "coffee with friends near the pier",
        "great music at the park tonight",
        "long run along the waterfront felt amazing",
        "brunch spot had the best pancakes",
        "sunset photos from the ferry deck",
        "rainy evening calls for tea and a book",
        "new mural looks wonderful downtown",
        "weekend market was full of flowers",
        "quiet walk with the dog before dinner",
    };
    return t;
}

inline const std::vector<std::string>& accident_templates() {
    // Terms drawn from the accident list only, never from the culture list.
    static const std::vector<std::string> t = {
        "bad crash blocking the highway right now",
        "accident on the road near the exit",
        "two vehicles involved in a crash ahead",
        "lane closed after a truck accident",
        "driver injured in the crash this morning",
        "traffic stopped a car hit the barrier",
    };
    return t;
}

inline const std::vector<std::string>& culture_templates() {
    // Terms drawn from the culture list only, never from the accident list.
    static const std::vector<std::string> t = {
        "protest gathering downtown by the capitol",
        "marching for george floyd today",
        "justice for breonna taylor rally tonight",
        "#blm crowd growing near the plaza",
        "remember ahmaud arbery join the protest",
        "durkanresign chants echo through downtown",
    };
    return t;
}

/// Parameter of the log-linear rate modulation that realizes a target
/// Pearson correlation between the lagged common fluctuation and the
/// network-wide hourly tweet counts (Poisson with lognormal rate).
inline double calibrate_modulation(double target_corr, double sigma, double mu_hourly) {
    if (target_corr == 0.0 || sigma <= 0.0 || mu_hourly <= 0.0) return 0.0;
    const auto rho = [&](double beta) {
        const double g = beta * beta * sigma * sigma;
        const double m1 = std::exp(g / 2.0);
        const double cov = mu_hourly * beta * sigma * sigma * m1;
        const double var_n =
            mu_hourly * m1 + mu_hourly * mu_hourly * m1 * m1 * (std::exp(g) - 1.0);
        return cov / (sigma * std::sqrt(var_n));
    };
    const double beta_peak = 1.0 / sigma;  // |rho| is monotone on [0, 1/sigma]
    double lo = 0.0, hi = beta_peak;
    const double want = std::abs(target_corr);
    if (rho(beta_peak) < want)
        throw ContractError("scenario: target correlation " + std::to_string(target_corr) +
                            " is not attainable at this tweet rate");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (rho(mid) < want ? lo : hi) = mid;
    }
    const double beta = 0.5 * (lo + hi);
    return target_corr < 0.0 ? -beta : beta;
}

inline double event_drop_shape(double u) {
    // Half-cosine ramps over the first and last 15% of the window.
    constexpr double kRamp = 0.15;
    if (u < 0.0 || u > 1.0) return 0.0;
    if (u < kRamp) return 0.5 * (1.0 - std::cos(3.14159265358979323846 * u / kRamp));
    if (u > 1.0 - kRamp)
        return 0.5 * (1.0 - std::cos(3.14159265358979323846 * (1.0 - u) / kRamp));
    return 1.0;
}

} // namespace detail

/// Deterministic synthetic scenario: seasonal TPS with a shared AR(1)
/// fluctuation, derived volume/speed, a Poisson tweet stream whose rate
/// anticipates the fluctuation at the planted lag, and keyword-bearing
/// event bursts. The manifest records every planted quantity.
inline Scenario generate(const ScenarioConfig& config_in) {
    ScenarioConfig config = config_in;
    config.validate();
    const std::size_t m = config.segments;
    const std::size_t steps = config.steps();
    const std::size_t hours = config.days * 24;

    Scenario s;
    for (std::size_t i = 0; i < m; ++i) {
        // Centers 0.3 degrees of latitude apart: far beyond twice the
        // 5 km assignment radius, so nearest-center assignment is unambiguous.
        s.centers.push_back({static_cast<long>(i + 1), 46.5 + 0.3 * static_cast<double>(i), -122.3});
    }

    RngState root(config.seed);
    RngState common_rng = root.derive(1);

    // Materialize the random event load into explicit EventSpecs.
    std::vector<EventSpec> events = config.events;
    {
        RngState ev_rng = root.derive(2);
        const auto push_random = [&](const std::string& kind, std::size_t count) {
            double lo = config.random_events.min_drop, hi = config.random_events.max_drop;
            if (kind == "culture" && config.random_events.culture_min_drop >= 0.0 &&
                config.random_events.culture_max_drop >= 0.0) {
                lo = config.random_events.culture_min_drop;
                hi = config.random_events.culture_max_drop;
            }
            for (std::size_t e = 0; e < count; ++e) {
                EventSpec ev;
                ev.kind = kind;
                ev.segment_id = static_cast<long>(1 + ev_rng.below(m));
                const double dur_h = ev_rng.uniform(config.random_events.min_duration_hours,
                                                    config.random_events.max_duration_hours);
                ev.duration_seconds = static_cast<std::int64_t>(dur_h * 3600.0);
                const std::int64_t span = config.end_epoch() - config.start_epoch;
                const std::int64_t latest = span - ev.duration_seconds - 3600;
                if (latest <= 0) throw ContractError("scenario: event longer than the span");
                ev.start_epoch = config.start_epoch +
                                 static_cast<std::int64_t>(ev_rng.below(
                                     static_cast<std::uint64_t>(latest) / kBinSeconds)) *
                                     kBinSeconds;
                ev.tps_drop = ev_rng.uniform(lo, hi);
                ev.tweet_burst = config.random_events.tweet_burst;
                events.push_back(ev);
            }
        };
        push_random("accident", config.random_events.accident_count);
        push_random("culture", config.random_events.culture_count);
    }
    for (const auto& ev : events) {
        if (ev.kind != "accident" && ev.kind != "culture")
            throw ContractError("scenario: unknown event kind '" + ev.kind + "'");
        if (ev.segment_id < 1 || ev.segment_id > static_cast<long>(m))
            throw ContractError("scenario: event segment out of range");
        if (ev.start_epoch < config.start_epoch ||
            ev.start_epoch + ev.duration_seconds > config.end_epoch())
            throw ContractError("scenario: event window outside the scenario span");
        if (config.tps_base - config.daily_amplitude - config.weekly_amplitude - ev.tps_drop < 0.0)
            throw ContractError("scenario: event drop " + std::to_string(ev.tps_drop) +
                                " pushes TPS below zero before clamping");
    }

    // Shared hourly AR(1) fluctuation, extended past the span by the lag so
    // tweet rates can anticipate it.
    const std::size_t lag_h = static_cast<std::size_t>(config.planted_lag_hours);
    std::vector<double> w(hours + lag_h + 1, 0.0);
    {
        const double phi = config.common_noise_phi;
        const double innov = config.common_noise_scale * std::sqrt(std::max(0.0, 1.0 - phi * phi));
        w[0] = config.common_noise_scale * common_rng.normal();
        for (std::size_t h = 1; h < w.size(); ++h)
            w[h] = phi * w[h - 1] + innov * common_rng.normal();
    }

    // Traffic channels.
    TrafficTensor& traffic = s.traffic;
    for (const auto& c : s.centers) traffic.segment_ids.push_back(c.id);
    traffic.start_epoch = config.start_epoch;
    traffic.tps = Matrix(steps, m);
    traffic.volume = Matrix(steps, m);
    traffic.speed = Matrix(steps, m);

    std::vector<RngState> seg_noise;
    for (std::size_t seg = 0; seg < m; ++seg) seg_noise.push_back(root.derive(100 + seg));

    const double two_pi = 2.0 * 3.14159265358979323846;
    for (std::size_t t = 0; t < steps; ++t) {
        const std::int64_t ts = traffic.timestamp(t);
        const double day_frac = static_cast<double>(ts % 86400) / 86400.0;
        const double week_frac = static_cast<double>((ts - config.start_epoch) % (7 * 86400)) /
                                 (7.0 * 86400.0);
        const double seasonal = config.tps_base +
                                config.daily_amplitude * std::sin(two_pi * day_frac) +
                                config.weekly_amplitude * std::sin(two_pi * week_frac);
        const std::size_t hour_idx = static_cast<std::size_t>((ts - config.start_epoch) / 3600);
        for (std::size_t seg = 0; seg < m; ++seg) {
            double drop = 0.0;
            for (const auto& ev : events) {
                if (ev.segment_id != traffic.segment_ids[seg]) continue;
                if (ts < ev.start_epoch || ts >= ev.start_epoch + ev.duration_seconds) continue;
                const double u = static_cast<double>(ts - ev.start_epoch) /
                                 static_cast<double>(ev.duration_seconds);
                drop += ev.tps_drop * detail::event_drop_shape(u);
            }
            double tps = seasonal + w[hour_idx] + config.noise_scale * seg_noise[seg].normal() -
                         drop;
            tps = std::min(1.0, std::max(0.0, tps));
            traffic.tps.at(t, seg) = tps;
            traffic.volume.at(t, seg) = config.volume_base + config.volume_span * (1.0 - tps);
            traffic.speed.at(t, seg) = config.speed_max * tps;
        }
    }

    // Tweet stream. The base (neutral) rate anticipates w at the planted
    // lag; events add keyword-bearing bursts on top.
    const double sigma_v_eff = std::sqrt(
        config.common_noise_scale * config.common_noise_scale +
        config.noise_scale * config.noise_scale / (4.0 * static_cast<double>(m)));
    const double mu_hourly = config.tweet_base_rate * static_cast<double>(m);
    double beta = 0.0;
    if (config.target_correlation != 0.0 && config.common_noise_scale > 0.0) {
        const double adjusted =
            config.target_correlation * sigma_v_eff / config.common_noise_scale;
        beta = detail::calibrate_modulation(adjusted, config.common_noise_scale, mu_hourly);
    }

    nlohmann::json manifest_events = nlohmann::json::array();
    std::size_t total_accident = 0, total_culture = 0;

    std::vector<RngState> seg_tweets;
    for (std::size_t seg = 0; seg < m; ++seg) seg_tweets.push_back(root.derive(10000 + seg));

    // Per-event per-bin injected keyword counts, filled during generation.
    std::vector<std::vector<std::size_t>> event_bin_counts(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) {
        const std::size_t nbins =
            static_cast<std::size_t>((events[e].duration_seconds + kBinSeconds - 1) / kBinSeconds);
        event_bin_counts[e].assign(nbins, 0);
    }

    for (std::size_t t = 0; t < steps; ++t) {
        const std::int64_t ts = traffic.timestamp(t);
        const double day_frac = static_cast<double>(ts % 86400) / 86400.0;
        const std::size_t hour_idx = static_cast<std::size_t>((ts - config.start_epoch) / 3600);
        // Afternoon-peaked daily tweet pattern; always positive.
        const double seasonal_rate = 1.0 + 0.5 * std::sin(two_pi * (day_frac - 0.35));
        for (std::size_t seg = 0; seg < m; ++seg) {
            RngState& rng = seg_tweets[seg];
            const double base_bin_rate = config.tweet_base_rate / 4.0 * seasonal_rate *
                                         std::exp(beta * w[hour_idx + lag_h]);
            const int n_neutral = rng.poisson(base_bin_rate);
            const auto emit = [&](const std::vector<std::string>& pool) {
                TweetRecord tw;
                tw.ts = ts + static_cast<std::int64_t>(rng.below(kBinSeconds));
                tw.lat = s.centers[seg].lat + rng.uniform(-0.01, 0.01);
                tw.lon = s.centers[seg].lon + rng.uniform(-0.01, 0.01);
                tw.text = pool[rng.below(pool.size())];
                s.tweets.push_back(std::move(tw));
            };
            for (int i = 0; i < n_neutral; ++i) emit(detail::neutral_templates());
            for (std::size_t e = 0; e < events.size(); ++e) {
                const auto& ev = events[e];
                if (ev.segment_id != traffic.segment_ids[seg]) continue;
                if (ts < ev.start_epoch || ts >= ev.start_epoch + ev.duration_seconds) continue;
                const double extra_rate =
                    config.tweet_base_rate / 4.0 * (ev.tweet_burst - 1.0);
                const int n_event = rng.poisson(std::max(0.0, extra_rate));
                const std::size_t ev_bin =
                    static_cast<std::size_t>((ts - ev.start_epoch) / kBinSeconds);
                event_bin_counts[e][ev_bin] += static_cast<std::size_t>(n_event);
                for (int i = 0; i < n_event; ++i)
                    emit(ev.kind == "accident" ? detail::accident_templates()
                                               : detail::culture_templates());
                if (ev.kind == "accident")
                    total_accident += static_cast<std::size_t>(n_event);
                else
                    total_culture += static_cast<std::size_t>(n_event);
            }
        }
    }

    for (std::size_t e = 0; e < events.size(); ++e) {
        const auto& ev = events[e];
        std::size_t total = 0;
        for (std::size_t c : event_bin_counts[e]) total += c;
        manifest_events.push_back({{"kind", ev.kind},
                                   {"segment_id", ev.segment_id},
                                   {"start", iso8601_from_epoch(ev.start_epoch)},
                                   {"end", iso8601_from_epoch(ev.start_epoch + ev.duration_seconds)},
                                   {"tps_drop", ev.tps_drop},
                                   {"tweet_burst", ev.tweet_burst},
                                   {"keyword_tweets_per_bin", event_bin_counts[e]},
                                   {"keyword_tweets_total", total}});
    }

    s.manifest = {
        {"format_version", 1},
        {"segments", m},
        {"days", config.days},
        {"seed", config.seed},
        {"start", iso8601_from_epoch(config.start_epoch)},
        {"bins", steps},
        {"tps_base", config.tps_base},
        {"daily_amplitude", config.daily_amplitude},
        {"weekly_amplitude", config.weekly_amplitude},
        {"noise_scale", config.noise_scale},
        {"common_noise", {{"scale", config.common_noise_scale}, {"phi", config.common_noise_phi}}},
        {"tweets",
         {{"base_rate_per_hour", config.tweet_base_rate},
          {"total", s.tweets.size()},
          {"accident_keyword_total", total_accident},
          {"culture_keyword_total", total_culture}}},
        {"correlation",
         {{"target", config.target_correlation},
          {"lag_hours", config.planted_lag_hours},
          {"modulation_beta", beta},
          {"sigma_v_effective", sigma_v_eff}}},
        {"events", manifest_events},
    };
    return s;
}

inline ScenarioConfig scenario_config_from_json(const nlohmann::json& j) {
    ScenarioConfig c;
    c.segments = j.value("segments", c.segments);
    c.days = j.value("days", c.days);
    if (j.contains("start")) c.start_epoch = epoch_from_iso8601(j["start"].get<std::string>());
    c.seed = j.value("seed", c.seed);
    c.tps_base = j.value("tps_base", c.tps_base);
    c.daily_amplitude = j.value("daily_amplitude", c.daily_amplitude);
    c.weekly_amplitude = j.value("weekly_amplitude", c.weekly_amplitude);
    c.noise_scale = j.value("noise_scale", c.noise_scale);
    c.common_noise_scale = j.value("common_noise_scale", c.common_noise_scale);
    c.common_noise_phi = j.value("common_noise_phi", c.common_noise_phi);
    c.tweet_base_rate = j.value("tweet_base_rate", c.tweet_base_rate);
    c.planted_lag_hours = j.value("planted_lag_hours", c.planted_lag_hours);
    c.target_correlation = j.value("target_correlation", c.target_correlation);
    c.volume_base = j.value("volume_base", c.volume_base);
    c.volume_span = j.value("volume_span", c.volume_span);
    c.speed_max = j.value("speed_max", c.speed_max);
    if (j.contains("random_events")) {
        const auto& r = j["random_events"];
        c.random_events.accident_count = r.value("accident_count", c.random_events.accident_count);
        c.random_events.culture_count = r.value("culture_count", c.random_events.culture_count);
        c.random_events.min_drop = r.value("min_drop", c.random_events.min_drop);
        c.random_events.max_drop = r.value("max_drop", c.random_events.max_drop);
        c.random_events.culture_min_drop =
            r.value("culture_min_drop", c.random_events.culture_min_drop);
        c.random_events.culture_max_drop =
            r.value("culture_max_drop", c.random_events.culture_max_drop);
        c.random_events.min_duration_hours =
            r.value("min_duration_hours", c.random_events.min_duration_hours);
        c.random_events.max_duration_hours =
            r.value("max_duration_hours", c.random_events.max_duration_hours);
        c.random_events.tweet_burst = r.value("tweet_burst", c.random_events.tweet_burst);
    }
    if (j.contains("events")) {
        for (const auto& e : j["events"]) {
            EventSpec ev;
            ev.kind = e.at("kind").get<std::string>();
            ev.segment_id = e.at("segment_id").get<long>();
            ev.start_epoch = epoch_from_iso8601(e.at("start").get<std::string>());
            ev.duration_seconds =
                static_cast<std::int64_t>(e.at("duration_hours").get<double>() * 3600.0);
            ev.tps_drop = e.value("tps_drop", ev.tps_drop);
            ev.tweet_burst = e.value("tweet_burst", ev.tweet_burst);
            c.events.push_back(ev);
        }
    }
    return c;
}

} // namespace tweetcast
