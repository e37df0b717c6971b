#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tweetcast/core/errors.hpp"

namespace tweetcast {

struct TweetRecord {
    std::int64_t ts = 0;  // UTC epoch seconds
    double lat = 0.0;
    double lon = 0.0;
    std::string text;
};

inline void validate(const TweetRecord& t) {
    if (t.lat < -90.0 || t.lat > 90.0 || t.lon < -180.0 || t.lon > 180.0)
        throw ContractError("tweet coordinates out of range");
}

/// One JSON object per line: {"ts": seconds, "lat": f, "lon": f, "text": s}.
inline std::vector<TweetRecord> tweets_from_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<TweetRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("ts") || !j.contains("lat") ||
            !j.contains("lon") || !j.contains("text"))
            throw ParseError(path + ": malformed tweet on line " + std::to_string(line_no));
        TweetRecord t;
        t.ts = j["ts"].get<std::int64_t>();
        t.lat = j["lat"].get<double>();
        t.lon = j["lon"].get<double>();
        t.text = j["text"].get<std::string>();
        validate(t);
        out.push_back(std::move(t));
    }
    return out;
}

inline std::string tweets_to_jsonl(const std::vector<TweetRecord>& tweets) {
    std::ostringstream out;
    for (const auto& t : tweets) {
        nlohmann::json j;
        j["ts"] = t.ts;
        j["lat"] = t.lat;
        j["lon"] = t.lon;
        j["text"] = t.text;
        out << j.dump() << "\n";
    }
    return out.str();
}

} // namespace tweetcast
