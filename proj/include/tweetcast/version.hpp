#pragma once

namespace tweetcast {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace tweetcast
