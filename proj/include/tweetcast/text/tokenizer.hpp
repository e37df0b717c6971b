#pragma once

#include <cctype>
#include <string>
#include <vector>

namespace tweetcast {

namespace detail {

inline bool is_word_byte(unsigned char c) {
    // ASCII alphanumerics plus any non-ASCII byte (UTF-8 continuation or
    // lead bytes are treated as letter material).
    return std::isalnum(c) != 0 || c >= 0x80;
}

inline bool matches_at(const std::string& s, std::size_t i, const char* prefix) {
    for (std::size_t k = 0; prefix[k] != '\0'; ++k) {
        if (i + k >= s.size()) return false;
        if (std::tolower(static_cast<unsigned char>(s[i + k])) != prefix[k]) return false;
    }
    return true;
}

} // namespace detail

/// Lowercased word tokens: alphanumeric runs are kept, '#' is stripped so
/// hashtags keep their word part, URLs and @-mentions are removed whole.
inline std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    const auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    };
    std::size_t i = 0;
    bool prev_word = false;
    while (i < text.size()) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (!prev_word && (detail::matches_at(text, i, "http://") ||
                           detail::matches_at(text, i, "https://") ||
                           detail::matches_at(text, i, "www."))) {
            flush();
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
            prev_word = false;
            continue;
        }
        if (c == '@' && !prev_word && i + 1 < text.size() &&
            detail::is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
            flush();
            ++i;
            while (i < text.size() && (detail::is_word_byte(static_cast<unsigned char>(text[i])) ||
                                       text[i] == '_'))
                ++i;
            prev_word = false;
            continue;
        }
        if (detail::is_word_byte(c)) {
            current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : text[i]);
            prev_word = true;
        } else {
            flush();
            prev_word = false;
        }
        ++i;
    }
    flush();
    return tokens;
}

} // namespace tweetcast
