#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace tweetcast {

/// Minimal deterministic polyline chart: fixed canvas, one colored line
/// per series, a zero axis when the range crosses it. CSV stays the
/// canonical output; this is a convenience rendering.
inline std::string svg_line_chart(const std::string& title,
                                  const std::vector<std::pair<std::string, std::vector<double>>>& series) {
    constexpr int kW = 860, kH = 360, kPad = 48;
    double lo = 0.0, hi = 0.0;
    std::size_t max_len = 0;
    bool first = true;
    for (const auto& [name, values] : series) {
        max_len = std::max(max_len, values.size());
        for (double v : values) {
            if (!std::isfinite(v)) continue;
            if (first) {
                lo = hi = v;
                first = false;
            } else {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (first || max_len < 2) {
        lo = 0.0;
        hi = 1.0;
        max_len = std::max<std::size_t>(max_len, 2);
    }
    if (hi - lo < 1e-12) hi = lo + 1.0;

    const auto x_of = [&](std::size_t i) {
        return kPad + (kW - 2.0 * kPad) * static_cast<double>(i) /
                          static_cast<double>(max_len - 1);
    };
    const auto y_of = [&](double v) {
        return kH - kPad - (kH - 2.0 * kPad) * (v - lo) / (hi - lo);
    };
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};

    std::ostringstream out;
    char buf[160];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kPad << "\" y=\"24\" font-family=\"monospace\" font-size=\"14\">"
        << title << "</text>\n";
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" "
                  "stroke=\"#888\"/>\n",
                  kPad, kPad, kW - 2 * kPad, kH - 2 * kPad);
    out << buf;
    if (lo < 0.0 && hi > 0.0) {
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%d\" y1=\"%.2f\" x2=\"%d\" y2=\"%.2f\" stroke=\"#bbb\" "
                      "stroke-dasharray=\"4 3\"/>\n",
                      kPad, y_of(0.0), kW - kPad, y_of(0.0));
        out << buf;
    }
    std::size_t idx = 0;
    for (const auto& [name, values] : series) {
        out << "<polyline fill=\"none\" stroke=\"" << palette[idx % 5]
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!std::isfinite(values[i])) continue;
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", x_of(i), y_of(values[i]));
            out << buf;
        }
        out << "\"/>\n";
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%d\" y=\"%.2f\" font-family=\"monospace\" font-size=\"12\" "
                      "fill=\"%s\">%s</text>\n",
                      kW - kPad + 4, kPad + 16.0 * static_cast<double>(idx + 1),
                      palette[idx % 5], name.c_str());
        out << buf;
        ++idx;
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" font-size=\"11\">min %.4g  "
                  "max %.4g  n %zu</text>\n",
                  kPad, kH - 12, lo, hi, max_len);
    out << buf;
    out << "</svg>\n";
    return out.str();
}

} // namespace tweetcast
