#ifndef MUDR_EMIT_HPP
#define MUDR_EMIT_HPP

/**
 * @file emit.hpp
 * @brief Deterministic CSV and SVG emitters plus atomic file writes.
 *
 * Numbers are written as the shortest decimal that round-trips; lines end in
 * LF. Identical inputs give byte-identical files.
 */

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "mudr/error.hpp"
#include "mudr/rates.hpp"
#include "mudr/region.hpp"

namespace mudr::emit {

class IoError : public Error {
public:
    using Error::Error;
};

inline std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

/// Writes `content` to `path` through a sibling temp file and a rename.
inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string());
    }
}

inline void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string());
    }
}

/// region.csv: curve_label, alpha_or_nan, r_est_bps, r_com_bps, self_consistent.
/// The waterfill block lists every evaluated alpha, flagged points included.
inline std::string region_csv(const RegionResult& region) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::ostringstream out;
    out << "curve_label,alpha_or_nan,r_est_bps,r_com_bps,self_consistent\n";
    for (const auto& curve : region.curves) {
        if (curve.label == "waterfill") {
            for (std::size_t i = 0; i < region.waterfill.points.size(); ++i) {
                const auto& p = region.waterfill.points[i];
                out << curve.label << ',' << format_double(region.waterfill.alpha[i]) << ','
                    << format_double(p.r_est) << ',' << format_double(p.r_com()) << ','
                    << (p.self_consistent ? "true" : "false") << '\n';
            }
            continue;
        }
        for (const auto& p : curve.points) {
            out << curve.label << ',' << format_double(nan) << ',' << format_double(p.r_est) << ','
                << format_double(p.r_com) << ",true\n";
        }
    }
    return out.str();
}

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct PlotStyle {
    std::string title;
    std::string x_label;
    std::string y_label;
};

/**
 * Line plot on a fixed 800x600 viewBox with linear axes, one <path> per
 * curve and a legend built from the curve labels. Empty curves still get an
 * (empty) path so every label is present.
 */
inline std::string svg_plot(std::span<const RateCurve> curves, const PlotStyle& style) {
    constexpr double width = 800.0;
    constexpr double height = 600.0;
    constexpr double left = 90.0;
    constexpr double right = 160.0;
    constexpr double top = 50.0;
    constexpr double bottom = 70.0;
    static constexpr std::array<const char*, 8> palette = {
        "#d62728", "#2ca02c", "#7f7f7f", "#1f77b4", "#111111", "#9467bd", "#ff7f0e", "#17becf"};

    double x_max = 0.0;
    double y_max = 0.0;
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            x_max = std::max(x_max, p.r_est);
            y_max = std::max(y_max, p.r_com);
        }
    }
    x_max = x_max > 0.0 ? 1.05 * x_max : 1.0;
    y_max = y_max > 0.0 ? 1.05 * y_max : 1.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    auto sx = [&](double x) { return left + plot_w * x / x_max; };
    auto sy = [&](double y) { return top + plot_h * (1.0 - y / y_max); };
    auto num = [](double v) {
        std::array<char, 32> buf{};
        const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 2);
        return std::string(buf.data(), res.ptr);
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    if (!style.title.empty()) {
        svg << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
            << xml_escape(style.title) << "</text>\n";
    }
    svg << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
        << "<line x1=\"" << num(left) << "\" y1=\"" << num(top + plot_h) << "\" x2=\"" << num(left + plot_w)
        << "\" y2=\"" << num(top + plot_h) << "\"/>\n"
        << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\""
        << num(top + plot_h) << "\"/>\n"
        << "</g>\n";

    svg << "<g font-size=\"11\" fill=\"black\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = x_max * i / 5.0;
        const double fy = y_max * i / 5.0;
        svg << "<text x=\"" << num(sx(fx)) << "\" y=\"" << num(top + plot_h + 18)
            << "\" text-anchor=\"middle\">" << xml_escape(format_double(std::round(fx * 1e3) / 1e3))
            << "</text>\n";
        svg << "<text x=\"" << num(left - 6) << "\" y=\"" << num(sy(fy) + 4) << "\" text-anchor=\"end\">"
            << xml_escape(format_double(std::round(fy * 1e3) / 1e3)) << "</text>\n";
    }
    svg << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << num(height - 20)
        << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(style.x_label) << "</text>\n";
    svg << "<text x=\"20\" y=\"" << num(top + plot_h / 2) << "\" text-anchor=\"middle\" font-size=\"13\" "
        << "transform=\"rotate(-90 20 " << num(top + plot_h / 2) << ")\">" << xml_escape(style.y_label)
        << "</text>\n";
    svg << "</g>\n";

    for (std::size_t i = 0; i < curves.size(); ++i) {
        const auto& c = curves[i];
        std::ostringstream d;
        for (std::size_t k = 0; k < c.points.size(); ++k) {
            d << (k == 0 ? "M " : " L ") << num(sx(c.points[k].r_est)) << ' ' << num(sy(c.points[k].r_com));
        }
        const bool dashed = c.label == "sic" || c.label == "interpolated";
        svg << "<path id=\"curve-" << xml_escape(c.label) << "\" data-label=\"" << xml_escape(c.label)
            << "\" d=\"" << d.str() << "\" fill=\"none\" stroke=\"" << palette[i % palette.size()]
            << "\" stroke-width=\"2\"" << (dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    }

    svg << "<g font-size=\"12\">\n";
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const double y = top + 10 + 20.0 * static_cast<double>(i);
        const double x = width - right + 15;
        svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x + 25) << "\" y2=\""
            << num(y) << "\" stroke=\"" << palette[i % palette.size()] << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << num(x + 32) << "\" y=\"" << num(y + 4) << "\">" << xml_escape(curves[i].label)
            << "</text>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

} // namespace mudr::emit

#endif // MUDR_EMIT_HPP
