#include "subrad/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace subrad {

namespace {

constexpr double kWidth = 720, kHeight = 460;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;

const std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                             "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
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

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v, bool log) {
    char buf[32];
    if (log) std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(std::lround(v)));
    else std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;
    double pixel_lo = 0.0, pixel_hi = 1.0;

    double map(double v) const {
        const double t = log ? std::log10(v) : v;
        return pixel_lo + (t - lo) / (hi - lo) * (pixel_hi - pixel_lo);
    }
    bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

Axis make_axis(const std::vector<double>& values, bool log, double p0, double p1) {
    Axis a;
    a.log = log;
    a.pixel_lo = p0;
    a.pixel_hi = p1;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : values) {
        if (!a.usable(v)) continue;
        const double t = log ? std::log10(v) : v;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    if (log) {
        lo = std::floor(lo);
        hi = std::ceil(hi);
    } else {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    a.lo = lo;
    a.hi = hi;
    return a;
}

void header(std::ostringstream& o, const std::string& title) {
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
      << "</text>\n";
}

void axes(std::ostringstream& o, const Axis& x, const Axis& y, const std::string& xl, const std::string& yl) {
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    o << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    auto ticks = [](const Axis& a) {
        std::vector<double> t;
        if (a.log) {
            const int step = std::max(1, static_cast<int>(std::ceil((a.hi - a.lo) / 8.0)));
            for (double v = a.lo; v <= a.hi + 1e-9; v += step) t.push_back(v);
        } else {
            for (int i = 0; i <= 5; ++i) t.push_back(a.lo + (a.hi - a.lo) * i / 5.0);
        }
        return t;
    };
    for (double t : ticks(x)) {
        const double px = x.pixel_lo + (t - x.lo) / (x.hi - x.lo) * (x.pixel_hi - x.pixel_lo);
        o << "<line x1=\"" << num(px) << "\" y1=\"" << y0 << "\" x2=\"" << num(px) << "\" y2=\"" << y0 + 5
          << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << num(px) << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\">" << tick_label(t, x.log)
          << "</text>\n";
    }
    for (double t : ticks(y)) {
        const double py = y.pixel_lo + (t - y.lo) / (y.hi - y.lo) * (y.pixel_hi - y.pixel_lo);
        o << "<line x1=\"" << x0 - 5 << "\" y1=\"" << num(py) << "\" x2=\"" << x0 << "\" y2=\"" << num(py)
          << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << x0 - 8 << "\" y=\"" << num(py + 4) << "\" text-anchor=\"end\">" << tick_label(t, y.log)
          << "</text>\n";
    }
    o << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 18 << "\" text-anchor=\"middle\">" << escape(xl)
      << "</text>\n";
    o << "<text x=\"18\" y=\"" << (y0 + y1) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (y0 + y1) / 2 << ")\">" << escape(yl) << "</text>\n";
}

std::string viridis(double t) {
    static const std::array<std::array<double, 3>, 5> stops = {{{68, 1, 84}, {59, 82, 139}, {33, 145, 140},
                                                                 {94, 201, 98}, {253, 231, 37}}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int i = std::min(3, static_cast<int>(t));
    const double f = t - i;
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                  static_cast<int>(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                  static_cast<int>(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                  static_cast<int>(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
    return buf;
}

}  // namespace

std::string render_svg(const LinePlot& plot) {
    std::vector<double> xs, ys;
    for (const auto& s : plot.series) {
        xs.insert(xs.end(), s.x.begin(), s.x.end());
        ys.insert(ys.end(), s.y.begin(), s.y.end());
    }
    const Axis x = make_axis(xs, plot.logx, kLeft, kWidth - kRight);
    const Axis y = make_axis(ys, plot.logy, kHeight - kBottom, kTop);
    std::ostringstream o;
    header(o, plot.title);
    axes(o, x, y, plot.xlabel, plot.ylabel);
    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const char* color = kPalette[k % kPalette.size()];
        std::string path;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!x.usable(s.x[i]) || !y.usable(s.y[i])) {
                if (!path.empty()) path += ' ';
                continue;
            }
            const double px = x.map(s.x[i]), py = y.map(s.y[i]);
            if (s.markers) {
                o << "<circle cx=\"" << num(px) << "\" cy=\"" << num(py) << "\" r=\"2\" fill=\"" << color << "\"/>\n";
            } else {
                path += (path.empty() || path.back() == ' ') ? "M" : "L";
                path += num(px) + "," + num(py) + " ";
            }
        }
        if (!path.empty())
            o << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
        const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
        o << "<rect x=\"" << kWidth - kRight + 12 << "\" y=\"" << ly - 8 << "\" width=\"12\" height=\"3\" fill=\""
          << color << "\"/>\n";
        o << "<text x=\"" << kWidth - kRight + 30 << "\" y=\"" << ly - 2 << "\">" << escape(s.name) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::string render_svg(const HeatmapPlot& plot) {
    const std::size_t nx = plot.x.size(), ny = plot.y.size();
    const Axis x = make_axis(plot.x, false, kLeft, kWidth - kRight);
    const Axis y = make_axis(plot.y, false, kHeight - kBottom, kTop);
    double vlo = std::numeric_limits<double>::infinity(), vhi = -vlo;
    auto transform = [&plot](double v) { return plot.log_scale ? std::log10(v) : v; };
    for (double v : plot.values) {
        if (!std::isfinite(v) || (plot.log_scale && v <= 0.0)) continue;
        vlo = std::min(vlo, transform(v));
        vhi = std::max(vhi, transform(v));
    }
    if (!std::isfinite(vlo)) vlo = 0.0, vhi = 1.0;
    if (vhi - vlo < 1e-12) vhi = vlo + 1.0;
    std::ostringstream o;
    header(o, plot.title);
    // Cell edges at midpoints between neighbouring coordinates.
    auto edges = [](const std::vector<double>& c) {
        std::vector<double> e(c.size() + 1);
        if (c.size() == 1) {
            e[0] = c[0] - 0.5;
            e[1] = c[0] + 0.5;
            return e;
        }
        for (std::size_t i = 1; i < c.size(); ++i) e[i] = 0.5 * (c[i - 1] + c[i]);
        e[0] = c[0] - (e[1] - c[0]);
        e[c.size()] = c.back() + (c.back() - e[c.size() - 1]);
        return e;
    };
    const auto ex = edges(plot.x), ey = edges(plot.y);
    for (std::size_t r = 0; r < ny; ++r)
        for (std::size_t c = 0; c < nx; ++c) {
            const double v = r * nx + c < plot.values.size() ? plot.values[r * nx + c] : std::nan("");
            if (!std::isfinite(v) || (plot.log_scale && v <= 0.0)) continue;
            const double px0 = x.map(ex[c]), px1 = x.map(ex[c + 1]);
            const double py0 = y.map(ey[r + 1]), py1 = y.map(ey[r]);
            o << "<rect x=\"" << num(std::min(px0, px1)) << "\" y=\"" << num(std::min(py0, py1)) << "\" width=\""
              << num(std::abs(px1 - px0) + 0.3) << "\" height=\"" << num(std::abs(py1 - py0) + 0.3) << "\" fill=\""
              << viridis((transform(v) - vlo) / (vhi - vlo)) << "\"/>\n";
        }
    axes(o, x, y, plot.xlabel, plot.ylabel);
    const double bx = kWidth - kRight + 30, by0 = kHeight - kBottom, by1 = kTop;
    for (int i = 0; i < 50; ++i) {
        const double t0 = i / 50.0;
        o << "<rect x=\"" << bx << "\" y=\"" << num(by0 - (i + 1) * (by0 - by1) / 50.0) << "\" width=\"18\" height=\""
          << num((by0 - by1) / 50.0 + 0.3) << "\" fill=\"" << viridis(t0 + 0.01) << "\"/>\n";
    }
    char lo[32], hi[32];
    std::snprintf(lo, sizeof lo, plot.log_scale ? "1e%.2f" : "%.3g", vlo);
    std::snprintf(hi, sizeof hi, plot.log_scale ? "1e%.2f" : "%.3g", vhi);
    o << "<text x=\"" << bx + 24 << "\" y=\"" << by0 << "\">" << lo << "</text>\n";
    o << "<text x=\"" << bx + 24 << "\" y=\"" << by1 + 10 << "\">" << hi << "</text>\n";
    o << "</svg>\n";
    return o.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string plot_file_name(const RunConfig& config, const std::string& suffix) {
    // Where and how fast a run goes does not change what it computes.
    nlohmann::json key = to_json(config);
    key.erase("output_dir");
    key.erase("jobs");
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(key.dump() + suffix)));
    return config.experiment + "-" + hex + ".svg";
}

}  // namespace subrad
