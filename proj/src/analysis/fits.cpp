#include "subrad/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subrad {

namespace {

struct Line {
    double slope;
    double intercept;
    double r2;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit: abscissae are all equal");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (intercept + slope * x[i]);
        ss_res += e * e;
    }
    const double r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return {slope, intercept, r2};
}

}  // namespace

std::pair<double, double> default_fit_window(const std::vector<std::pair<double, double>>& series) {
    if (series.empty()) throw std::invalid_argument("default_fit_window: empty series");
    double lo = series.front().first, hi = lo;
    for (const auto& [x, y] : series) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    int remaining = 0;
    for (const auto& [x, y] : series)
        if (x >= lo + 10.0) ++remaining;
    if (remaining >= 5) lo += 10.0;
    return {lo, hi};
}

FitResult fit_power_law(const std::vector<std::pair<double, double>>& series,
                        std::optional<std::pair<double, double>> window) {
    const auto [lo, hi] = window ? *window : default_fit_window(series);
    std::vector<double> lx, ly;
    for (const auto& [x, y] : series) {
        if (x < lo || x > hi) continue;
        if (!(y > 0.0) || !(x > 0.0)) throw std::invalid_argument("fit_power_law: nonpositive value in window");
        lx.push_back(std::log(x));
        ly.push_back(std::log(y));
    }
    if (lx.size() < 5) throw std::invalid_argument("fit_power_law: need at least 5 points in the window");
    const Line l = least_squares(lx, ly);
    FitResult f;
    f.model = FitModel::PowerLaw;
    f.exponent = l.slope;
    f.ratio = 0.0;
    f.amplitude = std::exp(l.intercept);
    f.window_lo = lo;
    f.window_hi = hi;
    f.points = static_cast<int>(lx.size());
    f.r2 = l.r2;
    return f;
}

FitResult fit_exponential_tail(const std::vector<std::pair<double, double>>& profile) {
    if (profile.size() < 4) throw std::invalid_argument("fit_exponential_tail: need at least 4 points");
    std::vector<double> x, ly;
    double lo = profile.front().first, hi = lo;
    for (const auto& [s, w] : profile) {
        if (!(w > 0.0)) throw std::invalid_argument("fit_exponential_tail: nonpositive weight");
        x.push_back(s);
        ly.push_back(std::log(w));
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    const Line l = least_squares(x, ly);
    FitResult f;
    f.model = FitModel::Exponential;
    f.exponent = l.slope;
    f.ratio = std::exp(l.slope);
    f.amplitude = std::exp(l.intercept);
    f.window_lo = lo;
    f.window_hi = hi;
    f.points = static_cast<int>(x.size());
    f.r2 = l.r2;
    return f;
}

ModulationReport period4_modulation(const std::vector<std::pair<double, double>>& series, double noise_floor) {
    if (series.size() < 16) throw std::invalid_argument("period4_modulation: need at least 16 points");
    auto s = series;
    std::sort(s.begin(), s.end());
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i].first != s[i - 1].first + 1.0)
            throw std::invalid_argument("period4_modulation: N values must be consecutive");
    const std::size_t n = s.size();
    Eigen::MatrixXd a(static_cast<Index>(n), 3);
    Eigen::VectorXd y(static_cast<Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (!(s[i].second > 0.0)) throw std::invalid_argument("period4_modulation: nonpositive rate");
        const double t = std::log(s[i].first);
        a(static_cast<Index>(i), 0) = 1.0;
        a(static_cast<Index>(i), 1) = t;
        a(static_cast<Index>(i), 2) = t * t;
        y(static_cast<Index>(i)) = std::log(s[i].second);
    }
    const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd r = y - a * coef;

    ModulationReport rep;
    rep.points = static_cast<int>(n);
    rep.noise_floor = noise_floor;
    const double c0 = r.squaredNorm();
    for (int lag = 1; lag <= 8; ++lag) {
        double c = 0.0;
        for (std::size_t i = 0; i + static_cast<std::size_t>(lag) < n; ++i)
            c += r(static_cast<Index>(i)) * r(static_cast<Index>(i) + lag);
        rep.autocorrelation.push_back(c0 > 0.0 ? c / c0 : 0.0);
    }
    int best = 2;
    for (int lag = 3; lag <= 8; ++lag)
        if (rep.autocorrelation[static_cast<std::size_t>(lag - 1)] > rep.autocorrelation[static_cast<std::size_t>(best - 1)])
            best = lag;
    rep.dominant_period = best;
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i)
        acc += r(static_cast<Index>(i)) * std::polar(1.0, -0.5 * kPi * s[i].first);
    rep.period4_amplitude = 2.0 * std::abs(acc) / static_cast<double>(n);
    rep.significant = rep.dominant_period == 4 && rep.autocorrelation[3] > 0.5 &&
                      rep.period4_amplitude > std::max(10.0 * noise_floor, 1e-3);
    return rep;
}

std::vector<Branch> cluster_branches(const std::vector<cplx>& eigenvalues, double rate_cut, double gap) {
    std::vector<cplx> sub;
    for (const auto& l : eigenvalues)
        if (decay_rate(l) < rate_cut) sub.push_back(l);
    std::sort(sub.begin(), sub.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    std::vector<Branch> out;
    for (std::size_t i = 0; i < sub.size(); ++i) {
        if (i == 0 || sub[i].real() - sub[i - 1].real() > gap) {
            out.push_back({sub[i].real(), sub[i].real(), 0, decay_rate(sub[i])});
        }
        Branch& b = out.back();
        b.re_max = sub[i].real();
        ++b.members;
        b.min_decay = std::min(b.min_decay, decay_rate(sub[i]));
    }
    return out;
}

}  // namespace subrad
