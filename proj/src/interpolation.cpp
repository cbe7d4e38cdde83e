#include "casimir/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "casimir/errors.hpp"

namespace casimir {

namespace {

void check_knots(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("interpolation: abscissa and ordinate sizes differ");
    if (x.size() < 4) throw DomainError("interpolation: at least 4 knots are required");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw DomainError("interpolation: abscissae must be strictly increasing");
    for (double v : y)
        if (!std::isfinite(v)) throw DomainError("interpolation: non-finite ordinate");
}

double end_slope(double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) return 0.0;
    if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0)) s = 3.0 * d0;
    return s;
}

std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> h(n - 1);
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    std::vector<double> m(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) continue;
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
    m.front() = end_slope(h[0], h[1], delta[0], delta[1]);
    m.back() = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return m;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)), x_min_(0.0), x_max_(0.0) {
    check_knots(x_, y_);
    slope_ = pchip_slopes(x_, y_);
    x_min_ = x_.front();
    x_max_ = x_.back();
}

void MonotoneCubic::check_range(double x) const {
    if (!(x >= x_min_ && x <= x_max_))
        throw RangeError("interpolation query " + std::to_string(x) + " outside [" + std::to_string(x_min_) + ", " +
                         std::to_string(x_max_) + "]");
}

namespace {

std::size_t segment(const std::vector<double>& x, double v) {
    const auto it = std::upper_bound(x.begin(), x.end(), v);
    const auto i = static_cast<std::size_t>(std::distance(x.begin(), it));
    return std::clamp<std::size_t>(i, 1, x.size() - 1) - 1;
}

}  // namespace

double MonotoneCubic::operator()(double x) const {
    check_range(x);
    const std::size_t i = segment(x_, x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    if (t == 0.0) return y_[i];
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * y_[i] + (t3 - 2.0 * t2 + t) * h * slope_[i] +
           (-2.0 * t3 + 3.0 * t2) * y_[i + 1] + (t3 - t2) * h * slope_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
    check_range(x);
    const std::size_t i = segment(x_, x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    return (6.0 * t2 - 6.0 * t) * y_[i] / h + (3.0 * t2 - 4.0 * t + 1.0) * slope_[i] +
           (-6.0 * t2 + 6.0 * t) * y_[i + 1] / h + (3.0 * t2 - 2.0 * t) * slope_[i + 1];
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && hi > lo) || n < 2) throw DomainError("geometric_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo * std::exp(step * static_cast<double>(i));
    g.front() = lo;
    g.back() = hi;
    return g;
}

}  // namespace casimir
