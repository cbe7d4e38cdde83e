#pragma once

#include <span>
#include <vector>

namespace casimir {

/// Monotone piecewise-cubic Hermite interpolant (PCHIP: Fritsch-Butland
/// harmonic-mean slopes, shape-preserving one-sided end slopes).
/// Reproduces its knots exactly and never overshoots monotone data.
/// Queries outside [front, back] raise RangeError.
class MonotoneCubic {
public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    std::span<const double> knots_x() const noexcept { return x_; }
    std::span<const double> knots_y() const noexcept { return y_; }

private:
    void check_range(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> slope_;
    double x_min_;
    double x_max_;
};

/// n points from lo to hi with constant ratio; both ends exact.
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

}  // namespace casimir
