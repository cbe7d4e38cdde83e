#pragma once

#include <cmath>
#include <vector>

#include "casimir/interpolation.hpp"
#include "casimir/lifshitz.hpp"

namespace casimir {

/// Flat-plate U(H) and U'(H) precomputed on a geometric separation grid and
/// interpolated monotonically in log-log coordinates (both ln|U| and ln U'
/// are close to linear in ln H).
class PlateEnergyTable {
public:
    /// Knots are z * r^k for integer k, so `center_nm` itself is a knot.
    /// The grid covers [lo_nm, hi_nm] and places at least `min_knots_per_window`
    /// knots in every window of width `window_nm` inside the range.
    static PlateEnergyTable build(const Material& material, const Environment& env, const QuadratureSpec& spec,
                                  double lo_nm, double hi_nm, double center_nm, double window_nm,
                                  std::size_t min_knots_per_window = 64);

    double energy(double h_nm) const;      ///< J/m^2
    double derivative(double h_nm) const;  ///< J/m^3

    double lo_nm() const noexcept { return std::exp(log_energy_.x_min()); }
    double hi_nm() const noexcept { return std::exp(log_energy_.x_max()); }
    std::size_t knots() const noexcept { return log_energy_.knots_x().size(); }

private:
    PlateEnergyTable(MonotoneCubic e, MonotoneCubic d) : log_energy_(std::move(e)), log_derivative_(std::move(d)) {}

    MonotoneCubic log_energy_;
    MonotoneCubic log_derivative_;
};

}  // namespace casimir
