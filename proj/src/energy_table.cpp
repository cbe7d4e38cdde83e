#include "casimir/energy_table.hpp"

#include <cmath>

#include "casimir/errors.hpp"
#include "casimir/parallel.hpp"

namespace casimir {

PlateEnergyTable PlateEnergyTable::build(const Material& material, const Environment& env,
                                         const QuadratureSpec& spec, double lo_nm, double hi_nm, double center_nm,
                                         double window_nm, std::size_t min_knots_per_window) {
    if (!(lo_nm > 0.0 && hi_nm > lo_nm && center_nm >= lo_nm && center_nm <= hi_nm))
        throw DomainError("energy table: need 0 < lo <= center <= hi");
    if (min_knots_per_window < 4) min_knots_per_window = 4;

    // Widest ratio step that still leaves the requested knot density in the
    // narrowest (top-most) window, and never coarser than 64 knots overall.
    double step = std::log(hi_nm / lo_nm) / 63.0;
    if (window_nm > 0.0 && hi_nm - window_nm > 0.0)
        step = std::min(step, std::log(hi_nm / (hi_nm - window_nm)) / static_cast<double>(min_knots_per_window - 1));
    else if (window_nm > 0.0)
        step = std::min(step, std::log(hi_nm / lo_nm) / static_cast<double>(min_knots_per_window - 1));

    const auto below = static_cast<long>(std::ceil(std::log(center_nm / lo_nm) / step));
    const auto above = static_cast<long>(std::ceil(std::log(hi_nm / center_nm) / step));
    std::vector<double> h;
    h.reserve(static_cast<std::size_t>(below + above + 1));
    for (long k = -below; k <= above; ++k) h.push_back(k == 0 ? center_nm : center_nm * std::exp(step * k));
    while (h.size() < 4) h.push_back(h.back() * std::exp(step));

    std::vector<PlateEnergy> values(h.size());
    parallel_for(h.size(), [&](std::size_t i) { values[i] = plate_energy(material, h[i], env, spec); });

    std::vector<double> log_h(h.size());
    std::vector<double> log_e(h.size());
    std::vector<double> log_d(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(values[i].energy < 0.0) || !(values[i].derivative > 0.0))
            throw ConvergenceError("energy table: unexpected sign of U or U'", values[i].energy);
        log_h[i] = std::log(h[i]);
        log_e[i] = std::log(-values[i].energy);
        log_d[i] = std::log(values[i].derivative);
    }
    MonotoneCubic energy(log_h, std::move(log_e));
    MonotoneCubic derivative(std::move(log_h), std::move(log_d));
    return PlateEnergyTable(std::move(energy), std::move(derivative));
}

double PlateEnergyTable::energy(double h_nm) const {
    if (!(h_nm > 0.0)) throw DomainError("energy table: separation must be positive");
    return -std::exp(log_energy_(std::log(h_nm)));
}

double PlateEnergyTable::derivative(double h_nm) const {
    if (!(h_nm > 0.0)) throw DomainError("energy table: separation must be positive");
    return std::exp(log_derivative_(std::log(h_nm)));
}

}  // namespace casimir
