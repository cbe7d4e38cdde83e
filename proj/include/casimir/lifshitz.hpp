#pragma once

// Casimir energy per unit area between two identical flat half-spaces
// (Lifshitz formula) and its derivative with respect to the separation.
//
// Finite temperature uses the Matsubara sum
//
//   U(d,T) = (k_B T / 2 pi) sum'_n int k dk sum_p ln[1 - r_p^2 exp(-2 q_n d)],
//
// zero temperature replaces k_B T sum'_n by (hbar / 2 pi) int d xi.
// All wavevector integrals are done in the dimensionless variable y = 2 q d.

#include <cstdint>

#include "casimir/materials.hpp"

namespace casimir {

enum class TemperatureMode { finite, zero };

class Environment {
public:
    static Environment at_temperature(double temperature_K);
    static Environment zero_temperature();

    TemperatureMode mode() const noexcept { return mode_; }
    double temperature_K() const noexcept { return temperature_K_; }
    /// hbar c / (k_B T) in nm; infinite at T = 0.
    double thermal_wavelength_nm() const;

private:
    Environment(TemperatureMode mode, double T) : mode_(mode), temperature_K_(T) {}

    TemperatureMode mode_;
    double temperature_K_;
};

struct QuadratureSpec {
    /// Relative tolerance of every adaptive integral, in (0, 1e-3].
    double rel_tol = 1e-8;
    /// A Matsubara term below tail_threshold * |partial sum| counts as tail; three in a row stop the sum.
    double tail_threshold = 1e-10;
    /// Extra width added to the y = 2 q d integration window of 60.
    double cutoff_multiplier = 0.0;

    void validate() const;
};

struct PlateEnergy {
    double energy = 0.0;      ///< U(d), J/m^2
    double derivative = 0.0;  ///< dU/dd, J/m^3
    std::int64_t matsubara_terms = 0;
};

/// U and dU/dd evaluated together; both share one pass over the Matsubara terms.
PlateEnergy plate_energy(const Material& material, double d_nm, const Environment& env,
                         const QuadratureSpec& spec = {});

/// U(d, T) in J/m^2. Always negative.
double energy_per_area(const Material& material, double d_nm, const Environment& env,
                       const QuadratureSpec& spec = {});

/// dU/dd in J/m^3, from the analytically differentiated integrand. Always positive.
double energy_derivative(const Material& material, double d_nm, const Environment& env,
                         const QuadratureSpec& spec = {});

/// xi_n = 2 pi n k_B T / hbar in rad/s.
double matsubara_frequency(std::int64_t n, double temperature_K);

}  // namespace casimir
