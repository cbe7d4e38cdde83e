#include "casimir/lifshitz.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"

namespace casimir {

namespace {

using GaussKronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
constexpr unsigned kMaxDepth = 20;

/// Reflection data of one Matsubara frequency in the y = 2 q d variables.
struct Mode {
    double eta = 0.0;       // 2 xi d / c, lower edge of the y range
    double eps = 1.0;       // eps(i xi)
    bool perfect = false;   // r_TE^2 = r_TM^2 = 1
    bool te_vanishes = false;
    double te_screening = 0.0;  // (eps - 1) eta^2, or (2 omega_p d / c)^2 for the static plasma limit
};

struct Reflections {
    double te2;
    double tm2;
};

Reflections reflections(const Mode& m, double y) {
    if (m.perfect) return {1.0, 1.0};
    if (m.eta == 0.0) {
        // static limit: TM is perfectly reflecting for any conductor
        double te2 = 0.0;
        if (!m.te_vanishes) {
            const double k = std::sqrt(y * y + m.te_screening);
            const double r = m.te_screening / ((y + k) * (y + k));
            te2 = r * r;
        }
        return {te2, 1.0};
    }
    const double k = std::sqrt(y * y + m.te_screening);
    const double r_te = m.te_screening / ((y + k) * (y + k));  // -(y - k)/(y + k)
    const double r_tm = (m.eps * y - k) / (m.eps * y + k);
    return {r_te * r_te, r_tm * r_tm};
}

double energy_integrand(const Mode& m, double y) {
    const auto [te2, tm2] = reflections(m, y);
    const double e = std::exp(-y);
    return y * (std::log1p(-te2 * e) + std::log1p(-tm2 * e));
}

double derivative_term(double r2, double y) {
    if (r2 == 0.0) return 0.0;
    if (r2 == 1.0) return 1.0 / std::expm1(y);
    const double x = r2 * std::exp(-y);
    return x / (1.0 - x);
}

double derivative_integrand(const Mode& m, double y) {
    if (y == 0.0) return 0.0;
    const auto [te2, tm2] = reflections(m, y);
    return y * y * (derivative_term(te2, y) + derivative_term(tm2, y));
}

Mode make_mode(const Material& material, double xi, double d_m) {
    Mode m;
    m.eta = 2.0 * xi * d_m / constants::c;
    if (material.is_ideal()) {
        m.perfect = true;
        return m;
    }
    if (xi == 0.0) {
        if (material.dissipationless()) {
            const double wp = units::ev_to_rad_per_s(material.hbar_omega_p_eV());
            const double s = 2.0 * wp * d_m / constants::c;
            m.te_screening = s * s;
        } else {
            m.te_vanishes = true;
        }
        return m;
    }
    m.eps = epsilon_imag(material, xi);
    m.te_screening = (m.eps - 1.0) * m.eta * m.eta;
    return m;
}

struct TermIntegrals {
    double energy;
    double derivative;
};

double integrate_checked(auto&& f, double a, double b, double tol, const char* what) {
    double error = 0.0;
    double l1 = 0.0;
    const double value = GaussKronrod::integrate(f, a, b, kMaxDepth, tol, &error, &l1);
    if (!std::isfinite(value)) throw ConvergenceError(std::string(what) + ": non-finite integral", error);
    if (error > 10.0 * tol * l1 && error > 1e-300)
        throw ConvergenceError(std::string(what) + ": wavevector integral did not converge", error / l1);
    return value;
}

TermIntegrals mode_integrals(const Mode& m, const QuadratureSpec& spec) {
    const double width = 60.0 + spec.cutoff_multiplier;
    const double a = m.eta;
    // The integrand varies on the scale of one e-fold near the lower edge.
    const std::array<double, 4> edges{a, a + 2.0, a + 12.0, a + width};
    TermIntegrals out{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        out.energy += integrate_checked([&](double y) { return energy_integrand(m, y); }, edges[i], edges[i + 1],
                                        spec.rel_tol, "energy");
        out.derivative += integrate_checked([&](double y) { return derivative_integrand(m, y); }, edges[i],
                                            edges[i + 1], spec.rel_tol, "derivative");
    }
    return out;
}

PlateEnergy finite_temperature(const Material& material, double d_m, const Environment& env,
                               const QuadratureSpec& spec) {
    const double T = env.temperature_K();
    const double lambda_T = constants::hbar * constants::c / (constants::k_B * T);
    const auto n_max = static_cast<std::int64_t>(std::ceil(50.0 * lambda_T / (4.0 * constants::pi * d_m)));

    double sum_e = 0.0;
    double sum_d = 0.0;
    int quiet = 0;
    std::int64_t n = 0;
    for (; n <= std::max<std::int64_t>(n_max, 1); ++n) {
        const auto t = mode_integrals(make_mode(material, matsubara_frequency(n, T), d_m), spec);
        const double w = n == 0 ? 0.5 : 1.0;
        sum_e += w * t.energy;
        sum_d += w * t.derivative;
        const bool small = std::abs(t.energy) < spec.tail_threshold * std::abs(sum_e) &&
                           std::abs(t.derivative) < spec.tail_threshold * std::abs(sum_d);
        quiet = small ? quiet + 1 : 0;
        if (quiet == 3) break;
    }
    const double pref = constants::k_B * T / (2.0 * constants::pi) / (4.0 * d_m * d_m);
    return {pref * sum_e, pref * sum_d / d_m, std::min(n, n_max) + 1};
}

PlateEnergy zero_temperature(const Material& material, double d_m, const QuadratureSpec& spec) {
    // eta = 2 xi d / c over xi in [1e-4, 1e4] c/d, log-substituted.
    const double eta_lo = 2e-4;
    const double eta_hi = 2e4;
    auto inner = [&](double eta) {
        const double xi = eta * constants::c / (2.0 * d_m);
        return mode_integrals(make_mode(material, xi, d_m), spec);
    };
    auto outer = [&](auto pick) {
        auto f = [&](double t) {
            const double eta = std::exp(t);
            return eta * pick(inner(eta));
        };
        const double head = eta_lo * pick(inner(eta_lo));
        return head + integrate_checked(f, std::log(eta_lo), std::log(eta_hi), spec.rel_tol, "frequency");
    };
    const double ie = outer([](const TermIntegrals& t) { return t.energy; });
    const double id = outer([](const TermIntegrals& t) { return t.derivative; });
    const double pref = constants::hbar * constants::c / (32.0 * constants::pi * constants::pi);
    const double d3 = d_m * d_m * d_m;
    return {pref * ie / d3, pref * id / (d3 * d_m), 0};
}

}  // namespace

Environment Environment::at_temperature(double temperature_K) {
    if (!(temperature_K > 0.0) || !std::isfinite(temperature_K))
        throw DomainError("finite-temperature environment requires T > 0");
    return Environment(TemperatureMode::finite, temperature_K);
}

Environment Environment::zero_temperature() { return Environment(TemperatureMode::zero, 0.0); }

double Environment::thermal_wavelength_nm() const {
    if (mode_ == TemperatureMode::zero) return std::numeric_limits<double>::infinity();
    return constants::hbar_c_eVnm / (constants::k_B_eV * temperature_K_);
}

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) throw DomainError("quadrature tolerance must lie in (0, 1e-3]");
    if (!(tail_threshold > 0.0 && tail_threshold <= 1e-6))
        throw DomainError("Matsubara tail threshold must lie in (0, 1e-6]");
    if (!(cutoff_multiplier >= 0.0) || !std::isfinite(cutoff_multiplier))
        throw DomainError("cutoff multiplier must be non-negative");
}

double matsubara_frequency(std::int64_t n, double temperature_K) {
    if (n < 0) throw DomainError("Matsubara index must be non-negative");
    if (!(temperature_K > 0.0)) throw DomainError("Matsubara frequencies require T > 0");
    return 2.0 * constants::pi * static_cast<double>(n) * constants::k_B * temperature_K / constants::hbar;
}

PlateEnergy plate_energy(const Material& material, double d_nm, const Environment& env,
                         const QuadratureSpec& spec) {
    if (!(d_nm > 0.0) || !std::isfinite(d_nm)) throw DomainError("separation must be positive");
    spec.validate();
    const double d_m = d_nm * units::nm;
    return env.mode() == TemperatureMode::finite ? finite_temperature(material, d_m, env, spec)
                                                 : zero_temperature(material, d_m, spec);
}

double energy_per_area(const Material& material, double d_nm, const Environment& env,
                       const QuadratureSpec& spec) {
    return plate_energy(material, d_nm, env, spec).energy;
}

double energy_derivative(const Material& material, double d_nm, const Environment& env,
                         const QuadratureSpec& spec) {
    return plate_energy(material, d_nm, env, spec).derivative;
}

}  // namespace casimir
