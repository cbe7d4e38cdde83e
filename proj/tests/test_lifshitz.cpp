#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/lifshitz.hpp"

using namespace casimir;

namespace {

double ideal_energy(double d_nm) {
    const double d = d_nm * units::nm;
    return -constants::pi * constants::pi * constants::hbar * constants::c / (720.0 * d * d * d);
}

// Plain Matsubara sum with trapezoid integration over k in units of 1/nm and
// the textbook Fresnel coefficients; no substitution, no adaptivity.
double brute_force_drude(double d_nm, double T, int k_points) {
    const double hbar_c = constants::hbar_c_eVnm;                   // eV nm
    const double kT = constants::k_B_eV * T;                        // eV
    const double wp = 9.0, gamma = 0.035;                           // eV
    double total = 0.0;
    for (int n = 0;; ++n) {
        const double xi = 2.0 * constants::pi * n * kT;             // eV
        const double kappa_xi = xi / hbar_c;                        // 1/nm
        if (2.0 * kappa_xi * d_nm > 50.0) break;
        const double k_max = 40.0 / d_nm;
        const double h = k_max / k_points;
        double integral = 0.0;
        for (int i = 0; i <= k_points; ++i) {
            const double k = i * h;
            const double q = std::sqrt(k * k + kappa_xi * kappa_xi);
            double r_tm2, r_te2;
            if (n == 0) {
                r_tm2 = 1.0;
                r_te2 = 0.0;
            } else {
                const double eps = 1.0 + wp * wp / (xi * (xi + gamma));
                const double km = std::sqrt(k * k + eps * kappa_xi * kappa_xi);
                const double rte = (q - km) / (q + km);
                const double rtm = (eps * q - km) / (eps * q + km);
                r_te2 = rte * rte;
                r_tm2 = rtm * rtm;
            }
            const double e = std::exp(-2.0 * q * d_nm);
            // k ln(1 - e^{-2qd}) -> 0 as k -> 0 for n = 0
            const double f = k == 0.0 ? 0.0 : k * (std::log1p(-r_te2 * e) + std::log1p(-r_tm2 * e));
            integral += (i == 0 || i == k_points ? 0.5 : 1.0) * f * h;
        }
        total += (n == 0 ? 0.5 : 1.0) * integral;
    }
    // kT/(2 pi) * integral [1/nm^2] -> J/m^2
    return constants::k_B * T / (2.0 * constants::pi) * total * 1e18;
}

}  // namespace

TEST_CASE("ideal metal at zero temperature matches the closed form") {
    const auto env = Environment::zero_temperature();
    for (double d : {50.0, 100.0, 500.0, 1000.0})
        CHECK(energy_per_area(Material::ideal_metal(), d, env) == doctest::Approx(ideal_energy(d)).epsilon(1e-6));
    CHECK(energy_per_area(Material::ideal_metal(), 100.0, env) == doctest::Approx(-4.333e-7).epsilon(1e-3));
}

TEST_CASE("ideal metal energy scales as inverse cube") {
    const auto env = Environment::zero_temperature();
    const double ratio =
        energy_per_area(Material::ideal_metal(), 200.0, env) / energy_per_area(Material::ideal_metal(), 100.0, env);
    CHECK(ratio == doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("ideal metal derivative matches the closed form") {
    const auto env = Environment::zero_temperature();
    for (double d : {80.0, 130.0, 700.0}) {
        const double dm = d * units::nm;
        const double expected =
            constants::pi * constants::pi * constants::hbar * constants::c / (240.0 * dm * dm * dm * dm);
        CHECK(energy_derivative(Material::ideal_metal(), d, env) == doctest::Approx(expected).epsilon(1e-7));
    }
}

TEST_CASE("drude gold at 130 nm and 300 K against a brute-force sum") {
    const auto m = Material::drude(9.0, 0.035);
    const double u = energy_per_area(m, 130.0, Environment::at_temperature(300.0));
    const double coarse = brute_force_drude(130.0, 300.0, 4000);
    const double fine = brute_force_drude(130.0, 300.0, 40000);
    CHECK(coarse == doctest::Approx(fine).epsilon(1e-5));
    CHECK(u == doctest::Approx(fine).epsilon(1e-5));
    CHECK(u < 0.0);
}

TEST_CASE("derivative matches a central difference") {
    const auto gold = load_material(CASIMIR_MATERIALS "/gold.cfg");
    for (const auto& env : {Environment::at_temperature(300.0), Environment::zero_temperature()}) {
        for (double d : {100.0, 130.0, 400.0}) {
            const double h = d / 1000.0;
            const double fd = (energy_per_area(gold, d + h, env) - energy_per_area(gold, d - h, env)) / (2.0 * h * units::nm);
            CHECK(energy_derivative(gold, d, env) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("derivative is positive for gold at 130 nm") {
    const auto gold = load_material(CASIMIR_MATERIALS "/gold.cfg");
    CHECK(energy_derivative(gold, 130.0, Environment::at_temperature(300.0)) > 0.0);
}

TEST_CASE("Matsubara frequencies") {
    CHECK(matsubara_frequency(0, 300.0) == 0.0);
    const double hbar_xi1 = units::rad_per_s_to_ev(matsubara_frequency(1, 300.0));
    CHECK(hbar_xi1 == doctest::Approx(2.0 * constants::pi * 0.025852).epsilon(1e-4));
    CHECK(hbar_xi1 == doctest::Approx(0.16243).epsilon(1e-4));
    CHECK(matsubara_frequency(14, 77.0) == doctest::Approx(2.0 * matsubara_frequency(7, 77.0)).epsilon(1e-15));
    CHECK_THROWS_AS(matsubara_frequency(-1, 300.0), DomainError);
    CHECK_THROWS_AS(matsubara_frequency(1, 0.0), DomainError);
}

TEST_CASE("energy is negative and increasing in separation") {
    const auto gold = load_material(CASIMIR_MATERIALS "/gold.cfg");
    const Material materials[] = {gold, Material::drude(9.0, 0.035), Material::plasma(9.0), Material::ideal_metal()};
    const Environment envs[] = {Environment::at_temperature(300.0), Environment::zero_temperature()};
    for (const auto& m : materials) {
        for (const auto& env : envs) {
            double prev = -INFINITY;
            for (int k = 0; k <= 12; ++k) {
                const double d = 50.0 * std::pow(20.0, k / 12.0);
                const double u = energy_per_area(m, d, env);
                CHECK(u < 0.0);
                CHECK(u > prev);
                prev = u;
            }
        }
    }
}

TEST_CASE("low temperature approaches zero temperature") {
    const auto m = Material::ideal_metal();
    const double warm = energy_per_area(m, 100.0, Environment::at_temperature(1.0));
    const double cold = energy_per_area(m, 100.0, Environment::zero_temperature());
    CHECK(warm == doctest::Approx(cold).epsilon(5e-3));
}

TEST_CASE("tighter tolerance moves the result by less than the tolerance") {
    const auto gold = load_material(CASIMIR_MATERIALS "/gold.cfg");
    for (const auto& env : {Environment::at_temperature(300.0), Environment::zero_temperature()}) {
        QuadratureSpec loose;
        loose.rel_tol = 1e-6;
        QuadratureSpec tight = loose;
        tight.rel_tol = 0.5e-6;
        const double a = energy_per_area(gold, 130.0, env, loose);
        const double b = energy_per_area(gold, 130.0, env, tight);
        CHECK(std::abs(a - b) <= 1e-6 * std::abs(b));
    }
}

TEST_CASE("n = 0 rules: plasma keeps a TE contribution that Drude loses") {
    const auto env = Environment::at_temperature(300.0);
    const double drude = energy_per_area(Material::drude(9.0, 0.035), 1000.0, env);
    const double plasma = energy_per_area(Material::plasma(9.0), 1000.0, env);
    CHECK(plasma < drude);
}

TEST_CASE("bad inputs") {
    const auto env = Environment::at_temperature(300.0);
    CHECK_THROWS_AS(energy_per_area(Material::ideal_metal(), 0.0, env), DomainError);
    CHECK_THROWS_AS(energy_per_area(Material::ideal_metal(), -5.0, env), DomainError);
    CHECK_THROWS_AS(Environment::at_temperature(0.0), DomainError);
    QuadratureSpec bad;
    bad.rel_tol = 1e-2;
    CHECK_THROWS_AS(energy_per_area(Material::ideal_metal(), 100.0, env, bad), DomainError);
    bad.rel_tol = 1e-8;
    bad.tail_threshold = 1e-3;
    CHECK_THROWS_AS(energy_per_area(Material::ideal_metal(), 100.0, env, bad), DomainError);
    CHECK(std::isinf(Environment::zero_temperature().thermal_wavelength_nm()));
    CHECK(Environment::at_temperature(300.0).thermal_wavelength_nm() ==
          doctest::Approx(constants::hbar_c_eVnm / (constants::k_B_eV * 300.0)).epsilon(1e-12));
}
