// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "casimir/calibration.hpp"
#include "casimir/constants.hpp"
#include "casimir/corrugation.hpp"
#include "casimir/electrostatics.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/parallel.hpp"

using namespace casimir;

namespace {

constexpr double pi = constants::pi;
constexpr double fitted_beta = 0.20;

std::set<int> failed;

void report(int n, bool pass, const std::string& detail) {
    std::printf("criterion %d %s: %s\n", n, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) failed.insert(n);
}

void run(int n, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(n, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Geometry sample_geometry(double angle_deg = 0.0) {
    return {99.6, 570.5, 40.2, 14.6, 14.0, 14.0, units::deg_to_rad(angle_deg), 1.9, 2.9};
}

Material gold() { return load_material(std::string(CASIMIR_SOURCE_DIR) + "/materials/gold.cfg"); }

double ideal_u(double d_nm) {
    const double d = d_nm * units::nm;
    return -pi * pi * constants::hbar * constants::c / (720.0 * d * d * d);
}

const ForceSample& at(const ForceCurve& c, double z) {
    for (const auto& s : c.samples)
        if (std::abs(s.z_nm - z) < 1e-9) return s;
    throw std::runtime_error("no sample at requested z");
}

const CalibrationTruth truth{-90.2, 126.2, 1.35, 0.1021};

SimulationOptions protocol(std::uint64_t seed) {
    SimulationOptions o;
    for (int i = 0; i < 11; ++i) o.voltages_mV.push_back(-145.0 + 10.5 * i);
    for (double z = 2000.0; z >= 0.0; z -= 1.0) o.z_piezo_nm.push_back(z);
    o.repetitions = 10;
    o.noise_mV = 0.5 / truth.k_prime_pN_per_mV;
    o.seed = seed;
    return o;
}

void ideal_closed_form() {
    const auto m = Material::ideal_metal();
    const auto env = Environment::zero_temperature();
    double worst = 0.0;
    for (double d : {50.0, 100.0, 500.0, 1000.0})
        worst = std::max(worst, std::abs(energy_per_area(m, d, env) / ideal_u(d) - 1.0));
    report(1, worst < 1e-3, fmt("max relative deviation from closed form %.2e (limit 1e-3)", worst));
}

void matsubara_continuity() {
    const auto m = gold();
    const double u1 = energy_per_area(m, 100.0, Environment::at_temperature(1.0));
    const double u0 = energy_per_area(m, 100.0, Environment::zero_temperature());
    const double r = std::abs(u1 / u0 - 1.0);
    report(2, r < 5e-3, fmt("U(1 K)/U(0 K) - 1 at 100 nm = %.2e (limit 5e-3)", r));
}

void drude_plasma() {
    const auto g = sample_geometry();
    const auto env = Environment::at_temperature(300.0);
    const auto p = AlphaProvider::beta_model(fitted_beta);
    CurveRequest rq;
    rq.z_min_nm = 127.0;
    rq.z_max_nm = 300.0;
    rq.angles_rad = {0.0};
    ErrorBudget budget{0.51, 0.79, 0.64, 127.0, 300.0};
    // worst |F_drude - F_plasma| / total error for the force and for its derivative-minus-PFA part
    auto worst_ratio = [&](const Material& drude, const Material& plasma) {
        rq.model = ForceModel::derivative_expansion;
        const auto fd = force_curves(rq, g, drude, env, p)[0];
        const auto fp = force_curves(rq, g, plasma, env, p)[0];
        rq.model = ForceModel::pfa;
        const auto pd = force_curves(rq, g, drude, env, p)[0];
        const auto pp = force_curves(rq, g, plasma, env, p)[0];
        double force = 0.0, difference = 0.0;
        for (std::size_t i = 0; i < fd.samples.size(); ++i) {
            const double e = budget.total(fd.samples[i].z_nm);
            force = std::max(force, std::abs(fd.samples[i].force_pN - fp.samples[i].force_pN) / e);
            difference = std::max(difference, std::abs(fd.samples[i].force_pN - pd.samples[i].force_pN -
                                                        fp.samples[i].force_pN + pp.samples[i].force_pN) / e);
        }
        return std::pair{force, difference};
    };
    const auto au = gold();
    const auto bare = worst_ratio(Material::drude(au.hbar_omega_p_eV(), au.hbar_gamma_eV()),
                                  Material::plasma(au.hbar_omega_p_eV()));
    const auto full = worst_ratio(au, Material::drude_oscillators(au.hbar_omega_p_eV(), 0.0, au.oscillators()));
    report(3, bare.first < 1.0,
           fmt("max |F_drude - F_plasma| / total error over 127-300 nm = %.3f without oscillators, %.3f with; "
               "the same ratio for F_der - F_pfa is %.3f and %.3f",
               bare.first, full.first, bare.second, full.second));
}

struct AngleCurves {
    std::vector<ForceCurve> pfa, der;
};

AngleCurves angle_curves() {
    CurveRequest rq;
    rq.z_min_nm = 127.0;
    rq.z_max_nm = 300.0;
    for (double deg : {0.0, 1.2, 1.8, 2.4}) rq.angles_rad.push_back(units::deg_to_rad(deg));
    const auto m = gold();
    const auto env = Environment::at_temperature(300.0);
    const auto p = AlphaProvider::beta_model(fitted_beta);
    AngleCurves out;
    rq.model = ForceModel::pfa;
    out.pfa = force_curves(rq, sample_geometry(), m, env, p);
    rq.model = ForceModel::derivative_expansion;
    out.der = force_curves(rq, sample_geometry(), m, env, p);
    return out;
}

void angle_sweep(const AngleCurves& c) {
    const double expected[] = {84.9, 88.8, 92.5, 97.8};
    bool pass = true;
    std::string detail = "F(130 nm) =";
    for (int i = 0; i < 4; ++i) {
        const double f = at(c.der[i], 130.0).force_pN;
        pass = pass && std::abs(f / expected[i] - 1.0) <= 0.05;
        detail += fmt(" %.2f", f);
    }
    const double ratio = at(c.der[3], 130.0).force_pN / at(c.der[0], 130.0).force_pN - 1.0;
    pass = pass && std::abs(ratio - 0.15) <= 0.03;
    report(4, pass, detail + fmt(" pN (targets 84.9 88.8 92.5 97.8 within 5%%), F(2.4)/F(0) - 1 = %.3f (0.15 +- 0.03)",
                                 ratio));
}

void pfa_deviation(const AngleCurves& c) {
    const auto& der = c.der[0].samples;
    const auto& pfa = c.pfa[0].samples;
    std::vector<double> dev;
    for (std::size_t i = 0; i < der.size(); ++i) dev.push_back(der[i].force_pN / pfa[i].force_pN - 1.0);
    bool decays = true, grows = true;
    for (std::size_t i = 1; i < dev.size(); ++i) {
        decays = decays && dev[i] < dev[i - 1];
        grows = grows && dev[i] > dev[i - 1];
    }
    const double closest = dev.front();
    report(5, std::abs(closest - 0.077) <= 0.02 && decays,
           fmt("F_der/F_pfa - 1 = %.2f%% at 127 nm (7.7 +- 2), %.2f%% at 300 nm, strictly decaying: %s, strictly growing: %s",
               100 * closest, 100 * dev.back(), decays ? "yes" : "no", grows ? "yes" : "no"));
}

void correlation_difference(const AngleCurves& c) {
    const double d0 = at(c.der[0], 130.0).force_pN - at(c.pfa[0], 130.0).force_pN;
    const double d12 = at(c.der[1], 130.0).force_pN - at(c.pfa[1], 130.0).force_pN;
    report(6, std::abs(d0 - 5.9) <= 1.5 && std::abs(d12 - 4.2) <= 1.5,
           fmt("F_der - F_pfa at 130 nm = %.2f pN at 0 deg (5.9 +- 1.5), %.2f pN at 1.2 deg (4.2 +- 1.5)", d0, d12));
}

void electrostatic_oracle() {
    LaplaceGrid grid;
    const auto rows = oracle_ladder({160.0, 200.0, 300.0, 400.0}, sample_geometry(), grid);
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, std::abs(r.rel_diff));
    report(7, worst < 0.01, fmt("max |X_formula / X_oracle - 1| at 160, 200, 300, 400 nm = %.2e (limit 1e-2)", worst));
}

void sinc_null() {
    auto g = sample_geometry();
    const double full = std::abs(x_cross_term(130.0, g));
    g.angle_rad = g.period_nm / (g.extent_y_um * 1000.0);
    const double null = std::abs(x_cross_term(130.0, g));
    report(8, null <= 1e-12 * full,
           fmt("cross term at theta = %.4f deg is %.2e of its aligned value", g.angle_rad * 180.0 / pi, null / full));
}

void calibration_round_trip() {
    const auto g = sample_geometry();
    const auto force = casimir_force_function(100.0, 2300.0, g, gold(), Environment::at_temperature(300.0),
                                              AlphaProvider::beta_model(fitted_beta));
    double dv = 0.0, dz = 0.0, dk = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto ds = simulate_deflection(truth, g, force, protocol(seed));
        const auto r = calibrate(ds, g);
        dv = std::max(dv, std::abs(r.residual_mV - truth.residual_mV));
        dz = std::max(dz, std::abs(r.contact_nm - truth.contact_nm));
        dk = std::max(dk, std::abs(r.k_prime - truth.k_prime_pN_per_mV));
    }
    report(9, dv <= 1.5 && dz <= 0.5 && dk <= 0.02,
           fmt("10 seeds, worst |dV0| = %.3f mV (1.5), |dz0| = %.3f nm (0.5), |dk'| = %.4f pN/mV (0.02)", dv, dz, dk));
}

void error_combination() {
    const double a = combine_errors(0.51, 0.79);
    const double b = combine_errors(0.51, 0.64);
    const bool pass = std::lround(a * 100) == 94 && std::lround(b * 100) == 82;
    report(10, pass, fmt("combine(0.51, 0.79) = %.4f, combine(0.51, 0.64) = %.4f", a, b));
}

void property_suites(const AngleCurves& c) {
    const auto m = gold();
    const auto env = Environment::at_temperature(300.0);
    const auto p = AlphaProvider::beta_model(fitted_beta);

    bool parity = true;
    for (double deg : {0.7, 1.2, 2.4})
        parity = parity && u_corr(130.0, sample_geometry(deg), m, env, p) == u_corr(130.0, sample_geometry(-deg), m, env, p);

    bool monotone = true;
    double prev_u = -1e300;
    for (double d = 60.0; d <= 1000.0; d *= 1.25) {
        const double u = energy_per_area(m, d, env);
        monotone = monotone && u > prev_u && u < 0.0;
        prev_u = u;
    }
    for (const auto* set : {&c.pfa, &c.der})
        for (const auto& cv : *set)
            for (std::size_t i = 1; i < cv.samples.size(); ++i)
                monotone = monotone && cv.samples[i].force_pN < cv.samples[i - 1].force_pN;

    double doubling = 0.0;
    for (double deg : {0.0, 1.2, 2.4}) {
        const auto g = sample_geometry(deg);
        doubling = std::max(doubling, std::abs(u_corr(130.0, g, m, env, p, {}, {1}) /
                                                   u_corr(130.0, g, m, env, p, {}, {2}) - 1.0));
    }

    ForceCurve cube;
    for (double z = 100.0; z <= 300.0 + 1e-9; z += 0.5) cube.samples.push_back({z, 1e8 / (z * z * z), 0.0, false});
    const auto rough = roughness_correct(cube, sample_geometry());
    const double d2 = 1.9 * 1.9 + 2.9 * 2.9;
    double power_law = 0.0;
    for (std::size_t i = 1; i + 1 < cube.samples.size(); ++i) {
        const double z = cube.samples[i].z_nm;
        power_law = std::max(power_law, std::abs(rough.samples[i].force_pN / cube.samples[i].force_pN /
                                                       (1.0 + 6.0 * d2 / (z * z)) - 1.0));
    }

    CurveRequest rq;
    rq.z_min_nm = 129.0;
    rq.z_max_nm = 131.0;
    rq.angles_rad = {0.0, units::deg_to_rad(1.8)};
    const unsigned saved = thread_count();
    set_thread_count(1);
    const auto one = force_curves(rq, sample_geometry(), m, env, p);
    const auto sim_one = simulate_deflection(truth, sample_geometry(), [](double z) { return 1e8 / (z * z * z); },
                                             protocol(7));
    set_thread_count(4);
    const auto four = force_curves(rq, sample_geometry(), m, env, p);
    const auto sim_four = simulate_deflection(truth, sample_geometry(), [](double z) { return 1e8 / (z * z * z); },
                                              protocol(7));
    set_thread_count(saved);
    bool deterministic = sim_one.traces.size() == sim_four.traces.size();
    for (std::size_t a = 0; a < one.size(); ++a)
        for (std::size_t i = 0; i < one[a].samples.size(); ++i)
            deterministic = deterministic && one[a].samples[i].force_pN == four[a].samples[i].force_pN;
    for (std::size_t t = 0; deterministic && t < sim_one.traces.size(); ++t)
        deterministic = sim_one.traces[t].signal_mV == sim_four.traces[t].signal_mV;

    report(11, parity && monotone && doubling < 1e-4 && power_law < 1e-5 && deterministic,
           fmt("parity %s, monotone %s, doubling %.1e (1e-4), roughness law %.1e, deterministic %s",
               parity ? "exact" : "broken", monotone ? "yes" : "no", doubling, power_law,
               deterministic ? "yes" : "no"));
}

void temperature_contrast() {
    const auto g = sample_geometry();
    const auto m = gold();
    const auto p = AlphaProvider::beta_model(fitted_beta);
    const auto f300 = casimir_force_function(100.0, 2300.0, g, m, Environment::at_temperature(300.0), p);
    const auto f0 = casimir_force_function(100.0, 2300.0, g, m, Environment::zero_temperature(), p);
    auto ds = simulate_deflection(truth, g, f300, protocol(11));
    const auto calib = calibrate(ds, g);
    const auto exp = extract_casimir(ds, calib, g, 127.0, 300.0);
    double dev300 = 0.0, dev0 = 0.0;
    const double theory_ratio = f300(130.0) / f0(130.0);
    for (const auto& s : exp.mean.samples) {
        dev300 += std::abs(s.force_pN / f300(s.z_nm) - 1.0);
        dev0 += std::abs(s.force_pN / f0(s.z_nm) - 1.0);
    }
    const double n = static_cast<double>(exp.mean.samples.size());
    report(12, dev300 < dev0,
           fmt("mean |F_exp/F_300K - 1| = %.4f, mean |F_exp/F_0K - 1| = %.4f over %zu separations; "
               "F_300K/F_0K at 130 nm = %.4f",
               dev300 / n, dev0 / n, exp.mean.samples.size(), theory_ratio));
}

}  // namespace

// `--expect-fail 3,5` exits 0 only if exactly those criteria fail.
int main(int argc, char** argv) {
    std::set<int> expected;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--expect-fail") {
            std::stringstream list(argv[i + 1]);
            for (std::string item; std::getline(list, item, ',');) expected.insert(std::stoi(item));
        }
    set_thread_count(std::max(1u, std::thread::hardware_concurrency()));
    run(1, ideal_closed_form);
    run(2, matsubara_continuity);
    run(3, drude_plasma);
    AngleCurves curves;
    bool have_curves = true;
    try {
        curves = angle_curves();
    } catch (const std::exception& e) {
        have_curves = false;
        for (int n : {4, 5, 6}) report(n, false, std::string("exception: ") + e.what());
    }
    if (have_curves) {
        run(4, [&] { angle_sweep(curves); });
        run(5, [&] { pfa_deviation(curves); });
        run(6, [&] { correlation_difference(curves); });
    }
    run(7, electrostatic_oracle);
    run(8, sinc_null);
    run(9, calibration_round_trip);
    run(10, error_combination);
    if (have_curves)
        run(11, [&] { property_suites(curves); });
    else
        report(11, false, "force curves unavailable");
    run(12, temperature_contrast);
    std::printf("%zu of 12 criteria failed\n", failed.size());
    if (failed == expected) return 0;
    if (!expected.empty()) std::printf("failing criteria differ from the expected list\n");
    return 1;
}
