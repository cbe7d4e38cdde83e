#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "casimir/calibration.hpp"
#include "casimir/config.hpp"
#include "casimir/constants.hpp"
#include "casimir/corrugation.hpp"
#include "casimir/electrostatics.hpp"
#include "casimir/errors.hpp"
#include "casimir/interpolation.hpp"
#include "casimir/materials.hpp"
#include "casimir/parallel.hpp"

namespace fs = std::filesystem;
using namespace casimir;

namespace {

struct Globals {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
};

std::string angle_tag(double deg) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << deg;
    return "theta" + os.str();
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream out(dir / name);
    if (!out) throw ConfigError("cannot write " + (dir / name).string());
    return out;
}

CurveRequest request_for(double z_min, double z_max, double z_step, const std::vector<double>& angles_deg,
                         ForceModel model, bool roughness) {
    CurveRequest rq;
    rq.z_min_nm = z_min;
    rq.z_max_nm = z_max;
    rq.z_step_nm = z_step;
    for (double a : angles_deg) rq.angles_rad.push_back(units::deg_to_rad(a));
    rq.model = model;
    rq.roughness = roughness;
    return rq;
}

int cmd_force_curve(const RunConfig& cfg, const Globals& g) {
    if (!cfg.force_curve) throw ConfigError("config has no [force_curve] block");
    const auto& b = *cfg.force_curve;
    std::vector<ForceModel> models;
    if (b.models != CurveModels::derivative) models.push_back(ForceModel::pfa);
    if (b.models != CurveModels::pfa) models.push_back(ForceModel::derivative_expansion);
    for (auto model : models) {
        const auto rq = request_for(b.z_min_nm, b.z_max_nm, b.z_step_nm, b.angles_deg, model, b.roughness);
        const auto curves = force_curves(rq, cfg.geometry, cfg.material, cfg.environment, cfg.alpha, cfg.quadrature);
        for (std::size_t k = 0; k < curves.size(); ++k) {
            const std::string name =
                "force_" + std::string(to_string(model)) + "_" + angle_tag(b.angles_deg[k]) + ".csv";
            auto out = open_output(g.out, name);
            write_force_csv(out, curves[k]);
            std::cout << (fs::path(g.out) / name).string() << "\n";
        }
    }
    if (b.compare_zero_temperature) {
        const auto rq = request_for(b.z_min_nm, b.z_max_nm, b.z_step_nm, b.angles_deg,
                                    ForceModel::derivative_expansion, b.roughness);
        const auto warm = force_curves(rq, cfg.geometry, cfg.material, cfg.environment, cfg.alpha, cfg.quadrature);
        const auto cold =
            force_curves(rq, cfg.geometry, cfg.material, Environment::zero_temperature(), cfg.alpha, cfg.quadrature);
        for (std::size_t k = 0; k < warm.size(); ++k) {
            const std::string name = "temperature_ratio_" + angle_tag(b.angles_deg[k]) + ".csv";
            auto out = open_output(g.out, name);
            out << "z_nm,F_T_pN,F_0K_pN,ratio\n" << std::setprecision(10);
            for (std::size_t i = 0; i < warm[k].samples.size(); ++i) {
                const double ft = warm[k].samples[i].force_pN;
                const double f0 = cold[k].samples[i].force_pN;
                out << warm[k].samples[i].z_nm << ',' << ft << ',' << f0 << ',' << ft / f0 << '\n';
            }
            std::cout << (fs::path(g.out) / name).string() << "\n";
        }
    }
    return 0;
}

int cmd_diff_pfa(const RunConfig& cfg, const Globals& g) {
    if (!cfg.diff_pfa) throw ConfigError("config has no [diff_pfa] block");
    const auto& b = *cfg.diff_pfa;
    auto differences = [&](const Material& material) {
        auto rq = request_for(b.z_min_nm, b.z_max_nm, b.z_step_nm, b.angles_deg, ForceModel::derivative_expansion,
                              true);
        const auto der = force_curves(rq, cfg.geometry, material, cfg.environment, cfg.alpha, cfg.quadrature);
        rq.model = ForceModel::pfa;
        const auto pfa = force_curves(rq, cfg.geometry, material, cfg.environment, cfg.alpha, cfg.quadrature);
        std::vector<std::vector<double>> diff(der.size());
        for (std::size_t k = 0; k < der.size(); ++k)
            for (std::size_t i = 0; i < der[k].samples.size(); ++i)
                diff[k].push_back(der[k].samples[i].force_pN - pfa[k].samples[i].force_pN);
        return std::pair{der.front().samples, diff};
    };
    const auto [samples, real] = differences(cfg.material);
    std::vector<std::vector<double>> ideal;
    if (b.ideal_metal_column) ideal = differences(Material::ideal_metal()).second;

    auto out = open_output(g.out, "diff_pfa.csv");
    out << "z_nm";
    for (double a : b.angles_deg) out << ",dF_" << angle_tag(a) << "_pN";
    if (b.ideal_metal_column)
        for (double a : b.angles_deg) out << ",dF_ideal_" << angle_tag(a) << "_pN";
    out << '\n' << std::setprecision(10);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out << samples[i].z_nm;
        for (const auto& col : real) out << ',' << col[i];
        for (const auto& col : ideal) out << ',' << col[i];
        out << '\n';
    }
    std::cout << (fs::path(g.out) / "diff_pfa.csv").string() << "\n";
    return 0;
}

int cmd_calibrate(const RunConfig& cfg, const Globals& g) {
    if (!cfg.calibrate) throw ConfigError("config has no [calibrate] block");
    const auto& b = *cfg.calibrate;
    DeflectionDataset ds;
    if (b.source == CalibrateBlock::Source::dataset) {
        std::ifstream in(b.dataset);
        if (!in) throw ConfigError("cannot open dataset " + b.dataset.string());
        ds = read_dataset_csv(in, b.m_nm_per_mV, b.dataset.string());
    } else {
        SimulationOptions opt;
        opt.voltages_mV = b.voltages_mV;
        for (double z = b.z_piezo_max_nm; z >= b.z_piezo_min_nm - 1e-9; z -= b.z_piezo_step_nm)
            opt.z_piezo_nm.push_back(z);
        opt.repetitions = b.repetitions;
        opt.noise_mV = b.noise_pN / b.truth.k_prime_pN_per_mV;
        opt.seed = g.seed.value_or(b.seed);
        opt.drift_mV_per_s = b.drift_mV_per_s;
        ds = simulate_deflection(b.truth, cfg.geometry, cfg.material, cfg.environment, cfg.alpha, cfg.quadrature,
                                 opt);
        auto out = open_output(g.out, "dataset.csv");
        write_dataset_csv(out, ds);
        std::cout << (fs::path(g.out) / "dataset.csv").string() << "\n";
    }
    const auto result = calibrate(ds, cfg.geometry, b.options);
    {
        auto out = open_output(g.out, "calibration_report.txt");
        write_calibration_report(out, result);
        std::cout << (fs::path(g.out) / "calibration_report.txt").string() << "\n";
    }
    const auto extracted = extract_casimir(ds, result, cfg.geometry, b.extract_z_min_nm, b.extract_z_max_nm);
    auto out = open_output(g.out, "casimir_extracted.csv");
    write_force_csv(out, extracted.mean);
    std::cout << (fs::path(g.out) / "casimir_extracted.csv").string() << "\n";
    return 0;
}

int cmd_oracle(const RunConfig& cfg, const Globals& g) {
    if (!cfg.oracle) throw ConfigError("config has no [oracle] block");
    const auto rows = oracle_ladder(cfg.oracle->separations_nm, cfg.geometry, cfg.oracle->grid);
    auto out = open_output(g.out, "oracle.csv");
    write_oracle_csv(out, rows);
    std::cout << (fs::path(g.out) / "oracle.csv").string() << "\n";
    return 0;
}

int cmd_material_eval(const RunConfig& cfg, const Globals& g) {
    if (!cfg.material_eval) throw ConfigError("config has no [material_eval] block");
    const auto& b = *cfg.material_eval;
    const auto zetas = geometric_grid(b.zeta_min_eV, b.zeta_max_eV, static_cast<std::size_t>(b.points));
    auto out = open_output(g.out, "material_eval.csv");
    out << "hbar_zeta_eV,epsilon\n" << std::setprecision(12);
    for (double z : zetas) out << z << ',' << epsilon_imag_eV(cfg.material, z) << '\n';
    std::cout << (fs::path(g.out) / "material_eval.csv").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Casimir force between corrugated sphere and plate"};
    app.require_subcommand(1);
    Globals g;
    std::uint64_t seed = 0;
    app.add_option("--config", g.config, "run configuration file")->required()->check(CLI::ExistingFile);
    app.add_option("--out", g.out, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides the config)");
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1u, 1024u));

    struct Command {
        const char* name;
        const char* help;
        int (*run)(const RunConfig&, const Globals&);
    };
    const Command commands[] = {
        {"force-curve", "force versus separation per angle and model", cmd_force_curve},
        {"diff-pfa", "derivative-expansion minus PFA force per angle", cmd_diff_pfa},
        {"calibrate", "electrostatic calibration and Casimir force extraction", cmd_calibrate},
        {"oracle", "electrostatic coefficient versus the Laplace solution", cmd_oracle},
        {"material-eval", "permittivity at imaginary frequencies", cmd_material_eval},
    };
    for (const auto& c : commands) app.add_subcommand(c.name, c.help);

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) g.seed = seed;

    try {
        set_thread_count(g.threads);
        const auto cfg = load_run_config(g.config);
        for (const auto& c : commands)
            if (app.got_subcommand(c.name)) return c.run(cfg, g);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
