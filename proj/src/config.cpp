#include "casimir/config.hpp"

#include <fstream>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/keyvalue.hpp"

namespace casimir {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

void require_file(const std::filesystem::path& p, const std::string& what) {
    if (!std::filesystem::is_regular_file(p)) throw ConfigError(what + " not found: " + p.string());
}

Geometry parse_geometry(const KeyValueSection& s) {
    s.reject_unknown({"radius_um", "period_nm", "amplitude_plate_nm", "amplitude_sphere_nm", "extent_x_um",
                      "extent_y_um", "angle_deg", "roughness_plate_nm", "roughness_sphere_nm"});
    Geometry g;
    g.radius_um = s.get_double("radius_um");
    g.period_nm = s.get_double("period_nm");
    g.amplitude_plate_nm = s.get_double("amplitude_plate_nm");
    g.amplitude_sphere_nm = s.get_double("amplitude_sphere_nm");
    g.extent_x_um = s.get_double("extent_x_um");
    g.extent_y_um = s.get_double("extent_y_um");
    g.angle_rad = units::deg_to_rad(s.get_double("angle_deg"));
    g.roughness_plate_nm = s.get_double("roughness_plate_nm");
    g.roughness_sphere_nm = s.get_double("roughness_sphere_nm");
    g.validate();
    return g;
}

Environment parse_environment(const KeyValueSection& s) {
    s.reject_unknown({"mode", "temperature_K"});
    const auto mode = s.get_string("mode");
    if (mode == "zero") {
        if (s.has("temperature_K")) throw ConfigError("[environment] mode = zero takes no temperature_K");
        return Environment::zero_temperature();
    }
    if (mode == "thermal") return Environment::at_temperature(s.get_double("temperature_K"));
    throw ConfigError("[environment] mode must be 'thermal' or 'zero', got '" + mode + "'");
}

AlphaProvider parse_alpha(const KeyValueSection& s, const std::filesystem::path& base) {
    s.reject_unknown({"provider", "beta", "table"});
    const auto provider = s.get_string("provider");
    if (provider == "beta") {
        if (s.has("table")) throw ConfigError("[alpha] provider = beta takes no table");
        return AlphaProvider::beta_model(s.get_double("beta"));
    }
    if (provider == "table") {
        if (s.has("beta")) throw ConfigError("[alpha] provider = table takes no beta");
        const auto path = resolve(base, s.get_string("table"));
        require_file(path, "alpha table");
        return AlphaProvider::load_table(path);
    }
    throw ConfigError("[alpha] provider must be 'beta' or 'table', got '" + provider + "'");
}

QuadratureSpec parse_quadrature(const KeyValueSection* s) {
    QuadratureSpec q;
    if (!s) return q;
    s->reject_unknown({"rel_tol", "tail_threshold", "cutoff_multiplier"});
    q.rel_tol = s->get_double("rel_tol", q.rel_tol);
    q.tail_threshold = s->get_double("tail_threshold", q.tail_threshold);
    q.cutoff_multiplier = s->get_double("cutoff_multiplier", q.cutoff_multiplier);
    q.validate();
    return q;
}

void check_range(const std::string& block, double lo, double hi, double step) {
    if (!(hi >= lo) || !(step > 0.0)) throw ConfigError("[" + block + "] needs z_min_nm <= z_max_nm and z_step_nm > 0");
}

std::vector<double> angle_list(const KeyValueSection& s, const std::string& block) {
    auto angles = s.get_double_list("angles_deg");
    if (angles.empty()) throw ConfigError("[" + block + "] angles_deg must list at least one angle");
    return angles;
}

ForceCurveBlock parse_force_curve(const KeyValueSection& s) {
    s.reject_unknown({"z_min_nm", "z_max_nm", "z_step_nm", "angles_deg", "model", "roughness",
                      "compare_zero_temperature"});
    ForceCurveBlock b;
    b.z_min_nm = s.get_double("z_min_nm");
    b.z_max_nm = s.get_double("z_max_nm");
    b.z_step_nm = s.get_double("z_step_nm", 1.0);
    check_range("force_curve", b.z_min_nm, b.z_max_nm, b.z_step_nm);
    b.angles_deg = angle_list(s, "force_curve");
    const auto model = s.get_string("model");
    if (model == "pfa") b.models = CurveModels::pfa;
    else if (model == "derivative") b.models = CurveModels::derivative;
    else if (model == "both") b.models = CurveModels::both;
    else throw ConfigError("[force_curve] model must be pfa, derivative or both, got '" + model + "'");
    b.roughness = s.get_bool("roughness", true);
    b.compare_zero_temperature = s.get_bool("compare_zero_temperature", false);
    return b;
}

DiffPfaBlock parse_diff_pfa(const KeyValueSection& s) {
    s.reject_unknown({"z_min_nm", "z_max_nm", "z_step_nm", "angles_deg", "ideal_metal_column"});
    DiffPfaBlock b;
    b.z_min_nm = s.get_double("z_min_nm");
    b.z_max_nm = s.get_double("z_max_nm");
    b.z_step_nm = s.get_double("z_step_nm", 1.0);
    check_range("diff_pfa", b.z_min_nm, b.z_max_nm, b.z_step_nm);
    b.angles_deg = angle_list(s, "diff_pfa");
    b.ideal_metal_column = s.get_bool("ideal_metal_column", true);
    return b;
}

CalibrateBlock parse_calibrate(const KeyValueSection& s, const std::filesystem::path& base) {
    s.reject_unknown({"source", "dataset", "m_nm_per_mV", "truth_V0_mV", "truth_z0_nm", "truth_k_prime_pN_per_mV",
                      "voltages_mV", "z_piezo_min_nm", "z_piezo_max_nm", "z_piezo_step_nm", "repetitions",
                      "noise_pN", "drift_mV_per_s", "seed", "remove_drift", "drift_tail_start_nm", "z_rel_min_nm",
                      "z_rel_max_nm", "extract_z_min_nm", "extract_z_max_nm"});
    CalibrateBlock b;
    b.m_nm_per_mV = s.get_double("m_nm_per_mV");
    const auto source = s.get_string("source");
    if (source == "dataset") {
        b.source = CalibrateBlock::Source::dataset;
        b.dataset = resolve(base, s.get_string("dataset"));
        require_file(b.dataset, "dataset");
    } else if (source == "simulate") {
        b.source = CalibrateBlock::Source::simulate;
        b.truth.residual_mV = s.get_double("truth_V0_mV");
        b.truth.contact_nm = s.get_double("truth_z0_nm");
        b.truth.k_prime_pN_per_mV = s.get_double("truth_k_prime_pN_per_mV");
        b.truth.m_nm_per_mV = b.m_nm_per_mV;
        b.voltages_mV = s.get_double_list("voltages_mV");
        b.z_piezo_min_nm = s.get_double("z_piezo_min_nm");
        b.z_piezo_max_nm = s.get_double("z_piezo_max_nm");
        b.z_piezo_step_nm = s.get_double("z_piezo_step_nm");
        if (!(b.z_piezo_max_nm > b.z_piezo_min_nm) || !(b.z_piezo_step_nm > 0.0))
            throw ConfigError("[calibrate] needs z_piezo_min_nm < z_piezo_max_nm and z_piezo_step_nm > 0");
        b.repetitions = static_cast<int>(s.get_int("repetitions", 1));
        b.noise_pN = s.get_double("noise_pN");
        b.drift_mV_per_s = s.get_double("drift_mV_per_s", 0.0);
        b.seed = static_cast<std::uint64_t>(s.get_int("seed", 0));
    } else {
        throw ConfigError("[calibrate] source must be 'simulate' or 'dataset', got '" + source + "'");
    }
    b.options.remove_drift = s.get_bool("remove_drift", false);
    b.options.drift_tail_start_nm = s.get_double("drift_tail_start_nm", b.options.drift_tail_start_nm);
    b.options.z_rel_min_nm = s.get_double("z_rel_min_nm", b.options.z_rel_min_nm);
    b.options.z_rel_max_nm = s.get_double("z_rel_max_nm", b.options.z_rel_max_nm);
    b.extract_z_min_nm = s.get_double("extract_z_min_nm", b.extract_z_min_nm);
    b.extract_z_max_nm = s.get_double("extract_z_max_nm", b.extract_z_max_nm);
    return b;
}

OracleBlock parse_oracle(const KeyValueSection& s) {
    s.reject_unknown({"separations_nm", "nodes_per_period", "nodes_across_gap", "tolerance", "omega"});
    OracleBlock b;
    b.separations_nm = s.get_double_list("separations_nm");
    if (b.separations_nm.empty()) throw ConfigError("[oracle] separations_nm must list at least one separation");
    b.grid.nodes_per_period = static_cast<int>(s.get_int("nodes_per_period", b.grid.nodes_per_period));
    b.grid.nodes_across_gap = static_cast<int>(s.get_int("nodes_across_gap", b.grid.nodes_across_gap));
    b.grid.tolerance = s.get_double("tolerance", b.grid.tolerance);
    b.grid.omega = s.get_double("omega", b.grid.omega);
    b.grid.validate();
    return b;
}

MaterialEvalBlock parse_material_eval(const KeyValueSection& s) {
    s.reject_unknown({"zeta_min_eV", "zeta_max_eV", "points"});
    MaterialEvalBlock b;
    b.zeta_min_eV = s.get_double("zeta_min_eV");
    b.zeta_max_eV = s.get_double("zeta_max_eV");
    b.points = static_cast<int>(s.get_int("points", 100));
    if (!(b.zeta_min_eV > 0.0) || !(b.zeta_max_eV > b.zeta_min_eV) || b.points < 2)
        throw ConfigError("[material_eval] needs 0 < zeta_min_eV < zeta_max_eV and points >= 2");
    return b;
}

}  // namespace

RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir, const std::string& source_name) {
    const auto doc = KeyValueDocument::parse(in, source_name);
    doc.root().reject_unknown({"material"});
    doc.reject_unknown_sections(
        {"geometry", "environment", "alpha", "quadrature", "force_curve", "diff_pfa", "calibrate", "oracle",
         "material_eval"});

    RunConfig cfg;
    cfg.material_path = resolve(base_dir, doc.root().get_string("material"));
    require_file(cfg.material_path, "material file");
    cfg.material = load_material(cfg.material_path);
    cfg.geometry = parse_geometry(doc.require_section("geometry"));
    cfg.environment = parse_environment(doc.require_section("environment"));
    cfg.alpha = parse_alpha(doc.require_section("alpha"), base_dir);
    cfg.quadrature = parse_quadrature(doc.section("quadrature"));

    if (const auto* s = doc.section("force_curve")) cfg.force_curve = parse_force_curve(*s);
    if (const auto* s = doc.section("diff_pfa")) cfg.diff_pfa = parse_diff_pfa(*s);
    if (const auto* s = doc.section("calibrate")) cfg.calibrate = parse_calibrate(*s, base_dir);
    if (const auto* s = doc.section("oracle")) cfg.oracle = parse_oracle(*s);
    if (const auto* s = doc.section("material_eval")) cfg.material_eval = parse_material_eval(*s);
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    return parse_run_config(in, path.parent_path(), path.string());
}

}  // namespace casimir
