#include "casimir/materials.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/keyvalue.hpp"

namespace casimir {

std::string_view to_string(MaterialModel model) {
    switch (model) {
        case MaterialModel::ideal_metal: return "ideal-metal";
        case MaterialModel::plasma: return "plasma";
        case MaterialModel::drude: return "drude";
        case MaterialModel::drude_oscillators: return "drude-oscillators";
    }
    return "unknown";
}

MaterialModel material_model_from_string(std::string_view name) {
    if (name == "ideal-metal") return MaterialModel::ideal_metal;
    if (name == "plasma") return MaterialModel::plasma;
    if (name == "drude") return MaterialModel::drude;
    if (name == "drude-oscillators") return MaterialModel::drude_oscillators;
    throw ConfigError("unknown material model '" + std::string(name) + "'");
}

Material::Material(MaterialModel model, double omega_p_eV, double gamma_eV, std::vector<Oscillator> osc)
    : model_(model), omega_p_eV_(omega_p_eV), gamma_eV_(gamma_eV), oscillators_(std::move(osc)) {
    if (model_ == MaterialModel::ideal_metal) return;
    if (!(omega_p_eV_ > 0.0) || !std::isfinite(omega_p_eV_))
        throw DomainError("plasma frequency must be positive");
    if (!(gamma_eV_ >= 0.0) || !std::isfinite(gamma_eV_)) throw DomainError("relaxation must be non-negative");
    if (oscillators_.size() > 6) throw DomainError("at most six oscillator terms are supported");
    for (const auto& o : oscillators_) {
        if (!(o.strength_eV2 >= 0.0) || !(o.resonance_eV > 0.0) || !(o.damping_eV >= 0.0))
            throw DomainError("oscillator requires f >= 0, omega > 0, g >= 0");
    }
}

Material Material::ideal_metal() { return Material(MaterialModel::ideal_metal, 0.0, 0.0, {}); }

Material Material::plasma(double hbar_omega_p_eV) {
    return Material(MaterialModel::plasma, hbar_omega_p_eV, 0.0, {});
}

Material Material::drude(double hbar_omega_p_eV, double hbar_gamma_eV) {
    return Material(MaterialModel::drude, hbar_omega_p_eV, hbar_gamma_eV, {});
}

Material Material::drude_oscillators(double hbar_omega_p_eV, double hbar_gamma_eV,
                                     std::vector<Oscillator> oscillators) {
    return Material(MaterialModel::drude_oscillators, hbar_omega_p_eV, hbar_gamma_eV, std::move(oscillators));
}

Material Material::without_oscillators() const {
    if (model_ != MaterialModel::drude_oscillators) return *this;
    return drude(omega_p_eV_, gamma_eV_);
}

double epsilon_imag_eV(const Material& material, double zeta) {
    if (!(zeta >= 0.0)) throw DomainError("epsilon_imag: frequency must be non-negative");
    if (material.is_ideal()) return std::numeric_limits<double>::infinity();
    if (zeta == 0.0) {
        // A Drude metal also diverges at zero frequency; n = 0 Matsubara terms
        // use the closed-form reflection limits instead.
        throw SingularityError("epsilon_imag: free-electron term diverges at zero frequency");
    }
    const double wp = material.hbar_omega_p_eV();
    double eps = 1.0 + wp * wp / (zeta * (zeta + material.hbar_gamma_eV()));
    for (const auto& o : material.oscillators())
        eps += o.strength_eV2 / (o.resonance_eV * o.resonance_eV + zeta * zeta + zeta * o.damping_eV);
    return eps;
}

double epsilon_imag(const Material& material, double zeta_rad_s) {
    return epsilon_imag_eV(material, units::rad_per_s_to_ev(zeta_rad_s));
}

double plasma_wavelength_nm(const Material& material) {
    if (material.is_ideal()) throw UnsupportedOperation("plasma wavelength of an ideal metal is undefined");
    return 2.0 * constants::pi * constants::hbar_c_eVnm / material.hbar_omega_p_eV();
}

Material parse_material(std::istream& in, const std::string& source_name) {
    const auto doc = KeyValueDocument::parse(in, source_name);
    doc.reject_unknown_sections({"oscillator"});
    const auto& root = doc.root();
    root.reject_unknown({"model", "hbar_omega_p_eV", "hbar_gamma_eV"});
    const auto model = material_model_from_string(root.get_string("model"));
    const auto osc_sections = doc.sections("oscillator");
    if (model != MaterialModel::drude_oscillators && !osc_sections.empty())
        throw ConfigError(source_name + ": [oscillator] blocks require model = drude-oscillators");

    switch (model) {
        case MaterialModel::ideal_metal:
            root.reject_unknown({"model"});
            return Material::ideal_metal();
        case MaterialModel::plasma:
            root.reject_unknown({"model", "hbar_omega_p_eV"});
            return Material::plasma(root.get_double("hbar_omega_p_eV"));
        case MaterialModel::drude:
            return Material::drude(root.get_double("hbar_omega_p_eV"), root.get_double("hbar_gamma_eV"));
        case MaterialModel::drude_oscillators: {
            std::vector<Oscillator> osc;
            for (const auto* s : osc_sections) {
                s->reject_unknown({"f_eV2", "hbar_omega_eV", "hbar_g_eV"});
                osc.push_back({s->get_double("f_eV2"), s->get_double("hbar_omega_eV"), s->get_double("hbar_g_eV")});
            }
            return Material::drude_oscillators(root.get_double("hbar_omega_p_eV"), root.get_double("hbar_gamma_eV"),
                                               std::move(osc));
        }
    }
    throw ConfigError(source_name + ": unhandled material model");
}

Material load_material(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open material file '" + path.string() + "'");
    return parse_material(in, path.string());
}

}  // namespace casimir
