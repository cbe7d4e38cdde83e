#pragma once

// Dielectric response of the plate materials at imaginary frequency.
//
//   eps(i zeta) = 1 + wp^2 / (zeta (zeta + gamma)) + sum_j f_j / (w_j^2 + zeta^2 + g_j zeta)
//
// Parameters are stored as photon energies (eV, eV^2 for oscillator
// strengths); angular frequencies in rad/s are accepted at the API.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace casimir {

/// One Lorentz term describing bound (core) electrons.
struct Oscillator {
    double strength_eV2 = 0.0;  ///< f_j
    double resonance_eV = 0.0;  ///< hbar w_j
    double damping_eV = 0.0;    ///< hbar g_j
};

enum class MaterialModel { ideal_metal, plasma, drude, drude_oscillators };

std::string_view to_string(MaterialModel model);
MaterialModel material_model_from_string(std::string_view name);

class Material {
public:
    static Material ideal_metal();
    static Material plasma(double hbar_omega_p_eV);
    static Material drude(double hbar_omega_p_eV, double hbar_gamma_eV);
    static Material drude_oscillators(double hbar_omega_p_eV, double hbar_gamma_eV,
                                      std::vector<Oscillator> oscillators);

    MaterialModel model() const noexcept { return model_; }
    bool is_ideal() const noexcept { return model_ == MaterialModel::ideal_metal; }
    double hbar_omega_p_eV() const noexcept { return omega_p_eV_; }
    double hbar_gamma_eV() const noexcept { return gamma_eV_; }
    const std::vector<Oscillator>& oscillators() const noexcept { return oscillators_; }

    /// Free-electron response without dissipation: the n = 0 TE mode is
    /// screened by the plasma frequency instead of vanishing.
    bool dissipationless() const noexcept { return gamma_eV_ == 0.0; }

    /// Same material with its oscillator terms removed.
    Material without_oscillators() const;

private:
    Material(MaterialModel model, double omega_p_eV, double gamma_eV, std::vector<Oscillator> osc);

    MaterialModel model_;
    double omega_p_eV_;
    double gamma_eV_;
    std::vector<Oscillator> oscillators_;
};

/// eps(i zeta) for zeta in rad/s. Returns +infinity for the ideal metal.
double epsilon_imag(const Material& material, double zeta_rad_s);

/// Same as epsilon_imag with the frequency given as hbar*zeta in eV.
double epsilon_imag_eV(const Material& material, double hbar_zeta_eV);

/// lambda_p = 2 pi c / omega_p in nm.
double plasma_wavelength_nm(const Material& material);

/// Reads the material file format:
///
///   model = drude-oscillators
///   hbar_omega_p_eV = 9.0
///   hbar_gamma_eV = 0.035
///   [oscillator]
///   f_eV2 = 7.091
///   hbar_omega_eV = 3.05
///   hbar_g_eV = 0.75
Material load_material(const std::filesystem::path& path);
Material parse_material(std::istream& in, const std::string& source_name = "<material>");

}  // namespace casimir
