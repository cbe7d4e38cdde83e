#pragma once

// Casimir interaction between two sinusoidally corrugated surfaces crossing
// at an angle theta, averaged over a finite L_x x L_y window:
//
//   H(x, y)  = z + h1(x) - h2(x'),   x' = x cos(theta) - y sin(theta)
//   U_PFA    = < U(H) >
//   U_corr   = U_PFA + < alpha(H) grad H . grad H - (H U'(H) - U(H)) grad h1 . grad h2 / 2 >
//
// with h_i(s) = A_i cos(2 pi s / Lambda). The sphere enters only through
// F = 2 pi R U.

#include <functional>
#include <string>
#include <vector>

#include "casimir/energy_table.hpp"
#include "casimir/gradexp.hpp"
#include "casimir/lifshitz.hpp"

namespace casimir {

struct Geometry {
    double radius_um = 0.0;
    double period_nm = 0.0;
    double amplitude_plate_nm = 0.0;   ///< A1
    double amplitude_sphere_nm = 0.0;  ///< A2
    double extent_x_um = 0.0;
    double extent_y_um = 0.0;
    double angle_rad = 0.0;
    double roughness_plate_nm = 0.0;   ///< delta1
    double roughness_sphere_nm = 0.0;  ///< delta2

    /// Throws DomainError on invalid values; warns when the corrugation is
    /// too steep for a gradient expansion (period < 5 * max amplitude).
    void validate() const;
    double amplitude_sum_nm() const noexcept { return amplitude_plate_nm + amplitude_sphere_nm; }
};

enum class ForceModel { pfa, derivative_expansion };
std::string_view to_string(ForceModel model);

struct ForceSample {
    double z_nm = 0.0;
    double force_pN = 0.0;
    double sigma_pN = 0.0;
    bool roughness_corrected = false;
};

struct ForceCurve {
    std::vector<ForceSample> samples;
    double angle_rad = 0.0;
    std::string material;
    ForceModel model = ForceModel::derivative_expansion;
    double temperature_K = 0.0;
};

/// Flat-plate energy density, its derivative and the gradient coefficient as
/// functions of the local separation in nm.
struct LocalEnergyModel {
    std::function<double(double)> energy;      ///< J/m^2
    std::function<double(double)> derivative;  ///< J/m^3
    std::function<double(double)> alpha;       ///< J/m^2
};

LocalEnergyModel table_energy_model(const PlateEnergyTable& table, const AlphaProvider& alpha_provider);

/// Tensor-product Gauss-Legendre panels over the window: `nodes_per_panel`
/// nodes per corrugation period in x, and per period Lambda / sin(theta) of
/// the crossing modulation in y (at least two panels per half-window).
/// `refinement` multiplies every panel count.
struct CellQuadratureOptions {
    int refinement = 1;
};

struct CellAverages {
    double pfa = 0.0;         ///< < U(H) >, J/m^2
    double correction = 0.0;  ///< derivative-expansion part, J/m^2
    double corrected() const noexcept { return pfa + correction; }
};

/// Window average of the PFA energy and of the gradient correction.
CellAverages cell_averages(double z_nm, const Geometry& geom, const LocalEnergyModel& model,
                           const CellQuadratureOptions& cell = {});

/// H in nm. Throws ContactError when the surfaces touch at (x, y).
double local_separation(double z_nm, double x_nm, double y_nm, const Geometry& geom);

double u_pfa(double z_nm, const Geometry& geom, const Material& material, const Environment& env,
             const AlphaProvider& alpha_provider, const QuadratureSpec& spec = {},
             const CellQuadratureOptions& cell = {});

double u_corr(double z_nm, const Geometry& geom, const Material& material, const Environment& env,
              const AlphaProvider& alpha_provider, const QuadratureSpec& spec = {},
              const CellQuadratureOptions& cell = {});

/// Magnitude of the sphere force 2 pi R U in pN (positive = attraction).
double force_sphere(double z_nm, const Geometry& geom, const Material& material, const Environment& env,
                    const AlphaProvider& alpha_provider, const QuadratureSpec& spec, ForceModel model,
                    const CellQuadratureOptions& cell = {});

/// Adds the lowest-order stochastic roughness correction
/// F + (delta1^2 + delta2^2) F'' / 2 with F'' from central differences.
/// Endpoints are copied unchanged (roughness_corrected = false).
ForceCurve roughness_correct(const ForceCurve& curve, const Geometry& geom);

struct CurveRequest {
    double z_min_nm = 0.0;
    double z_max_nm = 0.0;
    double z_step_nm = 1.0;
    std::vector<double> angles_rad;
    ForceModel model = ForceModel::derivative_expansion;
    bool roughness = true;
};

/// Force curves for every requested angle, sharing one energy table.
std::vector<ForceCurve> force_curves(const CurveRequest& request, const Geometry& geom, const Material& material,
                                     const Environment& env, const AlphaProvider& alpha_provider,
                                     const QuadratureSpec& spec = {}, const CellQuadratureOptions& cell = {});

/// Energy table spanning every local separation reachable for z in [z_min, z_max].
PlateEnergyTable corrugation_table(double z_min_nm, double z_max_nm, const Geometry& geom,
                                   const Material& material, const Environment& env, const QuadratureSpec& spec);

/// Writes `z_nm,F_pN,sigma_pN` with a header row.
void write_force_csv(std::ostream& out, const ForceCurve& curve);

}  // namespace casimir
