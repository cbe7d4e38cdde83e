#pragma once

// Calibration of the force measurement from deflection-vs-separation traces
// taken at several applied voltages:
//
//   z     = z_piezo + m S_def + z0
//   S_def = [X(z) (V - V0)^2 + F_Cas(z)] / k'
//
// The vertex of S_def(V) at fixed separation gives V0, its curvature X/k'
// is fitted for (z0, k'), and the Casimir force follows by subtracting the
// electrostatic part.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "casimir/corrugation.hpp"

namespace casimir {

struct CalibrationTruth {
    double residual_mV = 0.0;         ///< V0
    double contact_nm = 0.0;          ///< z0
    double k_prime_pN_per_mV = 0.0;   ///< k' = k m, per mV of deflection signal
    double m_nm_per_mV = 0.0;         ///< deflection per mV of signal
};

struct DeflectionTrace {
    double voltage_mV = 0.0;
    std::vector<double> z_piezo_nm;
    std::vector<double> signal_mV;
};

struct DeflectionDataset {
    std::vector<DeflectionTrace> traces;
    double m_nm_per_mV = 0.0;

    /// Throws DomainError unless every trace is non-empty, equally sized in
    /// its two columns, and strictly monotone in z_piezo.
    void validate() const;
};

struct SimulationOptions {
    std::vector<double> voltages_mV;
    std::vector<double> z_piezo_nm;
    int repetitions = 1;
    double noise_mV = 0.0;  ///< white Gaussian noise on S_def, signal units
    std::uint64_t seed = 0;
    /// Optional photodetector drift, signal units per second of the sweep.
    double drift_mV_per_s = 0.0;
    /// Piezo speed of one approach (a 0.05 Hz triangle over 2 um is 200 nm/s).
    double sweep_speed_nm_per_s = 200.0;
};

using ForceFunction = std::function<double(double z_nm)>;

/// Solves the deflection feedback by fixed-point iteration (to 1e-3 nm) at
/// every piezo position. Deterministic for a fixed seed.
DeflectionDataset simulate_deflection(const CalibrationTruth& truth, const Geometry& geom,
                                      const ForceFunction& casimir_force_pN, const SimulationOptions& options);

/// Casimir force F(z) in pN of the derivative-expansion model tabulated on
/// [z_lo, z_hi] and interpolated monotonically in log-log coordinates.
ForceFunction casimir_force_function(double z_lo_nm, double z_hi_nm, const Geometry& geom, const Material& material,
                                     const Environment& env, const AlphaProvider& alpha_provider,
                                     const QuadratureSpec& spec = {}, std::size_t samples = 160);

/// Builds the Casimir model over the reachable separations and simulates.
DeflectionDataset simulate_deflection(const CalibrationTruth& truth, const Geometry& geom, const Material& material,
                                      const Environment& env, const AlphaProvider& alpha_provider,
                                      const QuadratureSpec& spec, const SimulationOptions& options);

struct ParabolaFit {
    double z_rel_nm = 0.0;     ///< z_piezo + m S_def, i.e. separation minus z0
    double vertex_mV = 0.0;
    double curvature = 0.0;    ///< signal per mV^2
    double offset = 0.0;       ///< S_def at the vertex
    double chi2 = 0.0;
};

/// Linear interpolation of every trace onto a common 1 nm grid of relative
/// separation, then a least-squares parabola in V at each grid point.
std::vector<ParabolaFit> fit_parabolas(const DeflectionDataset& ds, double grid_step_nm = 1.0);

struct CurvatureFit {
    double contact_nm = 0.0;
    double contact_sigma_nm = 0.0;
    double k_prime = 0.0;
    double k_prime_sigma = 0.0;
    double covariance = 0.0;  ///< cov(z0, k')
    double chi2 = 0.0;
    int iterations = 0;
    /// Residual-vs-separation slope and its z-score; |z| < 1.96 means the
    /// parameters show no separation dependence at 95 %.
    double residual_slope = 0.0;
    double residual_slope_z = 0.0;
    bool separation_independent = true;
};

/// Nonlinear least squares (Levenberg-Marquardt) of curvature(z_rel) = X(z_rel + z0) / k'.
CurvatureFit fit_curvature(const std::vector<ParabolaFit>& curvatures, const Geometry& geom);

struct CalibrationResult {
    double residual_mV = 0.0;
    double residual_sigma_mV = 0.0;
    double contact_nm = 0.0;
    double contact_sigma_nm = 0.0;
    double k_prime = 0.0;
    double k_prime_sigma = 0.0;
    double covariance_contact_k = 0.0;
    double parabola_chi2 = 0.0;
    double curvature_chi2 = 0.0;
    double residual_slope_z = 0.0;
    bool separation_independent = true;
    std::size_t separations = 0;
};

struct CalibrationOptions {
    /// Relative-separation window used for the fits; empty bounds use everything.
    double z_rel_min_nm = -1e300;
    double z_rel_max_nm = 1e300;
    /// Remove a linear drift per trace from the far tail (z_rel > tail_start).
    bool remove_drift = false;
    double drift_tail_start_nm = 1500.0;
};

CalibrationResult calibrate(DeflectionDataset& ds, const Geometry& geom, const CalibrationOptions& options = {});

/// Linear per-trace drift fitted to the far tail after subtracting the
/// electrostatic model of a preliminary calibration. Modifies ds in place.
void remove_drift(DeflectionDataset& ds, const CalibrationResult& preliminary, const Geometry& geom,
                  double tail_start_nm);

struct ExtractionResult {
    ForceCurve mean;                             ///< sigma = spread across traces
    std::vector<std::vector<double>> per_trace;  ///< F per trace on mean.samples' z grid
};

/// F_Cas(z) = k' S_def(z) - X(z) (V - V0)^2 per trace on a 1 nm grid, then
/// averaged. Raises ConsistencyError when a trace's mean offset from the
/// average exceeds five standard errors.
ExtractionResult extract_casimir(const DeflectionDataset& ds, const CalibrationResult& calib, const Geometry& geom,
                                 double z_min_nm = 0.0, double z_max_nm = 1e300);

/// Quadrature sum of independent error components.
double combine_errors(double random_pN, double systematic_pN);

struct ErrorBudget {
    double random_pN = 0.0;
    double systematic_near_pN = 0.0;
    double systematic_far_pN = 0.0;
    double z_near_nm = 0.0;
    double z_far_nm = 0.0;
    double confidence = 0.67;

    /// Systematic error linearly interpolated in z, clamped outside the range.
    double systematic(double z_nm) const;
    double total(double z_nm) const;
};

/// Long format `voltage_mV,z_piezo_nm,S_def_signal`; a new trace starts
/// whenever the voltage changes or z_piezo stops moving in one direction.
void write_dataset_csv(std::ostream& out, const DeflectionDataset& ds);
DeflectionDataset read_dataset_csv(std::istream& in, double m_nm_per_mV, const std::string& source_name = "<dataset>");

void write_calibration_report(std::ostream& out, const CalibrationResult& result);

}  // namespace casimir
