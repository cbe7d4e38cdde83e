#pragma once

// Run configuration for the command-line tool. Relative paths are resolved
// against the directory of the config file. Units are part of key names.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "casimir/calibration.hpp"
#include "casimir/corrugation.hpp"
#include "casimir/electrostatics.hpp"
#include "casimir/gradexp.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/materials.hpp"

namespace casimir {

enum class CurveModels { pfa, derivative, both };

struct ForceCurveBlock {
    double z_min_nm = 0.0;
    double z_max_nm = 0.0;
    double z_step_nm = 1.0;
    std::vector<double> angles_deg;
    CurveModels models = CurveModels::derivative;
    bool roughness = true;
    /// Also writes F(T) / F(0 K) for the derivative expansion.
    bool compare_zero_temperature = false;
};

struct DiffPfaBlock {
    double z_min_nm = 0.0;
    double z_max_nm = 0.0;
    double z_step_nm = 1.0;
    std::vector<double> angles_deg;
    bool ideal_metal_column = true;
};

struct CalibrateBlock {
    enum class Source { simulate, dataset };
    Source source = Source::simulate;
    std::filesystem::path dataset;
    double m_nm_per_mV = 0.0;
    CalibrationTruth truth;
    std::vector<double> voltages_mV;
    double z_piezo_min_nm = 0.0;
    double z_piezo_max_nm = 0.0;
    double z_piezo_step_nm = 1.0;
    int repetitions = 1;
    double noise_pN = 0.0;  ///< force-equivalent; divided by k' for the signal
    double drift_mV_per_s = 0.0;
    std::uint64_t seed = 0;
    CalibrationOptions options;
    double extract_z_min_nm = 0.0;
    double extract_z_max_nm = 1e300;
};

struct OracleBlock {
    std::vector<double> separations_nm;
    LaplaceGrid grid;
};

struct MaterialEvalBlock {
    double zeta_min_eV = 0.0;
    double zeta_max_eV = 0.0;
    int points = 0;
};

struct RunConfig {
    std::filesystem::path material_path;
    Material material = Material::ideal_metal();
    Geometry geometry;
    Environment environment = Environment::zero_temperature();
    AlphaProvider alpha = AlphaProvider::beta_model();
    QuadratureSpec quadrature;

    std::optional<ForceCurveBlock> force_curve;
    std::optional<DiffPfaBlock> diff_pfa;
    std::optional<CalibrateBlock> calibrate;
    std::optional<OracleBlock> oracle;
    std::optional<MaterialEvalBlock> material_eval;
};

RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir,
                           const std::string& source_name = "<config>");

}  // namespace casimir
