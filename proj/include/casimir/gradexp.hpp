#pragma once

// Gradient coefficient alpha(d) of the derivative expansion: the energy
// density multiplying grad H . grad H beyond the proximity approximation.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "casimir/interpolation.hpp"
#include "casimir/lifshitz.hpp"

namespace casimir {

class AlphaProvider {
public:
    enum class Kind { beta_model, tabulated };

    /// alpha(d) = beta * U(d, T). The beta default is a placeholder that has
    /// to be validated against measured PFA deviations before use.
    static AlphaProvider beta_model(double beta = 0.67);
    /// Monotone-cubic interpolation of (d in nm, alpha in J/m^2); at least 4 rows.
    static AlphaProvider tabulated(std::vector<double> d_nm, std::vector<double> alpha_J_m2);
    /// Two-column text table, `#` comments, whitespace or comma separated.
    static AlphaProvider load_table(const std::filesystem::path& path);
    static AlphaProvider parse_table(std::istream& in, const std::string& source_name = "<alpha table>");

    Kind kind() const noexcept { return kind_; }
    double beta() const;
    const MonotoneCubic& table() const;

    /// alpha at separation d given the flat-plate energy U(d) already known
    /// to the caller (ignored by the tabulated provider).
    double from_energy(double d_nm, double energy_J_m2) const;

private:
    AlphaProvider(Kind kind, double beta, std::optional<MonotoneCubic> table)
        : kind_(kind), beta_(beta), table_(std::move(table)) {}

    Kind kind_;
    double beta_;
    std::optional<MonotoneCubic> table_;
};

/// alpha(d) in J/m^2. The tabulated provider raises RangeError outside its table.
double alpha(const AlphaProvider& provider, double d_nm, const Material& material, const Environment& env,
             const QuadratureSpec& spec = {});

}  // namespace casimir
