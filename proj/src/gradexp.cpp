#include "casimir/gradexp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "casimir/errors.hpp"

namespace casimir {

AlphaProvider AlphaProvider::beta_model(double beta) {
    if (!std::isfinite(beta)) throw DomainError("beta must be finite");
    return AlphaProvider(Kind::beta_model, beta, std::nullopt);
}

AlphaProvider AlphaProvider::tabulated(std::vector<double> d_nm, std::vector<double> alpha_J_m2) {
    if (!d_nm.empty() && !(d_nm.front() > 0.0)) throw DomainError("alpha table separations must be positive");
    return AlphaProvider(Kind::tabulated, 0.0, MonotoneCubic(std::move(d_nm), std::move(alpha_J_m2)));
}

AlphaProvider AlphaProvider::parse_table(std::istream& in, const std::string& source_name) {
    std::vector<double> d;
    std::vector<double> a;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (char& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream row(line);
        double dv = 0.0;
        double av = 0.0;
        if (!(row >> dv)) continue;  // blank line
        std::string extra;
        if (!(row >> av) || (row >> extra))
            throw ConfigError(source_name + ":" + std::to_string(line_no) + ": expected two columns (d_nm, alpha)");
        d.push_back(dv);
        a.push_back(av);
    }
    try {
        return tabulated(std::move(d), std::move(a));
    } catch (const DomainError& e) {
        throw ConfigError(source_name + ": " + e.what());
    }
}

AlphaProvider AlphaProvider::load_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open alpha table '" + path.string() + "'");
    return parse_table(in, path.string());
}

double AlphaProvider::beta() const {
    if (kind_ != Kind::beta_model) throw UnsupportedOperation("tabulated alpha has no beta coefficient");
    return beta_;
}

const MonotoneCubic& AlphaProvider::table() const {
    if (!table_) throw UnsupportedOperation("beta-model alpha has no table");
    return *table_;
}

double AlphaProvider::from_energy(double d_nm, double energy_J_m2) const {
    if (kind_ == Kind::beta_model) return beta_ * energy_J_m2;
    return (*table_)(d_nm);
}

double alpha(const AlphaProvider& provider, double d_nm, const Material& material, const Environment& env,
             const QuadratureSpec& spec) {
    if (!(d_nm > 0.0)) throw DomainError("alpha: separation must be positive");
    if (provider.kind() == AlphaProvider::Kind::tabulated) return provider.table()(d_nm);
    if (provider.beta() == 0.0) return 0.0;
    return provider.beta() * energy_per_area(material, d_nm, env, spec);
}

}  // namespace casimir
