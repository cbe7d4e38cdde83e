#include "casimir/corrugation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "casimir/constants.hpp"
#include "casimir/diagnostics.hpp"
#include "casimir/errors.hpp"
#include "casimir/parallel.hpp"

namespace casimir {

namespace {

constexpr int kNodesPerPanel = 16;
using GaussLegendre = boost::math::quadrature::gauss<double, kNodesPerPanel>;

struct Nodes {
    std::vector<double> at;
    std::vector<double> weight;  // sums to 1 over the (half-)window
};

/// Gauss-Legendre nodes over [lo, hi] split into equal panels; weights
/// normalized to the interval length.
Nodes panel_nodes(double lo, double hi, int panels) {
    const auto& abscissa = GaussLegendre::abscissa();
    const auto& weights = GaussLegendre::weights();
    Nodes out;
    const double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        const double centre = lo + (p + 0.5) * width;
        const double half = 0.5 * width;
        // boost stores the positive half of the symmetric rule
        for (std::size_t i = abscissa.size(); i-- > 0;) {
            out.at.push_back(centre - half * abscissa[i]);
            out.weight.push_back(0.5 * weights[i] / panels);
        }
        for (std::size_t i = 0; i < abscissa.size(); ++i) {
            out.at.push_back(centre + half * abscissa[i]);
            out.weight.push_back(0.5 * weights[i] / panels);
        }
    }
    return out;
}

void check_window(double z_nm, const Geometry& geom) {
    if (!(z_nm > geom.amplitude_sum_nm()))
        throw ContactError("corrugated surfaces can touch: z must exceed A1 + A2", 0.5 * geom.period_nm, 0.0);
}

PlateEnergyTable window_table(double z_nm, const Geometry& geom, const Material& material, const Environment& env,
                              const QuadratureSpec& spec) {
    check_window(z_nm, geom);
    const double a = geom.amplitude_sum_nm();
    return PlateEnergyTable::build(material, env, spec, (z_nm - a) * 0.995, (z_nm + a) * 1.005, z_nm, 2.0 * a);
}

std::string material_tag(const Material& m) { return std::string(to_string(m.model())); }

}  // namespace

void Geometry::validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    auto non_negative = [](double v) { return v >= 0.0 && std::isfinite(v); };
    if (!positive(radius_um) || !positive(period_nm) || !positive(extent_x_um) || !positive(extent_y_um))
        throw DomainError("geometry: R, Lambda, L_x and L_y must be positive");
    if (!non_negative(amplitude_plate_nm) || !non_negative(amplitude_sphere_nm) || !non_negative(roughness_plate_nm) ||
        !non_negative(roughness_sphere_nm))
        throw DomainError("geometry: amplitudes and roughness must be non-negative");
    if (!std::isfinite(angle_rad)) throw DomainError("geometry: angle must be finite");
    if (period_nm < 5.0 * std::max(amplitude_plate_nm, amplitude_sphere_nm))
        warn("corrugation period is below five amplitudes; the gradient expansion may be inaccurate");
}

std::string_view to_string(ForceModel model) {
    return model == ForceModel::pfa ? "pfa" : "derivative";
}

double local_separation(double z_nm, double x_nm, double y_nm, const Geometry& geom) {
    const double k = 2.0 * constants::pi / geom.period_nm;
    const double xp = x_nm * std::cos(geom.angle_rad) - y_nm * std::sin(geom.angle_rad);
    const double h = z_nm + geom.amplitude_plate_nm * std::cos(k * x_nm) - geom.amplitude_sphere_nm * std::cos(k * xp);
    if (!(h > 0.0)) throw ContactError("surfaces touch", x_nm, y_nm);
    return h;
}

LocalEnergyModel table_energy_model(const PlateEnergyTable& table, const AlphaProvider& alpha_provider) {
    LocalEnergyModel m;
    m.energy = [&table](double h) { return table.energy(h); };
    m.derivative = [&table](double h) { return table.derivative(h); };
    if (alpha_provider.kind() == AlphaProvider::Kind::beta_model) {
        const double beta = alpha_provider.beta();
        if (beta == 0.0)
            m.alpha = [](double) { return 0.0; };
        else
            m.alpha = [&table, beta](double h) { return beta * table.energy(h); };
    } else {
        m.alpha = [&alpha_provider](double h) { return alpha_provider.from_energy(h, 0.0); };
    }
    return m;
}

CellAverages cell_averages(double z_nm, const Geometry& geom, const LocalEnergyModel& model,
                           const CellQuadratureOptions& cell) {
    geom.validate();
    check_window(z_nm, geom);
    const int refine = std::max(1, cell.refinement);
    const double lx = geom.extent_x_um * 1e3;
    const double ly = geom.extent_y_um * 1e3;
    const double lambda = geom.period_nm;
    const double s = std::sin(geom.angle_rad);
    const double c = std::cos(geom.angle_rad);

    const int x_panels = static_cast<int>(std::ceil(lx / lambda)) * refine;
    const int y_panels = std::max(1, static_cast<int>(std::ceil(0.5 * ly * std::abs(s) / lambda))) * refine;
    const Nodes xs = panel_nodes(-0.5 * lx, 0.5 * lx, x_panels);
    const Nodes ys = panel_nodes(0.0, 0.5 * ly, y_panels);

    const double k = 2.0 * constants::pi / lambda;
    const double a1 = geom.amplitude_plate_nm;
    const double a2 = geom.amplitude_sphere_nm;

    std::vector<CellAverages> rows(xs.at.size());
    parallel_for(xs.at.size(), [&](std::size_t i) {
        const double x = xs.at[i];
        const double h1 = a1 * std::cos(k * x);
        const double slope1 = -a1 * k * std::sin(k * x);
        auto point = [&](double y, double& pfa, double& corr) {
            const double u2 = k * (x * c - y * s);
            const double h2 = a2 * std::cos(u2);
            const double slope2 = -a2 * k * std::sin(u2);
            const double h = z_nm + h1 - h2;
            if (!(h > 0.0)) throw ContactError("surfaces touch", x, y);
            const double gx = slope1 - c * slope2;
            const double gy = s * slope2;
            const double u = model.energy(h);
            pfa = u;
            corr = model.alpha(h) * (gx * gx + gy * gy) -
                   0.5 * (h * units::nm * model.derivative(h) - u) * (slope1 * slope2 * c);
        };
        CellAverages row;
        for (std::size_t j = 0; j < ys.at.size(); ++j) {
            const double y = ys.at[j];
            double p_plus = 0.0, c_plus = 0.0, p_minus = 0.0, c_minus = 0.0;
            point(y, p_plus, c_plus);
            point(-y, p_minus, c_minus);
            row.pfa += ys.weight[j] * (p_plus + p_minus);
            row.correction += ys.weight[j] * (c_plus + c_minus);
        }
        rows[i] = row;
    });

    CellAverages total;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        total.pfa += xs.weight[i] * rows[i].pfa;
        total.correction += xs.weight[i] * rows[i].correction;
    }
    // y weights cover the half window twice (+y and -y)
    total.pfa *= 0.5;
    total.correction *= 0.5;
    return total;
}

double u_pfa(double z_nm, const Geometry& geom, const Material& material, const Environment& env,
             const AlphaProvider& alpha_provider, const QuadratureSpec& spec, const CellQuadratureOptions& cell) {
    geom.validate();
    const auto table = window_table(z_nm, geom, material, env, spec);
    return cell_averages(z_nm, geom, table_energy_model(table, alpha_provider), cell).pfa;
}

double u_corr(double z_nm, const Geometry& geom, const Material& material, const Environment& env,
              const AlphaProvider& alpha_provider, const QuadratureSpec& spec, const CellQuadratureOptions& cell) {
    geom.validate();
    const auto table = window_table(z_nm, geom, material, env, spec);
    return cell_averages(z_nm, geom, table_energy_model(table, alpha_provider), cell).corrected();
}

namespace {

double sphere_force_pN(double radius_um, double energy_J_m2) {
    return -2.0 * constants::pi * radius_um * units::um * energy_J_m2 / units::pN;
}

void warn_if_far(double z_nm, const Geometry& geom) {
    if (z_nm > geom.radius_um * 1e3 / 100.0)
        warn("separation exceeds R/100; the sphere proximity approximation degrades");
}

}  // namespace

double force_sphere(double z_nm, const Geometry& geom, const Material& material, const Environment& env,
                    const AlphaProvider& alpha_provider, const QuadratureSpec& spec, ForceModel model,
                    const CellQuadratureOptions& cell) {
    warn_if_far(z_nm, geom);
    const double u = model == ForceModel::pfa ? u_pfa(z_nm, geom, material, env, alpha_provider, spec, cell)
                                              : u_corr(z_nm, geom, material, env, alpha_provider, spec, cell);
    return sphere_force_pN(geom.radius_um, u);
}

ForceCurve roughness_correct(const ForceCurve& curve, const Geometry& geom) {
    ForceCurve out = curve;
    const double delta2 = geom.roughness_plate_nm * geom.roughness_plate_nm +
                          geom.roughness_sphere_nm * geom.roughness_sphere_nm;
    for (auto& p : out.samples) p.roughness_corrected = false;
    if (delta2 == 0.0 || curve.samples.size() < 3) return out;
    const auto& in = curve.samples;
    for (std::size_t i = 1; i < in.size(); ++i)
        if (in[i].z_nm - in[i - 1].z_nm > 1.0 + 1e-9)
            throw PrecisionError("roughness correction needs a separation grid of at most 1 nm");
    for (std::size_t i = 1; i + 1 < in.size(); ++i) {
        const double hl = in[i].z_nm - in[i - 1].z_nm;
        const double hr = in[i + 1].z_nm - in[i].z_nm;
        const double second = 2.0 * (hl * in[i + 1].force_pN - (hl + hr) * in[i].force_pN + hr * in[i - 1].force_pN) /
                              (hl * hr * (hl + hr));
        out.samples[i].force_pN = in[i].force_pN + 0.5 * delta2 * second;
        out.samples[i].roughness_corrected = true;
    }
    return out;
}

PlateEnergyTable corrugation_table(double z_min_nm, double z_max_nm, const Geometry& geom,
                                   const Material& material, const Environment& env, const QuadratureSpec& spec) {
    check_window(z_min_nm, geom);
    const double a = geom.amplitude_sum_nm();
    return PlateEnergyTable::build(material, env, spec, (z_min_nm - a) * 0.995, (z_max_nm + a) * 1.005, z_min_nm,
                                   2.0 * a);
}

std::vector<ForceCurve> force_curves(const CurveRequest& request, const Geometry& geom, const Material& material,
                                     const Environment& env, const AlphaProvider& alpha_provider,
                                     const QuadratureSpec& spec, const CellQuadratureOptions& cell) {
    geom.validate();
    if (request.angles_rad.empty()) throw DomainError("force curve: no angles requested");
    if (!(request.z_step_nm > 0.0) || !(request.z_max_nm >= request.z_min_nm))
        throw DomainError("force curve: need z_step > 0 and z_max >= z_min");
    std::vector<double> zs;
    for (long i = 0;; ++i) {
        const double z = request.z_min_nm + static_cast<double>(i) * request.z_step_nm;
        if (z > request.z_max_nm + 1e-9 * request.z_step_nm) break;
        zs.push_back(z);
    }
    warn_if_far(zs.back(), geom);
    const auto table = corrugation_table(zs.front(), zs.back(), geom, material, env, spec);
    const auto model = table_energy_model(table, alpha_provider);

    std::vector<ForceCurve> curves;
    for (double angle : request.angles_rad) {
        Geometry g = geom;
        g.angle_rad = angle;
        ForceCurve curve;
        curve.angle_rad = angle;
        curve.material = material_tag(material);
        curve.model = request.model;
        curve.temperature_K = env.temperature_K();
        for (double z : zs) {
            const auto avg = cell_averages(z, g, model, cell);
            const double u = request.model == ForceModel::pfa ? avg.pfa : avg.corrected();
            curve.samples.push_back({z, sphere_force_pN(g.radius_um, u), 0.0, false});
        }
        curves.push_back(request.roughness ? roughness_correct(curve, g) : std::move(curve));
    }
    return curves;
}

void write_force_csv(std::ostream& out, const ForceCurve& curve) {
    out << "z_nm,F_pN,sigma_pN\n";
    std::ostringstream line;
    line << std::setprecision(10);
    for (const auto& p : curve.samples) {
        line.str("");
        line << p.z_nm << ',' << p.force_pN << ',' << p.sigma_pN << '\n';
        out << line.str();
    }
}

}  // namespace casimir
