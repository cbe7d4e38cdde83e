#include "casimir/calibration.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <memory>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "casimir/constants.hpp"
#include "casimir/electrostatics.hpp"
#include "casimir/errors.hpp"
#include "casimir/interpolation.hpp"
#include "casimir/parallel.hpp"

namespace casimir {

namespace {

bool strictly_monotone(const std::vector<double>& v) {
    if (v.size() < 2) return true;
    const bool up = v[1] > v[0];
    for (std::size_t i = 1; i < v.size(); ++i)
        if (up ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) return false;
    return true;
}

struct Sampled {
    std::vector<double> z;
    std::vector<double> s;
};

/// Local quadratic least-squares fit of the signal against z_piezo, evaluated
/// at every sample (window shifted inward at the trace ends).
std::vector<double> smoothed_signal(const DeflectionTrace& t, std::size_t half_width) {
    const std::size_t n = t.z_piezo_nm.size();
    const std::size_t width = std::min(n, 2 * half_width + 1);
    if (width < 3) return t.signal_mV;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = std::min(i > half_width ? i - half_width : 0, n - width);
        Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
        Eigen::Vector3d atb = Eigen::Vector3d::Zero();
        for (std::size_t j = lo; j < lo + width; ++j) {
            const double u = t.z_piezo_nm[j] - t.z_piezo_nm[i];
            const Eigen::Vector3d row(1.0, u, u * u);
            ata += row * row.transpose();
            atb += row * t.signal_mV[j];
        }
        out[i] = ata.ldlt().solve(atb)(0);
    }
    return out;
}

/// (z_piezo + m S + offset, S) sorted by separation. The separation uses the
/// smoothed signal: detector noise in S is not motion, and feeding it into the
/// abscissa of a two-point interpolation biases the interpolated S.
Sampled separation_series(const DeflectionTrace& t, double m, double offset) {
    std::vector<std::size_t> order(t.z_piezo_nm.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto smooth = smoothed_signal(t, 10);
    std::vector<double> z(order.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = t.z_piezo_nm[i] + m * smooth[i] + offset;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });
    Sampled out;
    for (std::size_t i : order) {
        if (!out.z.empty() && !(z[i] > out.z.back())) continue;  // drop exact duplicates
        out.z.push_back(z[i]);
        out.s.push_back(t.signal_mV[i]);
    }
    return out;
}

/// Linear interpolation of a sorted series at sorted query points.
std::vector<double> interpolate_linear(const Sampled& series, const std::vector<double>& at) {
    std::vector<double> out(at.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < at.size(); ++i) {
        while (k + 2 < series.z.size() && series.z[k + 1] < at[i]) ++k;
        const double z0 = series.z[k];
        const double z1 = series.z[k + 1];
        const double w = (at[i] - z0) / (z1 - z0);
        out[i] = series.s[k] + w * (series.s[k + 1] - series.s[k]);
    }
    return out;
}

std::vector<double> common_grid(const std::vector<Sampled>& series, double lo_bound, double hi_bound, double step) {
    double lo = lo_bound;
    double hi = hi_bound;
    for (const auto& s : series) {
        if (s.z.size() < 2) throw DomainError("trace has fewer than two distinct separations");
        lo = std::max(lo, s.z.front());
        hi = std::min(hi, s.z.back());
    }
    std::vector<double> grid;
    for (double z = std::ceil(lo / step) * step; z <= hi; z += step) grid.push_back(z);
    if (grid.empty()) throw DomainError("traces share no common separation range");
    return grid;
}

double x_slope(double z_nm, const Geometry& geom) {
    const double h = 1e-3;
    return (x_coefficient(z_nm + h, geom) - x_coefficient(z_nm - h, geom)) / (2.0 * h);
}

}  // namespace

void DeflectionDataset::validate() const {
    if (traces.empty()) throw DomainError("dataset has no traces");
    if (!(m_nm_per_mV > 0.0) || !std::isfinite(m_nm_per_mV))
        throw DomainError("deflection coefficient m must be positive");
    for (const auto& t : traces) {
        if (t.z_piezo_nm.empty() || t.z_piezo_nm.size() != t.signal_mV.size())
            throw DomainError("trace columns are empty or of unequal length");
        if (!strictly_monotone(t.z_piezo_nm)) throw DomainError("z_piezo must be strictly monotone within a trace");
    }
}

DeflectionDataset simulate_deflection(const CalibrationTruth& truth, const Geometry& geom,
                                      const ForceFunction& casimir_force_pN, const SimulationOptions& options) {
    if (options.voltages_mV.empty()) throw DomainError("simulation needs at least one voltage");
    if (options.z_piezo_nm.empty() || !strictly_monotone(options.z_piezo_nm))
        throw DomainError("simulation needs a strictly monotone piezo grid");
    if (options.repetitions < 1 || !(options.noise_mV >= 0.0) || !(options.sweep_speed_nm_per_s > 0.0))
        throw DomainError("simulation needs repetitions >= 1, noise >= 0 and a positive sweep speed");
    if (!(truth.k_prime_pN_per_mV > 0.0) || !(truth.m_nm_per_mV > 0.0))
        throw DomainError("simulation needs k' > 0 and m > 0");

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    const double zp_max = *std::max_element(options.z_piezo_nm.begin(), options.z_piezo_nm.end());

    DeflectionDataset ds;
    ds.m_nm_per_mV = truth.m_nm_per_mV;
    for (int rep = 0; rep < options.repetitions; ++rep) {
        for (double v : options.voltages_mV) {
            const double dv2 = (v - truth.residual_mV) * (v - truth.residual_mV);
            DeflectionTrace trace;
            trace.voltage_mV = v;
            for (double zp : options.z_piezo_nm) {
                auto signal = [&](double z) {
                    return (x_coefficient(z, geom) * dv2 + casimir_force_pN(z)) / truth.k_prime_pN_per_mV;
                };
                double z = zp + truth.contact_nm;
                double last_step = std::numeric_limits<double>::infinity();
                bool converged = false;
                for (int it = 0; it < 200; ++it) {
                    const double next = zp + truth.contact_nm + truth.m_nm_per_mV * signal(z);
                    const double step = std::abs(next - z);
                    if (!std::isfinite(next) || (it > 5 && step > last_step))
                        throw InstabilityError("deflection feedback diverges", z);
                    z = next;
                    last_step = step;
                    if (step < 1e-3) {
                        converged = true;
                        break;
                    }
                }
                if (!converged) throw InstabilityError("deflection feedback does not settle", z);
                const double drift = options.drift_mV_per_s * (zp_max - zp) / options.sweep_speed_nm_per_s;
                const double sample = signal(z) + drift + options.noise_mV * noise(rng);
                trace.z_piezo_nm.push_back(zp);
                trace.signal_mV.push_back(sample);
            }
            ds.traces.push_back(std::move(trace));
        }
    }
    return ds;
}

ForceFunction casimir_force_function(double z_lo_nm, double z_hi_nm, const Geometry& geom, const Material& material,
                                     const Environment& env, const AlphaProvider& alpha_provider,
                                     const QuadratureSpec& spec, std::size_t samples) {
    const auto zs = geometric_grid(z_lo_nm, z_hi_nm, std::max<std::size_t>(samples, 4));
    const auto table = corrugation_table(z_lo_nm, z_hi_nm, geom, material, env, spec);
    const auto model = table_energy_model(table, alpha_provider);
    std::vector<double> log_z(zs.size());
    std::vector<double> log_f(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const double u = cell_averages(zs[i], geom, model).corrected();
        log_z[i] = std::log(zs[i]);
        log_f[i] = std::log(-2.0 * constants::pi * geom.radius_um * units::um * u / units::pN);
    }
    auto spline = std::make_shared<MonotoneCubic>(std::move(log_z), std::move(log_f));
    return [spline](double z_nm) { return std::exp((*spline)(std::log(z_nm))); };
}

DeflectionDataset simulate_deflection(const CalibrationTruth& truth, const Geometry& geom, const Material& material,
                                      const Environment& env, const AlphaProvider& alpha_provider,
                                      const QuadratureSpec& spec, const SimulationOptions& options) {
    if (options.z_piezo_nm.empty()) throw DomainError("simulation needs a piezo grid");
    const auto [lo, hi] = std::minmax_element(options.z_piezo_nm.begin(), options.z_piezo_nm.end());
    const auto force = casimir_force_function(*lo + truth.contact_nm, *hi + truth.contact_nm + 50.0, geom, material,
                                              env, alpha_provider, spec);
    return simulate_deflection(truth, geom, force, options);
}

std::vector<ParabolaFit> fit_parabolas(const DeflectionDataset& ds, double grid_step_nm) {
    ds.validate();
    std::set<double> distinct;
    for (const auto& t : ds.traces) distinct.insert(t.voltage_mV);
    if (distinct.size() < 3) throw RankError("parabola fit needs at least three distinct voltages");

    std::vector<Sampled> series;
    for (const auto& t : ds.traces) series.push_back(separation_series(t, ds.m_nm_per_mV, 0.0));
    const auto grid = common_grid(series, -1e300, 1e300, grid_step_nm);

    const auto n = static_cast<Eigen::Index>(ds.traces.size());
    double v_mean = 0.0;
    for (const auto& t : ds.traces) v_mean += t.voltage_mV;
    v_mean /= static_cast<double>(n);
    double v_scale = 0.0;
    for (const auto& t : ds.traces) v_scale = std::max(v_scale, std::abs(t.voltage_mV - v_mean));

    Eigen::MatrixXd design(n, 3);
    Eigen::MatrixXd rhs(n, static_cast<Eigen::Index>(grid.size()));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = (ds.traces[i].voltage_mV - v_mean) / v_scale;
        design(i, 0) = 1.0;
        design(i, 1) = t;
        design(i, 2) = t * t;
        const auto s = interpolate_linear(series[i], grid);
        for (std::size_t g = 0; g < grid.size(); ++g) rhs(i, static_cast<Eigen::Index>(g)) = s[g];
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < 3) throw RankError("parabola design matrix is rank deficient");
    const Eigen::MatrixXd coef = qr.solve(rhs);
    const Eigen::MatrixXd resid = rhs - design * coef;

    std::vector<ParabolaFit> fits(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const auto col = static_cast<Eigen::Index>(g);
        const double q0 = coef(0, col);
        const double q1 = coef(1, col);
        const double q2 = coef(2, col);
        ParabolaFit& f = fits[g];
        f.z_rel_nm = grid[g];
        f.curvature = q2 / (v_scale * v_scale);
        f.vertex_mV = v_mean - v_scale * q1 / (2.0 * q2);
        f.offset = q0 - q1 * q1 / (4.0 * q2);
        f.chi2 = resid.col(col).squaredNorm();
    }
    return fits;
}

CurvatureFit fit_curvature(const std::vector<ParabolaFit>& curvatures, const Geometry& geom) {
    std::vector<double> z;
    std::vector<double> a;
    for (const auto& c : curvatures) {
        if (!std::isfinite(c.curvature)) continue;
        z.push_back(c.z_rel_nm);
        a.push_back(c.curvature);
    }
    const auto n = z.size();
    if (n < 10) throw DomainError("curvature fit needs at least 10 separations");
    const auto [zmin_it, zmax_it] = std::minmax_element(z.begin(), z.end());
    if (*zmax_it - *zmin_it < 100.0) throw DomainError("curvature fit needs separations spanning at least 100 nm");
    const double z0_floor = geom.amplitude_sum_nm() - *zmin_it + 1e-6;

    // Model a = X(z + z0) * g with g = 1/k' linear; scan z0 for a start.
    auto best_scale = [&](double z0, double& chi2) {
        double sxx = 0.0, sxa = 0.0;
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = x_coefficient(z[i] + z0, geom);
            sxx += x[i] * x[i];
            sxa += x[i] * a[i];
        }
        const double g = sxa / sxx;
        chi2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) chi2 += (a[i] - g * x[i]) * (a[i] - g * x[i]);
        return g;
    };
    double z0 = std::max(z0_floor, 1.0);
    double best_chi2 = std::numeric_limits<double>::infinity();
    for (double trial = std::max(z0_floor, 1.0); trial < std::max(z0_floor, 1.0) + 2000.0; trial += 2.0) {
        double chi2 = 0.0;
        best_scale(trial, chi2);
        if (chi2 < best_chi2) {
            best_chi2 = chi2;
            z0 = trial;
        }
    }
    double chi2 = 0.0;
    double kp = 1.0 / best_scale(z0, chi2);
    if (!(kp > 0.0)) throw FitError("curvature fit: non-positive calibration constant", chi2);

    auto evaluate = [&](double z0v, double kpv, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
        double c2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = x_coefficient(z[i] + z0v, geom);
            r(static_cast<Eigen::Index>(i)) = a[i] - x / kpv;
            c2 += r(static_cast<Eigen::Index>(i)) * r(static_cast<Eigen::Index>(i));
            if (jac) {
                (*jac)(static_cast<Eigen::Index>(i), 0) = -x_slope(z[i] + z0v, geom) / kpv;
                (*jac)(static_cast<Eigen::Index>(i), 1) = x / (kpv * kpv);
            }
        }
        return c2;
    };

    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::VectorXd r(ni);
    Eigen::MatrixXd jac(ni, 2);
    chi2 = evaluate(z0, kp, r, &jac);
    double lambda = 1e-3;
    CurvatureFit out;
    bool converged = false;
    for (out.iterations = 1; out.iterations <= 200; ++out.iterations) {
        const Eigen::Matrix2d jtj = jac.transpose() * jac;
        const Eigen::Vector2d grad = jac.transpose() * r;
        Eigen::Matrix2d damped = jtj;
        damped.diagonal() += lambda * jtj.diagonal();
        const Eigen::Vector2d step = -damped.ldlt().solve(grad);
        const double z0_new = std::max(z0 + step(0), z0_floor);
        const double kp_new = kp + step(1);
        Eigen::VectorXd r_new(ni);
        const double chi2_new = kp_new > 0.0 ? evaluate(z0_new, kp_new, r_new, nullptr)
                                             : std::numeric_limits<double>::infinity();
        if (chi2_new <= chi2) {
            const bool small = std::abs(z0_new - z0) < 1e-9 * (1.0 + std::abs(z0)) &&
                               std::abs(kp_new - kp) < 1e-12 * std::abs(kp);
            const bool flat = chi2 - chi2_new <= 1e-14 * chi2;
            z0 = z0_new;
            kp = kp_new;
            chi2 = evaluate(z0, kp, r, &jac);
            lambda = std::max(lambda / 10.0, 1e-12);
            if (small || flat) {
                converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) {
                converged = true;  // no downhill step left: at the minimum to machine precision
                break;
            }
        }
    }
    if (!converged) throw FitError("curvature fit did not converge", chi2);

    const double dof = static_cast<double>(n) - 2.0;
    const double s2 = chi2 > 0.0 ? chi2 / dof : 0.0;
    const Eigen::Matrix2d cov = s2 * (jac.transpose() * jac).inverse();
    out.contact_nm = z0;
    out.k_prime = kp;
    out.contact_sigma_nm = std::sqrt(std::max(cov(0, 0), 0.0));
    out.k_prime_sigma = std::sqrt(std::max(cov(1, 1), 0.0));
    out.covariance = cov(0, 1);
    out.chi2 = chi2;

    // residual trend against separation
    const double zbar = std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(n);
    double szz = 0.0, szr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        szz += (z[i] - zbar) * (z[i] - zbar);
        szr += (z[i] - zbar) * r(static_cast<Eigen::Index>(i));
    }
    out.residual_slope = szr / szz;
    double rss = 0.0;
    const double rbar = r.mean();
    for (std::size_t i = 0; i < n; ++i) {
        const double e = r(static_cast<Eigen::Index>(i)) - rbar - out.residual_slope * (z[i] - zbar);
        rss += e * e;
    }
    const double slope_se = std::sqrt(rss / dof / szz);
    out.residual_slope_z = slope_se > 0.0 ? out.residual_slope / slope_se : 0.0;
    out.separation_independent = std::abs(out.residual_slope_z) < 1.96;
    return out;
}

namespace {

std::vector<ParabolaFit> window(const std::vector<ParabolaFit>& fits, const CalibrationOptions& options) {
    std::vector<ParabolaFit> out;
    for (const auto& f : fits)
        if (f.z_rel_nm >= options.z_rel_min_nm && f.z_rel_nm <= options.z_rel_max_nm) out.push_back(f);
    return out;
}

CalibrationResult calibrate_once(const DeflectionDataset& ds, const Geometry& geom,
                                 const CalibrationOptions& options) {
    const auto fits = window(fit_parabolas(ds), options);
    const auto cf = fit_curvature(fits, geom);

    // Vertices combined by inverse variance: sigma_vertex = sigma_S / (2 |a| sqrt(sum (V - V_v)^2)).
    const double nv = static_cast<double>(ds.traces.size());
    double wsum = 0.0, wv = 0.0, chi2 = 0.0;
    for (const auto& f : fits) {
        double spread = 0.0;
        for (const auto& t : ds.traces) spread += (t.voltage_mV - f.vertex_mV) * (t.voltage_mV - f.vertex_mV);
        const double sigma_s2 = f.chi2 / std::max(nv - 3.0, 1.0);
        const double var = sigma_s2 / (4.0 * f.curvature * f.curvature * spread);
        if (!(var > 0.0) || !std::isfinite(var)) continue;
        wsum += 1.0 / var;
        wv += f.vertex_mV / var;
        chi2 += f.chi2;
    }
    if (!(wsum > 0.0)) throw FitError("no separation constrains the parabola vertex", chi2);

    CalibrationResult out;
    out.residual_mV = wv / wsum;
    out.residual_sigma_mV = std::sqrt(1.0 / wsum);
    out.contact_nm = cf.contact_nm;
    out.contact_sigma_nm = cf.contact_sigma_nm;
    out.k_prime = cf.k_prime;
    out.k_prime_sigma = cf.k_prime_sigma;
    out.covariance_contact_k = cf.covariance;
    out.parabola_chi2 = chi2;
    out.curvature_chi2 = cf.chi2;
    out.residual_slope_z = cf.residual_slope_z;
    out.separation_independent = cf.separation_independent;
    out.separations = fits.size();
    return out;
}

}  // namespace

CalibrationResult calibrate(DeflectionDataset& ds, const Geometry& geom, const CalibrationOptions& options) {
    auto result = calibrate_once(ds, geom, options);
    if (options.remove_drift) {
        for (int pass = 0; pass < 2; ++pass) {
            remove_drift(ds, result, geom, options.drift_tail_start_nm);
            result = calibrate_once(ds, geom, options);
        }
    }
    return result;
}

void remove_drift(DeflectionDataset& ds, const CalibrationResult& preliminary, const Geometry& geom,
                  double tail_start_nm) {
    ds.validate();
    // One drift line shared by all sweeps, fitted to the pooled far tails.
    double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& t : ds.traces) {
        const double dv = t.voltage_mV - preliminary.residual_mV;
        for (std::size_t i = 0; i < t.z_piezo_nm.size(); ++i) {
            const double z_rel = t.z_piezo_nm[i] + ds.m_nm_per_mV * t.signal_mV[i];
            if (z_rel <= tail_start_nm) continue;
            const double model = x_coefficient(z_rel + preliminary.contact_nm, geom) * dv * dv / preliminary.k_prime;
            const double x = t.z_piezo_nm[i];
            const double y = t.signal_mV[i] - model;
            n += 1.0;
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
    }
    const double det = n * sxx - sx * sx;
    if (n < 2.0 || !(det > 0.0)) throw DomainError("drift removal: the traces do not reach the far tail");
    const double slope = (n * sxy - sx * sy) / det;
    const double intercept = (sy - slope * sx) / n;
    for (auto& t : ds.traces)
        for (std::size_t i = 0; i < t.z_piezo_nm.size(); ++i) t.signal_mV[i] -= intercept + slope * t.z_piezo_nm[i];
}

ExtractionResult extract_casimir(const DeflectionDataset& ds, const CalibrationResult& calib, const Geometry& geom,
                                 double z_min_nm, double z_max_nm) {
    ds.validate();
    std::vector<Sampled> series;
    for (const auto& t : ds.traces) series.push_back(separation_series(t, ds.m_nm_per_mV, calib.contact_nm));
    const auto grid = common_grid(series, std::max(z_min_nm, geom.amplitude_sum_nm() + 1e-9), z_max_nm, 1.0);

    std::vector<double> x(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) x[g] = x_coefficient(grid[g], geom);

    ExtractionResult out;
    for (std::size_t i = 0; i < ds.traces.size(); ++i) {
        const double dv = ds.traces[i].voltage_mV - calib.residual_mV;
        auto s = interpolate_linear(series[i], grid);
        for (std::size_t g = 0; g < grid.size(); ++g) s[g] = calib.k_prime * s[g] - x[g] * dv * dv;
        out.per_trace.push_back(std::move(s));
    }

    const double nt = static_cast<double>(out.per_trace.size());
    out.mean.model = ForceModel::derivative_expansion;
    double pooled_var = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double mean = 0.0;
        for (const auto& f : out.per_trace) mean += f[g];
        mean /= nt;
        double var = 0.0;
        for (const auto& f : out.per_trace) var += (f[g] - mean) * (f[g] - mean);
        var = nt > 1.0 ? var / (nt - 1.0) : 0.0;
        pooled_var += var;
        out.mean.samples.push_back({grid[g], mean, std::sqrt(var), false});
    }
    pooled_var /= static_cast<double>(grid.size());

    if (out.per_trace.size() >= 3 && pooled_var > 0.0) {
        // Each trace's mean offset from the ensemble is compared with the white-noise
        // standard error combined with the robust (MAD) spread of all offsets.
        std::vector<double> offsets(out.per_trace.size());
        for (std::size_t i = 0; i < out.per_trace.size(); ++i) {
            double offset = 0.0;
            for (std::size_t g = 0; g < grid.size(); ++g) offset += out.per_trace[i][g] - out.mean.samples[g].force_pN;
            offsets[i] = offset / static_cast<double>(grid.size());
        }
        auto median = [](std::vector<double> v) {
            const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
            std::nth_element(v.begin(), mid, v.end());
            return *mid;
        };
        const double centre = median(offsets);
        std::vector<double> dev(offsets.size());
        for (std::size_t i = 0; i < offsets.size(); ++i) dev[i] = std::abs(offsets[i] - centre);
        const double spread = 1.4826 * median(dev);
        const double se = std::sqrt(pooled_var / static_cast<double>(grid.size()));
        const double sigma = std::hypot(se, spread);
        for (std::size_t i = 0; i < offsets.size(); ++i) {
            if (std::abs(offsets[i] - centre) > 5.0 * sigma) {
                std::ostringstream os;
                os << "trace " << i << " at " << ds.traces[i].voltage_mV << " mV deviates from the ensemble by "
                   << offsets[i] - centre << " pN (sigma " << sigma << " pN)";
                throw ConsistencyError(os.str());
            }
        }
    }
    return out;
}

double combine_errors(double random_pN, double systematic_pN) {
    if (!(random_pN >= 0.0) || !(systematic_pN >= 0.0)) throw DomainError("error components must be non-negative");
    return std::hypot(random_pN, systematic_pN);
}

double ErrorBudget::systematic(double z_nm) const {
    if (z_far_nm <= z_near_nm) return systematic_near_pN;
    const double t = std::clamp((z_nm - z_near_nm) / (z_far_nm - z_near_nm), 0.0, 1.0);
    return systematic_near_pN + t * (systematic_far_pN - systematic_near_pN);
}

double ErrorBudget::total(double z_nm) const { return combine_errors(random_pN, systematic(z_nm)); }

void write_dataset_csv(std::ostream& out, const DeflectionDataset& ds) {
    out << "voltage_mV,z_piezo_nm,S_def_signal\n";
    std::ostringstream line;
    line << std::setprecision(12);
    for (const auto& t : ds.traces) {
        for (std::size_t i = 0; i < t.z_piezo_nm.size(); ++i) {
            line.str("");
            line << t.voltage_mV << ',' << t.z_piezo_nm[i] << ',' << t.signal_mV[i] << '\n';
            out << line.str();
        }
    }
}

DeflectionDataset read_dataset_csv(std::istream& in, double m_nm_per_mV, const std::string& source_name) {
    DeflectionDataset ds;
    ds.m_nm_per_mV = m_nm_per_mV;
    std::string line;
    int line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header) {
            if (line != "voltage_mV,z_piezo_nm,S_def_signal")
                throw ConfigError(source_name + ": expected header 'voltage_mV,z_piezo_nm,S_def_signal'");
            header = true;
            continue;
        }
        std::istringstream row(line);
        std::array<double, 3> v{};
        char sep = 0;
        if (!(row >> v[0] >> sep >> v[1] >> sep >> v[2]))
            throw ConfigError(source_name + ":" + std::to_string(line_no) + ": expected three numeric columns");
        bool new_trace = ds.traces.empty() || ds.traces.back().voltage_mV != v[0];
        if (!new_trace) {
            const auto& zp = ds.traces.back().z_piezo_nm;
            if (zp.size() >= 2) {
                const bool up = zp[1] > zp[0];
                new_trace = up ? !(v[1] > zp.back()) : !(v[1] < zp.back());
            } else {
                new_trace = v[1] == zp.back();
            }
        }
        if (new_trace) ds.traces.push_back({v[0], {}, {}});
        ds.traces.back().z_piezo_nm.push_back(v[1]);
        ds.traces.back().signal_mV.push_back(v[2]);
    }
    if (!header) throw ConfigError(source_name + ": empty dataset");
    ds.validate();
    return ds;
}

void write_calibration_report(std::ostream& out, const CalibrationResult& r) {
    std::ostringstream os;
    os << std::setprecision(10);
    os << "# calibration report\n";
    os << "V0_mV = " << r.residual_mV << "\n";
    os << "V0_sigma_mV = " << r.residual_sigma_mV << "\n";
    os << "z0_nm = " << r.contact_nm << "\n";
    os << "z0_sigma_nm = " << r.contact_sigma_nm << "\n";
    os << "k_prime_pN_per_mV = " << r.k_prime << "\n";
    os << "k_prime_sigma_pN_per_mV = " << r.k_prime_sigma << "\n";
    os << "cov_z0_k_prime = " << r.covariance_contact_k << "\n";
    os << "parabola_chi2 = " << r.parabola_chi2 << "\n";
    os << "curvature_chi2 = " << r.curvature_chi2 << "\n";
    os << "residual_slope_z = " << r.residual_slope_z << "\n";
    os << "separation_independent = " << (r.separation_independent ? "true" : "false") << "\n";
    os << "separations = " << r.separations << "\n";
    out << os.str();
}

}  // namespace casimir
