#include "casimir/electrostatics.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/parallel.hpp"

namespace casimir {

double sinc(double u) {
    if (std::abs(u) < 1e-4) return 1.0 - u * u / 6.0;
    return std::sin(u) / u;
}

namespace {

void check_gap(double z_nm, const Geometry& geom) {
    if (!(z_nm > geom.amplitude_sum_nm()))
        throw ContactError("electrostatics: z must exceed A1 + A2", 0.5 * geom.period_nm, 0.0);
    if (geom.angle_rad < 0.0) throw DomainError("electrostatics: crossing angle must be non-negative");
}

// Coefficient in units of eps0 * R, i.e. the bracket of X / (eps0 pi R), in 1/nm.
double cross_bracket(double z_nm, const Geometry& geom) {
    const double lambda = geom.period_nm;
    const double a = 2.0 * constants::pi * z_nm / lambda;
    const double coupling = std::exp(-a) / (-std::expm1(-2.0 * a));
    const double u = constants::pi * geom.extent_y_um * 1e3 * geom.angle_rad / lambda;
    return -(4.0 * constants::pi * geom.amplitude_plate_nm * geom.amplitude_sphere_nm / lambda) * coupling * sinc(u) /
           (z_nm * z_nm);
}

double to_pN_per_mV2(double bracket_per_nm, const Geometry& geom) {
    // eps0 * pi * R / length, in N/V^2
    const double n_per_v2 = constants::epsilon_0 * constants::pi * geom.radius_um * units::um * bracket_per_nm / units::nm;
    return n_per_v2 * units::newton_per_V2_to_pN_per_mV2;
}

}  // namespace

double x_cross_term(double z_nm, const Geometry& geom) {
    check_gap(z_nm, geom);
    return to_pN_per_mV2(cross_bracket(z_nm, geom), geom);
}

double x_coefficient(double z_nm, const Geometry& geom) {
    check_gap(z_nm, geom);
    const double lambda = geom.period_nm;
    const double a1 = geom.amplitude_plate_nm;
    const double a2 = geom.amplitude_sphere_nm;
    const double a = 2.0 * constants::pi * z_nm / lambda;
    const double self = (constants::pi / lambda) * (a1 * a1 + a2 * a2) / std::tanh(a) / (z_nm * z_nm);
    return to_pN_per_mV2(1.0 / z_nm + self + cross_bracket(z_nm, geom), geom);
}

double electrostatic_force(double z_nm, const Geometry& geom, const ElectroParams& ep) {
    const double dv = ep.applied_mV - ep.residual_mV;
    return x_coefficient(z_nm, geom) * dv * dv;
}

void LaplaceGrid::validate() const {
    if (nodes_per_period < 64 || nodes_across_gap < 64)
        throw DomainError("Laplace grid needs at least 64 nodes per period and across the gap");
    if (!(tolerance > 0.0) || !(omega > 0.0 && omega < 2.0) || max_sweeps <= 0)
        throw DomainError("Laplace grid: need tolerance > 0, 0 < omega < 2, max_sweeps > 0");
}

namespace {

/// Boundary-fitted structured mesh: node (i, j) sits at x_i and a fraction
/// j / nj of the local gap above the lower surface. Each cell is split into
/// two linear triangles along alternating diagonals.
class GapMesh {
public:
    GapMesh(double z_nm, const Geometry& geom, const LaplaceGrid& grid)
        : ni_(grid.nodes_per_period), nj_(grid.nodes_across_gap), period_(geom.period_nm) {
        const double k = 2.0 * constants::pi / period_;
        x_.resize(static_cast<std::size_t>(ni_));
        bottom_.resize(x_.size());
        gap_.resize(x_.size());
        for (int i = 0; i < ni_; ++i) {
            const double x = period_ * i / ni_;
            x_[i] = x;
            bottom_[i] = -geom.amplitude_plate_nm * std::cos(k * x);
            const double top = z_nm - geom.amplitude_sphere_nm * std::cos(k * x);
            gap_[i] = top - bottom_[i];
            if (!(gap_[i] > 0.0)) throw ContactError("electrostatic oracle: surfaces touch", x, 0.0);
        }
        stencil_.assign(static_cast<std::size_t>(ni_) * (nj_ + 1), {});
        assemble();
    }

    struct Point {
        double x;
        double y;
    };

    Point node(int i, int j) const {
        // periodic image for i == ni_
        const int ii = (i % ni_ + ni_) % ni_;
        const double shift = static_cast<double>(i - ii) / ni_ * period_;
        return {x_[ii] + shift, bottom_[ii] + gap_[ii] * j / nj_};
    }

    std::size_t index(int i, int j) const {
        const int ii = (i % ni_ + ni_) % ni_;
        return static_cast<std::size_t>(j) * ni_ + ii;
    }

    // Coupling to the 3x3 neighbourhood, offset (di, dj) stored at [(dj+1)*3 + di+1].
    using Stencil = std::array<double, 9>;

    const Stencil& stencil(int i, int j) const { return stencil_[index(i, j)]; }
    int ni() const noexcept { return ni_; }
    int nj() const noexcept { return nj_; }
    double period() const noexcept { return period_; }

private:
    void add_triangle(std::array<std::pair<int, int>, 3> v) {
        std::array<Point, 3> p{};
        for (int a = 0; a < 3; ++a) p[a] = node(v[a].first, v[a].second);
        const double area2 = (p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y);
        const double area = 0.5 * std::abs(area2);
        std::array<double, 3> b{};
        std::array<double, 3> c{};
        for (int a = 0; a < 3; ++a) {
            const auto& q = p[(a + 1) % 3];
            const auto& r = p[(a + 2) % 3];
            b[a] = q.y - r.y;
            c[a] = r.x - q.x;
        }
        for (int a = 0; a < 3; ++a) {
            for (int bb = 0; bb < 3; ++bb) {
                const double kab = (b[a] * b[bb] + c[a] * c[bb]) / (4.0 * area);
                const int di = v[bb].first - v[a].first;
                const int dj = v[bb].second - v[a].second;
                stencil_[index(v[a].first, v[a].second)][(dj + 1) * 3 + di + 1] += kab;
            }
        }
    }

    void assemble() {
        for (int j = 0; j < nj_; ++j) {
            for (int i = 0; i < ni_; ++i) {
                if ((i + j) % 2 == 0) {
                    add_triangle({{{i, j}, {i + 1, j}, {i + 1, j + 1}}});
                    add_triangle({{{i, j}, {i + 1, j + 1}, {i, j + 1}}});
                } else {
                    add_triangle({{{i, j}, {i + 1, j}, {i, j + 1}}});
                    add_triangle({{{i + 1, j}, {i + 1, j + 1}, {i, j + 1}}});
                }
            }
        }
    }

    int ni_;
    int nj_;
    double period_;
    std::vector<double> x_;
    std::vector<double> bottom_;
    std::vector<double> gap_;
    std::vector<Stencil> stencil_;
};

}  // namespace

LaplaceSolution laplace_oracle(double z_nm, const Geometry& geom, const LaplaceGrid& grid) {
    geom.validate();
    grid.validate();
    if (geom.angle_rad != 0.0) throw UnsupportedOperation("Laplace oracle covers aligned corrugations only");
    check_gap(z_nm, geom);

    const GapMesh mesh(z_nm, geom, grid);
    const int ni = mesh.ni();
    const int nj = mesh.nj();
    std::vector<double> phi(static_cast<std::size_t>(ni) * (nj + 1));
    for (int j = 0; j <= nj; ++j)
        for (int i = 0; i < ni; ++i) phi[mesh.index(i, j)] = static_cast<double>(j) / nj;

    LaplaceSolution out;
    for (out.sweeps = 1; out.sweeps <= grid.max_sweeps; ++out.sweeps) {
        double max_update = 0.0;
        for (int j = 1; j < nj; ++j) {
            for (int i = 0; i < ni; ++i) {
                const auto& s = mesh.stencil(i, j);
                double off = 0.0;
                for (int dj = -1; dj <= 1; ++dj)
                    for (int di = -1; di <= 1; ++di)
                        if (di != 0 || dj != 0) off += s[(dj + 1) * 3 + di + 1] * phi[mesh.index(i + di, j + dj)];
                auto& p = phi[mesh.index(i, j)];
                const double target = -off / s[4];
                const double update = grid.omega * (target - p);
                p += update;
                max_update = std::max(max_update, std::abs(update));
            }
        }
        out.residual = max_update;
        if (max_update < grid.tolerance) break;
    }
    if (out.residual >= grid.tolerance)
        throw RelaxationError("Laplace relaxation did not converge", out.residual);

    // Dirichlet energy phi^T K phi = C / eps0 per unit depth for a 1 V drop.
    double energy = 0.0;
    for (int j = 0; j <= nj; ++j) {
        for (int i = 0; i < ni; ++i) {
            const auto& s = mesh.stencil(i, j);
            double row = 0.0;
            for (int dj = -1; dj <= 1; ++dj) {
                if (j + dj < 0 || j + dj > nj) continue;
                for (int di = -1; di <= 1; ++di) row += s[(dj + 1) * 3 + di + 1] * phi[mesh.index(i + di, j + dj)];
            }
            energy += phi[mesh.index(i, j)] * row;
        }
    }
    out.capacitance_per_area_over_eps0 = energy / mesh.period();
    out.x_coefficient = to_pN_per_mV2(out.capacitance_per_area_over_eps0, geom);
    return out;
}

std::vector<OracleRow> oracle_ladder(const std::vector<double>& z_nm, const Geometry& geom, const LaplaceGrid& grid) {
    Geometry aligned = geom;
    aligned.angle_rad = 0.0;
    std::vector<OracleRow> rows(z_nm.size());
    parallel_for(z_nm.size(), [&](std::size_t i) {
        const double formula = x_coefficient(z_nm[i], aligned);
        const double oracle = laplace_oracle(z_nm[i], aligned, grid).x_coefficient;
        rows[i] = {z_nm[i], formula, oracle, (formula - oracle) / oracle};
    });
    return rows;
}

void write_oracle_csv(std::ostream& out, const std::vector<OracleRow>& rows) {
    out << "z_nm,X_formula,X_oracle,rel_diff\n";
    std::ostringstream line;
    line << std::setprecision(10);
    for (const auto& r : rows) {
        line.str("");
        line << r.z_nm << ',' << r.x_formula << ',' << r.x_oracle << ',' << r.rel_diff << '\n';
        out << line.str();
    }
}

}  // namespace casimir
