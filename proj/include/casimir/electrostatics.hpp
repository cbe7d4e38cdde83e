#pragma once

// Electrostatic sphere-plate force between the corrugated surfaces and a
// finite-element Laplace solve used as an independent check of the
// perturbative coefficient.

#include <iosfwd>
#include <vector>

#include "casimir/corrugation.hpp"

namespace casimir {

struct ElectroParams {
    double applied_mV = 0.0;
    double residual_mV = 0.0;  ///< V0
};

/// sin(u)/u with the removable singularity filled in.
double sinc(double u);

/// X(z) in pN/mV^2 such that F_el = X(z) (V - V0)^2: sphere curvature by
/// proximity, corrugations to second order in the amplitudes, crossing angle
/// through sinc(pi L_y theta / Lambda).
double x_coefficient(double z_nm, const Geometry& geom);

/// The amplitude cross-coupling part of X(z) alone (the term carrying sinc).
double x_cross_term(double z_nm, const Geometry& geom);

/// X(z) (V - V0)^2 in pN; always >= 0.
double electrostatic_force(double z_nm, const Geometry& geom, const ElectroParams& ep);

struct LaplaceGrid {
    int nodes_per_period = 256;
    int nodes_across_gap = 64;
    double tolerance = 1e-10;  ///< max update relative to the plate potential
    double omega = 1.9;        ///< SOR relaxation factor
    long max_sweeps = 200000;

    void validate() const;
};

struct LaplaceSolution {
    double x_coefficient = 0.0;  ///< pN/mV^2
    double capacitance_per_area_over_eps0 = 0.0;  ///< 1/nm
    long sweeps = 0;
    double residual = 0.0;
};

/// Solves Laplace's equation across one period of the aligned (theta = 0)
/// corrugated gap with linear triangles on a boundary-fitted mesh, periodic
/// in x and Dirichlet (0 V / 1 V) on the two surfaces, relaxed by SOR.
/// The capacitance per area is wrapped to a sphere force coefficient by the
/// same proximity rule as the flat-plate term, X = pi R C/A.
LaplaceSolution laplace_oracle(double z_nm, const Geometry& geom, const LaplaceGrid& grid = {});

struct OracleRow {
    double z_nm;
    double x_formula;
    double x_oracle;
    double rel_diff;
};

std::vector<OracleRow> oracle_ladder(const std::vector<double>& z_nm, const Geometry& geom,
                                     const LaplaceGrid& grid = {});

/// `z_nm,X_formula,X_oracle,rel_diff` with a header row.
void write_oracle_csv(std::ostream& out, const std::vector<OracleRow>& rows);

}  // namespace casimir
