#pragma once

#include <vector>

#include "w2interp/grid.hpp"
#include "w2interp/linalg.hpp"

namespace w2interp {

// Optimal coefficients C_0(z)..C_N(z) for one evaluation point, together
// with the multipliers of the stationarity system: the polynomial part
// p_0(z)..p_{m-2}(z) and the exponential part d(z). condition_flagged is
// advisory: the dense solve saw a pivot-growth estimate above 1e12
// (large N); the solve still completed.
struct CoefficientVector {
    double z;
    std::vector<double> coeffs;
    std::vector<double> lagrange_poly;
    double lagrange_exp;
    bool condition_flagged = false;
};

struct AssembledSystem {
    DenseMatrix matrix;
    std::vector<double> rhs;
};

// Bordered system of dimension N+m+1: kernel rows over the nodes, then
// the m-1 polynomial moment rows, then the exponential moment row.
AssembledSystem assemble(const GridSpec& grid, double z);

// Dense solve of the stationarity system; the reference path every
// closed-form route is validated against. Residual is checked against
// 1e-10 * (1 + max row norm).
CoefficientVector solve_direct(const GridSpec& grid, double z);

// Squared norm of the error functional evaluated from the coefficient
// vector, sign (-1)^m as it enters the bilinear-form identity. Requires
// the moment constraints to hold; clamps roundoff negatives in
// [-1e-12, 0] to zero and rejects anything more negative.
double norm_squared(const GridSpec& grid, const CoefficientVector& cv);

// Quadrature weights w_beta = integral of C_beta(z) dz over [0,1], by
// composite Gauss-Legendre with 64 points per internode panel (the
// coefficients are smooth between nodes, kinked at them).
std::vector<double> quadrature_weights(const GridSpec& grid);

}  // namespace w2interp
