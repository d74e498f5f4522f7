#pragma once

#include <complex>
#include <vector>

#include "w2interp/direct_system.hpp"
#include "w2interp/discrete_operator.hpp"
#include "w2interp/grid.hpp"

namespace w2interp {

// Per-z unknowns of the lattice extension problem: the polynomial tails
// q_i (degree 2m-3) and r_i^-/r_i^+ (degree m-2), the exponential
// amplitudes a^-/a^+, and the per-root geometric sums M_k/N_k over the
// left and right extensions. d_lag/d_cap are the half-sum and
// half-difference recombinations. Fields are extended precision: the
// assembly divides by the O(h^{2m-1}) leading polynomial coefficient, so
// tail rounding is amplified by its reciprocal.
struct BoundaryTail {
    double z;
    std::vector<long double> q;        // empty for m = 1
    std::vector<long double> r_minus;  // m-1 entries
    std::vector<long double> r_plus;
    long double a_minus;
    long double a_plus;
    std::vector<std::complex<long double>> big_m;  // per stable root
    std::vector<std::complex<long double>> big_n;

    double d_lag() const { return static_cast<double>(0.5L * (a_minus + a_plus)); }
    double d_cap() const { return static_cast<double>(0.5L * (a_minus - a_plus)); }
};

// Coefficients q_0..q_{2m-3} of the degree-(2m-3) tail polynomial at
// evaluation point z; m >= 2.
std::vector<double> q_coeffs(SpaceOrder m, double z);

// Solves the (2m-2)-dimensional boundary system for r_i^-/r_i^+, then
// a^-/a^+ and M_k/N_k. Every infinite lattice sum is evaluated in closed
// form (geometric series; power sums via forward differences). For m = 1
// the system is empty and the tail is the known closed form.
BoundaryTail boundary_systems(const OperatorData& op, const GridSpec& grid, double z);

// Closed-form optimal coefficients for m = 1.
CoefficientVector coeffs_m1(const GridSpec& grid, double z);

// General m >= 2 assembly from the operator data and boundary tail.
// The multiplier fields are diagnostic: d(z) = (a^- + a^+)/2 and the
// polynomial part is recovered by least squares on the kernel-row
// residuals.
CoefficientVector coeffs_general(const OperatorData& op, const GridSpec& grid, const BoundaryTail& tail, double z);

// Independent transcription of the m = 2 closed forms; cross-checks the
// general pipeline.
CoefficientVector coeffs_m2_specialized(const GridSpec& grid, double z);

// Dispatcher: m = 1 closed form, otherwise boundary_systems +
// coeffs_general. op must be built for (grid.m, grid.n).
CoefficientVector optimal_coeffs(const OperatorData& op, const GridSpec& grid, double z);

// Lattice extension u_m(h*beta) for any integer beta (piecewise: left
// tail, kernel window, right tail). Exposed so the vanishing of the
// operator applied to it outside the window can be verified directly.
double boundary_extension(const GridSpec& grid, const BoundaryTail& tail, int beta);

}  // namespace w2interp
