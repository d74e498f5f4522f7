#pragma once

#include <complex>
#include <vector>

#include "w2interp/kernel.hpp"

namespace w2interp {

// Characteristic polynomial of the discrete operator at step h: degree
// 2m-2, coefficients p_0..p_{2m-2} ascending. Palindromic (p_s equals
// p_{2m-2-s} to 1e-12 relative), so roots pair under inversion.
struct CharPolynomial {
    SpaceOrder m;
    double h;
    std::vector<double> coeffs;
    // Extended copies straight from the quad-precision expansion; the
    // closed-form assembly re-polishes roots against these because its
    // final division by coeffs.back() amplifies coefficient rounding.
    std::vector<long double> coeffs_ext;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    double leading() const { return coeffs.back(); }
    std::complex<double> eval(std::complex<double> lambda) const;
    std::complex<double> eval_derivative(std::complex<double> lambda) const;
};

// Precomputed ingredients of the discrete analogue D_m of
// d^{2m}/dx^{2m} - d^{2m-2}/dx^{2m-2} on the step-h lattice: the
// characteristic polynomial, the constant C, the m-1 roots inside the
// unit disk and their amplitudes. Immutable after construction.
struct OperatorData {
    SpaceOrder m;
    double h;
    CharPolynomial charpoly;
    double bigC;
    std::vector<std::complex<double>> roots;  // ascending |lambda|
    std::vector<std::complex<double>> amps;

    // Extended-precision working copies (roots Newton-polished against
    // coeffs_ext). The operator values reach O(1/p) and feed identities
    // that cancel back to O(1), so the rounded views above are not
    // accurate enough to evaluate through.
    long double big_c_ext = 0.0L;
    std::vector<std::complex<long double>> roots_ext;
    std::vector<std::complex<long double>> amps_ext;

    double p() const { return charpoly.leading(); }
};

CharPolynomial char_polynomial(SpaceOrder m, double h);

// The m-1 roots with |lambda| < 1, ascending |lambda|, ties by ascending
// argument. Durand-Kerner on the monic normalization (500 sweeps, update
// tolerance 1e-15) followed by 3 Newton polishing steps; conjugate pairs
// are symmetrized exactly.
std::vector<std::complex<double>> stable_roots(const CharPolynomial& p);

// All roots of the polynomial, same solver, unsorted by stability.
std::vector<std::complex<double>> all_roots(const CharPolynomial& p);

OperatorData build_operator(SpaceOrder m, int n);

// D_m(h*beta); real by conjugate symmetry, imaginary residue asserted
// below 1e-10 relative.
double d_m(const OperatorData& op, int beta);

// Smallest B with (max_k |lambda_k| e^h)^B < 1e-18, capped at 10^4. Used
// to truncate verification convolutions against functions growing like
// e^{h|gamma|}; 2 when there are no roots (m = 1, where D_m has finite
// support).
int truncation_radius(const OperatorData& op);

}  // namespace w2interp
