#pragma once

#include <vector>

namespace w2interp {

// Order m of the space W2^(m,m-1)(0,1). The norm pairs the m-th and
// (m-1)-th derivatives, so m >= 1 always.
struct SpaceOrder {
    explicit SpaceOrder(int order);
    int order;
};

// Palindromic polynomial E_k with positive integer coefficients, fixed by
//   sum_{j>=1} j^{k+1} t^j = t * E_k(t) / (1 - t)^{k+2}.
// coeffs[i] multiplies t^i; degree() == k; coefficient sum is (k+1)!.
struct EFPolynomial {
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    std::vector<double> coeffs;
};

inline double sgn(double x) { return (x > 0.0) - (x < 0.0); }

// Even kernel combining sinh with a truncated odd power series:
//   G_m(x) = sgn(x)/2 * ( sinh(x) - sum_{k=1}^{m-1} x^(2k-1)/(2k-1)! ).
// The subtraction cancels catastrophically near 0, so |x| < 0.1 is summed
// as the tail series sum_{k>=m} x^(2k-1)/(2k-1)! instead. G_m(0) = 0.
double green_kernel(SpaceOrder m, double x);

// Extended-precision evaluation for the closed-form coefficient assembly,
// which divides an O(h^{2m-1}) cancellation by the tiny leading
// polynomial coefficient and needs kernel values beyond binary64.
long double green_kernel_ext(SpaceOrder m, long double x);

EFPolynomial euler_frobenius(int k);

// nu-th forward difference of x^j at 0:
//   sum_{s=0}^{nu} (-1)^(nu-s) binom(nu,s) s^j.
// Integer-valued; 0 for nu > j and j! for nu == j.
double delta_powers(int nu, int j);

}  // namespace w2interp
