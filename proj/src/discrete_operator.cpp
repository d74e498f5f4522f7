#include "w2interp/discrete_operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "w2interp/errors.hpp"

namespace w2interp {

namespace {

using cplx = std::complex<double>;

// The expansion cancels down from O(1) intermediates to O(h^{2m-1})
// coefficients (the leading one is -4 e^h G_m(h)), which costs ~10
// digits at m = 4, h = 0.1 in binary64. Expanding in quad precision and
// rounding the finished coefficients keeps them correct to their own ulp.
using quad = boost::multiprecision::cpp_bin_float_quad;

std::vector<quad> poly_mul(const std::vector<quad>& a, const std::vector<quad>& b) {
    std::vector<quad> r(a.size() + b.size() - 1, quad(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

void poly_axpy(std::vector<quad>& acc, const quad& s, const std::vector<quad>& p) {
    if (acc.size() < p.size()) acc.resize(p.size(), quad(0));
    for (size_t i = 0; i < p.size(); ++i) acc[i] += s * p[i];
}

// (1 - t)^n as ascending coefficients
std::vector<quad> one_minus_pow(int n) {
    std::vector<quad> r(n + 1);
    quad binom = 1;
    for (int s = 0; s <= n; ++s) {
        r[s] = (s % 2 == 0 ? binom : -binom);
        binom = binom * (n - s) / (s + 1);
    }
    return r;
}

quad factorial_q(int n) {
    quad f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

cplx CharPolynomial::eval(cplx lambda) const {
    cplx acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * lambda + *it;
    return acc;
}

cplx CharPolynomial::eval_derivative(cplx lambda) const {
    cplx acc = 0.0;
    for (int s = degree(); s >= 1; --s) acc = acc * lambda + static_cast<double>(s) * coeffs[s];
    return acc;
}

CharPolynomial char_polynomial(SpaceOrder m, double h) {
    if (!(h > 0.0) || h > 1.0) throw std::invalid_argument("char_polynomial: need 0 < h <= 1");

    if (m.order == 1) {
        const long double p0 = 1.0L - std::exp(2.0L * static_cast<long double>(h));
        return CharPolynomial{m, h, {static_cast<double>(p0)}, {p0}};
    }

    const quad hq(h);
    const quad e_h = exp(hq);
    const quad e_2h = exp(2 * hq);

    // bracket = sum_{j=0}^{m-2} h^(2j+1)/(2j+1)! (1-t)^(2m-4-2j) E_{2j}(t)
    std::vector<quad> bracket;
    for (int j = 0; j <= m.order - 2; ++j) {
        const quad scale = pow(hq, 2 * j + 1) / factorial_q(2 * j + 1);
        const auto ef = euler_frobenius(2 * j).coeffs;
        std::vector<quad> efq(ef.begin(), ef.end());
        poly_axpy(bracket, scale, poly_mul(one_minus_pow(2 * m.order - 4 - 2 * j), efq));
    }

    // t(e^{2h}+1) - e^h(t^2+1)
    const std::vector<quad> mid{-e_h, e_2h + 1, -e_h};

    std::vector<quad> pq;
    poly_axpy(pq, 1 - e_2h, one_minus_pow(2 * m.order - 2));
    poly_axpy(pq, quad(-2), poly_mul(mid, bracket));
    pq.resize(2 * m.order - 1, quad(0));

    std::vector<double> p(pq.size());
    std::vector<long double> p_ext(pq.size());
    for (size_t s = 0; s < pq.size(); ++s) {
        p[s] = static_cast<double>(pq[s]);
        p_ext[s] = static_cast<long double>(pq[s]);
    }

    double scale = 0.0;
    for (double c : p) scale = std::max(scale, std::fabs(c));
    for (int s = 0; s < static_cast<int>(p.size()); ++s) {
        const double mirror = p[p.size() - 1 - s];
        if (std::fabs(p[s] - mirror) > 1e-12 * scale)
            throw InvariantViolation("char_polynomial: expansion lost palindromy");
    }
    return CharPolynomial{m, h, std::move(p), std::move(p_ext)};
}

std::vector<cplx> all_roots(const CharPolynomial& p) {
    const int deg = p.degree();
    if (deg == 0) return {};
    if (p.leading() == 0.0) throw std::invalid_argument("all_roots: zero leading coefficient");

    // monic normalization
    std::vector<double> monic(p.coeffs);
    for (double& c : monic) c /= p.leading();

    auto eval_monic = [&](cplx x) {
        cplx acc = 0.0;
        for (auto it = monic.rbegin(); it != monic.rend(); ++it) acc = acc * x + *it;
        return acc;
    };

    std::vector<cplx> roots(deg);
    const cplx seed(0.4, 0.9);
    cplx pw = 1.0;
    for (int i = 0; i < deg; ++i) {
        roots[i] = pw;
        pw *= seed;
    }

    // Update measured relative to the root magnitude: inversion pairs put
    // roots near 1/|lambda_min|, where an absolute 1e-15 step is below
    // double-precision noise.
    bool converged = false;
    for (int sweep = 0; sweep < 500 && !converged; ++sweep) {
        double max_update = 0.0;
        for (int i = 0; i < deg; ++i) {
            cplx denom = 1.0;
            for (int j = 0; j < deg; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            const cplx step = eval_monic(roots[i]) / denom;
            roots[i] -= step;
            max_update = std::max(max_update, std::abs(step) / (1.0 + std::abs(roots[i])));
        }
        converged = max_update < 1e-15;
    }
    if (!converged) throw NoConvergence("all_roots: Durand-Kerner did not converge in 500 sweeps");

    for (auto& r : roots) {
        for (int it = 0; it < 3; ++it) {
            const cplx d = p.eval_derivative(r);
            if (std::abs(d) == 0.0) break;
            r -= p.eval(r) / d;
        }
    }

    // Pair conjugates exactly; a root whose nearest conjugate partner is
    // itself is real.
    std::vector<bool> done(deg, false);
    for (int i = 0; i < deg; ++i) {
        if (done[i]) continue;
        int best = i;
        double bestd = std::abs(roots[i] - std::conj(roots[i]));
        for (int j = 0; j < deg; ++j) {
            if (done[j] || j == i) continue;
            const double d = std::abs(roots[j] - std::conj(roots[i]));
            if (d < bestd) {
                bestd = d;
                best = j;
            }
        }
        if (best == i) {
            roots[i] = cplx(roots[i].real(), 0.0);
            done[i] = true;
        } else {
            const cplx avg = 0.5 * (roots[i] + std::conj(roots[best]));
            roots[i] = avg;
            roots[best] = std::conj(avg);
            done[i] = done[best] = true;
        }
    }
    return roots;
}

std::vector<cplx> stable_roots(const CharPolynomial& p) {
    auto roots = all_roots(p);
    std::vector<cplx> inside;
    for (const auto& r : roots)
        if (std::abs(r) < 1.0) inside.push_back(r);

    const int expected = (p.degree()) / 2;  // m - 1
    if (static_cast<int>(inside.size()) != expected)
        throw RootCountMismatch("stable_roots: found " + std::to_string(inside.size()) + " roots inside the unit disk, expected " +
                                std::to_string(expected));

    double scale = 0.0;
    for (double c : p.coeffs) scale = std::max(scale, std::fabs(c));
    for (const auto& r : inside)
        if (std::abs(p.eval(r)) > 1e-10 * scale)
            throw NoConvergence("stable_roots: refined root fails |P(lambda)| <= 1e-10 * max|p_s|");

    std::sort(inside.begin(), inside.end(), [](const cplx& a, const cplx& b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (std::fabs(ma - mb) > 1e-14 * (1.0 + ma)) return ma < mb;
        return std::arg(a) < std::arg(b);
    });
    return inside;
}

namespace {

using cplx_ext = std::complex<long double>;

cplx_ext cpow_int_ext(cplx_ext x, int e) {
    cplx_ext r = 1.0L;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

cplx_ext eval_ext(const std::vector<long double>& c, cplx_ext x) {
    cplx_ext acc = 0.0L;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

cplx_ext eval_derivative_ext(const std::vector<long double>& c, cplx_ext x) {
    cplx_ext acc = 0.0L;
    for (int s = static_cast<int>(c.size()) - 1; s >= 1; --s) acc = acc * x + static_cast<long double>(s) * c[s];
    return acc;
}

}  // namespace

OperatorData build_operator(SpaceOrder m, int n) {
    if (n < 1) throw std::invalid_argument("build_operator: N must be >= 1");
    if (n + 1 < m.order) throw std::invalid_argument("build_operator: need N+1 >= m");
    const double h = 1.0 / n;
    const long double e_h = std::exp(static_cast<long double>(h));
    const long double e_2h = std::exp(2.0L * static_cast<long double>(h));

    CharPolynomial cp = char_polynomial(m, h);
    if (m.order == 1) {
        // Degree-0 case: D_1 is the three-point operator with weights
        // 2(1+e^{2h}) and -2e^h over p_0 = 1-e^{2h}; no roots.
        OperatorData op{m, h, std::move(cp), static_cast<double>(1.0L + e_2h), {}, {}, 1.0L + e_2h, {}, {}};
        return op;
    }

    auto roots = stable_roots(cp);
    double scale = 0.0;
    for (double c : cp.coeffs) scale = std::max(scale, std::fabs(c));

    // Polish in extended precision against the quad-expanded coefficients
    // and derive everything downstream from the polished roots.
    const auto& pc = cp.coeffs_ext;
    const long double p = pc.back();
    const long double big_c = 1.0L + (2 * m.order - 2) * e_h + e_2h + e_h * pc[pc.size() - 2] / p;

    std::vector<cplx_ext> roots_ext, amps_ext;
    std::vector<cplx> amps;
    for (auto& lam_d : roots) {
        cplx_ext lam(lam_d.real(), lam_d.imag());
        for (int it = 0; it < 3; ++it) {
            const cplx_ext d = eval_derivative_ext(pc, lam);
            if (std::abs(d) == 0.0L) break;
            lam -= eval_ext(pc, lam) / d;
        }
        const cplx_ext dp = eval_derivative_ext(pc, lam);
        if (std::abs(dp) < 1e-14L * scale)
            throw DerivativeVanishes("build_operator: derivative vanishes at a stable root (repeated root?)");
        const cplx_ext one_minus = cpow_int_ext(1.0L - lam, 2 * m.order - 2);
        const cplx_ext mid = lam * (e_2h + 1.0L) - e_h * (lam * lam + 1.0L);
        const cplx_ext amp = 2.0L * one_minus * mid * p / (lam * dp);
        roots_ext.push_back(lam);
        amps_ext.push_back(amp);
        lam_d = cplx(static_cast<double>(lam.real()), static_cast<double>(lam.imag()));
        amps.push_back(cplx(static_cast<double>(amp.real()), static_cast<double>(amp.imag())));
    }
    return OperatorData{m,     h,     std::move(cp),        static_cast<double>(big_c), std::move(roots),
                        amps,  big_c, std::move(roots_ext), std::move(amps_ext)};
}

double d_m(const OperatorData& op, int beta) {
    const int ab = std::abs(beta);
    const long double e_h = std::exp(static_cast<long double>(op.h));
    cplx_ext acc = 0.0L;
    if (ab >= 2) {
        for (size_t k = 0; k < op.roots_ext.size(); ++k) acc += op.amps_ext[k] * cpow_int_ext(op.roots_ext[k], ab - 1);
    } else if (ab == 1) {
        acc = -2.0L * e_h;
        for (const auto& a : op.amps_ext) acc += a;
    } else {
        acc = 2.0L * op.big_c_ext;
        for (size_t k = 0; k < op.roots_ext.size(); ++k) acc += op.amps_ext[k] / op.roots_ext[k];
    }
    acc /= op.charpoly.coeffs_ext.back();
    if (std::fabs(static_cast<double>(acc.imag())) > 1e-10 * std::max(1.0, std::fabs(static_cast<double>(acc.real()))))
        throw InvariantViolation("d_m: imaginary residue above 1e-10 relative");
    return static_cast<double>(acc.real());
}

int truncation_radius(const OperatorData& op) {
    // The convolved functions grow like e^{h|gamma|} (kernel, exponential
    // moments), so the decay ratio that matters is max|lambda_k| * e^h,
    // not max|lambda_k| alone.
    double rho = 0.0;
    for (const auto& r : op.roots) rho = std::max(rho, std::abs(r));
    if (rho == 0.0) return 2;
    rho *= std::exp(op.h);
    if (rho >= 1.0) throw InvariantViolation("truncation_radius: |lambda e^h| >= 1, tails do not decay");
    const int b = static_cast<int>(std::ceil(std::log(1e-18) / std::log(rho)));
    return std::min(std::max(b, 2), 10000);
}

}  // namespace w2interp
