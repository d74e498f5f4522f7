#include "w2interp/explicit_coeffs.hpp"

#include <cmath>
#include <stdexcept>

#include "w2interp/errors.hpp"
#include "w2interp/linalg.hpp"

namespace w2interp {

// The whole assembly runs in long double: the coefficient displays divide
// a heavily cancelling bracket by the leading polynomial coefficient
// p = O(h^{2m-1}), which costs ~|log10 p| digits. binary64 would cap the
// route agreement near 1e-8 at m = 3, h = 0.1.

namespace {

using real = long double;
using cplx = std::complex<real>;

real ipow(real x, int e) {
    real r = 1.0L;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

cplx cpow_int(cplx x, int e) {
    cplx r = 1.0L;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

real binom(int n, int k) {
    real b = 1.0L;
    for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
    return b;
}

// Extended-precision view of the operator plus grid context.
struct OpExt {
    int m;
    int n;
    real h, e_h, e_2h, p, big_c;
    std::vector<cplx> roots;
    std::vector<cplx> amps;
};

OpExt extend_operator(const OperatorData& op, const GridSpec& grid) {
    OpExt e;
    e.m = op.m.order;
    e.n = grid.n;
    e.h = static_cast<real>(op.h);
    e.e_h = std::exp(e.h);
    e.e_2h = std::exp(2.0L * e.h);
    e.p = op.charpoly.coeffs_ext.back();
    e.big_c = op.big_c_ext;
    e.roots = op.roots_ext;
    e.amps = op.amps_ext;
    return e;
}

// Lattice sequence g(gamma) = sum_j poly[j] gamma^j + cp e^{h gamma}
//                            + cm e^{-h gamma}.
// Everything summed against the operator tails has this shape, which is
// what makes all the infinite sums closed-form.
struct SeqFn {
    std::vector<real> poly;
    real cp = 0.0L;
    real cm = 0.0L;

    real eval(int gamma, real h) const {
        real v = 0.0L;
        for (size_t j = 0; j < poly.size(); ++j) v += poly[j] * ipow(static_cast<real>(gamma), static_cast<int>(j));
        v += cp * std::exp(h * gamma) + cm * std::exp(-h * gamma);
        return v;
    }
};

// sum_{gamma>=1} lambda^gamma gamma^j
cplx geom_pow_sum(cplx lambda, int j) {
    const cplx one_minus = 1.0L - lambda;
    if (j == 0) return lambda / one_minus;
    cplx acc = 0.0L;
    cplx num = 1.0L;  // lambda^nu
    cplx den = one_minus;
    for (int nu = 1; nu <= j; ++nu) {
        num *= lambda;
        den *= one_minus;
        acc += num * static_cast<real>(delta_powers(nu, j)) / den;
    }
    return acc;
}

// sum_{gamma>=1} lambda^gamma e^{a gamma}; requires |lambda e^a| < 1
cplx geom_exp_sum(cplx lambda, real a) {
    const cplx w = lambda * std::exp(a);
    if (std::abs(w) >= 1.0L)
        throw InvariantViolation("geom_exp_sum: |lambda * e^a| >= 1, lattice sum diverges");
    return w / (1.0L - w);
}

// sum_{gamma>=1} lambda^gamma g(gamma)
cplx inf_sum(const SeqFn& g, cplx lambda, real h) {
    cplx acc = 0.0L;
    for (size_t j = 0; j < g.poly.size(); ++j)
        if (g.poly[j] != 0.0L) acc += g.poly[j] * geom_pow_sum(lambda, static_cast<int>(j));
    if (g.cp != 0.0L) acc += g.cp * geom_exp_sum(lambda, h);
    if (g.cm != 0.0L) acc += g.cm * geom_exp_sum(lambda, -h);
    return acc;
}

// sum_{gamma>=1} lambda^{|beta-gamma|} g(gamma) for beta >= 1: the first
// beta terms directly, the tail re-based to a pure power sum.
cplx split_sum(const SeqFn& g, cplx lambda, int beta, real h) {
    cplx acc = 0.0L;
    cplx pw = 1.0L;  // lambda^{beta-gamma} walked down from gamma = beta
    for (int gamma = beta; gamma >= 1; --gamma) {
        acc += pw * g.eval(gamma, h);
        pw *= lambda;
    }
    SeqFn shifted;
    shifted.poly.assign(g.poly.size(), 0.0L);
    for (size_t j = 0; j < g.poly.size(); ++j)
        for (size_t t = 0; t <= j; ++t)
            shifted.poly[t] += g.poly[j] * binom(static_cast<int>(j), static_cast<int>(t)) *
                               ipow(static_cast<real>(beta), static_cast<int>(j - t));
    shifted.cp = g.cp * std::exp(h * beta);
    shifted.cm = g.cm * std::exp(-h * beta);
    return acc + inf_sum(shifted, lambda, h);
}

// 2C g(beta) - 2e^h (g(beta-1) + g(beta+1)): the non-geometric part of
// the operator applied across the window edge. g extends to gamma = 0
// with the value of the kernel window there, so beta = 1 needs no
// special case.
real near_diag(const SeqFn& g, int beta, const OpExt& op) {
    return 2.0L * op.big_c * g.eval(beta, op.h) - 2.0L * op.e_h * (g.eval(beta - 1, op.h) + g.eval(beta + 1, op.h));
}

real real_checked(cplx v, const char* what) {
    if (std::fabs(static_cast<double>(v.imag())) > 1e-10 * std::max(1.0, std::fabs(static_cast<double>(v.real()))))
        throw InvariantViolation(std::string(what) + ": imaginary residue above 1e-10 relative");
    return v.real();
}

struct BasisSet {
    SeqFn known;
    std::vector<SeqFn> r_basis;  // coefficient functions of r_0..r_{m-2}
};

// Left-tail integrand pieces: known part and r^- basis.
BasisSet left_basis(const GridSpec& grid, const std::vector<real>& q, real z) {
    const int m = grid.m.order;
    const real h = static_cast<real>(grid.h);
    BasisSet b;
    b.known.poly.assign(2 * m - 2, 0.0L);
    for (int i = 0; i <= 2 * m - 3; ++i) b.known.poly[i] = q[i] * ipow(-h, i);
    b.known.cp = 0.25L * std::exp(-z) + green_kernel_ext(grid.m, z) - q[0];
    b.known.cm = -0.25L * std::exp(-z);
    for (int i = 0; i <= m - 2; ++i) {
        SeqFn f;
        f.poly.assign(m - 1, 0.0L);
        f.poly[i] = ipow(-h, i);
        if (i == 0) f.cp = -1.0L;
        b.r_basis.push_back(std::move(f));
    }
    return b;
}

// Right-tail integrand pieces: known part and r^+ basis.
BasisSet right_basis(const GridSpec& grid, const std::vector<real>& q, real z) {
    const int m = grid.m.order;
    const real h = static_cast<real>(grid.h);
    real q_sum = 0.0L;
    for (real qi : q) q_sum += qi;
    BasisSet b;
    b.known.poly.assign(2 * m - 2, 0.0L);
    for (int i = 0; i <= 2 * m - 3; ++i)
        for (int j = 0; j <= i; ++j) b.known.poly[j] -= q[i] * binom(i, j) * ipow(h, j);
    b.known.cp = 0.25L * std::exp(1.0L - z);
    b.known.cm = -0.25L * std::exp(1.0L - z) + green_kernel_ext(grid.m, z - 1.0L) + q_sum;
    for (int i = 0; i <= m - 2; ++i) {
        SeqFn f;
        f.poly.assign(m - 1, 0.0L);
        for (int j = 0; j <= i; ++j) f.poly[j] += binom(i, j) * ipow(h, j);
        f.cm = -1.0L;
        b.r_basis.push_back(std::move(f));
    }
    return b;
}

// Dense elimination with partial pivoting, extended precision, for the
// small boundary system.
std::vector<real> solve_small(std::vector<std::vector<real>> a, std::vector<real> b) {
    const int n = static_cast<int>(b.size());
    real max_entry = 0.0L;
    for (const auto& row : a)
        for (real v : row) max_entry = std::max(max_entry, std::fabs(v));
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(a[i][k]) > std::fabs(a[piv][k])) piv = i;
        if (std::fabs(a[piv][k]) < 1e-13L * max_entry)
            throw SingularBoundarySystem("boundary system pivot below 1e-13 of max entry");
        std::swap(a[piv], a[k]);
        std::swap(b[piv], b[k]);
        for (int i = k + 1; i < n; ++i) {
            const real l = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j) a[i][j] -= l * a[k][j];
            b[i] -= l * b[k];
        }
    }
    std::vector<real> x(n);
    for (int i = n - 1; i >= 0; --i) {
        real acc = b[i];
        for (int j = i + 1; j < n; ++j) acc -= a[i][j] * x[j];
        x[i] = acc / a[i][i];
    }
    return x;
}

std::vector<real> q_coeffs_ext(int m, real z) {
    std::vector<real> q(2 * m - 2, 0.0L);
    const int split = (m + 1) / 2;
    auto add = [&](int k, int alpha) {
        const int i = 2 * k - 1 - alpha;
        const real sign = (alpha % 2 == 0) ? 1.0L : -1.0L;
        q[i] += 0.5L * sign * ipow(z, alpha) / (static_cast<real>(factorial(i)) * static_cast<real>(factorial(alpha)));
    };
    for (int k = 1; k <= split - 1; ++k)
        for (int alpha = 0; alpha <= 2 * k - 1; ++alpha) add(k, alpha);
    for (int k = split; k <= m - 1; ++k)
        for (int alpha = 0; alpha <= m - 2; ++alpha) add(k, alpha);
    return q;
}

}  // namespace

std::vector<double> q_coeffs(SpaceOrder m, double z) {
    if (m.order < 2) throw std::invalid_argument("q_coeffs: defined for m >= 2");
    const auto q = q_coeffs_ext(m.order, static_cast<real>(z));
    return std::vector<double>(q.begin(), q.end());
}

BoundaryTail boundary_systems(const OperatorData& op, const GridSpec& grid, double z) {
    if (op.m.order != grid.m.order || std::fabs(op.h - grid.h) > 1e-15)
        throw GridMismatch("boundary_systems: operator and grid disagree");
    const int m = grid.m.order;

    BoundaryTail tail;
    tail.z = z;
    if (m == 1) {
        tail.a_minus = std::exp(static_cast<real>(z)) / 4.0L;
        tail.a_plus = -std::exp(static_cast<real>(z)) / 4.0L;
        return tail;
    }

    const OpExt ox = extend_operator(op, grid);
    const real zl = static_cast<real>(z);
    const real h = ox.h;
    tail.q = q_coeffs_ext(m, zl);
    const BasisSet left = left_basis(grid, tail.q, zl);
    const BasisSet right = right_basis(grid, tail.q, zl);
    const int nroots = static_cast<int>(ox.roots.size());
    const int nn = grid.n;

    // window sums sum_{gamma=0}^{N} lambda^{base +- gamma} G(z - h gamma)
    auto window_sum = [&](cplx lambda, int gamma_sign, int base_power) {
        cplx acc = 0.0L;
        for (int gamma = 0; gamma <= nn; ++gamma)
            acc += cpow_int(lambda, base_power + gamma_sign * gamma) * green_kernel_ext(grid.m, zl - h * gamma);
        return acc;
    };

    const int dim = 2 * m - 2;
    std::vector<std::vector<real>> sys(dim, std::vector<real>(dim, 0.0L));
    std::vector<real> rhs(dim, 0.0L);

    for (int beta = 1; beta <= m - 1; ++beta) {
        const int row_t = beta - 1;            // rows driven from the left edge
        const int row_s = (m - 1) + beta - 1;  // rows driven from the right edge
        for (int i = 0; i <= m - 2; ++i) {
            cplx bm = near_diag(left.r_basis[i], beta, ox);
            cplx bp = 0.0L;
            cplx am = 0.0L;
            cplx ap = near_diag(right.r_basis[i], beta, ox);
            for (int k = 0; k < nroots; ++k) {
                const cplx lam = ox.roots[k];
                const cplx w = ox.amps[k] / lam;
                const cplx lam_nb = cpow_int(lam, nn + beta);
                bm += w * split_sum(left.r_basis[i], lam, beta, h);
                bp += w * lam_nb * inf_sum(right.r_basis[i], lam, h);
                am += w * lam_nb * inf_sum(left.r_basis[i], lam, h);
                ap += w * split_sum(right.r_basis[i], lam, beta, h);
            }
            sys[row_t][i] = real_checked(bm, "boundary_systems B-");
            sys[row_t][(m - 1) + i] = real_checked(bp, "boundary_systems B+");
            sys[row_s][i] = real_checked(am, "boundary_systems A-");
            sys[row_s][(m - 1) + i] = real_checked(ap, "boundary_systems A+");
        }
        cplx t_val = near_diag(left.known, beta, ox);
        cplx s_val = near_diag(right.known, beta, ox);
        for (int k = 0; k < nroots; ++k) {
            const cplx lam = ox.roots[k];
            const cplx w = ox.amps[k] / lam;
            const cplx lam_nb = cpow_int(lam, nn + beta);
            t_val += w * (window_sum(lam, +1, beta) + split_sum(left.known, lam, beta, h) + lam_nb * inf_sum(right.known, lam, h));
            s_val += w * (window_sum(lam, -1, nn + beta) + lam_nb * inf_sum(left.known, lam, h) + split_sum(right.known, lam, beta, h));
        }
        rhs[row_t] = -real_checked(t_val, "boundary_systems T");
        rhs[row_s] = -real_checked(s_val, "boundary_systems S");
    }

    const std::vector<real> sol = solve_small(std::move(sys), std::move(rhs));
    tail.r_minus.assign(sol.begin(), sol.begin() + (m - 1));
    tail.r_plus.assign(sol.begin() + (m - 1), sol.end());

    real r_plus_sum = 0.0L, q_sum = 0.0L;
    for (real v : tail.r_plus) r_plus_sum += v;
    for (real v : tail.q) q_sum += v;
    tail.a_minus = green_kernel_ext(grid.m, zl) + 0.25L * std::exp(-zl) - tail.q[0] - tail.r_minus[0];
    tail.a_plus = std::exp(1.0L) * (green_kernel_ext(grid.m, zl - 1.0L) - 0.25L * std::exp(1.0L - zl) + q_sum - r_plus_sum);

    // Tail integrands with the solved r folded in, for M_k/N_k.
    SeqFn u_left;
    u_left.poly.assign(2 * m - 2, 0.0L);
    for (int i = 0; i <= 2 * m - 3; ++i) u_left.poly[i] = tail.q[i] * ipow(-h, i);
    for (int i = 0; i <= m - 2; ++i) u_left.poly[i] += tail.r_minus[i] * ipow(-h, i);
    u_left.cp = tail.a_minus;
    u_left.cm = -0.25L * std::exp(-zl);

    SeqFn u_right;
    u_right.poly.assign(2 * m - 2, 0.0L);
    for (int i = 0; i <= 2 * m - 3; ++i) {
        const real ci = -tail.q[i] + (i <= m - 2 ? tail.r_plus[i] : 0.0L);
        for (int j = 0; j <= i; ++j) u_right.poly[j] += ci * binom(i, j) * ipow(h, j);
    }
    u_right.cp = 0.25L * std::exp(1.0L - zl);
    u_right.cm = tail.a_plus / std::exp(1.0L);

    for (int k = 0; k < nroots; ++k) {
        tail.big_m.push_back(inf_sum(u_left, ox.roots[k], h));
        tail.big_n.push_back(inf_sum(u_right, ox.roots[k], h));
    }
    return tail;
}

double boundary_extension(const GridSpec& grid, const BoundaryTail& tail, int beta) {
    const real hb = static_cast<real>(grid.h) * beta;
    const real z = static_cast<real>(tail.z);
    if (beta >= 0 && beta <= grid.n) return static_cast<double>(green_kernel_ext(grid.m, z - hb));
    real poly = 0.0L;
    if (beta < 0) {
        for (size_t i = 0; i < tail.q.size(); ++i) poly += tail.q[i] * ipow(hb, static_cast<int>(i));
        for (size_t i = 0; i < tail.r_minus.size(); ++i) poly += tail.r_minus[i] * ipow(hb, static_cast<int>(i));
        return static_cast<double>(-0.25L * std::exp(hb - z) + tail.a_minus * std::exp(-hb) + poly);
    }
    for (size_t i = 0; i < tail.q.size(); ++i) poly -= tail.q[i] * ipow(hb, static_cast<int>(i));
    for (size_t i = 0; i < tail.r_plus.size(); ++i) poly += tail.r_plus[i] * ipow(hb, static_cast<int>(i));
    return static_cast<double>(0.25L * std::exp(hb - z) + tail.a_plus * std::exp(-hb) + poly);
}

CoefficientVector coeffs_m1(const GridSpec& grid, double z) {
    if (grid.m.order != 1) throw std::invalid_argument("coeffs_m1: m must be 1");
    if (z < 0.0 || z > 1.0) throw std::invalid_argument("coeffs_m1: z must lie in [0,1]");
    const double h = grid.h;
    const double e_2h = std::exp(2.0 * h);
    const double scale = 1.0 / (2.0 * (1.0 - e_2h));

    CoefficientVector cv;
    cv.z = z;
    cv.lagrange_exp = 0.0;
    cv.coeffs.resize(grid.n + 1);
    for (int beta = 0; beta <= grid.n; ++beta) {
        const double hb = h * beta;
        const double t1 = sgn(z - hb - h) * (std::exp(hb + 2.0 * h - z) - std::exp(z - hb));
        const double t2 = sgn(z - hb + h) * (std::exp(hb - z) - std::exp(z - hb + 2.0 * h));
        const double t3 = (1.0 + e_2h) * sgn(z - hb) * (std::exp(z - hb) - std::exp(hb - z));
        cv.coeffs[beta] = scale * (t1 + t2 + t3);
    }
    return cv;
}

CoefficientVector coeffs_general(const OperatorData& op, const GridSpec& grid, const BoundaryTail& tail, double z) {
    const int m = grid.m.order;
    if (m < 2) throw std::invalid_argument("coeffs_general: m must be >= 2");
    if (std::fabs(tail.z - z) > 1e-15) throw std::invalid_argument("coeffs_general: tail was built for a different z");
    const OpExt ox = extend_operator(op, grid);
    const int nn = grid.n;
    const real h = ox.h;
    const real zl = static_cast<real>(z);

    auto u_ext = [&](int beta) { return static_cast<real>(boundary_extension(grid, tail, beta)); };

    CoefficientVector cv;
    cv.z = z;
    cv.coeffs.resize(nn + 1);

    for (int beta = 0; beta <= nn; ++beta) {
        const real lower = (beta - 1 >= 0) ? green_kernel_ext(grid.m, zl - h * (beta - 1)) : u_ext(beta - 1);
        const real upper = (beta + 1 <= nn) ? green_kernel_ext(grid.m, zl - h * (beta + 1)) : u_ext(beta + 1);
        real acc = 2.0L * ox.big_c * green_kernel_ext(grid.m, zl - h * beta) - 2.0L * ox.e_h * (lower + upper);

        cplx geom = 0.0L;
        for (size_t k = 0; k < ox.roots.size(); ++k) {
            const cplx lam = ox.roots[k];
            cplx win = 0.0L;
            for (int gamma = 0; gamma <= nn; ++gamma)
                win += cpow_int(lam, std::abs(beta - gamma)) * green_kernel_ext(grid.m, zl - h * gamma);
            geom += ox.amps[k] / lam * (win + cpow_int(lam, beta) * tail.big_m[k] + cpow_int(lam, nn - beta) * tail.big_n[k]);
        }
        acc += real_checked(geom, "coeffs_general");
        cv.coeffs[beta] = static_cast<double>(acc / ox.p);
    }

    // Diagnostic multipliers: the exponential one is exact, the
    // polynomial ones are fitted to the kernel-row residuals.
    cv.lagrange_exp = tail.d_lag();
    DenseMatrix vand(nn + 1, m - 1);
    std::vector<double> resid(nn + 1);
    for (int beta = 0; beta <= nn; ++beta) {
        const double xb = grid.node(beta);
        double s = green_kernel(grid.m, z - xb) - cv.lagrange_exp * std::exp(-xb);
        for (int gamma = 0; gamma <= nn; ++gamma) s -= cv.coeffs[gamma] * green_kernel(grid.m, xb - grid.node(gamma));
        resid[beta] = s;
        double pw = 1.0;
        for (int alpha = 0; alpha <= m - 2; ++alpha, pw *= xb) vand(beta, alpha) = pw;
    }
    cv.lagrange_poly = solve_least_squares(vand, resid);
    return cv;
}

CoefficientVector coeffs_m2_specialized(const GridSpec& grid, double z) {
    if (grid.m.order != 2) throw std::invalid_argument("coeffs_m2_specialized: m must be 2");
    const int nn = grid.n;
    const double h = grid.h;
    const double e_h = std::exp(h);
    const double e_2h = std::exp(2.0 * h);
    const double e1 = std::exp(1.0);
    const SpaceOrder m2{2};
    auto g2 = [&](double x) { return green_kernel(m2, x); };
    auto dpow = [](double x, int e) {
        double r = 1.0;
        for (int i = 0; i < e; ++i) r *= x;
        return r;
    };

    const double disc = h * h * (e_h + 1.0) * (e_h + 1.0) + 2.0 * h * (1.0 - e_2h);
    if (disc < 0.0) throw InvariantViolation("coeffs_m2_specialized: negative discriminant");
    const double p = 1.0 - e_2h + 2.0 * h * e_h;
    const double lam = (h * (e_2h + 1.0) - e_2h + 1.0 - (e_h - 1.0) * std::sqrt(disc)) / p;
    const double big_c = 1.0 + 2.0 * e_h + e_2h - e_h * (lam * lam + 1.0) / lam;
    const double a1 = 2.0 * (lam - 1.0) * (lam * (e_2h + 1.0) - e_h * (lam * lam + 1.0)) / (lam + 1.0);

    const double om = 1.0 - lam;           // 1 - lambda
    const double den_p = 1.0 - lam * e_h;  // 1 - lambda e^h
    const double den_m = e_h - lam;        // e^h - lambda
    const double sinh_den = lam * lam + 1.0 - 2.0 * lam * std::cosh(h);

    if (std::fabs(lam) * e_h >= 1.0) throw InvariantViolation("coeffs_m2_specialized: |lambda e^h| >= 1");

    // sum_{gamma>=1} lambda^{gamma-2} (1 - e^{+-h gamma})
    const double tail_up = (1.0 / lam) * (1.0 - e_h) / (om * den_p);
    const double tail_dn = (1.0 / lam) * (1.0 - std::exp(-h)) / (om * (1.0 - lam * std::exp(-h)));

    const double b10m = 2.0 * big_c * (1.0 - e_h) - 2.0 * e_h * (1.0 - e_2h) + a1 * tail_up;
    const double b10p = a1 * dpow(lam, nn + 1) * (e_h - 1.0) / (om * den_m);
    const double a10m = a1 * dpow(lam, nn + 1) * (1.0 - e_h) / (om * den_p);
    const double a10p = 2.0 * big_c * (1.0 - std::exp(-h)) - 2.0 * e_h * (1.0 - std::exp(-2.0 * h)) + a1 * tail_dn;

    double win_up = 0.0, win_dn = 0.0;  // sum lambda^{gamma+1} G2 and lambda^{N-gamma+1} G2
    for (int gamma = 0; gamma <= nn; ++gamma) {
        win_up += dpow(lam, gamma + 1) * g2(z - h * gamma);
        win_dn += dpow(lam, nn - gamma + 1) * g2(z - h * gamma);
    }

    // sum_{gamma>=1} lambda^{gamma-1} (e^{-z} sinh(h gamma)/2 + e^{h gamma} G2(z) - h gamma / 2)
    const double left_tail_t = 0.5 * std::exp(-z) * std::sinh(h) / sinh_den + g2(z) * e_h / den_p - 0.5 * h / (om * om);
    // sum_{gamma>=1} lambda^{gamma-1} (e^{1-z} sinh(h gamma)/2 + e^{-h gamma} G2(z-1) + (e^{-h gamma} - 1 - h gamma)/2)
    const double right_tail_s = 0.5 * std::exp(1.0 - z) * std::sinh(h) / sinh_den + g2(z - 1.0) / den_m +
                                0.5 * (1.0 / den_m - 1.0 / om - h / (om * om));

    const double t1 = -(std::exp(-z) * (big_c * std::sinh(h) - e_h * std::sinh(2.0 * h)) +
                        g2(z) * (2.0 * big_c * e_h - 2.0 * e_h * (1.0 + e_2h)) - h * (big_c - 2.0 * e_h)) -
                      (a1 / lam) * (win_up + left_tail_t +
                                    dpow(lam, nn + 1) *
                                        (std::exp(1.0 - z) * lam * std::sinh(h) / (2.0 * sinh_den) + lam * g2(z - 1.0) / den_m +
                                         0.5 * (lam * (1.0 - e_h) / (den_m * om) - lam * h / (om * om))));

    const double s1 = -(std::exp(1.0 - z) * (big_c * std::sinh(h) - e_h * std::sinh(2.0 * h)) +
                        g2(z - 1.0) * (2.0 * big_c * std::exp(-h) - 2.0 * e_h * (1.0 + std::exp(-2.0 * h))) +
                        big_c * (std::exp(-h) - 1.0 - h) - e_h * (std::exp(-2.0 * h) - 1.0 - 2.0 * h)) -
                      (a1 / lam) * (win_dn + right_tail_s +
                                    dpow(lam, nn + 1) *
                                        (std::exp(-z) * lam * std::sinh(h) / (2.0 * sinh_den) + lam * e_h * g2(z) / den_p -
                                         lam * h / (2.0 * om * om)));

    const double det = b10m * a10p - b10p * a10m;
    if (std::fabs(det) < 1e-13 * std::max(std::fabs(b10m * a10p), std::fabs(b10p * a10m)))
        throw SingularBoundarySystem("coeffs_m2_specialized: 2x2 boundary system is singular");
    const double r0m = (t1 * a10p - s1 * b10p) / det;
    const double r0p = (s1 * b10m - t1 * a10m) / det;

    const double am = g2(z) + 0.25 * std::exp(-z) - r0m;
    const double ap = e1 * (g2(z - 1.0) - 0.25 * std::exp(1.0 - z) - r0p + 0.5);

    const double m1 = lam * std::exp(-z) / (4.0 * (lam - e_h)) + am * lam * e_h / den_p - h * lam / (2.0 * om * om) +
                      r0m * lam / om;
    const double n1 = lam * std::exp(1.0 - z + h) / (4.0 * den_p) + ap * lam / (e1 * den_m) - h * lam / (2.0 * om * om) -
                      lam / (2.0 * om) + r0p * lam / om;

    CoefficientVector cv;
    cv.z = z;
    cv.coeffs.resize(nn + 1);
    cv.lagrange_exp = 0.5 * (am + ap);

    for (int beta = 0; beta <= nn; ++beta) {
        double win = 0.0;
        for (int gamma = 0; gamma <= nn; ++gamma) win += dpow(lam, std::abs(beta - gamma)) * g2(z - h * gamma);
        double acc;
        if (beta == 0) {
            acc = 2.0 * big_c * g2(z) - 2.0 * e_h * (g2(z - h) - 0.25 * std::exp(-h - z) + am * e_h - 0.5 * h + r0m) +
                  (a1 / lam) * (win + m1 + dpow(lam, nn) * n1);
        } else if (beta == nn) {
            acc = 2.0 * big_c * g2(z - 1.0) -
                  2.0 * e_h * (g2(z - 1.0 + h) + std::exp(1.0 + h) / (4.0 * std::exp(z)) + ap / std::exp(1.0 + h) -
                               0.5 * (1.0 + h) + r0p) +
                  (a1 / lam) * (win + dpow(lam, nn) * m1 + n1);
        } else {
            acc = 2.0 * big_c * g2(z - h * beta) - 2.0 * e_h * (g2(z - h * (beta - 1)) + g2(z - h * (beta + 1))) +
                  (a1 / lam) * (win + dpow(lam, beta) * m1 + dpow(lam, nn - beta) * n1);
        }
        cv.coeffs[beta] = acc / p;
    }

    // Same diagnostic recovery of p_0 as the general path.
    DenseMatrix vand(nn + 1, 1);
    std::vector<double> resid(nn + 1);
    for (int beta = 0; beta <= nn; ++beta) {
        const double xb = grid.node(beta);
        double s = g2(z - xb) - cv.lagrange_exp * std::exp(-xb);
        for (int gamma = 0; gamma <= nn; ++gamma) s -= cv.coeffs[gamma] * g2(xb - grid.node(gamma));
        resid[beta] = s;
        vand(beta, 0) = 1.0;
    }
    cv.lagrange_poly = solve_least_squares(vand, resid);
    return cv;
}

CoefficientVector optimal_coeffs(const OperatorData& op, const GridSpec& grid, double z) {
    if (grid.m.order == 1) return coeffs_m1(grid, z);
    const BoundaryTail tail = boundary_systems(op, grid, z);
    return coeffs_general(op, grid, tail, z);
}

}  // namespace w2interp
