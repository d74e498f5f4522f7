#include "w2interp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "w2interp/errors.hpp"

namespace w2interp {

namespace {

struct LU {
    DenseMatrix lu;
    std::vector<int> perm;
    double max_entry;
    double min_pivot;
};

LU factorize(const DenseMatrix& a) {
    const int n = a.rows();
    LU f{a, std::vector<int>(n), 0.0, 0.0};
    for (int i = 0; i < n; ++i) f.perm[i] = i;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) f.max_entry = std::max(f.max_entry, std::fabs(a(i, j)));

    f.min_pivot = f.max_entry;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::fabs(f.lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::fabs(f.lu(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best < 1e-13 * f.max_entry)
            throw SingularSystem("solve_dense: pivot below 1e-13 of max entry at column " + std::to_string(k));
        if (piv != k) {
            std::swap(f.perm[piv], f.perm[k]);
            for (int j = 0; j < n; ++j) std::swap(f.lu(piv, j), f.lu(k, j));
        }
        f.min_pivot = std::min(f.min_pivot, best);
        const double d = f.lu(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double l = f.lu(i, k) / d;
            f.lu(i, k) = l;
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= l * f.lu(k, j);
        }
    }
    return f;
}

std::vector<double> lu_solve(const LU& f, const std::vector<double>& b) {
    const int n = f.lu.rows();
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
        x[i] /= f.lu(i, i);
    }
    return x;
}

std::vector<double> residual(const DenseMatrix& a, const std::vector<double>& x, const std::vector<double>& b) {
    const int n = a.rows();
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) {
        long double acc = b[i];
        for (int j = 0; j < n; ++j) acc -= static_cast<long double>(a(i, j)) * x[j];
        r[i] = static_cast<double>(acc);
    }
    return r;
}

}  // namespace

SolveResult solve_dense(const DenseMatrix& a, const std::vector<double>& b) {
    if (a.rows() != a.cols() || static_cast<int>(b.size()) != a.rows())
        throw std::invalid_argument("solve_dense: dimension mismatch");
    const LU f = factorize(a);
    std::vector<double> x = lu_solve(f, b);

    // one refinement step
    std::vector<double> r = residual(a, x, b);
    const std::vector<double> dx = lu_solve(f, r);
    for (size_t i = 0; i < x.size(); ++i) x[i] += dx[i];

    r = residual(a, x, b);
    double rinf = 0.0;
    for (double v : r) rinf = std::max(rinf, std::fabs(v));
    const bool flagged = f.min_pivot > 0.0 && f.max_entry / f.min_pivot > 1e12;
    return SolveResult{std::move(x), rinf, flagged};
}

std::vector<double> solve_least_squares(const DenseMatrix& a, const std::vector<double>& b) {
    const int m = a.rows(), n = a.cols();
    if (static_cast<int>(b.size()) != m) throw std::invalid_argument("solve_least_squares: dimension mismatch");
    DenseMatrix ata(n, n);
    std::vector<double> atb(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            long double acc = 0.0;
            for (int k = 0; k < m; ++k) acc += static_cast<long double>(a(k, i)) * a(k, j);
            ata(i, j) = static_cast<double>(acc);
        }
        long double acc = 0.0;
        for (int k = 0; k < m; ++k) acc += static_cast<long double>(a(k, i)) * b[k];
        atb[i] = static_cast<double>(acc);
    }
    return solve_dense(ata, atb).x;
}

Quadrature gauss_legendre_01(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre_01: n must be >= 1");
    Quadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-angle seed, then Newton on P_n over [-1,1].
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        q.nodes[i] = 0.5 * (1.0 - x);  // map to [0,1], ascending
        q.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    std::reverse(q.nodes.begin(), q.nodes.end());
    std::reverse(q.weights.begin(), q.weights.end());
    return q;
}

}  // namespace w2interp
