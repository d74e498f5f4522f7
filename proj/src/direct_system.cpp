#include "w2interp/direct_system.hpp"

#include <cmath>
#include <stdexcept>

#include "w2interp/errors.hpp"

namespace w2interp {

namespace {

double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

// max |constraint residual| of the moment rows for a coefficient vector
double constraint_residual(const GridSpec& grid, const CoefficientVector& cv) {
    double worst = 0.0;
    for (int alpha = 0; alpha <= grid.m.order - 2; ++alpha) {
        double s = 0.0;
        for (int beta = 0; beta <= grid.n; ++beta) s += cv.coeffs[beta] * ipow(grid.node(beta), alpha);
        worst = std::max(worst, std::fabs(s - ipow(cv.z, alpha)));
    }
    double s = 0.0;
    for (int beta = 0; beta <= grid.n; ++beta) s += cv.coeffs[beta] * std::exp(-grid.node(beta));
    worst = std::max(worst, std::fabs(s - std::exp(-cv.z)));
    return worst;
}

}  // namespace

AssembledSystem assemble(const GridSpec& grid, double z) {
    if (z < 0.0 || z > 1.0) throw std::invalid_argument("assemble: z must lie in [0,1]");
    const int n = grid.n;
    const int m = grid.m.order;
    const int dim = n + m + 1;
    AssembledSystem sys{DenseMatrix(dim, dim), std::vector<double>(dim, 0.0)};

    for (int beta = 0; beta <= n; ++beta) {
        const double xb = grid.node(beta);
        for (int gamma = 0; gamma <= n; ++gamma)
            sys.matrix(beta, gamma) = green_kernel(grid.m, xb - grid.node(gamma));
        for (int alpha = 0; alpha <= m - 2; ++alpha) sys.matrix(beta, n + 1 + alpha) = ipow(xb, alpha);
        sys.matrix(beta, n + m) = std::exp(-xb);
        sys.rhs[beta] = green_kernel(grid.m, z - xb);
    }
    for (int alpha = 0; alpha <= m - 2; ++alpha) {
        for (int gamma = 0; gamma <= n; ++gamma) sys.matrix(n + 1 + alpha, gamma) = ipow(grid.node(gamma), alpha);
        sys.rhs[n + 1 + alpha] = ipow(z, alpha);
    }
    for (int gamma = 0; gamma <= n; ++gamma) sys.matrix(n + m, gamma) = std::exp(-grid.node(gamma));
    sys.rhs[n + m] = std::exp(-z);
    return sys;
}

CoefficientVector solve_direct(const GridSpec& grid, double z) {
    const auto sys = assemble(grid, z);
    const auto sol = solve_dense(sys.matrix, sys.rhs);

    double max_row_norm = 0.0;
    for (int i = 0; i < sys.matrix.rows(); ++i) {
        double rn = 0.0;
        for (int j = 0; j < sys.matrix.cols(); ++j) rn += std::fabs(sys.matrix(i, j));
        max_row_norm = std::max(max_row_norm, rn);
    }
    if (sol.residual_inf > 1e-10 * (1.0 + max_row_norm))
        throw InvariantViolation("solve_direct: residual exceeds 1e-10 * (1 + max row norm)");

    const int n = grid.n;
    const int m = grid.m.order;
    CoefficientVector cv;
    cv.z = z;
    cv.coeffs.assign(sol.x.begin(), sol.x.begin() + n + 1);
    cv.lagrange_poly.assign(sol.x.begin() + n + 1, sol.x.begin() + n + m);
    cv.lagrange_exp = sol.x[n + m];
    cv.condition_flagged = sol.condition_flagged;
    return cv;
}

double norm_squared(const GridSpec& grid, const CoefficientVector& cv) {
    if (static_cast<int>(cv.coeffs.size()) != grid.n + 1)
        throw GridMismatch("norm_squared: coefficient count does not match grid");
    double cnorm = 0.0;
    for (double c : cv.coeffs) cnorm += std::fabs(c);
    if (constraint_residual(grid, cv) > 1e-8 * (1.0 + cnorm))
        throw ConstraintViolation("norm_squared: moment constraints violated, value would not be a norm");

    const int n = grid.n;
    double quad = 0.0;
    for (int beta = 0; beta <= n; ++beta)
        for (int gamma = 0; gamma <= n; ++gamma)
            quad += cv.coeffs[beta] * cv.coeffs[gamma] * green_kernel(grid.m, grid.node(beta) - grid.node(gamma));
    double lin = 0.0;
    for (int beta = 0; beta <= n; ++beta) lin += cv.coeffs[beta] * green_kernel(grid.m, cv.z - grid.node(beta));

    const double sign = (grid.m.order % 2 == 0) ? 1.0 : -1.0;
    const double value = sign * (quad - 2.0 * lin);
    if (value < -1e-12) throw InvariantViolation("norm_squared: value below -1e-12, sign convention broken");
    return value < 0.0 ? 0.0 : value;
}

std::vector<double> quadrature_weights(const GridSpec& grid) {
    const auto q = gauss_legendre_01(64);
    std::vector<double> w(grid.n + 1, 0.0);
    for (int panel = 0; panel < grid.n; ++panel) {
        const double a = grid.node(panel);
        for (size_t i = 0; i < q.nodes.size(); ++i) {
            const double z = a + grid.h * q.nodes[i];
            const auto cv = solve_direct(grid, z);
            const double wt = grid.h * q.weights[i];
            for (int beta = 0; beta <= grid.n; ++beta) w[beta] += wt * cv.coeffs[beta];
        }
    }
    return w;
}

}  // namespace w2interp
