#include "w2interp/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "w2interp/errors.hpp"

namespace w2interp {

SpaceOrder::SpaceOrder(int ord) : order(ord) {
    if (ord < 1) throw std::invalid_argument("SpaceOrder: m must be >= 1");
}

long double green_kernel_ext(SpaceOrder m, long double x) {
    // The sign prefactor cancels the oddness of the inner part, so the
    // kernel is even; evaluate the inner part at |x|.
    if (x == 0.0L) return 0.0L;
    const long double a = std::fabs(x);

    if (a < 0.1L) {
        // Tail series sum_{k>=m} a^(2k-1)/(2k-1)!; all terms positive,
        // no cancellation. Terminate on 1e-21 relative.
        long double term = 1.0L;
        for (int i = 1; i <= 2 * m.order - 1; ++i) term *= a / i;
        long double sum = term;
        for (int k = m.order + 1;; ++k) {
            term *= a * a / ((2 * k - 2) * (2 * k - 1));
            sum += term;
            if (term < 1e-21L * sum) break;
        }
        return 0.5L * sum;
    }

    // Truncated odd series subtracted from sinh with compensated summation.
    long double series = 0.0L, comp = 0.0L;
    long double term = a;
    for (int k = 1; k <= m.order - 1; ++k) {
        const long double y = term - comp;
        const long double t = series + y;
        comp = (t - series) - y;
        series = t;
        term *= a * a / ((2 * k) * (2 * k + 1));
    }
    return 0.5L * (std::sinh(a) - series);
}

double green_kernel(SpaceOrder m, double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("green_kernel: x must be finite");
    return static_cast<double>(green_kernel_ext(m, x));
}

EFPolynomial euler_frobenius(int k) {
    if (k < 0) throw std::invalid_argument("euler_frobenius: k must be >= 0");
    // Triangle recurrence for the coefficients of E_k, seeded by E_0 = 1:
    // row n holds the degree-(n-1) polynomial with row[j] counting
    // permutations of n elements with j descents.
    std::vector<double> row{1.0};
    for (int n = 2; n <= k + 1; ++n) {
        std::vector<double> next(n, 0.0);
        for (int j = 0; j < n; ++j) {
            const double a = (j < static_cast<int>(row.size())) ? row[j] : 0.0;
            const double b = (j >= 1) ? row[j - 1] : 0.0;
            next[j] = (j + 1) * a + (n - j) * b;
        }
        next.resize(n);
        row = std::move(next);
        row.resize(n);
    }
    row.resize(k + 1);
    return EFPolynomial{std::move(row)};
}

namespace {

double ipow(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace

double delta_powers(int nu, int j) {
    if (nu < 0 || j < 0) throw std::invalid_argument("delta_powers: indices must be >= 0");
    if (nu > j) return 0.0;
    double binom = 1.0;  // binom(nu, s), updated incrementally
    double sum = 0.0;
    for (int s = 0; s <= nu; ++s) {
        const double sign = ((nu - s) % 2 == 0) ? 1.0 : -1.0;
        const double pw = (s == 0) ? (j == 0 ? 1.0 : 0.0) : ipow(static_cast<double>(s), j);
        sum += sign * binom * pw;
        binom = binom * (nu - s) / (s + 1);
    }
    return sum;
}

}  // namespace w2interp
