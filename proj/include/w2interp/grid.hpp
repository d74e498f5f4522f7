#pragma once

#include <vector>

#include "w2interp/kernel.hpp"

namespace w2interp {

// Equally spaced nodes x_beta = h*beta, h = 1/N, beta = 0..N.
// Uniqueness of the optimal coefficients needs N+1 >= m; N is capped at
// 200 because the dense solve degrades beyond desk scale.
struct GridSpec {
    GridSpec(SpaceOrder m, int n);

    double node(int beta) const { return h * beta; }
    std::vector<double> nodes() const;

    SpaceOrder m;
    int n;
    double h;
};

}  // namespace w2interp
