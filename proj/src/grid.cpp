#include "w2interp/grid.hpp"

#include <stdexcept>

namespace w2interp {

GridSpec::GridSpec(SpaceOrder order, int n_) : m(order), n(n_), h(1.0 / n_) {
    if (n < 1) throw std::invalid_argument("GridSpec: N must be >= 1");
    if (n > 200) throw std::invalid_argument("GridSpec: N above desk-scale cap of 200");
    if (n + 1 < m.order) throw std::invalid_argument("GridSpec: need N+1 >= m for a unique solution");
}

std::vector<double> GridSpec::nodes() const {
    std::vector<double> xs(n + 1);
    for (int beta = 0; beta <= n; ++beta) xs[beta] = node(beta);
    return xs;
}

}  // namespace w2interp
