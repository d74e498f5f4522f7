#include "w2interp/interpolator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "w2interp/errors.hpp"
#include "w2interp/explicit_coeffs.hpp"
#include "w2interp/linalg.hpp"

namespace w2interp {

const std::vector<BuiltinFunction>& builtin_functions() {
    static const std::vector<BuiltinFunction> fns = {
        {"sq", [](double z) { return z * z; },
         [](double z, int k) {
             if (k == 0) return z * z;
             if (k == 1) return 2.0 * z;
             if (k == 2) return 2.0;
             return 0.0;
         }},
        {"exp2", [](double z) { return std::exp(2.0 * z); },
         [](double z, int k) { return std::pow(2.0, k) * std::exp(2.0 * z); }},
        {"sin", [](double z) { return std::sin(z); },
         [](double z, int k) { return std::sin(z + k * std::numbers::pi / 2.0); }},
    };
    return fns;
}

const BuiltinFunction& builtin_function(const std::string& name) {
    for (const auto& f : builtin_functions())
        if (f.name == name) return f;
    throw std::invalid_argument("unknown builtin function: " + name);
}

SampleSet sample_builtin(const GridSpec& grid, const std::string& name) {
    const auto& fn = builtin_function(name);
    SampleSet s{grid, {}, SampleSet::Source::builtin, name};
    s.values.resize(grid.n + 1);
    for (int beta = 0; beta <= grid.n; ++beta) s.values[beta] = fn.f(grid.node(beta));
    return s;
}

double interpolate(const SampleSet& samples, const CoefficientVector& cv) {
    if (static_cast<int>(cv.coeffs.size()) != samples.grid.n + 1 ||
        static_cast<int>(samples.values.size()) != samples.grid.n + 1)
        throw GridMismatch("interpolate: sample and coefficient grids disagree");
    if (cv.z < 0.0 || cv.z > 1.0) throw std::invalid_argument("interpolate: z outside [0,1]");
    double acc = 0.0;
    for (size_t beta = 0; beta < samples.values.size(); ++beta) acc += cv.coeffs[beta] * samples.values[beta];
    return acc;
}

double norm_m1(const GridSpec& grid, const CoefficientVector& cv) {
    if (grid.m.order != 1) throw std::invalid_argument("norm_m1: m must be 1");
    if (static_cast<int>(cv.coeffs.size()) != grid.n + 1) throw GridMismatch("norm_m1: coefficient count mismatch");
    double acc = 0.0;
    for (int beta = 0; beta <= grid.n; ++beta) {
        const double d = cv.z - grid.node(beta);
        acc += cv.coeffs[beta] * sgn(d) * (std::exp(d) - std::exp(-d));
    }
    acc *= 0.25;
    if (acc < -1e-12) throw InvariantViolation("norm_m1: squared value below -1e-12");
    return std::sqrt(acc < 0.0 ? 0.0 : acc);
}

std::vector<double> default_z_grid(int count) {
    if (count < 2) throw std::invalid_argument("default_z_grid: need at least 2 points");
    std::vector<double> zs(count);
    for (int i = 0; i < count; ++i) zs[i] = static_cast<double>(i) / (count - 1);
    return zs;
}

ErrorReport error_sweep(SpaceOrder m, int n, const BuiltinFunction& phi, const std::vector<double>& z_grid) {
    const GridSpec grid(m, n);
    const OperatorData op = build_operator(m, n);
    const SampleSet samples = sample_builtin(grid, phi.name);

    ErrorReport rep;
    rep.z_grid = z_grid;
    rep.abs_errors.reserve(z_grid.size());
    rep.norm_values.reserve(z_grid.size());
    rep.max_error = 0.0;
    for (double z : z_grid) {
        const CoefficientVector cv = optimal_coeffs(op, grid, z);
        const double err = std::fabs(phi.f(z) - interpolate(samples, cv));
        rep.abs_errors.push_back(err);
        rep.max_error = std::max(rep.max_error, err);
        rep.norm_values.push_back(std::sqrt(norm_squared(grid, cv)));
    }
    return rep;
}

double seminorm(const BuiltinFunction& phi, SpaceOrder m) {
    const auto q = gauss_legendre_01(1024);
    double acc = 0.0;
    for (size_t i = 0; i < q.nodes.size(); ++i) {
        const double v = phi.derivative(q.nodes[i], m.order) + phi.derivative(q.nodes[i], m.order - 1);
        acc += q.weights[i] * v * v;
    }
    return std::sqrt(acc);
}

}  // namespace w2interp
