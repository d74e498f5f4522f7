#pragma once

#include <functional>
#include <string>
#include <vector>

#include "w2interp/direct_system.hpp"
#include "w2interp/grid.hpp"

namespace w2interp {

// Tabulated function values at the grid nodes plus where they came from.
struct SampleSet {
    enum class Source { builtin, file };

    GridSpec grid;
    std::vector<double> values;
    Source source;
    std::string source_name;  // builtin id or file path
};

SampleSet sample_builtin(const GridSpec& grid, const std::string& name);

// A named test function and its derivative family (needed for the
// seminorm bound checks).
struct BuiltinFunction {
    std::string name;
    std::function<double(double)> f;
    std::function<double(double, int)> derivative;  // order k >= 0
};

const std::vector<BuiltinFunction>& builtin_functions();
const BuiltinFunction& builtin_function(const std::string& name);

// sum_beta C_beta(z) * phi(x_beta)
double interpolate(const SampleSet& samples, const CoefficientVector& cv);

// Error-functional norm for m = 1 via the sign-weighted sum formula;
// agrees with sqrt(norm_squared) and exists as an independent route.
double norm_m1(const GridSpec& grid, const CoefficientVector& cv);

struct ErrorReport {
    std::vector<double> z_grid;
    std::vector<double> abs_errors;
    double max_error;
    std::vector<double> norm_values;  // pointwise error-functional norm
};

// Pointwise |phi(z) - interpolant(z)| and norm values over z_grid, using
// the closed-form coefficient path.
ErrorReport error_sweep(SpaceOrder m, int n, const BuiltinFunction& phi, const std::vector<double>& z_grid);

// 201 equispaced points including both endpoints (resolves the
// inter-node error oscillation).
std::vector<double> default_z_grid(int count = 201);

// Seminorm of phi: L2 norm over [0,1] of phi^(m) + phi^(m-1), by
// 1024-point quadrature.
double seminorm(const BuiltinFunction& phi, SpaceOrder m);

}  // namespace w2interp
