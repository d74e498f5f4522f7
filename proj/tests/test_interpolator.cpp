#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "w2interp/errors.hpp"
#include "w2interp/explicit_coeffs.hpp"
#include "w2interp/interpolator.hpp"

using namespace w2interp;

TEST_CASE("interpolation is exact on the residual-free functions") {
    // e^{-x} and constants span the part of the space the formula must
    // reproduce exactly (constants only once m >= 2)
    for (int mo : {1, 2, 3}) {
        for (int n : {5, 10}) {
            const GridSpec grid(SpaceOrder{mo}, n);
            const auto op = build_operator(grid.m, grid.n);
            SampleSet exp_neg{grid, {}, SampleSet::Source::builtin, "exp_neg"};
            SampleSet ones{grid, {}, SampleSet::Source::builtin, "one"};
            for (int beta = 0; beta <= n; ++beta) {
                exp_neg.values.push_back(std::exp(-grid.node(beta)));
                ones.values.push_back(1.0);
            }
            for (double z : {0.17, 0.5, 0.83}) {
                const auto cv = optimal_coeffs(op, grid, z);
                CHECK(interpolate(exp_neg, cv) == doctest::Approx(std::exp(-z)).epsilon(1e-9));
                if (mo >= 2) CHECK(interpolate(ones, cv) == doctest::Approx(1.0).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("interpolation conditions hold at the nodes") {
    const GridSpec grid(SpaceOrder{2}, 5);
    const auto op = build_operator(grid.m, grid.n);
    const SampleSet samples = sample_builtin(grid, "sin");
    const auto cv = optimal_coeffs(op, grid, grid.node(3));
    CHECK(interpolate(samples, cv) == doctest::Approx(std::sin(grid.node(3))).epsilon(1e-10));
}

TEST_CASE("interpolate rejects mismatched grids") {
    const GridSpec g5(SpaceOrder{1}, 5);
    const GridSpec g10(SpaceOrder{1}, 10);
    const SampleSet samples = sample_builtin(g10, "sin");
    const auto cv = coeffs_m1(g5, 0.3);
    CHECK_THROWS_AS(interpolate(samples, cv), GridMismatch);
}

TEST_CASE("norm_m1 vanishes at nodes and matches the bilinear-form route") {
    const GridSpec grid(SpaceOrder{1}, 5);
    for (int gamma = 0; gamma <= 5; ++gamma)
        CHECK(norm_m1(grid, coeffs_m1(grid, grid.node(gamma))) < 1e-7);

    const auto cv = coeffs_m1(grid, 0.1);
    CHECK(std::fabs(norm_m1(grid, cv) - std::sqrt(norm_squared(grid, cv))) < 1e-10);

    const GridSpec fine(SpaceOrder{1}, 10);
    CHECK(norm_m1(fine, coeffs_m1(fine, 0.05)) <= norm_m1(grid, coeffs_m1(grid, 0.05)));
}

TEST_CASE("error sweep vanishes at nodes and decreases with refinement") {
    const auto& sin_fn = builtin_function("sin");
    const auto grid201 = default_z_grid();
    REQUIRE(grid201.size() == 201);
    CHECK(grid201.front() == 0.0);
    CHECK(grid201.back() == 1.0);

    const ErrorReport base = error_sweep(SpaceOrder{1}, 5, sin_fn, grid201);
    for (int gamma = 0; gamma <= 5; ++gamma) {
        const size_t idx = static_cast<size_t>(gamma) * 40;  // nodes sit on the 201-point grid
        CHECK(base.abs_errors[idx] < 1e-9);
        CHECK(base.norm_values[idx] < 1e-6);
    }
    CHECK(base.max_error > 0.0);

    const ErrorReport fine_n = error_sweep(SpaceOrder{2}, 10, sin_fn, grid201);
    const ErrorReport coarse_n = error_sweep(SpaceOrder{2}, 5, sin_fn, grid201);
    CHECK(fine_n.max_error < coarse_n.max_error);

    const ErrorReport m3 = error_sweep(SpaceOrder{3}, 5, sin_fn, grid201);
    CHECK(m3.max_error < coarse_n.max_error);
    CHECK(coarse_n.max_error < base.max_error);
}

TEST_CASE("pointwise error is bounded by seminorm times functional norm") {
    const auto& sin_fn = builtin_function("sin");
    const auto zs = default_z_grid(41);
    for (int mo : {1, 2, 3}) {
        const double phi_norm = seminorm(sin_fn, SpaceOrder{mo});
        const ErrorReport rep = error_sweep(SpaceOrder{mo}, 5, sin_fn, zs);
        for (size_t i = 0; i < zs.size(); ++i)
            CHECK(rep.abs_errors[i] <= phi_norm * rep.norm_values[i] + 1e-12);
    }
}

TEST_CASE("norm values agree between closed-form and dense coefficients") {
    for (int mo : {1, 2, 3}) {
        const GridSpec grid(SpaceOrder{mo}, 5);
        const auto op = build_operator(grid.m, grid.n);
        for (double z : {0.08, 0.33, 0.71}) {
            const double via_explicit = std::sqrt(norm_squared(grid, optimal_coeffs(op, grid, z)));
            const double via_direct = std::sqrt(norm_squared(grid, solve_direct(grid, z)));
            CHECK(std::fabs(via_explicit - via_direct) < 1e-8);
        }
    }
}

TEST_CASE("seminorm of sin via quadrature") {
    // m=1: integral of (cos + sin)^2 over [0,1] = 1 + sin^2(1)
    const double ref = std::sqrt(1.0 + std::sin(1.0) * std::sin(1.0));
    CHECK(seminorm(builtin_function("sin"), SpaceOrder{1}) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("builtin function table") {
    CHECK(builtin_function("sq").f(0.5) == 0.25);
    CHECK(builtin_function("exp2").f(0.5) == doctest::Approx(std::exp(1.0)));
    CHECK(builtin_function("sin").derivative(0.3, 1) == doctest::Approx(std::cos(0.3)));
    CHECK(builtin_function("sq").derivative(0.3, 3) == 0.0);
    CHECK_THROWS_AS(builtin_function("nope"), std::invalid_argument);
}
