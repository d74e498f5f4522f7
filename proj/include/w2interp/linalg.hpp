#pragma once

#include <cstddef>
#include <vector>

namespace w2interp {

// Row-major dense matrix, just large enough for the bordered systems here
// (dimension <= a few hundred).
class DenseMatrix {
public:
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0.0) {}

    double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

private:
    int rows_, cols_;
    std::vector<double> data_;
};

struct SolveResult {
    std::vector<double> x;
    double residual_inf;     // ||Ax - b||_inf after refinement
    bool condition_flagged;  // crude growth estimate above 1e12
};

// Gaussian elimination with partial pivoting and one step of iterative
// refinement (residual accumulated in long double). Throws SingularSystem
// when a pivot falls below 1e-13 * max|entry|.
SolveResult solve_dense(const DenseMatrix& a, const std::vector<double>& b);

// Least-squares solution of an overdetermined system via normal equations;
// fine for the handful of diagnostic columns used here.
std::vector<double> solve_least_squares(const DenseMatrix& a, const std::vector<double>& b);

// Gauss-Legendre nodes and weights on [0,1], computed by Newton iteration
// on the recurrence. Exact for polynomial degree 2n-1.
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};
Quadrature gauss_legendre_01(int n);

}  // namespace w2interp
