#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "preisach/operator.hpp"
#include "preisach/plane.hpp"

namespace preisach {

/// Row-major matrix of +/-1 signs; row i is the sign row of the memory state
/// after input i, the last column is the fixed -1 slot of the constant term.
struct SignMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::int8_t> a;

    std::int8_t at(int r, int c) const {
        return a[static_cast<std::size_t>(r) * cols + c];
    }
};

/// Stacked sign rows for a whole quantized level sequence.
SignMatrix sign_matrix(const PreisachGrid& grid, std::span<const int> levels);

struct IdentificationSystem {
    PreisachGrid grid;
    SignMatrix delta;
    std::vector<double> y;

    int t() const { return delta.rows; }
    int n() const { return delta.cols; }
};

/// Build the linear system from a quantized input sequence and measured
/// outputs of equal length.
IdentificationSystem assemble(const PreisachGrid& grid, std::span<const double> inputs,
                              std::span<const double> y);

/// Rank-revealing factorization of Delta^T Delta: eigenvalues above
/// svd_tol * (largest eigenvalue) are kept, in descending order, with their
/// orthonormal eigenvectors as columns of v_hat.
struct ReducedSystem {
    int q = 0;
    Eigen::VectorXd s_hat;  // q positive values, nonincreasing
    Eigen::MatrixXd v_hat;  // n x q
};

ReducedSystem reduce(const IdentificationSystem& sys, double svd_tol);

struct FitReport {
    KernelVector x_star;
    std::vector<double> predictions;
    double residual_rms = 0.0;
    double objective = 0.0;  // (1/T) sum of half squared residuals
    int q = 0;
    double svd_tol = 0.0;
    bool converged = true;     // false when the active-set iteration hit its cap
    int iterations = 0;        // active-set iterations used
    double kkt_residual = 0.0; // active-set optimality residual
};

/// Minimum-norm least-squares fit through the reduced system:
/// z* = s_hat^-1 v_hat^T Delta^T y, x* = v_hat z*.
FitReport solve(const IdentificationSystem& sys, double svd_tol);

/// Same objective with the cell entries constrained nonnegative (the
/// constant c stays free), via a Lawson-Hanson style active-set iteration
/// with rank-safe subproblem solves. max_iterations 0 picks 3n + 50.
FitReport solve_nonneg(const IdentificationSystem& sys, double svd_tol,
                       int max_iterations = 0);

/// Held-out RMS per contiguous fold: train on the complement, evaluate on the
/// fold. Requires 2 <= folds <= T.
std::vector<double> cross_validate(const IdentificationSystem& sys, int folds, double svd_tol);

/// Exact integer Gram matrix Delta^T Delta (row-major, n x n).
std::vector<std::int64_t> gram_int(const SignMatrix& delta);

/// Dense copy of the sign matrix.
Eigen::MatrixXd delta_dense(const SignMatrix& delta);

/// Half squared residual f(x) = 1/2 ||Delta x - y||^2.
double objective_half_sq(const IdentificationSystem& sys, const KernelVector& x);

/// Reduced objective g(z) = 1/2 z^T s_hat z - (y^T Delta v_hat) z, satisfying
/// g(z) = f(v_hat z) - 1/2 ||y||^2.
double reduced_objective(const ReducedSystem& rd, const IdentificationSystem& sys,
                         const Eigen::VectorXd& z);

} // namespace preisach
