#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ptsym/errors.hpp"

namespace ptsym {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Eigenvector-matrix condition number above which a matrix is treated as
/// defective (no trustworthy eigenbasis).
inline constexpr double kDefectiveCondition = 1e8;

/// Default relative threshold for numerical rank / null-space decisions,
/// measured against the largest singular value.
inline constexpr double kRankTolerance = 1e-10;

/// Dense eigendecomposition of a (generally non-normal) complex matrix.
///
/// Eigenvalues are sorted by real part, then imaginary part. Eigenvector
/// columns are unit-norm with the largest-magnitude component rotated to the
/// positive real axis. When `defective_flag` is false every pair satisfies
/// ||H v - lambda v|| <= 1e-10 ||H||.
struct EigResult {
    Vector eigenvalues;
    Matrix right_eigenvectors;
    double eigvec_condition = 0.0;
    bool defective_flag = false;
};

bool is_finite(const Matrix& m);
void require_finite(const Matrix& m, const char* where);

/// Tolerance-based matrix comparison (Frobenius norm).
bool approx_equal(const Matrix& a, const Matrix& b, double tol);

/// Multiply by a unit phase so the largest-magnitude component is real
/// positive (first such component on ties). Zero vectors pass through.
Vector phase_fixed(const Vector& v);

/// 2-norm condition number sigma_max / sigma_min (inf when singular).
double condition_number(const Matrix& m);

EigResult eig(const Matrix& m);

struct ExpmOptions {
    /// Inputs with 1-norm above this bound are rejected with OverflowRisk.
    double norm_bound = 200.0;
};

/// Matrix exponential by scaling and squaring with diagonal Pade
/// approximants (Higham 2005). Valid for defective inputs; never
/// touches an eigendecomposition.
Matrix expm(const Matrix& m, const ExpmOptions& opts = {});

/// Orthonormal basis of the numerical null space. A singular value counts as
/// zero when <= tol * sigma_max; rectangular inputs are fine.
std::vector<Vector> nullspace(const Matrix& m, double tol = kRankTolerance);

/// Number of singular values above tol * sigma_max.
int numerical_rank(const Matrix& m, double tol = kRankTolerance);

/// Ranks of (M - lambda I)^k for k = 1..kmax. The rank threshold for the
/// k-th power is tol * sigma_max(M - lambda I)^k, which stays meaningful
/// when a power vanishes.
std::vector<int> rank_profile(const Matrix& m, Complex lambda, int kmax,
                              double tol = kRankTolerance);

} // namespace ptsym
