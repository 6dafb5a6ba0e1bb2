#pragma once

#include <vector>

#include "ptsym/model.hpp"

namespace ptsym {

/// The complete set of intertwining observables eta_i, eta H = H^dag eta.
///
/// eta_1 is the parity operator; eta_i = eta_{i-1} H / J. Every member is
/// Hermitian for the transpose-symmetric class, so its expectation value is
/// real and conserved under exp(-i H t).
struct IntertwinerSet {
    std::vector<Matrix> etas;      // eta_1 .. eta_d, dimensionless
    std::vector<double> residuals; // ||eta H - H^dag eta|| / (||eta|| ||H||)
    int gram_rank = 0;             // rank of the Gram matrix of vec(eta_i)
    bool independent = false;      // gram_rank == d
};

IntertwinerSet recursive_intertwiners(const PTModel& model,
                                      double tol = kRankTolerance);

/// Orthonormal (trace inner product) basis of {eta : eta H = H^dag eta},
/// from the null space of the vectorized d^2 x d^2 linear system. Serves as
/// the independent route against the recursive construction.
std::vector<Matrix> intertwiner_space(const Matrix& H, double tol = kRankTolerance);

/// <psi| eta |psi> for Hermitian eta. Throws NotHermitian when the imaginary
/// part exceeds 1e-10 ||eta|| ||psi||^2.
double expectation(const Matrix& eta, const Vector& psi);

/// Site-amplitude form of the parity expectation for d = 4:
/// sum_k conj(a_{5-k}) a_k. Agrees with expectation(parity(4), psi).
double eta1_nonlocal(const Vector& psi);

/// Orthonormal eigenbasis v_1..v_d of eta_1 (columns). Degenerate eta_1
/// eigenspaces are split by co-diagonalizing with the Hermitian-limit
/// Hamiltonian -J Sx (which commutes with parity). Ordered by descending
/// eta_1 eigenvalue, then ascending Sx eigenvalue.
Matrix eta_eigenbasis(const IntertwinerSet& set, const PTModel& model);

/// Largest principal angle between equal-dimension spans (radians).
/// Columns of each argument need not be orthonormal.
double max_principal_angle(const std::vector<Matrix>& a, const std::vector<Matrix>& b);

/// sin of the largest angle by which span(a) sticks out of span(b).
double containment_defect(const std::vector<Matrix>& a, const std::vector<Matrix>& b);

} // namespace ptsym
