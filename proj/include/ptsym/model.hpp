#pragma once

#include <random>
#include <string>

#include "ptsym/linalg.hpp"

namespace ptsym {

/// PT-symmetric, transpose-symmetric Hamiltonian bundle.
///
/// Validated invariants (relative to ||H||): P^2 = 1, P H* P = H, H^T = H.
/// J sets the energy scale (hbar = 1); times are reported in 1/J. For the
/// ladder family H = -J Sx + i gamma Sz; synthetic models keep gamma = 0.
struct PTModel {
    int d = 0;
    double J = 1.0;
    double gamma = 0.0;
    Matrix H;
    Matrix P;
};

struct SymmetryReport {
    double pt_residual = 0.0;        // ||P H* P - H|| / ||H||
    double transpose_residual = 0.0; // ||H^T - H|| / ||H||
    double hermitian_residual = 0.0; // ||H^dag - H|| / ||H||
};

struct SpinOperators {
    Matrix sx;
    Matrix sz;
};

/// Spin-(d-1)/2 matrices: Sz = diag(j, ..., -j) and the symmetric
/// tridiagonal Sx with (Sx)_{k,k+1} = sqrt(k (d-k)) / 2.
SpinOperators spin_xz(int d);

/// Antidiagonal ones.
Matrix parity(int d);

SymmetryReport check_symmetries(const Matrix& H, const Matrix& P);

/// Validating constructor for arbitrary members of the class.
PTModel make_pt_model(Matrix H, Matrix P, double J = 1.0, double gamma = 0.0);

/// The gain-loss ladder H = -J Sx + i gamma Sz with antidiagonal parity.
PTModel build_hpt(int d, double J, double gamma);

struct LossyForm {
    Matrix H_L;   // H - i shift 1, all diagonal imaginary parts <= 0
    double shift; // largest imaginary diagonal entry of H
};

/// Passive (site-selective loss) form; exp(-i H_L t) e^{shift t} = exp(-i H t).
LossyForm to_lossy(const PTModel& model);

enum class StateName {
    Psi1, Psi2, Psi3, Psi4, // site-basis reference states
    E1, E2, E3, E4,         // Hamiltonian eigenmodes, sorted by eigenvalue
    V1, V2, V3, V4,         // conserved-observable eigenstates (see conserved)
};

StateName parse_state_name(const std::string& name);
std::string to_string(StateName name);

/// True for v1..v4, which are built from the intertwiner eigenbasis and are
/// resolved at the scenario layer.
bool is_eta_eigenstate(StateName name);

/// psi1 = |1>, psi2 = uniform, psi3 = (|1> + sqrt(2)|d>)/sqrt(3),
/// psi4 = (|1> + |d>)/sqrt(2); E_j = unit eigenvectors by eigenvalue order.
/// At an exceptional point only E1 (the sole eigenvector) is available.
Vector canonical_state(StateName name, const PTModel& model);

/// Random member of the transpose-symmetric PT class: H = A + iC with A, C
/// real symmetric, PAP = A, PCP = -C, entries from U(-1,1) before
/// symmetrization. Redraws until the spectrum is non-degenerate.
PTModel random_pt_model(int d, std::mt19937_64& rng);

} // namespace ptsym
