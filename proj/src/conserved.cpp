#include "ptsym/conserved.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace ptsym {

namespace {

Eigen::Map<const Vector> vectorized(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix stack_columns(const std::vector<Matrix>& mats, bool normalize) {
    if (mats.empty()) return Matrix();
    const Eigen::Index n = mats.front().size();
    Matrix out(n, static_cast<Eigen::Index>(mats.size()));
    for (std::size_t i = 0; i < mats.size(); ++i) {
        Vector col = vectorized(mats[i]);
        if (normalize) {
            const double norm = col.norm();
            if (norm > 0.0) col /= norm;
        }
        out.col(static_cast<Eigen::Index>(i)) = col;
    }
    return out;
}

Matrix orthonormal_basis(const std::vector<Matrix>& mats) {
    const Matrix stacked = stack_columns(mats, /*normalize=*/true);
    const Eigen::HouseholderQR<Matrix> qr(stacked);
    Matrix q = qr.householderQ() * Matrix::Identity(stacked.rows(), stacked.cols());
    return q;
}

} // namespace

IntertwinerSet recursive_intertwiners(const PTModel& model, double tol) {
    IntertwinerSet set;
    set.etas.reserve(static_cast<std::size_t>(model.d));
    set.etas.push_back(model.P);
    for (int i = 1; i < model.d; ++i) {
        set.etas.push_back(set.etas.back() * model.H / model.J);
    }

    const double hnorm = model.H.norm();
    set.residuals.reserve(set.etas.size());
    for (const Matrix& eta : set.etas) {
        const Matrix defect = eta * model.H - model.H.adjoint() * eta;
        const double scale = std::max(eta.norm() * hnorm, 1e-300);
        set.residuals.push_back(defect.norm() / scale);
    }

    set.gram_rank = numerical_rank(stack_columns(set.etas, /*normalize=*/true), tol);
    set.independent = set.gram_rank == model.d;
    return set;
}

std::vector<Matrix> intertwiner_space(const Matrix& H, double tol) {
    require_finite(H, "intertwiner_space");
    if (H.rows() != H.cols()) throw WrongDimension("intertwiner_space: square input required");
    const Eigen::Index d = H.rows();

    // vec(eta H - H^dag eta) = (H^T (x) 1 - 1 (x) H^dag) vec(eta),
    // with kron(A, B) block (i,j) = A(i,j) B in column-major vec convention.
    const Matrix ht = H.transpose();
    const Matrix hd = H.adjoint();
    Matrix system = Matrix::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            system.block(i * d, j * d, d, d) = ht(i, j) * Matrix::Identity(d, d);
            if (i == j) system.block(i * d, j * d, d, d) -= hd;
        }
    }

    std::vector<Matrix> basis;
    for (const Vector& v : nullspace(system, tol)) {
        basis.push_back(Eigen::Map<const Matrix>(v.data(), d, d));
    }
    return basis;
}

double expectation(const Matrix& eta, const Vector& psi) {
    if (eta.rows() != eta.cols() || eta.rows() != psi.size()) {
        throw WrongDimension("expectation: dimension mismatch");
    }
    const Complex value = psi.dot(eta * psi); // conjugates the left argument
    const double scale = eta.norm() * psi.squaredNorm();
    if (std::abs(value.imag()) > 1e-10 * std::max(scale, 1e-300)) {
        throw NotHermitian("expectation: imaginary part " +
                           std::to_string(value.imag()) +
                           " exceeds Hermiticity tolerance");
    }
    return value.real();
}

double eta1_nonlocal(const Vector& psi) {
    if (psi.size() != 4) throw WrongDimension("eta1_nonlocal: defined for d = 4");
    Complex sum = 0.0;
    for (int k = 0; k < 4; ++k) {
        sum += std::conj(psi(3 - k)) * psi(k);
    }
    return sum.real();
}

Matrix eta_eigenbasis(const IntertwinerSet& set, const PTModel& model) {
    if (set.etas.empty()) throw Error("eta_eigenbasis: empty intertwiner set");
    const Matrix& eta1 = set.etas.front();
    const int d = model.d;

    const Eigen::SelfAdjointEigenSolver<Matrix> es(eta1);
    if (es.info() != Eigen::Success) {
        throw NonConvergence("eta_eigenbasis: eigensolver failed");
    }
    const auto& ew = es.eigenvalues(); // ascending
    const Matrix& ev = es.eigenvectors();

    const Matrix sx = spin_xz(d).sx;
    const double cluster_tol = 1e-8 * std::max(eta1.norm(), 1.0);

    Matrix basis(d, d);
    int written = 0;
    int hi = d - 1;
    while (hi >= 0) { // walk clusters from the largest eta_1 eigenvalue down
        int lo = hi;
        while (lo > 0 && std::abs(ew(lo - 1) - ew(hi)) <= cluster_tol) --lo;
        const int width = hi - lo + 1;
        const Matrix sub = ev.middleCols(lo, width);
        const Matrix projected = sub.adjoint() * sx * sub;
        const Eigen::SelfAdjointEigenSolver<Matrix> inner(projected);
        const Matrix refined = sub * inner.eigenvectors(); // ascending Sx
        for (int c = 0; c < width; ++c) {
            basis.col(written++) = phase_fixed(refined.col(c));
        }
        hi = lo - 1;
    }
    return basis;
}

namespace {

double max_sine_outside(const Matrix& a_basis, const Matrix& b_basis) {
    if (a_basis.cols() == 0) return 0.0;
    const Matrix residual = a_basis - b_basis * (b_basis.adjoint() * a_basis);
    const Eigen::JacobiSVD<Matrix> svd(residual);
    return std::min(1.0, svd.singularValues()(0));
}

} // namespace

double max_principal_angle(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
    if (a.size() != b.size()) {
        throw WrongDimension("max_principal_angle: subspace dimensions differ");
    }
    if (a.empty()) return 0.0;
    const Matrix qa = orthonormal_basis(a);
    const Matrix qb = orthonormal_basis(b);
    return std::asin(std::max(max_sine_outside(qa, qb), max_sine_outside(qb, qa)));
}

double containment_defect(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
    if (a.empty()) return 0.0;
    if (b.empty()) return 1.0;
    return max_sine_outside(orthonormal_basis(a), orthonormal_basis(b));
}

} // namespace ptsym
