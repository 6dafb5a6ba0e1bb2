#include "ptsym/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace ptsym {

bool is_finite(const Matrix& m) {
    return m.allFinite();
}

void require_finite(const Matrix& m, const char* where) {
    if (!m.allFinite()) {
        throw Error(std::string(where) + ": matrix has non-finite entries");
    }
}

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return (a - b).norm() <= tol;
}

Vector phase_fixed(const Vector& v) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i));
        if (a > best) {
            best = a;
            imax = i;
        }
    }
    if (best <= 0.0) return v;
    return v * (std::conj(v(imax)) / best);
}

double condition_number(const Matrix& m) {
    const Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return 0.0;
    const double smin = s(s.size() - 1);
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

EigResult eig(const Matrix& m) {
    require_finite(m, "eig");
    if (m.rows() != m.cols()) throw WrongDimension("eig: matrix must be square");
    const Eigen::Index d = m.rows();

    Eigen::ComplexEigenSolver<Matrix> solver(m, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
        const long budget =
            static_cast<long>(Eigen::ComplexSchur<Matrix>::m_maxIterationsPerRow) * d;
        throw NonConvergence("eig: QR iteration failed after " +
                             std::to_string(budget) + " iterations");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    const Vector& raw = solver.eigenvalues();
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (raw(a).real() != raw(b).real()) return raw(a).real() < raw(b).real();
        return raw(a).imag() < raw(b).imag();
    });

    EigResult out;
    out.eigenvalues.resize(d);
    out.right_eigenvectors.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        out.eigenvalues(i) = raw(order[static_cast<std::size_t>(i)]);
        Vector v = solver.eigenvectors().col(order[static_cast<std::size_t>(i)]);
        const double n = v.norm();
        if (n > 0.0) v /= n;
        out.right_eigenvectors.col(i) = phase_fixed(v);
    }

    out.eigvec_condition = condition_number(out.right_eigenvectors);
    out.defective_flag = !(out.eigvec_condition <= kDefectiveCondition);

    if (!out.defective_flag) {
        const double scale = m.norm();
        const double bound = 1e-10 * std::max(scale, 1e-300);
        for (Eigen::Index i = 0; i < d; ++i) {
            const Vector v = out.right_eigenvectors.col(i);
            const double res = (m * v - out.eigenvalues(i) * v).norm();
            if (res > bound) {
                throw NonConvergence("eig: residual " + std::to_string(res) +
                                     " exceeds contract after full QR sweep budget");
            }
        }
    }
    return out;
}

namespace {

// Diagonal Pade coefficients and 1-norm switch points from Higham,
// "The scaling and squaring method for the matrix exponential revisited",
// SIAM J. Matrix Anal. Appl. 26(4), 2005.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068;
constexpr double kTheta13 = 5.371920351148152;

Matrix pade_low_order(const Matrix& a, const std::vector<double>& b) {
    const Eigen::Index n = a.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = a * a;

    Matrix even = b[0] * id;
    Matrix odd = b[1] * id;
    Matrix pow = id;
    for (std::size_t k = 2; k < b.size(); k += 2) {
        pow = pow * a2;
        even += b[k] * pow;
        if (k + 1 < b.size()) odd += b[k + 1] * pow;
    }
    const Matrix u = a * odd;
    return (even - u).partialPivLu().solve(even + u);
}

Matrix pade13(const Matrix& a) {
    static const double b[] = {64764752532480000.0, 32382376266240000.0,
                               7771770303897600.0,  1187353796428800.0,
                               129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,
                               1323241920.0,        40840800.0,
                               960960.0,            16380.0,
                               182.0,               1.0};
    const Eigen::Index n = a.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a2 * a4;

    const Matrix u =
        a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
             b[5] * a4 + b[3] * a2 + b[1] * id);
    const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                     b[4] * a4 + b[2] * a2 + b[0] * id;
    return (v - u).partialPivLu().solve(v + u);
}

} // namespace

Matrix expm(const Matrix& m, const ExpmOptions& opts) {
    require_finite(m, "expm");
    if (m.rows() != m.cols()) throw WrongDimension("expm: matrix must be square");

    const double norm1 = m.size() ? m.cwiseAbs().colwise().sum().maxCoeff() : 0.0;
    if (norm1 > opts.norm_bound) {
        throw OverflowRisk("expm: 1-norm " + std::to_string(norm1) +
                           " exceeds bound " + std::to_string(opts.norm_bound));
    }

    if (norm1 <= kTheta3) return pade_low_order(m, {120.0, 60.0, 12.0, 1.0});
    if (norm1 <= kTheta5)
        return pade_low_order(m, {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0});
    if (norm1 <= kTheta7)
        return pade_low_order(
            m, {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0});
    if (norm1 <= kTheta9)
        return pade_low_order(m, {17643225600.0, 8821612800.0, 2075673600.0,
                                  302702400.0, 30270240.0, 2162160.0, 110880.0,
                                  3960.0, 90.0, 1.0});

    int squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
    squarings = std::max(squarings, 0);
    Matrix r = pade13(m * std::ldexp(1.0, -squarings));
    for (int i = 0; i < squarings; ++i) r = r * r;
    return r;
}

std::vector<Vector> nullspace(const Matrix& m, double tol) {
    require_finite(m, "nullspace");
    if (tol <= 0.0) throw Error("nullspace: tolerance must be positive");

    const Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    const Eigen::Index cols = m.cols();
    const Eigen::Index nsv = s.size();

    std::vector<Vector> basis;
    for (Eigen::Index i = 0; i < cols; ++i) {
        const double sv = i < nsv ? s(i) : 0.0;
        if (sv <= tol * smax) basis.push_back(svd.matrixV().col(i));
    }
    return basis;
}

int numerical_rank(const Matrix& m, double tol) {
    const Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return 0;
    const double thresh = tol * s(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > thresh) ++rank;
    }
    return rank;
}

std::vector<int> rank_profile(const Matrix& m, Complex lambda, int kmax, double tol) {
    require_finite(m, "rank_profile");
    if (m.rows() != m.cols()) throw WrongDimension("rank_profile: matrix must be square");
    if (kmax < 1) throw Error("rank_profile: kmax must be >= 1");

    const Eigen::Index d = m.rows();
    const Matrix shifted = m - lambda * Matrix::Identity(d, d);
    const Eigen::JacobiSVD<Matrix> base(shifted);
    const double s1 = base.singularValues()(0);

    std::vector<int> ranks;
    ranks.reserve(static_cast<std::size_t>(kmax));
    Matrix power = Matrix::Identity(d, d);
    double thresh = 1.0;
    for (int k = 1; k <= kmax; ++k) {
        power = power * shifted;
        thresh *= s1; // sigma_max(shifted)^k
        const Eigen::JacobiSVD<Matrix> svd(power);
        const auto& s = svd.singularValues();
        int rank = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            if (s(i) > tol * thresh) ++rank;
        }
        ranks.push_back(rank);
    }
    return ranks;
}

} // namespace ptsym
