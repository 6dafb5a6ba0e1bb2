#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ptsym/linalg.hpp"
#include "ptsym/model.hpp"

using namespace ptsym;

namespace {

Matrix random_complex(int rows, int cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m(i, j) = Complex(uni(rng), uni(rng));
    }
    return m;
}

// Random matrix with prescribed singular values (controlled condition).
Matrix random_with_condition(int d, double cond, std::mt19937_64& rng) {
    const Matrix u = Eigen::HouseholderQR<Matrix>(random_complex(d, d, rng))
                         .householderQ();
    const Matrix v = Eigen::HouseholderQR<Matrix>(random_complex(d, d, rng))
                         .householderQ();
    Eigen::VectorXd sv(d);
    for (int i = 0; i < d; ++i) {
        sv(i) = std::pow(cond, -static_cast<double>(i) / std::max(1, d - 1));
    }
    return u * sv.asDiagonal().toDenseMatrix().cast<Complex>() * v.adjoint();
}

} // namespace

TEST_CASE("eig: hermitian-limit ladder spectrum is the spin ladder") {
    const PTModel model = build_hpt(4, 1.0, 0.0);
    const EigResult res = eig(model.H);
    const double expected[] = {-1.5, -0.5, 0.5, 1.5};
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(res.eigenvalues(i) - expected[i]) < 1e-12);
    }
    CHECK_FALSE(res.defective_flag);
}

TEST_CASE("eig: zero matrix is not defective") {
    const EigResult res = eig(Matrix::Zero(3, 3));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(res.eigenvalues(i)) == 0.0);
    CHECK_FALSE(res.defective_flag);
    CHECK(res.eigvec_condition == doctest::Approx(1.0));
}

TEST_CASE("eig: ladder spectrum below threshold follows the closed form") {
    // Independent oracle: {±1/2, ±3/2} sqrt(J^2 - gamma^2).
    const double gamma = 0.2;
    const double scale = std::sqrt(1.0 - gamma * gamma);
    const PTModel model = build_hpt(4, 1.0, gamma);
    const EigResult res = eig(model.H);
    const double expected[] = {-1.5 * scale, -0.5 * scale, 0.5 * scale, 1.5 * scale};
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(res.eigenvalues(i) - expected[i]) < 1e-10);
        CHECK(std::abs(res.eigenvalues(i).imag()) < 1e-10);
    }
    // Residual contract.
    for (int i = 0; i < 4; ++i) {
        const Vector v = res.right_eigenvectors.col(i);
        CHECK((model.H * v - res.eigenvalues(i) * v).norm() <=
              1e-10 * model.H.norm());
    }
}

TEST_CASE("eig: defective at the exceptional point") {
    const PTModel model = build_hpt(4, 1.0, 1.0);
    const EigResult res = eig(model.H);
    CHECK(res.defective_flag);
    CHECK(res.eigvec_condition > kDefectiveCondition);
}

TEST_CASE("eig: eigenvalue ordering is (real, imaginary)") {
    std::mt19937_64 rng(7);
    const Matrix m = random_complex(6, 6, rng);
    const EigResult res = eig(m);
    for (int i = 1; i < 6; ++i) {
        const Complex a = res.eigenvalues(i - 1), b = res.eigenvalues(i);
        CHECK((a.real() < b.real() ||
               (a.real() == b.real() && a.imag() <= b.imag())));
    }
}

TEST_CASE("expm: zero maps to identity") {
    const Matrix r = expm(Matrix::Zero(3, 3));
    CHECK((r - Matrix::Identity(3, 3)).norm() < 1e-15);
}

TEST_CASE("expm: scalar exponentials on the diagonal") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = Complex(0.0, M_PI);
    m(1, 1) = Complex(0.0, -M_PI);
    const Matrix r = expm(m);
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = -1.0;
    expected(1, 1) = -1.0;
    CHECK((r - expected).norm() < 1e-13);
}

TEST_CASE("expm: terminated series at the nilpotent exceptional point") {
    const PTModel model = build_hpt(4, 1.0, 1.0);
    const Matrix& h = model.H;
    const Matrix id = Matrix::Identity(4, 4);
    for (double t : {0.5, 2.0, 7.5, 20.0}) {
        const Matrix a = Complex(0.0, -t) * h;
        const Matrix series = id + a + a * a / 2.0 + a * a * a / 6.0;
        const Matrix computed = expm(a);
        CHECK((computed - series).norm() <= 1e-12 * series.norm());
    }
}

TEST_CASE("expm: OverflowRisk beyond the configured bound") {
    const Matrix m = 300.0 * Matrix::Identity(2, 2);
    CHECK_THROWS_AS(expm(m), OverflowRisk);
    ExpmOptions opts;
    opts.norm_bound = 1000.0;
    CHECK_NOTHROW(expm(m, opts));
}

TEST_CASE("expm: inverse pairing for random matrices up to norm 10") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 30; ++k) {
        const int d = 2 + k % 7;
        Matrix a = random_complex(d, d, rng);
        a *= (0.5 + 9.5 * (k % 10) / 10.0) / a.norm();
        const Matrix prod = expm(a) * expm(-a);
        CHECK((prod - Matrix::Identity(d, d)).norm() < 1e-10);
    }
}

TEST_CASE("expm: similarity covariance") {
    std::mt19937_64 rng(13);
    for (int k = 0; k < 10; ++k) {
        const int d = 3 + k % 4;
        Matrix a = random_complex(d, d, rng);
        a *= 3.0 / a.norm();
        const Matrix p = random_with_condition(d, 50.0, rng);
        const Matrix pinv = p.partialPivLu().solve(Matrix::Identity(d, d));
        CHECK(condition_number(p) < 1e3);
        const Matrix left = expm(p * a * pinv);
        const Matrix right = p * expm(a) * pinv;
        CHECK((left - right).norm() < 1e-10 * right.norm() + 1e-10);
    }
}

TEST_CASE("expm: matches exact diagonalization on normal matrices") {
    // For skew-Hermitian input the spectral route is an independent oracle:
    // e^M = Q e^L Q^dag with Q unitary, and e^M itself is unitary.
    std::mt19937_64 rng(19);
    for (double target_norm : {1.0, 10.0, 50.0}) {
        const int d = 5;
        Matrix a = random_complex(d, d, rng);
        Matrix skew = 0.5 * (a - a.adjoint());
        skew *= target_norm / skew.norm();

        const Eigen::SelfAdjointEigenSolver<Matrix> es(Complex(0.0, -1.0) * skew);
        Vector phases(d);
        for (int i = 0; i < d; ++i) {
            phases(i) = std::exp(Complex(0.0, es.eigenvalues()(i)));
        }
        const Matrix spectral = es.eigenvectors() * phases.asDiagonal() *
                                es.eigenvectors().adjoint();
        const Matrix computed = expm(skew);
        CHECK((computed - spectral).norm() <= 1e-12 * std::sqrt(double(d)));
        CHECK((computed.adjoint() * computed - Matrix::Identity(d, d)).norm() <=
              1e-12);
    }
}

TEST_CASE("nullspace: rectangular inputs") {
    std::mt19937_64 rng(29);
    // 3x5: rank <= 3, so at least two null directions.
    const Matrix wide = random_complex(3, 5, rng);
    const auto wide_basis = nullspace(wide);
    CHECK(wide_basis.size() == 2);
    for (const auto& v : wide_basis) CHECK((wide * v).norm() < 1e-12);

    // 5x3 full column rank: trivial null space.
    const Matrix tall = random_complex(5, 3, rng);
    CHECK(nullspace(tall).empty());

    // 5x3 with a dependent column.
    Matrix deficient = tall;
    deficient.col(2) = 2.0 * tall.col(0) - tall.col(1);
    CHECK(nullspace(deficient).size() == 1);
}

TEST_CASE("eig: reconstruction of diagonalizable random matrices") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 10; ++k) {
        const int d = 3 + k % 5;
        const Matrix m = random_complex(d, d, rng);
        const EigResult res = eig(m);
        REQUIRE_FALSE(res.defective_flag);
        const Matrix& v = res.right_eigenvectors;
        const Matrix rebuilt =
            v * res.eigenvalues.asDiagonal() *
            v.partialPivLu().solve(Matrix::Identity(d, d));
        CHECK((rebuilt - m).norm() <= 1e-9 * m.norm());
    }
}

TEST_CASE("nullspace: identity has none, zero has everything") {
    CHECK(nullspace(Matrix::Identity(4, 4)).empty());
    const auto basis = nullspace(Matrix::Zero(2, 2));
    REQUIRE(basis.size() == 2);
    CHECK(std::abs(basis[0].dot(basis[1])) < 1e-14);
    CHECK(basis[0].norm() == doctest::Approx(1.0));
}

TEST_CASE("nullspace: vectorized intertwining system of the ladder") {
    // Brute-force construction of the d^2 x d^2 system in the test itself.
    const PTModel model = build_hpt(4, 1.0, 0.5);
    const Matrix& h = model.H;
    const int d = 4;
    Matrix system = Matrix::Zero(d * d, d * d);
    const Matrix ht = h.transpose();
    const Matrix hd = h.adjoint();
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            system.block(i * d, j * d, d, d) = ht(i, j) * Matrix::Identity(d, d);
            if (i == j) system.block(i * d, j * d, d, d) -= hd;
        }
    }
    const auto basis = nullspace(system);
    CHECK(basis.size() == 4);
    for (const auto& v : basis) CHECK((system * v).norm() < 1e-10);
}

TEST_CASE("nullspace: dimension plus rank equals column count") {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 12; ++k) {
        const int d = 3 + k % 5;
        const int rank = k % d;
        // Rank-deficient by construction.
        const Matrix m = random_complex(d, rank == 0 ? 1 : rank, rng) *
                         random_complex(rank == 0 ? 1 : rank, d, rng) *
                         (rank == 0 ? 0.0 : 1.0);
        const int computed_rank = numerical_rank(m);
        const auto basis = nullspace(m);
        CHECK(computed_rank == (rank == 0 ? 0 : rank));
        CHECK(static_cast<int>(basis.size()) + computed_rank == d);
    }
}

TEST_CASE("rank_profile: single length-4 Jordan chain at the EP") {
    const PTModel model = build_hpt(4, 1.0, 1.0);
    const auto ranks = rank_profile(model.H, 0.0, 4);
    CHECK(ranks == std::vector<int>{3, 2, 1, 0});
}

TEST_CASE("rank_profile: identity at its eigenvalue") {
    const auto ranks = rank_profile(Matrix::Identity(3, 3), 1.0, 2);
    CHECK(ranks == std::vector<int>{0, 0});
}

TEST_CASE("rank_profile: simple eigenvalue keeps deficiency one") {
    const PTModel model = build_hpt(4, 1.0, 0.0);
    const auto ranks = rank_profile(model.H, 0.5, 2);
    CHECK(ranks == std::vector<int>{3, 3});
}

TEST_CASE("phase_fixed: largest component becomes real positive") {
    Vector v(3);
    v << Complex(0.1, 0.2), Complex(-0.3, 0.4), Complex(0.0, 0.1);
    const Vector w = phase_fixed(v);
    CHECK(w(1).imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(w(1).real() > 0.0);
    CHECK(std::abs(w.norm() - v.norm()) < 1e-14);
}
