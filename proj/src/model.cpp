#include "ptsym/model.hpp"

#include <cmath>

namespace ptsym {

namespace {

constexpr double kStructureTol = 1e-12;

double rel_defect(const Matrix& defect, const Matrix& reference) {
    const double scale = reference.norm();
    if (scale <= 0.0) return defect.norm();
    return defect.norm() / scale;
}

} // namespace

SpinOperators spin_xz(int d) {
    if (d < 2) throw DimensionTooSmall("spin_xz: need d >= 2");
    const double j = 0.5 * (d - 1);

    SpinOperators ops;
    ops.sx = Matrix::Zero(d, d);
    ops.sz = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        ops.sz(k, k) = j - k;
    }
    for (int k = 1; k < d; ++k) {
        const double c = 0.5 * std::sqrt(static_cast<double>(k) * (d - k));
        ops.sx(k - 1, k) = c;
        ops.sx(k, k - 1) = c;
    }
    return ops;
}

Matrix parity(int d) {
    if (d < 1) throw DimensionTooSmall("parity: need d >= 1");
    Matrix p = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) p(k, d - 1 - k) = 1.0;
    return p;
}

SymmetryReport check_symmetries(const Matrix& H, const Matrix& P) {
    if (H.rows() != H.cols() || P.rows() != P.cols() || H.rows() != P.rows()) {
        throw WrongDimension("check_symmetries: dimension mismatch");
    }
    SymmetryReport r;
    r.pt_residual = rel_defect(P * H.conjugate() * P - H, H);
    r.transpose_residual = rel_defect(H.transpose() - H, H);
    r.hermitian_residual = rel_defect(H.adjoint() - H, H);
    return r;
}

PTModel make_pt_model(Matrix H, Matrix P, double J, double gamma) {
    require_finite(H, "make_pt_model");
    require_finite(P, "make_pt_model");
    if (J <= 0.0) throw Error("make_pt_model: J must be positive");
    if (gamma < 0.0) throw Error("make_pt_model: gamma must be >= 0");

    const int d = static_cast<int>(H.rows());
    const Matrix inv = P * P - Matrix::Identity(d, d);
    if (inv.norm() > kStructureTol * d) {
        throw Error("make_pt_model: parity is not involutory");
    }
    const SymmetryReport rep = check_symmetries(H, P);
    if (rep.pt_residual > kStructureTol) {
        throw Error("make_pt_model: PT symmetry violated (residual " +
                    std::to_string(rep.pt_residual) + ")");
    }
    if (rep.transpose_residual > kStructureTol) {
        throw Error("make_pt_model: transpose symmetry violated; the conserved-set "
                    "construction is only valid for H = H^T");
    }

    PTModel m;
    m.d = d;
    m.J = J;
    m.gamma = gamma;
    m.H = std::move(H);
    m.P = std::move(P);
    return m;
}

PTModel build_hpt(int d, double J, double gamma) {
    if (J <= 0.0) throw Error("build_hpt: J must be positive");
    if (gamma < 0.0) throw Error("build_hpt: gamma must be >= 0");
    const SpinOperators ops = spin_xz(d);
    const Matrix H = -J * ops.sx + Complex(0.0, 1.0) * gamma * ops.sz;
    return make_pt_model(H, parity(d), J, gamma);
}

LossyForm to_lossy(const PTModel& model) {
    double shift = 0.0;
    for (int k = 0; k < model.d; ++k) {
        shift = std::max(shift, model.H(k, k).imag());
    }
    LossyForm out;
    out.shift = shift;
    out.H_L = model.H - Complex(0.0, shift) * Matrix::Identity(model.d, model.d);
    return out;
}

StateName parse_state_name(const std::string& name) {
    if (name == "psi1") return StateName::Psi1;
    if (name == "psi2") return StateName::Psi2;
    if (name == "psi3") return StateName::Psi3;
    if (name == "psi4") return StateName::Psi4;
    if (name == "E1") return StateName::E1;
    if (name == "E2") return StateName::E2;
    if (name == "E3") return StateName::E3;
    if (name == "E4") return StateName::E4;
    if (name == "v1") return StateName::V1;
    if (name == "v2") return StateName::V2;
    if (name == "v3") return StateName::V3;
    if (name == "v4") return StateName::V4;
    throw ConfigError("unknown state name '" + name + "'");
}

std::string to_string(StateName name) {
    switch (name) {
        case StateName::Psi1: return "psi1";
        case StateName::Psi2: return "psi2";
        case StateName::Psi3: return "psi3";
        case StateName::Psi4: return "psi4";
        case StateName::E1: return "E1";
        case StateName::E2: return "E2";
        case StateName::E3: return "E3";
        case StateName::E4: return "E4";
        case StateName::V1: return "v1";
        case StateName::V2: return "v2";
        case StateName::V3: return "v3";
        case StateName::V4: return "v4";
    }
    return "?";
}

bool is_eta_eigenstate(StateName name) {
    return name == StateName::V1 || name == StateName::V2 ||
           name == StateName::V3 || name == StateName::V4;
}

namespace {

Vector eigenmode(int j, const PTModel& model) {
    const EigResult res = eig(model.H);
    if (res.defective_flag) {
        if (j != 1) {
            throw DefectiveEigenbasis(
                "canonical_state: the spectrum is defective; only E1 (the sole "
                "eigenvector) exists at the exceptional point");
        }
        // Sole eigenvector of the coalesced eigenvalue.
        const Complex mean = res.eigenvalues.mean();
        const Matrix shifted =
            model.H - mean * Matrix::Identity(model.d, model.d);
        const auto kernel = nullspace(shifted, 1e-8);
        if (kernel.empty()) {
            throw DefectiveEigenbasis(
                "canonical_state: no eigenvector found at coalesced eigenvalue");
        }
        return phase_fixed(kernel.front());
    }
    if (j < 1 || j > model.d) {
        throw WrongDimension("canonical_state: eigenmode index out of range");
    }
    return res.right_eigenvectors.col(j - 1);
}

} // namespace

Vector canonical_state(StateName name, const PTModel& model) {
    const int d = model.d;
    Vector v = Vector::Zero(d);
    switch (name) {
        case StateName::Psi1:
            v(0) = 1.0;
            return v;
        case StateName::Psi2:
            v.setConstant(1.0 / std::sqrt(static_cast<double>(d)));
            return v;
        case StateName::Psi3:
            v(0) = 1.0 / std::sqrt(3.0);
            v(d - 1) = std::sqrt(2.0 / 3.0);
            return v;
        case StateName::Psi4:
            v(0) = 1.0 / std::sqrt(2.0);
            v(d - 1) = 1.0 / std::sqrt(2.0);
            return v;
        case StateName::E1: return eigenmode(1, model);
        case StateName::E2: return eigenmode(2, model);
        case StateName::E3: return eigenmode(3, model);
        case StateName::E4: return eigenmode(4, model);
        default:
            throw ConfigError(
                "canonical_state: " + to_string(name) +
                " is an intertwiner eigenstate; build it with eta_eigenbasis");
    }
}

PTModel random_pt_model(int d, std::mt19937_64& rng) {
    if (d < 2) throw DimensionTooSmall("random_pt_model: need d >= 2");
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const Matrix P = parity(d);

    for (int attempt = 0; attempt < 256; ++attempt) {
        Eigen::MatrixXd a0(d, d), c0(d, d);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                a0(i, j) = uni(rng);
                c0(i, j) = uni(rng);
            }
        }
        Eigen::MatrixXd a = 0.5 * (a0 + a0.transpose());
        Eigen::MatrixXd c = 0.5 * (c0 + c0.transpose());
        const Eigen::MatrixXd pr = P.real();
        a = 0.5 * (a + pr * a * pr);
        c = 0.5 * (c - pr * c * pr);

        const Matrix H = a.cast<Complex>() + Complex(0.0, 1.0) * c.cast<Complex>();
        const EigResult res = eig(H);

        double spread = 0.0;
        double min_gap = std::numeric_limits<double>::infinity();
        for (int i = 0; i < d; ++i) {
            for (int j = i + 1; j < d; ++j) {
                const double gap = std::abs(res.eigenvalues(i) - res.eigenvalues(j));
                min_gap = std::min(min_gap, gap);
                spread = std::max(spread, gap);
            }
        }
        if (min_gap > 0.02 * std::max(spread, 1.0) && !res.defective_flag) {
            return make_pt_model(H, P, 1.0, 0.0);
        }
    }
    throw Error("random_pt_model: failed to draw a non-degenerate model");
}

} // namespace ptsym
