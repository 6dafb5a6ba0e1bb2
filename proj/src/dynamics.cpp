#include "ptsym/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace ptsym {

bool ObservableSeries::all_defined() const {
    return std::all_of(defined.begin(), defined.end(),
                       [](std::uint8_t f) { return f != 0; });
}

std::vector<double> time_grid(double t_max, int samples) {
    if (samples < 2) throw Error("time_grid: need at least 2 samples");
    if (t_max <= 0.0) throw Error("time_grid: t_max must be positive");
    std::vector<double> grid(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        grid[static_cast<std::size_t>(k)] = t_max * k / (samples - 1);
    }
    return grid;
}

Matrix propagator(const PTModel& model, double t, const ExpmOptions& opts) {
    return expm(Complex(0.0, -t) * model.H, opts);
}

namespace {

void validate_evolve_args(const PTModel& model, const Vector& psi0,
                          const std::vector<double>& times) {
    if (psi0.size() != model.d) throw WrongDimension("evolve: state/model size mismatch");
    if (psi0.norm() <= 0.0) throw Error("evolve: initial state must be nonzero");
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) {
            throw Error("evolve: times must be strictly increasing");
        }
    }
}

Vector sample_state(const PTModel& model, const Vector& psi0, double t,
                    const ExpmOptions& opts) {
    if (t == 0.0) return psi0;
    Vector out = propagator(model, t, opts) * psi0;
    if (!out.allFinite()) {
        throw OverflowRisk("evolve: state overflowed at t = " + std::to_string(t));
    }
    return out;
}

} // namespace

Trajectory evolve(const PTModel& model, const Vector& psi0,
                  const std::vector<double>& times, const EvolveOptions& opts) {
    validate_evolve_args(model, psi0, times);
    const ExpmOptions eopts{opts.expm_norm_bound};

    Trajectory traj;
    traj.times = times;
    traj.model = model;
    traj.states.resize(times.size());

    // Exceptions cannot leave an OpenMP region; capture the first one and
    // rethrow after the loop joins.
    std::exception_ptr failure = nullptr;
    const auto n = static_cast<std::ptrdiff_t>(times.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        try {
            traj.states[static_cast<std::size_t>(k)] =
                sample_state(model, psi0, times[static_cast<std::size_t>(k)], eopts);
        } catch (...) {
#pragma omp critical
            {
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    return traj;
}

Trajectory evolve_serial(const PTModel& model, const Vector& psi0,
                         const std::vector<double>& times, const EvolveOptions& opts) {
    validate_evolve_args(model, psi0, times);
    const ExpmOptions eopts{opts.expm_norm_bound};

    Trajectory traj;
    traj.times = times;
    traj.model = model;
    traj.states.reserve(times.size());
    for (double t : times) {
        traj.states.push_back(sample_state(model, psi0, t, eopts));
    }
    return traj;
}

ObservableSeries norm_series(const Trajectory& traj) {
    ObservableSeries s;
    s.times = traj.times;
    s.label = "norm";
    s.values.reserve(traj.states.size());
    s.defined.assign(traj.states.size(), 1);
    for (const Vector& psi : traj.states) {
        s.values.push_back(psi.squaredNorm());
    }
    return s;
}

std::vector<ObservableSeries> conserved_series(const Trajectory& traj,
                                               const IntertwinerSet& set) {
    std::vector<ObservableSeries> out;
    out.reserve(set.etas.size());
    for (std::size_t i = 0; i < set.etas.size(); ++i) {
        ObservableSeries s;
        s.times = traj.times;
        s.label = "eta_" + std::to_string(i + 1);
        s.defined.assign(traj.states.size(), 1);
        s.values.reserve(traj.states.size());
        for (const Vector& psi : traj.states) {
            s.values.push_back(expectation(set.etas[i], psi));
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<ObservableSeries> phase_diff_series(const Trajectory& traj) {
    const int d = traj.model.d;
    std::vector<ObservableSeries> out;
    out.reserve(static_cast<std::size_t>(d - 1));
    for (int k = 2; k <= d; ++k) {
        ObservableSeries s;
        s.times = traj.times;
        s.label = "theta_" + std::to_string(k);
        s.values.assign(traj.states.size(), 0.0);
        s.defined.assign(traj.states.size(), 1);
        out.push_back(std::move(s));
    }

    constexpr double two_pi = 2.0 * M_PI;
    for (std::size_t n = 0; n < traj.states.size(); ++n) {
        const Vector& psi = traj.states[n];
        const double floor = 1e-12 * psi.norm();
        for (int k = 1; k < d; ++k) {
            auto& s = out[static_cast<std::size_t>(k - 1)];
            if (std::abs(psi(k)) < floor || std::abs(psi(k - 1)) < floor) {
                s.defined[n] = 0;
                continue;
            }
            double theta = std::arg(psi(k)) - std::arg(psi(k - 1));
            theta = std::remainder(theta, two_pi); // (-pi, pi], modulo sign of pi
            if (theta <= -M_PI) theta = M_PI;
            s.values[n] = theta;
        }
    }
    return out;
}

std::vector<ObservableSeries> angle_series(const Trajectory& traj,
                                           const Matrix& basis) {
    const int d = traj.model.d;
    if (basis.rows() != d) throw WrongDimension("angle_series: basis/model mismatch");

    std::vector<ObservableSeries> out;
    out.reserve(static_cast<std::size_t>(basis.cols()));
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        ObservableSeries s;
        s.times = traj.times;
        s.label = "phi_" + std::to_string(j + 1);
        s.defined.assign(traj.states.size(), 1);
        s.values.reserve(traj.states.size());
        for (const Vector& psi : traj.states) {
            const Vector v = basis.col(j);
            const Complex overlap = v.dot(psi);
            const double rest = (psi - overlap * v).norm();
            s.values.push_back(std::atan2(rest, std::abs(overlap)));
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace ptsym
