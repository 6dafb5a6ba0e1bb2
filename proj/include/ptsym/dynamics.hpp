#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ptsym/conserved.hpp"

namespace ptsym {

/// States sampled at fixed times. Each state is propagated directly from
/// t = 0 (one matrix exponential per sample), so there is no step-to-step
/// integrator drift and samples are independent of each other.
struct Trajectory {
    std::vector<double> times; // strictly increasing, units of 1/J
    std::vector<Vector> states;
    PTModel model;
};

/// A real-valued time series with an explicit per-sample defined mask
/// (phase differences are undefined where an amplitude vanishes).
struct ObservableSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<std::uint8_t> defined;
    std::string label;

    bool all_defined() const;
};

/// Uniform grid 0 .. t_max inclusive.
std::vector<double> time_grid(double t_max, int samples);

Matrix propagator(const PTModel& model, double t, const ExpmOptions& opts = {});

struct EvolveOptions {
    double expm_norm_bound = 200.0;
};

/// Per-sample propagation, parallel over the time grid when OpenMP is
/// enabled. Bit-identical to evolve_serial regardless of thread count.
Trajectory evolve(const PTModel& model, const Vector& psi0,
                  const std::vector<double>& times, const EvolveOptions& opts = {});

/// Reference implementation used by the tests and the benchmark.
Trajectory evolve_serial(const PTModel& model, const Vector& psi0,
                         const std::vector<double>& times,
                         const EvolveOptions& opts = {});

/// N(t) = <psi(t)|psi(t)>.
ObservableSeries norm_series(const Trajectory& traj);

/// eta_i(t) = <psi(t)| eta_i |psi(t)> for every member of the set.
std::vector<ObservableSeries> conserved_series(const Trajectory& traj,
                                               const IntertwinerSet& set);

/// Adjacent-site phase differences theta_k = arg a_k - arg a_{k-1} in
/// (-pi, pi], k = 2..d. Samples where either amplitude is below
/// 1e-12 ||psi|| are masked out.
std::vector<ObservableSeries> phase_diff_series(const Trajectory& traj);

/// Angles Phi_j(t) in [0, pi/2] between basis column j and psi(t),
/// computed as atan2(||psi - v <v|psi>||, |<v|psi>|) for accuracy at
/// both ends of the range.
std::vector<ObservableSeries> angle_series(const Trajectory& traj,
                                           const Matrix& basis);

} // namespace ptsym
