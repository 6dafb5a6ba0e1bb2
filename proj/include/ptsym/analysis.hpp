#pragma once

#include <optional>

#include "ptsym/dynamics.hpp"

namespace ptsym {

enum class Phase { Hermitian, PTSymmetric, ExceptionalPoint, PTBroken };

std::string to_string(Phase phase);

struct PhaseDiagnosis {
    Phase phase = Phase::PTSymmetric;
    int ep_order = 1;        // 1 means no exceptional point
    double max_imag = 0.0;   // largest |Im lambda|, units of J
    std::optional<double> gap; // sqrt(J^2 - gamma^2) for the ladder family
};

/// Classify the spectrum. Defectiveness (eigenvector condition) is checked
/// before the imaginary-part test because coalesced eigenvalues scatter as
/// eps^(1/order) around the exceptional point. Throws AmbiguousNearEP when
/// the smallest eigenvalue spacing falls inside (tol, 10 tol].
PhaseDiagnosis classify_phase(const PTModel& model,
                              std::optional<double> tol = std::nullopt);

/// T(gamma) = 2 pi / sqrt(J^2 - gamma^2); NotPeriodic for gamma >= J.
double period_closed_form(double J, double gamma);

enum class FitKind { PowerLaw, Exponential, Period };

struct FitResult {
    FitKind kind = FitKind::Period;
    double value = 0.0;    // exponent, rate in J, or period in 1/J
    double residual = 0.0;
    double window_min = 0.0;
    double window_max = 0.0;
};

struct FitWindow {
    double t_min;
    double t_max;
};

inline constexpr FitWindow kDefaultPowerLawWindow{20.0, 200.0};
inline constexpr FitWindow kDefaultExponentialWindow{5.0, 8.0};

/// Period from the spacing of interpolated maxima. Series with m > 1 maxima
/// per period are handled by finding the smallest stride whose
/// maximum-to-maximum distances agree; residual is their standard deviation.
FitResult fit_period(const ObservableSeries& series);

/// Least squares of log(value) against log(t) (power law) or t (exponential)
/// over the window; residual is the RMS misfit.
FitResult fit_growth(const ObservableSeries& series, FitKind kind,
                     std::optional<FitWindow> window = std::nullopt);

struct SteadyState {
    double t_star; // earliest time after which the series stays within tol
    double value;  // mean over the final 20% of samples
};

SteadyState steady_state(const ObservableSeries& series, double tol);

} // namespace ptsym
