#include "ptsym/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ptsym {

std::string to_string(Phase phase) {
    switch (phase) {
        case Phase::Hermitian: return "hermitian";
        case Phase::PTSymmetric: return "pt_symmetric";
        case Phase::ExceptionalPoint: return "exceptional_point";
        case Phase::PTBroken: return "pt_broken";
    }
    return "?";
}

PhaseDiagnosis classify_phase(const PTModel& model, std::optional<double> tol_opt) {
    const double scale = model.H.norm();
    const double tol = tol_opt.value_or(1e-8 * scale);
    if (tol <= 0.0) throw Error("classify_phase: tolerance must be positive");

    const EigResult res = eig(model.H);
    PhaseDiagnosis diag;
    if (model.gamma < model.J) {
        diag.gap = std::sqrt(model.J * model.J - model.gamma * model.gamma);
    }

    double max_imag = 0.0;
    for (Eigen::Index i = 0; i < res.eigenvalues.size(); ++i) {
        max_imag = std::max(max_imag, std::abs(res.eigenvalues(i).imag()));
    }
    diag.max_imag = max_imag;

    double min_gap = std::numeric_limits<double>::infinity();
    Complex cluster_seed = 0.0;
    for (Eigen::Index i = 0; i < res.eigenvalues.size(); ++i) {
        for (Eigen::Index j = i + 1; j < res.eigenvalues.size(); ++j) {
            const double gap = std::abs(res.eigenvalues(i) - res.eigenvalues(j));
            if (gap < min_gap) {
                min_gap = gap;
                cluster_seed = 0.5 * (res.eigenvalues(i) + res.eigenvalues(j));
            }
        }
    }

    // A defective matrix with eigenvalues inside the coalescence envelope is
    // an exceptional point. Coalesced eigenvalues of a k-fold Jordan block
    // scatter as (eps ||H||)^(1/k), far above any spacing tolerance, so the
    // envelope is taken at the largest possible order.
    if (res.defective_flag) {
        const double envelope =
            5.0 * std::pow(2.2e-16 * std::max(scale, 1e-300), 1.0 / model.d);
        if (min_gap <= envelope) {
            diag.phase = Phase::ExceptionalPoint;
            Complex center = 0.0;
            int members = 0;
            for (Eigen::Index i = 0; i < res.eigenvalues.size(); ++i) {
                if (std::abs(res.eigenvalues(i) - cluster_seed) <= 2.0 * envelope) {
                    center += res.eigenvalues(i);
                    ++members;
                }
            }
            center /= static_cast<double>(members);
            // The order is the power where the rank profile of
            // (H - center)^k stops decreasing (largest Jordan block).
            const auto ranks = rank_profile(model.H, center, model.d + 1);
            diag.ep_order = model.d;
            for (int k = 1; k <= model.d; ++k) {
                if (ranks[static_cast<std::size_t>(k)] ==
                    ranks[static_cast<std::size_t>(k - 1)]) {
                    diag.ep_order = k;
                    break;
                }
            }
            diag.max_imag = 0.0; // cluster scatter is numerical noise
            return diag;
        }
    }

    if (min_gap > tol && min_gap <= 10.0 * tol) {
        throw AmbiguousNearEP("classify_phase: eigenvalue spacing " +
                              std::to_string(min_gap) +
                              " within (tol, 10 tol]; refine the tolerance");
    }

    if (max_imag > tol) {
        diag.phase = Phase::PTBroken;
        return diag;
    }

    const SymmetryReport rep = check_symmetries(model.H, model.P);
    diag.phase = rep.hermitian_residual * scale <= tol ? Phase::Hermitian
                                                       : Phase::PTSymmetric;
    return diag;
}

double period_closed_form(double J, double gamma) {
    if (!(gamma < J)) {
        throw NotPeriodic("period_closed_form: no real gap for gamma >= J");
    }
    return 2.0 * M_PI / std::sqrt(J * J - gamma * gamma);
}

namespace {

struct Peak {
    double t;
};

// Quadratic interpolation of the maximum through three samples.
double refine_peak(double tm, double t0, double tp, double ym, double y0, double yp) {
    const double denom = ym - 2.0 * y0 + yp;
    if (denom >= 0.0) return t0; // flat or degenerate
    const double h = 0.5 * (tp - tm);
    double shift = 0.5 * (ym - yp) / denom * h;
    shift = std::clamp(shift, -h, h);
    return t0 + shift;
}

std::vector<Peak> find_maxima(const ObservableSeries& s) {
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < s.values.size(); ++i) {
        if (!s.defined[i - 1] || !s.defined[i] || !s.defined[i + 1]) continue;
        if (s.values[i] > s.values[i - 1] && s.values[i] > s.values[i + 1]) {
            peaks.push_back({refine_peak(s.times[i - 1], s.times[i], s.times[i + 1],
                                         s.values[i - 1], s.values[i],
                                         s.values[i + 1])});
        }
    }
    return peaks;
}

struct Spacings {
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t count = 0;
};

Spacings stride_spacings(const std::vector<Peak>& peaks, std::size_t stride) {
    Spacings sp;
    if (peaks.size() <= stride) return sp;
    std::vector<double> gaps;
    for (std::size_t i = 0; i + stride < peaks.size(); ++i) {
        gaps.push_back(peaks[i + stride].t - peaks[i].t);
    }
    sp.count = gaps.size();
    sp.mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / gaps.size();
    double var = 0.0;
    for (double g : gaps) var += (g - sp.mean) * (g - sp.mean);
    sp.stddev = std::sqrt(var / gaps.size());
    return sp;
}

} // namespace

FitResult fit_period(const ObservableSeries& series) {
    const std::vector<Peak> peaks = find_maxima(series);
    if (peaks.size() < 2) {
        throw TooFewOscillations("fit_period: found " + std::to_string(peaks.size()) +
                                 " maxima, need at least 2");
    }

    // Smallest stride whose spacings are mutually consistent. Stride 1 is
    // the plain mean maximum spacing; larger strides absorb series with
    // several maxima per period.
    const std::size_t max_stride = std::min<std::size_t>(4, peaks.size() - 1);
    Spacings chosen = stride_spacings(peaks, 1);
    for (std::size_t stride = 1; stride <= max_stride; ++stride) {
        const Spacings sp = stride_spacings(peaks, stride);
        if (sp.count == 0) break;
        if (sp.stddev <= 0.02 * sp.mean) {
            FitResult fit;
            fit.kind = FitKind::Period;
            fit.value = sp.mean;
            fit.residual = sp.stddev;
            fit.window_min = series.times.front();
            fit.window_max = series.times.back();
            return fit;
        }
    }

    FitResult fit;
    fit.kind = FitKind::Period;
    fit.value = chosen.mean;
    fit.residual = chosen.stddev;
    fit.window_min = series.times.front();
    fit.window_max = series.times.back();
    return fit;
}

FitResult fit_growth(const ObservableSeries& series, FitKind kind,
                     std::optional<FitWindow> window) {
    if (kind == FitKind::Period) {
        throw Error("fit_growth: use fit_period for periods");
    }
    const FitWindow w = window.value_or(kind == FitKind::PowerLaw
                                            ? kDefaultPowerLawWindow
                                            : kDefaultExponentialWindow);

    std::vector<double> x, y;
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        if (!series.defined[i]) continue;
        const double t = series.times[i];
        if (t < w.t_min || t > w.t_max) continue;
        if (series.values[i] <= 0.0) {
            throw NonPositiveData("fit_growth: nonpositive value at t = " +
                                  std::to_string(t));
        }
        if (kind == FitKind::PowerLaw) {
            if (t <= 0.0) continue; // log t undefined at the origin
            x.push_back(std::log(t));
        } else {
            x.push_back(t);
        }
        y.push_back(std::log(series.values[i]));
    }
    if (x.size() < 2) {
        throw Error("fit_growth: fewer than 2 samples inside the window");
    }

    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) throw Error("fit_growth: degenerate abscissa");

    FitResult fit;
    fit.kind = kind;
    fit.value = sxy / sxx;
    fit.window_min = std::max(w.t_min, series.times.front());
    fit.window_max = std::min(w.t_max, series.times.back());
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pred = my + fit.value * (x[i] - mx);
        rss += (y[i] - pred) * (y[i] - pred);
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

SteadyState steady_state(const ObservableSeries& series, double tol) {
    if (tol <= 0.0) throw Error("steady_state: tolerance must be positive");

    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        if (series.defined[i]) live.push_back(i);
    }
    if (live.size() < 2) throw NotSettled("steady_state: too few defined samples");

    const std::size_t tail_begin = live.size() - std::max<std::size_t>(1, live.size() / 5);
    double tail_mean = 0.0;
    for (std::size_t i = tail_begin; i < live.size(); ++i) {
        tail_mean += series.values[live[i]];
    }
    tail_mean /= static_cast<double>(live.size() - tail_begin);

    // Earliest index from which every later sample stays within tol.
    std::size_t settle = live.size();
    for (std::size_t i = live.size(); i-- > 0;) {
        if (std::abs(series.values[live[i]] - tail_mean) > tol) break;
        settle = i;
    }
    if (settle >= live.size() - 1) {
        throw NotSettled("steady_state: series does not stay within tolerance");
    }
    return SteadyState{series.times[live[settle]], tail_mean};
}

} // namespace ptsym
