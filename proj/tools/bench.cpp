// Compares the OpenMP trajectory kernel against the serial reference and
// checks that both produce identical states.

#include <chrono>
#include <cstdio>
#include <functional>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ptsym/dynamics.hpp"

using clock_type = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn) {
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
        const auto t0 = clock_type::now();
        fn();
        const auto t1 = clock_type::now();
        best = std::min(best,
                        std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    int samples = 2000;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--samples" && i + 1 < argc) {
            samples = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: bench [--samples N]\n");
            return 2;
        }
    }

#ifdef _OPENMP
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif
    std::printf("trajectory kernel, %d samples over [0, 8/J], %d thread(s)\n",
                samples, threads);
    std::printf("%4s %12s %12s %9s %12s\n", "d", "serial [ms]", "openmp [ms]",
                "speedup", "max |diff|");

    for (int d : {4, 8, 16, 32, 64}) {
        const ptsym::PTModel model = ptsym::build_hpt(d, 1.0, 0.5);
        const ptsym::Vector psi0 = ptsym::canonical_state(ptsym::StateName::Psi2, model);
        const auto grid = ptsym::time_grid(8.0, samples);
        ptsym::EvolveOptions opts;
        opts.expm_norm_bound =
            1.25 * 8.0 * model.H.cwiseAbs().colwise().sum().maxCoeff();

        ptsym::Trajectory serial, parallel;
        const double t_serial =
            time_ms([&] { serial = ptsym::evolve_serial(model, psi0, grid, opts); });
        const double t_parallel =
            time_ms([&] { parallel = ptsym::evolve(model, psi0, grid, opts); });

        double diff = 0.0;
        for (std::size_t k = 0; k < serial.states.size(); ++k) {
            diff = std::max(diff,
                            (serial.states[k] - parallel.states[k]).norm());
        }
        std::printf("%4d %12.2f %12.2f %8.2fx %12.3e\n", d, t_serial, t_parallel,
                    t_serial / t_parallel, diff);
    }
    return 0;
}
