// Compares the O(n log n) Kendall path against the definitional O(n^2) one,
// and the OpenMP replicate runner against the serial reference.

#include <chrono>
#include <cstdio>
#include <cstring>

#include "corrsim/distributions.hpp"
#include "corrsim/estimators.hpp"
#include "corrsim/experiments.hpp"
#include "corrsim/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

void bench_kendall() {
    std::printf("kendall: definitional vs merge-sort path\n");
    std::printf("%8s %14s %14s %10s %12s\n", "n", "definitional", "fast",
                "speedup", "|diff|");
    for (std::size_t n : {1000u, 4000u, 16000u}) {
        corrsim::Rng rng = corrsim::substream(7, n);
        const corrsim::BivariateSample data =
            corrsim::sample({corrsim::Family::normal, 0.4}, n, rng);
        const corrsim::ConcomitantSequence conc = corrsim::concomitants(data);

        auto t0 = std::chrono::steady_clock::now();
        const double slow = corrsim::kendall_tau(conc);
        const double slow_s = seconds_since(t0);

        double fast = 0.0;
        const int reps = 50;
        t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r) fast = corrsim::kendall_tau_fast(conc);
        const double fast_s = seconds_since(t0) / reps;

        std::printf("%8zu %12.3f ms %12.3f ms %9.1fx %12.2e\n", n, slow_s * 1e3,
                    fast_s * 1e3, slow_s / fast_s, std::abs(slow - fast));
    }
}

void bench_runner() {
    corrsim::ExperimentConfig config;
    config.family = corrsim::Family::normal;
    config.t_grid = {-0.7, 0.3};
    config.n = 1000;
    config.reps = 400;
    config.master_seed = 20240915;

#ifdef _OPENMP
    std::printf("\nreplicate runner: serial vs OpenMP (%d threads)\n",
                omp_get_max_threads());
#else
    std::printf("\nreplicate runner: serial vs parallel (OpenMP disabled)\n");
#endif

    auto t0 = std::chrono::steady_clock::now();
    const corrsim::SummaryTable serial = corrsim::run_table_serial(config);
    const double serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const corrsim::SummaryTable parallel = corrsim::run_table(config);
    const double parallel_s = seconds_since(t0);

    bool identical = serial.rows.size() == parallel.rows.size();
    for (std::size_t i = 0; identical && i < serial.rows.size(); ++i) {
        identical = std::memcmp(&serial.rows[i].mean, &parallel.rows[i].mean,
                                sizeof(corrsim::CoefficientStats)) == 0 &&
                    std::memcmp(&serial.rows[i].variance, &parallel.rows[i].variance,
                                sizeof(corrsim::CoefficientStats)) == 0;
    }

    std::printf("serial   %8.3f s\n", serial_s);
    std::printf("parallel %8.3f s  (speedup %.2fx)\n", parallel_s,
                serial_s / parallel_s);
    std::printf("summary tables bitwise identical: %s\n", identical ? "yes" : "NO");
}

} // namespace

int main() {
    bench_kendall();
    bench_runner();
    return 0;
}
