// Kernel benchmark: serial reference vs OpenMP Monte-Carlo outage estimator.
// Both paths draw identical per-trial substreams, so the estimates must agree
// exactly; the benchmark reports wall time and speedup per configuration.
//
//   bench_outage [trials]   (default 2e6)

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "urllc/outage.hpp"

using namespace urllc;

namespace {

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

int main(int argc, char** argv) {
    const std::uint64_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000000;
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel path runs serially\n");
#endif
    std::printf("%-28s %12s %12s %9s %10s\n", "configuration", "serial [s]", "parallel [s]",
                "speedup", "estimate");

    struct Case {
        int n_rx;
        double snr;
        double correlation;
        double rho_th;
    };
    const Case cases[] = {
        {1, 10.0, 0.0, 1.68},
        {2, 10.0, 0.5, 1.68},
        {4, 100.0, 0.5, 30.0},
        {8, 100.0, 0.9, 100.0},
    };
    for (const auto& c : cases) {
        const DiversityChannel ch{c.n_rx, c.snr, c.correlation};
        const double t0 = now_s();
        const auto serial = outage_mrc_correlated_mc_serial(ch, c.rho_th, trials, 1);
        const double t1 = now_s();
        const auto parallel = outage_mrc_correlated_mc(ch, c.rho_th, trials, 1);
        const double t2 = now_s();
        if (serial.estimate != parallel.estimate) {
            std::printf("MISMATCH: serial %.9g vs parallel %.9g\n", serial.estimate,
                        parallel.estimate);
            return 1;
        }
        char label[64];
        std::snprintf(label, sizeof(label), "N_R=%d snr=%g c=%g", c.n_rx, c.snr, c.correlation);
        std::printf("%-28s %12.3f %12.3f %8.2fx %10.3g\n", label, t1 - t0, t2 - t1,
                    (t1 - t0) / (t2 - t1), parallel.estimate);
    }
    return 0;
}
