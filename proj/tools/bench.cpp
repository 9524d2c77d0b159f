// Compares the OpenMP kernels against their serial reference
// implementations on a simulated workload and reports speedups.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wmr/pipeline.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Row {
    const char* name;
    double serial_s;
    double parallel_s;
};

void print_row(const Row& r) {
    std::printf("%-24s %10.3f s %10.3f s %8.2fx\n", r.name, r.serial_s, r.parallel_s,
                r.serial_s / r.parallel_s);
}

} // namespace

int main(int argc, char** argv) {
    int days = 200;
    if (argc > 1) days = std::atoi(argv[1]);

    wmr::SimScenario scenario;
    scenario.seed = 20240229;
    scenario.day_count = days;
    scenario.tick_rate = 1.0;
    scenario.step_vol = 2e-5;

#ifdef _OPENMP
    std::printf("days: %d, OpenMP threads: %d\n\n", days, omp_get_max_threads());
#else
    std::printf("days: %d, OpenMP: disabled\n\n", days);
#endif
    std::printf("%-24s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");

    auto t0 = Clock::now();
    const wmr::Dataset ds_serial = wmr::serial::simulate_dataset(scenario);
    const double sim_serial = seconds_since(t0);

    t0 = Clock::now();
    const wmr::Dataset ds = wmr::simulate_dataset(scenario);
    print_row({"simulate_dataset", sim_serial, seconds_since(t0)});

    t0 = Clock::now();
    const auto matrix_serial = wmr::serial::minute_returns(ds_serial, wmr::Stream::close);
    const auto profile_serial = wmr::serial::vol_profile(matrix_serial);
    const double vol_serial = seconds_since(t0);

    t0 = Clock::now();
    const auto matrix = wmr::minute_returns(ds, wmr::Stream::close);
    const auto profile = wmr::vol_profile(matrix);
    print_row({"minute_returns+vol", vol_serial, seconds_since(t0)});

    t0 = Clock::now();
    const auto surf_serial = wmr::serial::build_surface(ds_serial, wmr::IntervalSide::int1,
                                                        wmr::ExtremumKind::max, wmr::Stream::high);
    const double surf_serial_s = seconds_since(t0);

    t0 = Clock::now();
    const auto surf = wmr::build_surface(ds, wmr::IntervalSide::int1, wmr::ExtremumKind::max,
                                         wmr::Stream::high);
    print_row({"build_surface", surf_serial_s, seconds_since(t0)});

    t0 = Clock::now();
    const auto hist_serial = wmr::serial::aggregate(ds_serial);
    const double cen_serial = seconds_since(t0);

    t0 = Clock::now();
    const auto hist = wmr::aggregate(ds);
    print_row({"centered_aggregate", cen_serial, seconds_since(t0)});

    // Keep the optimizer honest and double as a smoke check.
    bool consistent = ds.days.size() == ds_serial.days.size() &&
                      surf.probabilities == surf_serial.probabilities &&
                      profile.sigma == profile_serial.sigma &&
                      hist.count_max == hist_serial.count_max;
    std::printf("\nserial/parallel results identical: %s\n", consistent ? "yes" : "NO");
    return consistent ? 0 : 1;
}
