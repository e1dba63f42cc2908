// Timing harness comparing the serial reference kernels against the
// OpenMP implementations, and weighing the Monte Carlo hot loops.

#include <chrono>
#include <cstdio>
#include <functional>

#include "rwalk/combinatorics.hpp"
#include "rwalk/heat_kernel.hpp"
#include "rwalk/monte_carlo.hpp"
#include "rwalk/parallel.hpp"
#include "rwalk/spanning.hpp"

using namespace rwalk;

namespace {

double time_ms(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main() {
    std::printf("threads available: %d\n\n", max_workers());
    std::printf("%-44s %10s\n", "kernel", "time [ms]");

    const Lattice lat2(2);
    double sink = 0;

    const double t_serial = time_ms([&] {
        sink += heat_kernel_reference(WalkKind::biased, lat2, 0.5, 120, origin(2)).mass(origin(2));
    });
    std::printf("%-44s %10.1f\n", "heat kernel d=2 n=120, serial scatter", t_serial);

    const double t_parallel = time_ms([&] {
        sink += heat_kernel(WalkKind::biased, lat2, 0.5, 120, origin(2)).mass(origin(2));
    });
    std::printf("%-44s %10.1f  (x%.2f)\n", "heat kernel d=2 n=120, parallel gather", t_parallel,
                t_serial / t_parallel);

    const Lattice lat3(3);
    const double t3_serial = time_ms([&] {
        sink += heat_kernel_reference(WalkKind::drifted, lat3, 0.5, 40, origin(3)).max_mass();
    });
    std::printf("%-44s %10.1f\n", "heat kernel d=3 n=40, serial scatter", t3_serial);
    const double t3_parallel = time_ms([&] {
        sink += heat_kernel(WalkKind::drifted, lat3, 0.5, 40, origin(3)).max_mass();
    });
    std::printf("%-44s %10.1f  (x%.2f)\n", "heat kernel d=3 n=40, parallel gather", t3_parallel,
                t3_serial / t3_parallel);

    const double t_series = time_ms([&] {
        IntersectionSeries s(4, 0.5, 160);
        sink += s.partial_sum(160, 160);
    });
    std::printf("%-44s %10.1f\n", "intersection series d=4 t=160", t_series);

    set_workers(1);
    const double t_mc1 = time_ms([&] {
        sink += speed_estimate(lat2, 0.5, 20000, 100, 7).estimate;
    });
    std::printf("%-44s %10.1f\n", "speed estimate 100x20k steps, 1 worker", t_mc1);
    set_workers(0);
    const double t_mcN = time_ms([&] {
        sink += speed_estimate(lat2, 0.5, 20000, 100, 7).estimate;
    });
    std::printf("%-44s %10.1f  (x%.2f)\n", "speed estimate 100x20k steps, all workers", t_mcN,
                t_mc1 / t_mcN);

    const double t_wilson = time_ms([&] {
        const BoxGraph box = build_box(2, 12, 0.5, Boundary::wired);
        long acc = 0;
        for (int i = 0; i < 2000; ++i) {
            acc += static_cast<long>(wilson_ust(box.graph, box.root, static_cast<std::uint64_t>(i)).tags.size());
        }
        sink += static_cast<double>(acc);
    });
    std::printf("%-44s %10.1f\n", "2000 wired-box UST samples d=2 n=12", t_wilson);

    const double t_bridge = time_ms([&] { sink += bnk_bound_constant(120); });
    std::printf("%-44s %10.1f\n", "bridge-count table to n=120", t_bridge);

    std::printf("\n(checksum %g)\n", sink);
    return 0;
}
