// Compares the serial grid-scan reference against the OpenMP kernel on the
// default design box at several grid resolutions.

#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
#endif

#include "spa/optimizer.hpp"

namespace {

double now_seconds() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

}  // namespace

int main() {
    using namespace spa;
    const DesignSpace space = DesignSpace::default_bounds();
    const Material material(0.34e6, 1.832, 1750.0, 0.7, 0.1);
    const double length = 0.094;
    const double pressure = 0.15e6;
    const double torque_norm = 0.4;
    const double angle_norm = 1.4 * 3.14159265358979323846;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (no OpenMP)\n");
#endif
    std::printf("%-12s %12s %12s %10s  %s\n", "step_mm", "serial_s", "parallel_s",
                "speedup", "argmax (a,b,w,t mm | objective)");

    for (double step_mm : {0.5, 0.25, 0.125}) {
        const double step = step_mm * 1e-3;

        const double t0 = now_seconds();
        const OptimizationResult serial = grid_oracle_serial(
            space, material, length, pressure, torque_norm, angle_norm, step);
        const double t1 = now_seconds();
        const OptimizationResult parallel =
            grid_oracle(space, material, length, pressure, torque_norm, angle_norm, step);
        const double t2 = now_seconds();

        const bool same = serial.params.a == parallel.params.a &&
                          serial.params.b == parallel.params.b &&
                          serial.params.w == parallel.params.w &&
                          serial.params.t == parallel.params.t &&
                          serial.objective == parallel.objective;
        std::printf("%-12.3f %12.4f %12.4f %9.2fx  (%.2f, %.2f, %.2f, %.2f | %.6f)%s\n",
                    step_mm, t1 - t0, t2 - t1, (t1 - t0) / (t2 - t1),
                    parallel.params.a * 1e3, parallel.params.b * 1e3,
                    parallel.params.w * 1e3, parallel.params.t * 1e3, parallel.objective,
                    same ? "" : "  MISMATCH");
        if (!same) return 1;
    }
    return 0;
}
