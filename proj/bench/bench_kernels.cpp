// Wall-clock comparison of the serial reference loops against the
// OpenMP-parallel kernels.  Run: ./bench_kernels [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "spinmf/groundstate.hpp"
#include "spinmf/repsum.hpp"
#include "spinmf/variational.hpp"

using namespace spinmf;
using clock_type = std::chrono::steady_clock;

namespace {

template <typename F>
double time_ms(F&& fn, int repeats) {
    auto t0 = clock_type::now();
    for (int i = 0; i < repeats; ++i) fn();
    auto t1 = clock_type::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / repeats;
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %10.2f ms %10.2f ms %8.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        ModelInstance inst;
        inst.kind = ModelKind::AB;
        inst.r = 3;
        inst.n = 24;
        inst.m = 10;
        inst.a = 1;
        inst.b = -1;
        inst.c = 2;
        double zs = 0, zp = 0;
        double ts = time_ms([&] { zs = z_ab_exact(inst, 1.0, std::nullopt, Exec::serial); },
                            repeats);
        double tp = time_ms([&] { zp = z_ab_exact(inst, 1.0, std::nullopt, Exec::parallel); },
                            repeats);
        row("repsum z_ab (r=3, n=24)", ts, tp);
        if (std::abs(zs - zp) / zs > 1e-12) std::printf("  !! serial/parallel mismatch\n");
    }
    {
        double ts = time_ms(
            [&] { diagram_grid(-2, 2, -2, 2, 41, 41, -1.0, 0.5, 5, Exec::serial); }, repeats);
        double tp = time_ms(
            [&] { diagram_grid(-2, 2, -2, 2, 41, 41, -1.0, 0.5, 5, Exec::parallel); }, repeats);
        row("phase diagram 41x41 (r=5)", ts, tp);
    }
    {
        TwoBlockParams p{0.5, -1.0, -0.8, 0.4, 4, 2.5};
        double ts = time_ms([&] { maximize_F(p, Exec::serial); }, repeats);
        double tp = time_ms([&] { maximize_F(p, Exec::parallel); }, repeats);
        row("maximize_F multistart (c<0)", ts, tp);
    }
    return 0;
}
