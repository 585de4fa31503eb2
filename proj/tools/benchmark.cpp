// Times the OpenMP kernels against their serial reference implementations
// and checks that both routes agree.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "preisach/identify.hpp"
#include "preisach/operator.hpp"
#include "preisach/reference.hpp"
#include "preisach/synth.hpp"

using namespace preisach;

namespace {

using clock_type = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& fn) {
    auto t0 = clock_type::now();
    fn();
    auto t1 = clock_type::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

std::vector<double> random_walk(const PreisachGrid& grid, int t, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> v(static_cast<std::size_t>(t));
    int lvl = 0;
    for (auto& x : v) {
        lvl += static_cast<int>(rng.next() % 5) - 2;
        lvl = std::max(0, std::min(grid.m(), lvl));
        x = lvl * grid.d();
    }
    return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

void report(const char* name, double serial_ms, double parallel_ms, double diff) {
    std::printf("%-24s serial %8.2f ms   parallel %8.2f ms   speedup %5.2fx   max|diff| %.3g\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms, diff);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (compiled without OpenMP)\n");
#endif

    {
        PreisachGrid grid(0.01, 64);
        KernelVector kernel = make_truth(grid, 7);
        std::vector<double> inputs = random_walk(grid, 4000, 11);
        std::vector<double> a, b;
        double ts = time_ms([&] { a = reference::eval_discrete(grid, kernel, inputs); });
        double tp = time_ms([&] { b = eval_discrete(grid, kernel, inputs); });
        report("eval_discrete", ts, tp, max_abs_diff(a, b));
    }

    {
        PreisachGrid grid(0.05, 20);
        KernelVector kernel = make_truth(grid, 3);
        KernelField field = KernelField::piecewise_constant(grid, kernel);
        std::vector<double> inputs = random_walk(grid, 400, 13);
        std::vector<double> a, b;
        double ts = time_ms([&] { a = reference::eval_relay_quadrature(field, inputs, 3); });
        double tp = time_ms([&] { b = eval_relay_quadrature(field, inputs, 3); });
        report("relay quadrature", ts, tp, max_abs_diff(a, b));
    }

    {
        PreisachGrid grid(0.0625, 16);
        std::vector<double> inputs = random_walk(grid, 6000, 17);
        std::vector<int> levels = to_levels(grid, inputs);
        SignMatrix delta;
        double tp_rows = time_ms([&] { delta = sign_matrix(grid, levels); });
        std::printf("%-24s parallel %8.2f ms (%d x %d rows)\n", "sign rows", tp_rows, delta.rows,
                    delta.cols);

        std::vector<std::int64_t> ga, gb;
        double ts = time_ms([&] { ga = reference::gram(delta.a, delta.rows, delta.cols); });
        double tg = time_ms([&] { gb = gram_int(delta); });
        bool equal = ga == gb;
        std::printf("%-24s serial %8.2f ms   parallel %8.2f ms   speedup %5.2fx   exact: %s\n",
                    "gram matrix", ts, tg, ts / tg, equal ? "yes" : "NO");
        if (!equal) return 1;
    }

    return 0;
}
