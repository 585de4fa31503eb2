#include "preisach/synth.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "preisach/errors.hpp"

namespace preisach {

double SplitMix64::gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    double u2 = uniform();
    double rad = std::sqrt(-2.0 * std::log(u1));
    double ang = 2.0 * std::numbers::pi * u2;
    cached_ = rad * std::sin(ang);
    has_cached_ = true;
    return rad * std::cos(ang);
}

InputProgram forc_program(const PreisachGrid& grid) {
    InputProgram p;
    p.turning_points.push_back(0.0);
    for (int k = grid.m(); k >= 1; --k) {
        p.turning_points.push_back(k * grid.d());
        p.turning_points.push_back(0.0);
    }
    return p;
}

KernelVector make_truth(const PreisachGrid& grid, std::uint64_t seed, double scale) {
    if (!std::isfinite(scale))
        throw validation_error("kernel scale must be finite");
    SplitMix64 rng(seed);
    KernelVector kernel = KernelVector::zeros(grid);
    std::size_t idx = 0;
    for (int band = 1; band <= grid.m(); ++band) {
        for (int i = 0; i < band; ++i) {
            double val = rng.uniform() * scale;
            kernel.x[idx++] = val;             // slot 2i
            if (i < band - 1) kernel.x[idx++] = val;  // paired slot 2i+1
        }
    }
    kernel.c() = rng.uniform() * scale;
    return kernel;
}

namespace {

void validate_program(const PreisachGrid& grid, const InputProgram& program) {
    if (program.turning_points.empty())
        throw validation_error("input program needs at least one turning point");
    if (program.samples_per_branch < 0)
        throw validation_error("samples per branch must be >= 0");
    std::vector<int> lvls;
    for (double v : program.turning_points) lvls.push_back(level_of(quantize(v, grid), grid));
    int prev_dir = 0;
    for (std::size_t i = 1; i < lvls.size(); ++i) {
        int dir = lvls[i] > lvls[i - 1] ? 1 : lvls[i] < lvls[i - 1] ? -1 : 0;
        if (dir == 0)
            throw validation_error("turning points must differ after quantization (point " +
                                   std::to_string(i) + ")");
        if (prev_dir != 0 && dir == prev_dir)
            throw validation_error("turning points must alternate in direction (point " +
                                   std::to_string(i) + ")");
        prev_dir = dir;
    }
}

} // namespace

ExperimentSeries simulate(const PreisachGrid& grid, const KernelVector& kernel,
                          const InputProgram& program, double noise_rms, std::uint64_t seed) {
    if (!(noise_rms >= 0.0))
        throw validation_error("noise rms must be >= 0");
    validate_program(grid, program);

    std::vector<double> samples =
        loop_program(grid, program.turning_points, program.samples_per_branch);
    std::vector<double> moments = eval_discrete(grid, kernel, samples);
    if (noise_rms > 0.0) {
        // Distinct stream from make_truth so truth and noise never share draws.
        SplitMix64 rng(seed ^ 0x6a09e667f3bcc909ull);
        for (double& m : moments) m += noise_rms * rng.gaussian();
    }

    ExperimentSeries series;
    series.source = "synthetic seed=" + std::to_string(seed);
    series.kappa = std::move(samples);
    series.moment = std::move(moments);
    series.t.resize(series.kappa.size());
    for (std::size_t i = 0; i < series.t.size(); ++i) series.t[i] = static_cast<double>(i);
    return series;
}

} // namespace preisach
