#pragma once

#include <cstdint>

#include "preisach/dataio.hpp"
#include "preisach/operator.hpp"
#include "preisach/plane.hpp"

namespace preisach {

/// splitmix64 with a fixed documented update, so seeded artifacts are
/// reproducible across platforms and standard libraries.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller on the uniform stream.
    double gaussian();

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// Piecewise-linear excitation: turning points plus per-branch sample count
/// (0 = one sample per grid step).
struct InputProgram {
    std::vector<double> turning_points;
    int samples_per_branch = 0;
};

/// Nested reversal program 0 -> kmax -> 0, 0 -> kmax-d -> 0, ..., 0 -> d -> 0.
/// Drives every staircase level both ways, which realizes the largest sign
/// matrix rank this grid admits.
InputProgram forc_program(const PreisachGrid& grid);

/// Reproducible nonnegative ground-truth kernel. The two triangles of a
/// square are never separated by any admissible staircase, so they share one
/// drawn value per square; split values could never be recovered.
KernelVector make_truth(const PreisachGrid& grid, std::uint64_t seed, double scale = 1.0);

/// Forward-simulate the program through the kernel, add seeded Gaussian noise
/// of the given RMS, and wrap it as a measured series with unit timestamps.
ExperimentSeries simulate(const PreisachGrid& grid, const KernelVector& kernel,
                          const InputProgram& program, double noise_rms, std::uint64_t seed);

} // namespace preisach
