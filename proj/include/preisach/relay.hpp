#pragma once

#include <span>
#include <vector>

namespace preisach {

/// Two-threshold switch: output drops to -1 when the input reaches a1 from
/// above and rises to +1 when it reaches a2 from below; in between it holds.
struct RelayConfig {
    double a1 = 0.0;       // lower threshold
    double a2 = 0.0;       // upper threshold, must satisfy a1 < a2
    int initial = -1;      // output before the first sample, -1 or +1

    void validate() const;
};

/// Advance one relay by a single input sample. Thresholds are closed:
/// v <= a1 forces -1, v >= a2 forces +1, anything strictly inside the band
/// keeps the previous state. A sample jumping across the whole band lands
/// on the state implied by the new sample alone.
int relay_step(const RelayConfig& cfg, int state, double v);

/// Fold relay_step over a sample sequence starting from cfg.initial.
/// Output has the same length as the input.
std::vector<int> relay_trajectory(const RelayConfig& cfg, std::span<const double> inputs);

} // namespace preisach
