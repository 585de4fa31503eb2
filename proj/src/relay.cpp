#include "preisach/relay.hpp"

#include <cmath>

#include "preisach/errors.hpp"

namespace preisach {

void RelayConfig::validate() const {
    if (!std::isfinite(a1) || !std::isfinite(a2))
        throw validation_error("relay thresholds must be finite");
    if (!(a1 < a2))
        throw validation_error("relay requires a1 < a2");
    if (initial != -1 && initial != 1)
        throw validation_error("relay initial state must be -1 or +1");
}

int relay_step(const RelayConfig& cfg, int state, double v) {
    cfg.validate();
    if (!std::isfinite(v))
        throw validation_error("relay input must be finite");
    if (v <= cfg.a1) return -1;
    if (v >= cfg.a2) return 1;
    return state;
}

std::vector<int> relay_trajectory(const RelayConfig& cfg, std::span<const double> inputs) {
    cfg.validate();
    if (inputs.empty())
        throw validation_error("relay input sequence must be non-empty");
    std::vector<int> out;
    out.reserve(inputs.size());
    int state = cfg.initial;
    for (double v : inputs) {
        state = relay_step(cfg, state, v);
        out.push_back(state);
    }
    return out;
}

} // namespace preisach
