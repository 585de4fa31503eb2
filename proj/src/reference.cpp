#include "preisach/reference.hpp"

#include "preisach/errors.hpp"
#include "preisach/relay.hpp"

namespace preisach::reference {

std::vector<double> eval_discrete(const PreisachGrid& grid, const KernelVector& kernel,
                                  std::span<const double> inputs) {
    kernel.validate(grid);
    std::vector<int> levels = to_levels(grid, inputs);
    std::vector<double> out;
    out.reserve(levels.size());
    MemoryCurve curve;
    for (int lvl : levels) {
        curve = curve.updated(lvl);
        std::vector<std::int8_t> row = sign_row(curve, grid);
        double acc = 0.0;
        for (int id = 0; id < grid.cell_count(); ++id)
            acc += row[static_cast<std::size_t>(id)] > 0 ? kernel.x[static_cast<std::size_t>(id)]
                                                         : -kernel.x[static_cast<std::size_t>(id)];
        out.push_back(acc - kernel.c());
    }
    return out;
}

std::vector<double> eval_relay_quadrature(const KernelField& field,
                                          std::span<const double> inputs,
                                          int nodes_per_side) {
    std::vector<QuadNode> nodes =
        quadrature_nodes(field.kmax(), field.alignment_levels(), nodes_per_side);
    std::vector<double> out(inputs.size(), 0.0);
    std::vector<double> carry(inputs.size(), 0.0);  // compensated accumulation
    for (const QuadNode& nd : nodes) {
        const double wgt = field.value_at(nd.r, nd.s) * nd.weight;
        if (wgt == 0.0) continue;
        RelayConfig cfg{nd.s - nd.r, nd.s + nd.r, -1};
        int state = cfg.initial;
        for (std::size_t t = 0; t < inputs.size(); ++t) {
            state = relay_step(cfg, state, inputs[t]);
            const double term = (state > 0 ? wgt : -wgt) - carry[t];
            const double next = out[t] + term;
            carry[t] = (next - out[t]) - term;
            out[t] = next;
        }
    }
    return out;
}

std::vector<std::int64_t> gram(const std::vector<std::int8_t>& rows, int t, int n) {
    if (rows.size() != static_cast<std::size_t>(t) * static_cast<std::size_t>(n))
        throw validation_error("sign matrix size mismatch");
    std::vector<std::int64_t> g(static_cast<std::size_t>(n) * n, 0);
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            std::int64_t acc = 0;
            for (int i = 0; i < t; ++i)
                acc += static_cast<std::int64_t>(rows[static_cast<std::size_t>(i) * n + a]) *
                       rows[static_cast<std::size_t>(i) * n + b];
            g[static_cast<std::size_t>(a) * n + b] = acc;
            g[static_cast<std::size_t>(b) * n + a] = acc;
        }
    }
    return g;
}

} // namespace preisach::reference
