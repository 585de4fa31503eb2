#include "preisach/operator.hpp"

#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "preisach/errors.hpp"

namespace preisach {

KernelVector KernelVector::zeros(const PreisachGrid& grid) {
    KernelVector k;
    k.x.assign(static_cast<std::size_t>(grid.unknown_count()), 0.0);
    return k;
}

void KernelVector::validate(const PreisachGrid& grid) const {
    if (x.size() != static_cast<std::size_t>(grid.unknown_count()))
        throw validation_error("kernel vector has " + std::to_string(x.size()) +
                               " entries, grid needs " + std::to_string(grid.unknown_count()));
    for (double v : x)
        if (!std::isfinite(v)) throw validation_error("kernel vector entries must be finite");
}

KernelField KernelField::from_samples(double kmax, int q, std::vector<double> values) {
    if (!(kmax > 0.0)) throw validation_error("kernel field needs kmax > 0");
    if (q < 1) throw validation_error("kernel field needs at least one lattice cell");
    if (values.size() != static_cast<std::size_t>(q) * static_cast<std::size_t>(q))
        throw validation_error("kernel field sample count must be q^2");
    for (double v : values)
        if (!std::isfinite(v)) throw validation_error("kernel field samples must be finite");
    return KernelField(kmax, Samples{q, std::move(values)});
}

KernelField KernelField::piecewise_constant(const PreisachGrid& grid, const KernelVector& kernel) {
    kernel.validate(grid);
    return KernelField(grid.kmax(), Piecewise{grid, kernel});
}

int KernelField::alignment_levels() const {
    if (const auto* s = std::get_if<Samples>(&body_)) return s->q;
    return std::get<Piecewise>(body_).grid.m();
}

double KernelField::value_at(double r, double s) const {
    if (r < 0.0 || r > kmax_ || s < 0.0 || s > kmax_) return 0.0;
    if (const auto* sm = std::get_if<Samples>(&body_)) {
        double h = kmax_ / sm->q;
        int ir = std::min(sm->q - 1, std::max(0, static_cast<int>(std::floor(r / h))));
        int is = std::min(sm->q - 1, std::max(0, static_cast<int>(std::floor(s / h))));
        return sm->values[static_cast<std::size_t>(is) * sm->q + ir];
    }
    const auto& pw = std::get<Piecewise>(body_);
    const PreisachGrid& g = pw.grid;
    const double d = g.d();
    const double u = s - r, w = s + r;
    if (w > kmax_)
        return pw.kernel.c() / (0.5 * kmax_ * kmax_);  // relays pinned at -1
    if (u < 0.0)
        return 0.0;  // one-way relays, kept massless
    int band = std::min(g.m(), static_cast<int>(std::floor(w / d)) + 1);
    int i = std::min(band - 1, std::max(0, static_cast<int>(std::floor(u / d))));
    double diag = (w - u) / d - (band - 1 - i);
    int slot = diag > 0.0 ? 2 * i : 2 * i + 1;
    int idx = (band - 1) * (band - 1) + slot;
    return pw.kernel.x[static_cast<std::size_t>(idx)] / (0.25 * d * d);
}

namespace {

// Split triangle (v0, v1, v2) into p^2 congruent copies and push their
// centroids, each carrying an equal share of the area.
void push_triangle_nodes(const std::array<double, 2>& v0, const std::array<double, 2>& v1,
                         const std::array<double, 2>& v2, int p, double total_area,
                         std::vector<QuadNode>& out) {
    const double e1r = v1[0] - v0[0], e1s = v1[1] - v0[1];
    const double e2r = v2[0] - v0[0], e2s = v2[1] - v0[1];
    const double w = total_area / (static_cast<double>(p) * p);
    const double inv = 1.0 / (3.0 * p);
    for (int a = 0; a < p; ++a) {
        for (int b = 0; b + a < p; ++b) {
            double ca = (3.0 * a + 1) * inv, cb = (3.0 * b + 1) * inv;
            out.push_back({v0[0] + ca * e1r + cb * e2r, v0[1] + ca * e1s + cb * e2s, w});
        }
        for (int b = 0; b + a < p - 1; ++b) {
            double ca = (3.0 * a + 2) * inv, cb = (3.0 * b + 2) * inv;
            out.push_back({v0[0] + ca * e1r + cb * e2r, v0[1] + ca * e1s + cb * e2s, w});
        }
    }
}

} // namespace

std::vector<QuadNode> quadrature_nodes(double kmax, int levels, int nodes_per_side) {
    if (!(kmax > 0.0) || levels < 1)
        throw validation_error("quadrature needs kmax > 0 and at least one level");
    if (nodes_per_side < 1)
        throw validation_error("quadrature lattice must have at least one node per side");

    const int p = nodes_per_side;
    const double d = kmax / levels;
    PreisachGrid grid(d, levels);

    std::vector<QuadNode> nodes;
    nodes.reserve(static_cast<std::size_t>(levels) * levels * p * p * 3);
    const double cell_area = 0.25 * d * d;
    for (int id = 1; id <= grid.cell_count(); ++id) {
        CellTriangle tri = cell_geometry(grid, id);
        push_triangle_nodes(tri.vertex[0], tri.vertex[1], tri.vertex[2], p, cell_area, nodes);
    }
    const int pd = levels * p;
    // s + r > kmax: relays that can never switch.
    push_triangle_nodes({0.0, kmax}, {kmax, 0.0}, {kmax, kmax}, pd, 0.5 * kmax * kmax, nodes);
    // s < r, s + r < kmax: relays that latch +1 once their centre is crossed.
    push_triangle_nodes({0.0, 0.0}, {kmax, 0.0}, {0.5 * kmax, 0.5 * kmax}, pd,
                        0.25 * kmax * kmax, nodes);
    return nodes;
}

namespace {

std::vector<MemoryCurve> curve_history(const std::vector<int>& levels) {
    std::vector<MemoryCurve> curves;
    curves.reserve(levels.size());
    MemoryCurve c;
    for (int lvl : levels) {
        c = c.updated(lvl);
        curves.push_back(c);
    }
    return curves;
}

double row_dot(const MemoryCurve& curve, const PreisachGrid& grid, const KernelVector& kernel) {
    const int m = grid.m();
    double acc = 0.0;
    std::size_t idx = 0;
    for (int band = 1; band <= m; ++band) {
        for (int slot = 0; slot <= 2 * band - 2; ++slot, ++idx) {
            std::int64_t i = slot / 2;
            std::int64_t u3 = (slot % 2 == 0) ? 3 * i + 1 : 3 * i + 2;
            std::int64_t w3 = (slot % 2 == 0) ? 3ll * band - 1 : 3ll * band - 2;
            int sg = curve.sign_at_thirds(u3, w3);
            acc += sg > 0 ? kernel.x[idx] : -kernel.x[idx];
        }
    }
    return acc - kernel.c();
}

} // namespace

std::vector<double> eval_discrete(const PreisachGrid& grid, const KernelVector& kernel,
                                  std::span<const double> inputs) {
    kernel.validate(grid);
    std::vector<int> levels = to_levels(grid, inputs);
    std::vector<MemoryCurve> curves = curve_history(levels);
    const std::int64_t n = static_cast<std::int64_t>(curves.size());
    std::vector<double> out(curves.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = row_dot(curves[static_cast<std::size_t>(i)], grid, kernel);
    return out;
}

std::vector<double> eval_relay_quadrature(const KernelField& field,
                                          std::span<const double> inputs,
                                          int nodes_per_side) {
    for (double v : inputs)
        if (!std::isfinite(v)) throw validation_error("quadrature inputs must be finite");
    std::vector<QuadNode> nodes =
        quadrature_nodes(field.kmax(), field.alignment_levels(), nodes_per_side);

    const std::size_t T = inputs.size();
    std::vector<double> out(T, 0.0);
    if (T == 0) return out;

    const std::int64_t nn = static_cast<std::int64_t>(nodes.size());
#ifdef _OPENMP
    const int nthreads = omp_get_max_threads();
#else
    const int nthreads = 1;
#endif
    // Per-thread partials merged in thread order keep the result reproducible
    // for a fixed thread count. Sums run compensated so the node count and
    // summation order never push the quadrature off the discrete route.
    std::vector<std::vector<double>> partial(nthreads, std::vector<double>(T, 0.0));
    std::vector<std::vector<double>> carry(nthreads, std::vector<double>(T, 0.0));
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < nn; ++k) {
        const QuadNode& nd = nodes[static_cast<std::size_t>(k)];
        const double wgt = field.value_at(nd.r, nd.s) * nd.weight;
        if (wgt == 0.0) continue;
#ifdef _OPENMP
        const int tid = omp_get_thread_num();
#else
        const int tid = 0;
#endif
        std::vector<double>& acc = partial[static_cast<std::size_t>(tid)];
        std::vector<double>& cmp = carry[static_cast<std::size_t>(tid)];
        const double a1 = nd.s - nd.r, a2 = nd.s + nd.r;
        int state = -1;
        for (std::size_t t = 0; t < T; ++t) {
            double v = inputs[t];
            if (v <= a1)
                state = -1;
            else if (v >= a2)
                state = 1;
            const double term = (state > 0 ? wgt : -wgt) - cmp[t];
            const double next = acc[t] + term;
            cmp[t] = (next - acc[t]) - term;
            acc[t] = next;
        }
    }
    for (int tid = 0; tid < nthreads; ++tid)
        for (std::size_t t = 0; t < T; ++t)
            out[t] += partial[static_cast<std::size_t>(tid)][t] -
                      carry[static_cast<std::size_t>(tid)][t];
    return out;
}

std::vector<double> loop_program(const PreisachGrid& grid,
                                 const std::vector<double>& turning_points,
                                 int samples_per_branch) {
    if (turning_points.empty())
        throw validation_error("loop program needs at least one turning point");
    if (samples_per_branch < 0)
        throw validation_error("samples per branch must be >= 0");
    std::vector<int> tp;
    tp.reserve(turning_points.size());
    for (double v : turning_points) tp.push_back(level_of(quantize(v, grid), grid));

    std::vector<double> samples;
    samples.push_back(tp.front() * grid.d());
    for (std::size_t b = 1; b < tp.size(); ++b) {
        const double a = tp[b - 1] * grid.d(), z = tp[b] * grid.d();
        int n = samples_per_branch > 0 ? samples_per_branch : std::abs(tp[b] - tp[b - 1]);
        if (n == 0) n = 1;
        for (int k = 1; k <= n; ++k)
            samples.push_back(quantize(a + (z - a) * (static_cast<double>(k) / n), grid));
    }
    return samples;
}

std::vector<LoopPoint> hysteresis_loop(const PreisachGrid& grid, const KernelVector& kernel,
                                       const std::vector<double>& turning_points,
                                       int samples_per_branch) {
    std::vector<double> samples = loop_program(grid, turning_points, samples_per_branch);
    std::vector<double> moments = eval_discrete(grid, kernel, samples);
    std::vector<LoopPoint> trace(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) trace[i] = {samples[i], moments[i]};
    return trace;
}

} // namespace preisach
