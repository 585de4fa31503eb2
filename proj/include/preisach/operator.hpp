#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "preisach/plane.hpp"

namespace preisach {

/// Unknown vector of the discrete model: one integral of the kernel per cell
/// (1-based cell ids map to entries 0..m^2-1) followed by the constant c of
/// the never-reached region D.
struct KernelVector {
    std::vector<double> x;

    static KernelVector zeros(const PreisachGrid& grid);

    double c() const { return x.back(); }
    double& c() { return x.back(); }
    double cell(int id) const { return x[static_cast<std::size_t>(id) - 1]; }
    double& cell(int id) { return x[static_cast<std::size_t>(id) - 1]; }

    void validate(const PreisachGrid& grid) const;
};

/// Scalar kernel density omega(r, s) supported on [0, kmax]^2.
///
/// Two backings: a cell-centred q x q sample lattice (value of the containing
/// lattice cell), or the exact piecewise-constant density induced by a grid
/// and a KernelVector. The latter spreads each cell integral uniformly over
/// its triangle and places the D constant on the sub-region s + r > kmax
/// whose relays can never switch for inputs in [0, kmax]; the strip below the
/// diagonal (s < r, s + r < kmax) latches +1 after one crossing, so it
/// carries zero density and the D term stays the constant -c it stands for.
class KernelField {
public:
    static KernelField from_samples(double kmax, int q, std::vector<double> values);
    static KernelField piecewise_constant(const PreisachGrid& grid, const KernelVector& kernel);

    double kmax() const { return kmax_; }
    /// Subdivision count per axis used to lay out quadrature nodes.
    int alignment_levels() const;
    double value_at(double r, double s) const;

private:
    struct Samples {
        int q;
        std::vector<double> values;  // index = is * q + ir, cell-centred
    };
    struct Piecewise {
        PreisachGrid grid;
        KernelVector kernel;
    };

    KernelField(double kmax, std::variant<Samples, Piecewise> body)
        : kmax_(kmax), body_(std::move(body)) {}

    double kmax_;
    std::variant<Samples, Piecewise> body_;
};

/// One quadrature node of the relay-superposition integral.
struct QuadNode {
    double r, s, weight;
};

/// Nodes covering [0, kmax]^2: every triangle of the `levels`-triangulation
/// (reachable cells plus the two D sub-triangles) subdivided into congruent
/// copies with centroid nodes. Node positions never touch a staircase line,
/// so relay states at the nodes are unambiguous. `nodes_per_side` = p gives
/// p^2 nodes per reachable cell.
std::vector<QuadNode> quadrature_nodes(double kmax, int levels, int nodes_per_side);

/// Discrete forward evaluation: evolve the memory curve through the quantized
/// inputs and emit sign_row . X at every step.
std::vector<double> eval_discrete(const PreisachGrid& grid, const KernelVector& kernel,
                                  std::span<const double> inputs);

/// Brute-force relay superposition: midpoint-style quadrature of the kernel
/// density times one honest relay per node, all relays starting at -1.
/// Independent of the staircase bookkeeping; serves as its oracle.
std::vector<double> eval_relay_quadrature(const KernelField& field,
                                          std::span<const double> inputs,
                                          int nodes_per_side);

struct LoopPoint {
    double kappa, moment;
};

/// Piecewise-linear input program through the given turning points, one
/// sample per grid step along each branch unless samples_per_branch > 0,
/// evaluated with eval_discrete and paired for plotting.
std::vector<LoopPoint> hysteresis_loop(const PreisachGrid& grid, const KernelVector& kernel,
                                       const std::vector<double>& turning_points,
                                       int samples_per_branch = 0);

/// Input samples of the program above without evaluating the kernel.
std::vector<double> loop_program(const PreisachGrid& grid,
                                 const std::vector<double>& turning_points,
                                 int samples_per_branch = 0);

} // namespace preisach
