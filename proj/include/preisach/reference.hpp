#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "preisach/operator.hpp"
#include "preisach/plane.hpp"

namespace preisach::reference {

/// Straightforward serial versions of the parallel kernels. They exist so the
/// OpenMP paths can be checked against an obviously sequential evaluation and
/// so the benchmark has a baseline; production code should use the main API.

std::vector<double> eval_discrete(const PreisachGrid& grid, const KernelVector& kernel,
                                  std::span<const double> inputs);

std::vector<double> eval_relay_quadrature(const KernelField& field,
                                          std::span<const double> inputs,
                                          int nodes_per_side);

/// Gram matrix (n x n, row-major) of a row-major +/-1 sign matrix, exact
/// 64-bit integer accumulation.
std::vector<std::int64_t> gram(const std::vector<std::int8_t>& rows, int t, int n);

} // namespace preisach::reference
