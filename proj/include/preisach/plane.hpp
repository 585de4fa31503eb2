#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace preisach {

/// Truncated Preisach plane in (r, s) coordinates (r = relay half-width,
/// s = relay centre). Inputs live on the quantized levels {0, d, ..., m*d};
/// the reachable relays form the triangle
///     { (r, s) : r >= 0, s - r >= 0, s + r <= kmax },   kmax = m*d,
/// which is cut into m^2 congruent triangular cells whose edges contain
/// every admissible memory staircase. Cell ids are 1-based; see
/// docs/plane-format.md for the layout.
class PreisachGrid {
public:
    PreisachGrid(double d, int m);

    double d() const { return d_; }
    int m() const { return m_; }
    double kmax() const { return m_ * d_; }
    int cell_count() const { return m_ * m_; }
    int unknown_count() const { return m_ * m_ + 1; }  // cells plus the constant c

    bool operator==(const PreisachGrid& other) const = default;

private:
    double d_;
    int m_;
};

/// Round an input value to the nearest grid level (half away from zero) and
/// return it in input units. Values whose rounded level leaves [0, m] raise
/// a validation error; quantize_clamped saturates instead.
double quantize(double v, const PreisachGrid& grid);
double quantize_clamped(double v, const PreisachGrid& grid);

/// Level index of a quantized value; rejects values that are not grid
/// multiples or are out of range.
int level_of(double v, const PreisachGrid& grid);

/// Alternating dominant-extrema staircase. Stored as grid levels, starting
/// with a maximum; the empty sequence is the virgin state (every relay -1).
class MemoryCurve {
public:
    MemoryCurve() = default;

    bool virgin() const { return ext_.empty(); }
    std::size_t size() const { return ext_.size(); }
    int level(std::size_t i) const { return ext_[i]; }
    const std::vector<int>& levels() const { return ext_; }

    /// Extrema in input units for a given grid.
    std::vector<double> values(const PreisachGrid& grid) const;

    /// Relay state at a point of the plane given in thirds of d:
    /// u3 = 3*(s-r)/d, w3 = 3*(s+r)/d. +1 when the point lies below the
    /// staircase, -1 otherwise. Exact integer arithmetic.
    int sign_at_thirds(std::int64_t u3, std::int64_t w3) const;

    /// Wiping-out recursion for one already-quantized level.
    MemoryCurve updated(int level) const;

    bool operator==(const MemoryCurve& other) const = default;

private:
    std::vector<int> ext_;
};

/// Apply the wiping-out recursion for one input value (must be a grid
/// multiple inside [0, kmax]).
MemoryCurve memory_update(const PreisachGrid& grid, const MemoryCurve& curve, double v);

/// Per-cell signs for the current staircase followed by the fixed -1 slot
/// of the constant term: entries are +1 for cells below the curve, -1
/// otherwise. Length is grid.unknown_count().
std::vector<std::int8_t> sign_row(const MemoryCurve& curve, const PreisachGrid& grid);

struct CellTriangle {
    std::array<std::array<double, 2>, 3> vertex;  // (r, s) pairs
    double area() const;
};

/// Vertices of cell `id` (1-based, 1..m^2) in (r, s) coordinates.
CellTriangle cell_geometry(const PreisachGrid& grid, int id);

/// Cell centroid in thirds of d: (u3, w3) with u = s-r, w = s+r.
/// Centroids never touch a staircase line, so signs are unambiguous.
std::array<std::int64_t, 2> cell_centroid_thirds(const PreisachGrid& grid, int id);

/// Validate and convert a quantized value sequence to levels.
std::vector<int> to_levels(const PreisachGrid& grid, std::span<const double> values);

} // namespace preisach
