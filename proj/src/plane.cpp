#include "preisach/plane.hpp"

#include <cmath>
#include <string>

#include "preisach/errors.hpp"

namespace preisach {

PreisachGrid::PreisachGrid(double d, int m) : d_(d), m_(m) {
    if (!std::isfinite(d) || d <= 0.0)
        throw validation_error("grid step d must be positive and finite");
    if (m < 1)
        throw validation_error("grid needs at least one level");
}

namespace {

// Nearest level with half-away-from-zero ties. Binary floating point puts
// decimal half-steps like 0.25/0.1 a hair below 2.5, so quotients within a
// small relative band of an exact half are treated as the tie case.
int nearest_level(double v, double d) {
    double q = v / d;
    double half = std::floor(q) + 0.5;
    if (std::abs(q - half) <= 1e-9 * std::max(1.0, std::abs(q)))
        q = half;
    return static_cast<int>(std::round(q));  // std::round ties away from zero
}

} // namespace

double quantize(double v, const PreisachGrid& grid) {
    if (!std::isfinite(v))
        throw validation_error("input value must be finite");
    int lvl = nearest_level(v, grid.d());
    if (lvl < 0 || lvl > grid.m())
        throw validation_error("input " + std::to_string(v) + " quantizes outside [0, " +
                               std::to_string(grid.kmax()) + "]");
    return lvl * grid.d();
}

double quantize_clamped(double v, const PreisachGrid& grid) {
    if (!std::isfinite(v))
        throw validation_error("input value must be finite");
    int lvl = nearest_level(v, grid.d());
    if (lvl < 0) lvl = 0;
    if (lvl > grid.m()) lvl = grid.m();
    return lvl * grid.d();
}

int level_of(double v, const PreisachGrid& grid) {
    if (!std::isfinite(v))
        throw validation_error("input value must be finite");
    int lvl = static_cast<int>(std::llround(v / grid.d()));
    if (std::abs(v - lvl * grid.d()) > 1e-9 * grid.d())
        throw validation_error("value " + std::to_string(v) + " is not a multiple of d");
    if (lvl < 0 || lvl > grid.m())
        throw validation_error("value " + std::to_string(v) + " outside [0, kmax]");
    return lvl;
}

std::vector<double> MemoryCurve::values(const PreisachGrid& grid) const {
    std::vector<double> out;
    out.reserve(ext_.size());
    for (int lvl : ext_) out.push_back(lvl * grid.d());
    return out;
}

int MemoryCurve::sign_at_thirds(std::int64_t u3, std::int64_t w3) const {
    // Replay semantics in closed form: the point is +1 exactly when its most
    // recent up-switch postdates its most recent down-switch. M_k precedes
    // m_k in the stored sequence, so comparing the two scan depths below
    // settles which switch came last.
    std::size_t k_up = 0;   // largest k with M_k >= w
    std::size_t k_dn = 0;   // largest k with m_k <= u
    for (std::size_t i = 0; i < ext_.size(); i += 2)
        if (3ll * ext_[i] >= w3) k_up = i / 2 + 1;
    for (std::size_t i = 1; i < ext_.size(); i += 2)
        if (3ll * ext_[i] <= u3) k_dn = (i - 1) / 2 + 1;
    return k_up > k_dn ? 1 : -1;
}

MemoryCurve MemoryCurve::updated(int level) const {
    MemoryCurve next = *this;
    auto& e = next.ext_;

    if (e.empty()) {
        if (level > 0) e.push_back(level);  // level 0 from virgin changes nothing
        return next;
    }
    int current = e.back();
    if (level == current) return next;

    if (level > current) {
        // Rising: a trailing maximum at or below the new value is overridden,
        // and every (min, max) pair whose maximum is reached gets wiped.
        if (e.size() % 2 == 1) e.pop_back();
        while (e.size() >= 2 && e[e.size() - 2] <= level) {
            e.pop_back();
            e.pop_back();
        }
        e.push_back(level);
    } else {
        // Falling: mirror image; dropping to level 0 erases all memory.
        if (e.size() % 2 == 0) e.pop_back();
        while (e.size() >= 2 && e[e.size() - 2] >= level) {
            e.pop_back();
            e.pop_back();
        }
        if (level == 0)
            e.clear();
        else
            e.push_back(level);
    }
    return next;
}

MemoryCurve memory_update(const PreisachGrid& grid, const MemoryCurve& curve, double v) {
    return curve.updated(level_of(v, grid));
}

namespace {

struct CellRef {
    int band;  // 1..m, by increasing s+r
    int slot;  // 0..2*band-2 within the band
};

CellRef cell_ref(const PreisachGrid& grid, int id) {
    if (id < 1 || id > grid.cell_count())
        throw validation_error("cell id " + std::to_string(id) + " out of range");
    int idx = id - 1;
    int band = static_cast<int>(std::sqrt(static_cast<double>(idx)));
    while ((band + 1) * (band + 1) <= idx) ++band;  // guard fp sqrt
    while (band * band > idx) --band;
    ++band;
    return {band, idx - (band - 1) * (band - 1)};
}

} // namespace

std::vector<std::int8_t> sign_row(const MemoryCurve& curve, const PreisachGrid& grid) {
    const int m = grid.m();
    std::vector<std::int8_t> row(grid.unknown_count());
    int idx = 0;
    for (int band = 1; band <= m; ++band) {
        for (int slot = 0; slot <= 2 * band - 2; ++slot, ++idx) {
            int i = slot / 2;
            std::int64_t u3 = (slot % 2 == 0) ? 3ll * i + 1 : 3ll * i + 2;
            std::int64_t w3 = (slot % 2 == 0) ? 3ll * band - 1 : 3ll * band - 2;
            row[idx] = static_cast<std::int8_t>(curve.sign_at_thirds(u3, w3));
        }
    }
    row[grid.cell_count()] = -1;  // constant-term slot
    return row;
}

double CellTriangle::area() const {
    const auto& v = vertex;
    return 0.5 * std::abs((v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) -
                          (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]));
}

CellTriangle cell_geometry(const PreisachGrid& grid, int id) {
    auto [band, slot] = cell_ref(grid, id);
    const double d = grid.d();
    const int i = slot / 2;
    const int j = band;
    // Vertices in (u, w) multiples of d, then mapped by r = (w-u)/2, s = (w+u)/2.
    int uw[3][2];
    if (slot % 2 == 0) {
        uw[0][0] = i;     uw[0][1] = j - 1;
        uw[1][0] = i + 1; uw[1][1] = j;
        uw[2][0] = i;     uw[2][1] = j;
    } else {
        uw[0][0] = i;     uw[0][1] = j - 1;
        uw[1][0] = i + 1; uw[1][1] = j - 1;
        uw[2][0] = i + 1; uw[2][1] = j;
    }
    CellTriangle tri;
    for (int k = 0; k < 3; ++k) {
        double u = uw[k][0] * d, w = uw[k][1] * d;
        tri.vertex[k] = {0.5 * (w - u), 0.5 * (w + u)};
    }
    return tri;
}

std::array<std::int64_t, 2> cell_centroid_thirds(const PreisachGrid& grid, int id) {
    auto [band, slot] = cell_ref(grid, id);
    std::int64_t i = slot / 2;
    if (slot % 2 == 0) return {3 * i + 1, 3ll * band - 1};
    return {3 * i + 2, 3ll * band - 2};
}

std::vector<int> to_levels(const PreisachGrid& grid, std::span<const double> values) {
    std::vector<int> levels;
    levels.reserve(values.size());
    for (double v : values) levels.push_back(level_of(v, grid));
    return levels;
}

} // namespace preisach
