#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace dyad {

inline constexpr int kMaxDim = 3;

// Fixed-size point; axes beyond the active dimension are zero.
using Point = std::array<double, kMaxDim>;

inline Point point(double x) { return {x, 0.0, 0.0}; }
inline Point point(double x, double y) { return {x, y, 0.0}; }
inline Point point(double x, double y, double z) { return {x, y, z}; }

// Neumaier-compensated accumulator. Reductions over cell arrays stay
// accurate independent of cell count and are order-deterministic.
class KahanSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// ---------------------------------------------------------------------------
// Lexicographic flat indexing for the level-l subdivision of a cube.
// Coordinates run in [0, 2^l) per axis; the first axis is most significant.
// ---------------------------------------------------------------------------

std::int64_t flat_count(int dim, int level);
std::int64_t flat_encode(std::span<const std::int64_t> coords, int dim, int level);
std::array<std::int64_t, kMaxDim> flat_decode(std::int64_t flat, int dim, int level);
std::int64_t flat_parent(std::int64_t flat, int dim, int level);
std::int64_t flat_child(std::int64_t flat, int dim, int level, unsigned corner_bits);
std::int64_t flat_ancestor(std::int64_t flat, int dim, int level, int generations);

/// Parameters (a, r, n) of a translated and dilated dyadic grid. Cubes at
/// level k have side r*2^(-k) and corners on a + (r*2^(-k))*Z^n.
class DyadicGrid {
public:
    DyadicGrid() = default;  // standard 1-D grid: a = 0, r = 1
    DyadicGrid(std::span<const double> translation, double calibre, int dimension);
    static DyadicGrid standard(int dimension);

    int dimension() const { return dim_; }
    double calibre() const { return calibre_; }
    double translation(int axis) const { return translation_[axis]; }

    bool operator==(const DyadicGrid&) const = default;

private:
    std::array<double, kMaxDim> translation_{};
    double calibre_ = 1.0;
    int dim_ = 1;
};

/// One cube of a dyadic grid: level k (side r*2^(-k)) and an integer index
/// per axis. Levels may be negative; the parent chain of [0,1)^n on the
/// standard grid runs through [0,2^k)^n.
class DyadicCube {
public:
    DyadicCube(DyadicGrid grid, int level, std::span<const std::int64_t> index);
    static DyadicCube unit(int dimension);  // [0,1)^n, standard grid

    const DyadicGrid& grid() const { return grid_; }
    int dimension() const { return grid_.dimension(); }
    int level() const { return level_; }
    std::int64_t index(int axis) const { return index_[axis]; }

    double side() const;
    double volume() const;
    double lower(int axis) const;
    double upper(int axis) const;
    Point center() const;

    // Half-open membership; every point lies in exactly one cube per level.
    bool contains_point(std::span<const double> point) const;
    // Set inclusion, decided in exact integer arithmetic. Requires the same grid.
    bool contains_cube(const DyadicCube& other) const;

    DyadicCube parent() const;
    DyadicCube child(unsigned corner_bits) const;
    DyadicCube ancestor(int generations) const;
    std::vector<DyadicCube> children() const;

    bool operator==(const DyadicCube& other) const;

private:
    DyadicGrid grid_;
    int level_ = 0;
    std::array<std::int64_t, kMaxDim> index_{};
};

/// Piecewise-constant real function at resolution L on a root cube. Values
/// are stored per finest-level cell in lexicographic order; all averages of
/// such functions are exact finite sums.
class GridFunction {
public:
    GridFunction(DyadicCube root, int resolution);
    GridFunction(DyadicCube root, int resolution, std::vector<double> values);

    const DyadicCube& root() const { return root_; }
    int resolution() const { return resolution_; }
    int dimension() const { return root_.dimension(); }
    std::int64_t cell_count() const { return static_cast<std::int64_t>(values_.size()); }

    double cell_side() const;
    double cell_volume() const;
    DyadicCube cell(std::int64_t flat) const;

    double value(std::int64_t flat) const { return values_[static_cast<std::size_t>(flat)]; }
    double& value(std::int64_t flat) { return values_[static_cast<std::size_t>(flat)]; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    /// Value of the finest cell containing the point (half-open cells).
    double value_at(std::span<const double> point) const;
    std::int64_t cell_index_at(std::span<const double> point) const;

    double integral() const;

    /// The same function represented with `extra_levels` more resolution.
    GridFunction refined(int extra_levels) const;

    bool same_shape(const GridFunction& other) const;

private:
    DyadicCube root_;
    int resolution_ = 0;
    std::vector<double> values_;
};

enum class TailMode { truncated, extended };

/// Finite model of a dyadic lattice: all sub-cubes of a root cube down to a
/// fixed depth, enumerated level-major then lexicographic. The tail mode
/// records whether analytic ancestor/descendant towers extend the model.
class ResolvedLattice {
public:
    ResolvedLattice(DyadicCube root, int depth, TailMode tails = TailMode::truncated);

    const DyadicCube& root() const { return root_; }
    int depth() const { return depth_; }
    TailMode tail_mode() const { return tails_; }
    int dimension() const { return root_.dimension(); }

    std::int64_t cube_count() const;
    std::int64_t level_count(int level_offset) const;
    DyadicCube cube(int level_offset, std::int64_t flat) const;

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (int l = 0; l <= depth_; ++l) {
            const std::int64_t n = level_count(l);
            for (std::int64_t i = 0; i < n; ++i) fn(l, i);
        }
    }

private:
    DyadicCube root_;
    int depth_ = 0;
    TailMode tails_ = TailMode::truncated;
};

ResolvedLattice build_lattice(const DyadicCube& root, int depth,
                              TailMode tails = TailMode::truncated);

/// Exact mean of f over Q, computed as nested child means so that
/// cube_average(f, Q) == (1/2^n) * sum of the children's averages bit for bit.
double cube_average(const GridFunction& f, const DyadicCube& cube);

/// All intervals of the 1-D grid at the given scale meeting [window_lo, window_hi),
/// ordered by index. Empty window gives an empty sequence.
std::vector<DyadicCube> shifted_grid_intervals(const DyadicGrid& grid, int scale,
                                               double window_lo, double window_hi);

/// Exact cube averages of f over every lattice cube, level-major storage.
class AveragePyramid {
public:
    AveragePyramid(const GridFunction& f, int depth);

    int depth() const { return static_cast<int>(levels_.size()) - 1; }
    double average(int level_offset, std::int64_t flat) const {
        return levels_[static_cast<std::size_t>(level_offset)][static_cast<std::size_t>(flat)];
    }
    const std::vector<double>& level(int level_offset) const {
        return levels_[static_cast<std::size_t>(level_offset)];
    }

private:
    std::vector<std::vector<double>> levels_;
};

// Cell-wise arithmetic; shapes must match where two functions are involved.
GridFunction pointwise_product(const GridFunction& a, const GridFunction& b);
GridFunction pointwise_abs(const GridFunction& f);
GridFunction pointwise_pow(const GridFunction& f, double exponent);
GridFunction linear_combination(double ca, const GridFunction& a, double cb,
                                const GridFunction& b);
GridFunction scaled(const GridFunction& f, double c);
double sup_norm(const GridFunction& f);
double l2_norm(const GridFunction& f);

}  // namespace dyad
