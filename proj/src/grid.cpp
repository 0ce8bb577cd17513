#include "dyad/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace dyad {

namespace {

void check_dimension(int dim) {
    if (dim < 1 || dim > kMaxDim) {
        throw std::invalid_argument("dimension must be in [1, 3]");
    }
}

}  // namespace

std::int64_t flat_count(int dim, int level) {
    return std::int64_t{1} << (dim * level);
}

std::int64_t flat_encode(std::span<const std::int64_t> coords, int dim, int level) {
    std::int64_t flat = 0;
    for (int c = 0; c < dim; ++c) flat = (flat << level) | coords[static_cast<std::size_t>(c)];
    return flat;
}

std::array<std::int64_t, kMaxDim> flat_decode(std::int64_t flat, int dim, int level) {
    std::array<std::int64_t, kMaxDim> coords{};
    const std::int64_t mask = (std::int64_t{1} << level) - 1;
    for (int c = dim - 1; c >= 0; --c) {
        coords[static_cast<std::size_t>(c)] = flat & mask;
        flat >>= level;
    }
    return coords;
}

std::int64_t flat_parent(std::int64_t flat, int dim, int level) {
    const auto coords = flat_decode(flat, dim, level);
    std::array<std::int64_t, kMaxDim> up{};
    for (int c = 0; c < dim; ++c) up[static_cast<std::size_t>(c)] = coords[static_cast<std::size_t>(c)] >> 1;
    return flat_encode({up.data(), static_cast<std::size_t>(dim)}, dim, level - 1);
}

std::int64_t flat_child(std::int64_t flat, int dim, int level, unsigned corner_bits) {
    const auto coords = flat_decode(flat, dim, level);
    std::array<std::int64_t, kMaxDim> down{};
    for (int c = 0; c < dim; ++c) {
        down[static_cast<std::size_t>(c)] =
            (coords[static_cast<std::size_t>(c)] << 1) | ((corner_bits >> c) & 1u);
    }
    return flat_encode({down.data(), static_cast<std::size_t>(dim)}, dim, level + 1);
}

std::int64_t flat_ancestor(std::int64_t flat, int dim, int level, int generations) {
    for (int g = 0; g < generations; ++g) flat = flat_parent(flat, dim, level - g);
    return flat;
}

// --------------------------------------------------------------------------
// DyadicGrid
// --------------------------------------------------------------------------

DyadicGrid::DyadicGrid(std::span<const double> translation, double calibre, int dimension)
    : calibre_(calibre), dim_(dimension) {
    check_dimension(dimension);
    if (!(calibre >= 1.0 && calibre < 2.0)) {
        throw std::invalid_argument("calibre must lie in [1, 2)");
    }
    if (static_cast<int>(translation.size()) != dimension) {
        throw std::invalid_argument("translation size must equal dimension");
    }
    for (int c = 0; c < dimension; ++c) {
        const double a = translation[static_cast<std::size_t>(c)];
        if (!(a > -calibre && a <= 0.0)) {
            throw std::invalid_argument("translation components must lie in (-r, 0]");
        }
        translation_[static_cast<std::size_t>(c)] = a;
    }
}

DyadicGrid DyadicGrid::standard(int dimension) {
    check_dimension(dimension);
    DyadicGrid g;
    g.dim_ = dimension;
    return g;
}

// --------------------------------------------------------------------------
// DyadicCube
// --------------------------------------------------------------------------

DyadicCube::DyadicCube(DyadicGrid grid, int level, std::span<const std::int64_t> index)
    : grid_(grid), level_(level) {
    if (static_cast<int>(index.size()) != grid_.dimension()) {
        throw std::invalid_argument("index size must equal grid dimension");
    }
    for (int c = 0; c < grid_.dimension(); ++c) index_[static_cast<std::size_t>(c)] = index[static_cast<std::size_t>(c)];
}

DyadicCube DyadicCube::unit(int dimension) {
    const std::array<std::int64_t, kMaxDim> zero{};
    return DyadicCube(DyadicGrid::standard(dimension), 0,
                      {zero.data(), static_cast<std::size_t>(dimension)});
}

double DyadicCube::side() const { return grid_.calibre() * std::ldexp(1.0, -level_); }

double DyadicCube::volume() const {
    double v = 1.0;
    for (int c = 0; c < dimension(); ++c) v *= side();
    return v;
}

double DyadicCube::lower(int axis) const {
    return grid_.translation(axis) + static_cast<double>(index_[static_cast<std::size_t>(axis)]) * side();
}

double DyadicCube::upper(int axis) const {
    return grid_.translation(axis) + static_cast<double>(index_[static_cast<std::size_t>(axis)] + 1) * side();
}

Point DyadicCube::center() const {
    Point p{};
    for (int c = 0; c < dimension(); ++c) p[static_cast<std::size_t>(c)] = 0.5 * (lower(c) + upper(c));
    return p;
}

bool DyadicCube::contains_point(std::span<const double> point) const {
    for (int c = 0; c < dimension(); ++c) {
        const double x = point[static_cast<std::size_t>(c)];
        if (!(x >= lower(c) && x < upper(c))) return false;
    }
    return true;
}

bool DyadicCube::contains_cube(const DyadicCube& other) const {
    if (!(grid_ == other.grid_)) {
        throw std::invalid_argument("cube containment requires a common grid");
    }
    if (other.level_ < level_) return false;
    return other.ancestor(other.level_ - level_) == *this;
}

DyadicCube DyadicCube::parent() const {
    std::array<std::int64_t, kMaxDim> up{};
    for (int c = 0; c < dimension(); ++c) up[static_cast<std::size_t>(c)] = index_[static_cast<std::size_t>(c)] >> 1;
    return DyadicCube(grid_, level_ - 1, {up.data(), static_cast<std::size_t>(dimension())});
}

DyadicCube DyadicCube::child(unsigned corner_bits) const {
    std::array<std::int64_t, kMaxDim> down{};
    for (int c = 0; c < dimension(); ++c) {
        down[static_cast<std::size_t>(c)] = (index_[static_cast<std::size_t>(c)] << 1) | ((corner_bits >> c) & 1u);
    }
    return DyadicCube(grid_, level_ + 1, {down.data(), static_cast<std::size_t>(dimension())});
}

DyadicCube DyadicCube::ancestor(int generations) const {
    DyadicCube q = *this;
    for (int g = 0; g < generations; ++g) q = q.parent();
    return q;
}

std::vector<DyadicCube> DyadicCube::children() const {
    const unsigned count = 1u << dimension();
    std::vector<DyadicCube> out;
    out.reserve(count);
    for (unsigned bits = 0; bits < count; ++bits) out.push_back(child(bits));
    return out;
}

bool DyadicCube::operator==(const DyadicCube& other) const {
    if (!(grid_ == other.grid_) || level_ != other.level_) return false;
    for (int c = 0; c < dimension(); ++c) {
        if (index_[static_cast<std::size_t>(c)] != other.index_[static_cast<std::size_t>(c)]) return false;
    }
    return true;
}

// --------------------------------------------------------------------------
// GridFunction
// --------------------------------------------------------------------------

GridFunction::GridFunction(DyadicCube root, int resolution)
    : root_(root), resolution_(resolution) {
    if (resolution < 0) throw std::invalid_argument("resolution must be >= 0");
    values_.assign(static_cast<std::size_t>(flat_count(dimension(), resolution)), 0.0);
}

GridFunction::GridFunction(DyadicCube root, int resolution, std::vector<double> values)
    : root_(root), resolution_(resolution), values_(std::move(values)) {
    if (resolution < 0) throw std::invalid_argument("resolution must be >= 0");
    if (static_cast<std::int64_t>(values_.size()) != flat_count(dimension(), resolution)) {
        throw std::invalid_argument("values length must equal 2^(n*L)");
    }
}

double GridFunction::cell_side() const { return root_.side() * std::ldexp(1.0, -resolution_); }

double GridFunction::cell_volume() const {
    double v = 1.0;
    for (int c = 0; c < dimension(); ++c) v *= cell_side();
    return v;
}

DyadicCube GridFunction::cell(std::int64_t flat) const {
    const auto rel = flat_decode(flat, dimension(), resolution_);
    std::array<std::int64_t, kMaxDim> abs{};
    for (int c = 0; c < dimension(); ++c) {
        abs[static_cast<std::size_t>(c)] = (root_.index(c) << resolution_) + rel[static_cast<std::size_t>(c)];
    }
    return DyadicCube(root_.grid(), root_.level() + resolution_,
                      {abs.data(), static_cast<std::size_t>(dimension())});
}

std::int64_t GridFunction::cell_index_at(std::span<const double> point) const {
    if (!root_.contains_point(point)) {
        throw std::domain_error("point outside the root cube");
    }
    const double h = cell_side();
    const std::int64_t per_side = std::int64_t{1} << resolution_;
    std::array<std::int64_t, kMaxDim> coords{};
    for (int c = 0; c < dimension(); ++c) {
        auto i = static_cast<std::int64_t>(std::floor((point[static_cast<std::size_t>(c)] - root_.lower(c)) / h));
        i = std::clamp<std::int64_t>(i, 0, per_side - 1);
        // floor() can land one cell off at cell boundaries; fix with the
        // half-open membership test.
        const double x = point[static_cast<std::size_t>(c)];
        const double lo = root_.lower(c);
        while (i > 0 && x < lo + static_cast<double>(i) * h) --i;
        while (i + 1 < per_side && x >= lo + static_cast<double>(i + 1) * h) ++i;
        coords[static_cast<std::size_t>(c)] = i;
    }
    return flat_encode({coords.data(), static_cast<std::size_t>(dimension())}, dimension(), resolution_);
}

double GridFunction::value_at(std::span<const double> point) const {
    return values_[static_cast<std::size_t>(cell_index_at(point))];
}

double GridFunction::integral() const {
    KahanSum s;
    for (double v : values_) s.add(v);
    return s.value() * cell_volume();
}

GridFunction GridFunction::refined(int extra_levels) const {
    if (extra_levels < 0) throw std::invalid_argument("extra_levels must be >= 0");
    GridFunction out(root_, resolution_ + extra_levels);
    const int dim = dimension();
    const std::int64_t n = out.cell_count();
    for (std::int64_t i = 0; i < n; ++i) {
        out.value(i) = values_[static_cast<std::size_t>(
            flat_ancestor(i, dim, resolution_ + extra_levels, extra_levels))];
    }
    return out;
}

bool GridFunction::same_shape(const GridFunction& other) const {
    return root_ == other.root_ && resolution_ == other.resolution_;
}

// --------------------------------------------------------------------------
// ResolvedLattice
// --------------------------------------------------------------------------

ResolvedLattice::ResolvedLattice(DyadicCube root, int depth, TailMode tails)
    : root_(root), depth_(depth), tails_(tails) {
    if (depth < 0) throw std::invalid_argument("lattice depth must be >= 0");
}

std::int64_t ResolvedLattice::cube_count() const {
    std::int64_t total = 0;
    for (int l = 0; l <= depth_; ++l) total += level_count(l);
    return total;
}

std::int64_t ResolvedLattice::level_count(int level_offset) const {
    return flat_count(dimension(), level_offset);
}

DyadicCube ResolvedLattice::cube(int level_offset, std::int64_t flat) const {
    const auto rel = flat_decode(flat, dimension(), level_offset);
    std::array<std::int64_t, kMaxDim> abs{};
    for (int c = 0; c < dimension(); ++c) {
        abs[static_cast<std::size_t>(c)] = (root_.index(c) << level_offset) + rel[static_cast<std::size_t>(c)];
    }
    return DyadicCube(root_.grid(), root_.level() + level_offset,
                      {abs.data(), static_cast<std::size_t>(dimension())});
}

ResolvedLattice build_lattice(const DyadicCube& root, int depth, TailMode tails) {
    return ResolvedLattice(root, depth, tails);
}

// --------------------------------------------------------------------------
// cube_average and friends
// --------------------------------------------------------------------------

namespace {

// Mean over the cell block of a lattice cube, as nested means of 2^n child
// means. This makes parent/child average consistency hold bit-exactly.
double block_mean(const GridFunction& f, int level_offset, std::int64_t flat) {
    if (level_offset == f.resolution()) return f.value(flat);
    const int dim = f.dimension();
    double sum = 0.0;
    for (unsigned bits = 0; bits < (1u << dim); ++bits) {
        sum += block_mean(f, level_offset + 1, flat_child(flat, dim, level_offset, bits));
    }
    return sum / static_cast<double>(std::int64_t{1} << dim);
}

}  // namespace

double cube_average(const GridFunction& f, const DyadicCube& cube) {
    const DyadicCube& root = f.root();
    if (!(cube.grid() == root.grid())) {
        throw std::domain_error("cube does not belong to the function's grid");
    }
    const int offset = cube.level() - root.level();
    if (offset < 0 || !root.contains_cube(cube)) {
        throw std::domain_error("cube lies outside the root cube");
    }
    if (offset > f.resolution()) {
        throw std::invalid_argument("cube is finer than the function resolution");
    }
    std::array<std::int64_t, kMaxDim> rel{};
    for (int c = 0; c < f.dimension(); ++c) {
        rel[static_cast<std::size_t>(c)] = cube.index(c) - (root.index(c) << offset);
    }
    const std::int64_t flat =
        flat_encode({rel.data(), static_cast<std::size_t>(f.dimension())}, f.dimension(), offset);
    return block_mean(f, offset, flat);
}

std::vector<DyadicCube> shifted_grid_intervals(const DyadicGrid& grid, int scale,
                                               double window_lo, double window_hi) {
    if (grid.dimension() != 1) {
        throw std::invalid_argument("shifted_grid_intervals requires a 1-D grid");
    }
    std::vector<DyadicCube> out;
    if (!(window_lo < window_hi)) return out;
    const double h = grid.calibre() * std::ldexp(1.0, -scale);
    const double a = grid.translation(0);
    auto m = static_cast<std::int64_t>(std::floor((window_lo - a) / h));
    // std::floor can land one step off in the last bit; realign on the
    // half-open predicate.
    while (a + static_cast<double>(m + 1) * h <= window_lo) ++m;
    while (a + static_cast<double>(m) * h > window_lo) --m;
    for (; a + static_cast<double>(m) * h < window_hi; ++m) {
        const std::int64_t idx[1] = {m};
        out.emplace_back(grid, scale, std::span<const std::int64_t>{idx, 1});
    }
    return out;
}

AveragePyramid::AveragePyramid(const GridFunction& f, int depth) {
    if (depth < 0 || depth > f.resolution()) {
        throw std::invalid_argument("pyramid depth must lie in [0, resolution]");
    }
    const int dim = f.dimension();
    const int res = f.resolution();
    std::vector<std::vector<double>> full(static_cast<std::size_t>(res) + 1);
    full[static_cast<std::size_t>(res)].assign(f.values().begin(), f.values().end());
    const double scale = 1.0 / static_cast<double>(std::int64_t{1} << dim);
    for (int l = res - 1; l >= 0; --l) {
        const std::int64_t n = flat_count(dim, l);
        auto& level = full[static_cast<std::size_t>(l)];
        level.assign(static_cast<std::size_t>(n), 0.0);
        const auto& finer = full[static_cast<std::size_t>(l + 1)];
        for (std::int64_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (unsigned bits = 0; bits < (1u << dim); ++bits) {
                sum += finer[static_cast<std::size_t>(flat_child(i, dim, l, bits))];
            }
            level[static_cast<std::size_t>(i)] = sum * scale;
        }
    }
    levels_.assign(full.begin(), full.begin() + depth + 1);
}

// --------------------------------------------------------------------------
// Cell-wise arithmetic
// --------------------------------------------------------------------------

namespace {

void require_same_shape(const GridFunction& a, const GridFunction& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("grid function shapes differ");
}

}  // namespace

GridFunction pointwise_product(const GridFunction& a, const GridFunction& b) {
    require_same_shape(a, b);
    GridFunction out(a.root(), a.resolution());
    for (std::int64_t i = 0; i < a.cell_count(); ++i) out.value(i) = a.value(i) * b.value(i);
    return out;
}

GridFunction pointwise_abs(const GridFunction& f) {
    GridFunction out(f.root(), f.resolution());
    for (std::int64_t i = 0; i < f.cell_count(); ++i) out.value(i) = std::abs(f.value(i));
    return out;
}

GridFunction pointwise_pow(const GridFunction& f, double exponent) {
    GridFunction out(f.root(), f.resolution());
    for (std::int64_t i = 0; i < f.cell_count(); ++i) out.value(i) = std::pow(f.value(i), exponent);
    return out;
}

GridFunction linear_combination(double ca, const GridFunction& a, double cb,
                                const GridFunction& b) {
    require_same_shape(a, b);
    GridFunction out(a.root(), a.resolution());
    for (std::int64_t i = 0; i < a.cell_count(); ++i) out.value(i) = ca * a.value(i) + cb * b.value(i);
    return out;
}

GridFunction scaled(const GridFunction& f, double c) {
    GridFunction out(f.root(), f.resolution());
    for (std::int64_t i = 0; i < f.cell_count(); ++i) out.value(i) = c * f.value(i);
    return out;
}

double sup_norm(const GridFunction& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double l2_norm(const GridFunction& f) {
    KahanSum s;
    for (double v : f.values()) s.add(v * v);
    return std::sqrt(s.value() * f.cell_volume());
}

}  // namespace dyad
