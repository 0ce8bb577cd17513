#include "dyad/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dyad {

namespace {

void check_alpha_open(double alpha, int dim) {
    if (!(alpha > 0.0 && alpha < static_cast<double>(dim))) {
        throw std::invalid_argument("alpha must lie in (0, n)");
    }
}

void check_operator_shapes(const GridFunction& f, const ResolvedLattice& lattice) {
    if (!(lattice.root() == f.root()) || lattice.depth() != f.resolution()) {
        throw std::invalid_argument("lattice root/depth must match the function shape");
    }
}

// |Q|^(alpha/n) = side^alpha for the level-l cubes of the lattice.
std::vector<double> level_side_powers(const ResolvedLattice& lattice, double alpha) {
    std::vector<double> out(static_cast<std::size_t>(lattice.depth()) + 1);
    for (int l = 0; l <= lattice.depth(); ++l) {
        out[static_cast<std::size_t>(l)] = std::pow(lattice.cube(l, 0).side(), alpha);
    }
    return out;
}

// acc[l][i] = sum over ancestors (within the lattice, inclusive) of addend.
std::vector<std::vector<double>> tower_prefix(const std::vector<std::vector<double>>& addend,
                                              int dim) {
    std::vector<std::vector<double>> acc(addend.size());
    acc[0] = addend[0];
    for (std::size_t l = 1; l < addend.size(); ++l) {
        const auto& fine = addend[l];
        acc[l].resize(fine.size());
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(fine.size()); ++i) {
            acc[l][static_cast<std::size_t>(i)] =
                acc[l - 1][static_cast<std::size_t>(flat_parent(i, dim, static_cast<int>(l)))] +
                fine[static_cast<std::size_t>(i)];
        }
    }
    return acc;
}

double ancestor_tail_factor(const ResolvedLattice& lattice, double alpha) {
    const int n = lattice.dimension();
    const double t = std::exp2(alpha - static_cast<double>(n));
    return std::pow(lattice.root().side(), alpha - static_cast<double>(n)) * t / (1.0 - t);
}

}  // namespace

GridFunction dyadic_frac_integral(const GridFunction& f, double alpha,
                                  const ResolvedLattice& lattice, TailMode tails) {
    check_alpha_open(alpha, f.dimension());
    check_operator_shapes(f, lattice);
    const int dim = f.dimension();
    const int depth = lattice.depth();
    const AveragePyramid averages(f, depth);
    const auto side_pow = level_side_powers(lattice, alpha);

    std::vector<std::vector<double>> addend(static_cast<std::size_t>(depth) + 1);
    for (int l = 0; l <= depth; ++l) {
        const std::int64_t n = lattice.level_count(l);
        addend[static_cast<std::size_t>(l)].resize(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) {
            addend[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] =
                side_pow[static_cast<std::size_t>(l)] * averages.average(l, i);
        }
    }
    const auto acc = tower_prefix(addend, dim);

    GridFunction out(f.root(), f.resolution());
    const auto& cells = acc[static_cast<std::size_t>(depth)];
    for (std::int64_t i = 0; i < out.cell_count(); ++i) out.value(i) = cells[static_cast<std::size_t>(i)];

    if (tails == TailMode::extended) {
        const double c_alpha = 1.0 / (std::exp2(alpha) - 1.0);
        const double finest = side_pow[static_cast<std::size_t>(depth)];
        const double above = ancestor_tail_factor(lattice, alpha) * f.integral();
        for (std::int64_t i = 0; i < out.cell_count(); ++i) {
            out.value(i) += c_alpha * finest * f.value(i) + above;
        }
    }
    return out;
}

GridFunction dyadic_frac_integral(const GridFunction& f, double alpha,
                                  const ResolvedLattice& lattice) {
    return dyadic_frac_integral(f, alpha, lattice, lattice.tail_mode());
}

GridFunction frac_maximal(const GridFunction& f, double alpha, const ResolvedLattice& lattice,
                          TailMode tails) {
    if (!(alpha >= 0.0 && alpha < static_cast<double>(f.dimension()))) {
        throw std::invalid_argument("alpha must lie in [0, n)");
    }
    check_operator_shapes(f, lattice);
    const int dim = f.dimension();
    const int depth = lattice.depth();
    const GridFunction abs_f = pointwise_abs(f);
    const AveragePyramid averages(abs_f, depth);
    const auto side_pow = level_side_powers(lattice, alpha);

    // The ancestor tower values decrease geometrically, so k = 1 is the only
    // candidate beyond the root.
    double floor_value = 0.0;
    if (tails == TailMode::extended) {
        const double above_side = 2.0 * lattice.root().side();
        floor_value = std::pow(above_side, alpha - static_cast<double>(dim)) * abs_f.integral();
    }

    std::vector<double> best(1, std::max(side_pow[0] * averages.average(0, 0), floor_value));
    for (int l = 1; l <= depth; ++l) {
        const std::int64_t n = lattice.level_count(l);
        std::vector<double> next(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) {
            next[static_cast<std::size_t>(i)] =
                std::max(best[static_cast<std::size_t>(flat_parent(i, dim, l))],
                         side_pow[static_cast<std::size_t>(l)] * averages.average(l, i));
        }
        best = std::move(next);
    }
    return GridFunction(f.root(), f.resolution(), std::move(best));
}

GridFunction frac_maximal(const GridFunction& f, double alpha, const ResolvedLattice& lattice) {
    return frac_maximal(f, alpha, lattice, lattice.tail_mode());
}

GridFunction square_function(const GridFunction& f, const ResolvedLattice& lattice) {
    check_operator_shapes(f, lattice);
    const int dim = f.dimension();
    const int depth = lattice.depth();
    const HaarCoefficients coeffs = haar_forward(f, lattice);

    std::vector<std::vector<double>> addend(static_cast<std::size_t>(depth) + 1);
    for (int l = 0; l <= depth; ++l) {
        addend[static_cast<std::size_t>(l)].assign(
            static_cast<std::size_t>(lattice.level_count(l)), 0.0);
    }
    for (const auto& [key, coef] : coeffs.entries()) {
        const double volume = lattice.cube(key.level, key.flat).volume();
        addend[static_cast<std::size_t>(key.level)][static_cast<std::size_t>(key.flat)] +=
            coef * coef / volume;
    }
    const auto acc = tower_prefix(addend, dim);

    GridFunction out(f.root(), f.resolution());
    const auto& cells = acc[static_cast<std::size_t>(depth)];
    for (std::int64_t i = 0; i < out.cell_count(); ++i) {
        out.value(i) = std::sqrt(cells[static_cast<std::size_t>(i)]);
    }
    return out;
}

DecompositionTerms decomposition_terms(const GridFunction& b, const GridFunction& f,
                                       double alpha, const ResolvedLattice& lattice) {
    if (!b.same_shape(f)) throw std::invalid_argument("b and f must share a cell grid");
    check_alpha_open(alpha, f.dimension());
    check_operator_shapes(f, lattice);
    const int dim = f.dimension();
    const int depth = lattice.depth();
    const AveragePyramid f_avg(f, depth);
    const HaarCoefficients b_hat = haar_forward(b, lattice);
    const HaarCoefficients f_hat = haar_forward(f, lattice);
    const auto side_pow = level_side_powers(lattice, alpha);
    const double c_alpha = 1.0 / (std::exp2(alpha) - 1.0);

    // pi_010: synthesis of b^(Q,sig) <f>_Q |Q|^(alpha/n).
    HaarCoefficients pi_010_coeffs(lattice, 0.0);
    for (const auto& [key, coef] : b_hat.entries()) {
        const double value =
            coef * f_avg.average(key.level, key.flat) * side_pow[static_cast<std::size_t>(key.level)];
        if (value != 0.0) pi_010_coeffs.entries()[key] = value;
    }
    GridFunction pi_010 = haar_inverse(pi_010_coeffs);

    // Paired coefficient mass per cube: sum over signatures of b^ * f^.
    std::vector<std::vector<double>> paired(static_cast<std::size_t>(depth) + 1);
    for (int l = 0; l <= depth; ++l) {
        paired[static_cast<std::size_t>(l)].assign(
            static_cast<std::size_t>(lattice.level_count(l)), 0.0);
    }
    for (const auto& [key, coef] : b_hat.entries()) {
        const auto it = f_hat.entries().find(key);
        if (it != f_hat.entries().end()) {
            paired[static_cast<std::size_t>(key.level)][static_cast<std::size_t>(key.flat)] +=
                coef * it->second;
        }
    }

    // pi_001: towers of paired mass * |Q|^(alpha/n) / |Q|.
    std::vector<std::vector<double>> pi001_addend(static_cast<std::size_t>(depth) + 1);
    for (int l = 0; l <= depth; ++l) {
        const double density = side_pow[static_cast<std::size_t>(l)] / lattice.cube(l, 0).volume();
        const auto& src = paired[static_cast<std::size_t>(l)];
        auto& dst = pi001_addend[static_cast<std::size_t>(l)];
        dst.resize(src.size());
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] * density;
    }
    const auto pi001_acc = tower_prefix(pi001_addend, dim);
    GridFunction pi_001(f.root(), f.resolution());
    for (std::int64_t i = 0; i < pi_001.cell_count(); ++i) {
        pi_001.value(i) = pi001_acc[static_cast<std::size_t>(depth)][static_cast<std::size_t>(i)];
    }

    // t1: strictly-coarser coefficient sums of f. U on a child cube picks up
    // |Q|^(alpha/n) times the average jump from its parent, so a top-down
    // recursion reproduces the sum over Q strictly containing P.
    std::vector<std::vector<double>> coarser(static_cast<std::size_t>(depth) + 1);
    coarser[0].assign(1, 0.0);
    for (int l = 1; l <= depth; ++l) {
        const std::int64_t n = lattice.level_count(l);
        coarser[static_cast<std::size_t>(l)].resize(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) {
            const std::int64_t parent = flat_parent(i, dim, l);
            coarser[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] =
                coarser[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(parent)] +
                side_pow[static_cast<std::size_t>(l - 1)] *
                    (f_avg.average(l, i) - f_avg.average(l - 1, parent));
        }
    }
    HaarCoefficients t1_coeffs(lattice, 0.0);
    for (const auto& [key, coef] : b_hat.entries()) {
        const double value =
            coef * coarser[static_cast<std::size_t>(key.level)][static_cast<std::size_t>(key.flat)];
        if (value != 0.0) t1_coeffs.entries()[key] = value;
    }
    GridFunction t1 = haar_inverse(t1_coeffs);

    // t2: for each cube R, the ancestor-density |R|^(alpha/n)/|R| multiplies
    // the paired mass of all strict descendants; the tower above the root
    // contributes a constant driven by the total paired mass.
    std::vector<std::vector<double>> below(static_cast<std::size_t>(depth) + 1);
    below[static_cast<std::size_t>(depth)].assign(
        static_cast<std::size_t>(lattice.level_count(depth)), 0.0);
    for (int l = depth - 1; l >= 0; --l) {
        const std::int64_t n = lattice.level_count(l);
        below[static_cast<std::size_t>(l)].assign(static_cast<std::size_t>(n), 0.0);
        for (std::int64_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (unsigned bits = 0; bits < (1u << dim); ++bits) {
                const std::int64_t child = flat_child(i, dim, l, bits);
                sum += below[static_cast<std::size_t>(l + 1)][static_cast<std::size_t>(child)] +
                       paired[static_cast<std::size_t>(l + 1)][static_cast<std::size_t>(child)];
            }
            below[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] = sum;
        }
    }
    std::vector<std::vector<double>> t2_addend(static_cast<std::size_t>(depth) + 1);
    for (int l = 0; l <= depth; ++l) {
        const double density = side_pow[static_cast<std::size_t>(l)] / lattice.cube(l, 0).volume();
        const auto& src = below[static_cast<std::size_t>(l)];
        auto& dst = t2_addend[static_cast<std::size_t>(l)];
        dst.resize(src.size());
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] * density;
    }
    const auto t2_acc = tower_prefix(t2_addend, dim);
    double total_paired = 0.0;
    for (const auto& level : paired) {
        for (double v : level) total_paired += v;
    }
    const double above = ancestor_tail_factor(lattice, alpha) * total_paired;
    GridFunction t2(f.root(), f.resolution());
    for (std::int64_t i = 0; i < t2.cell_count(); ++i) {
        t2.value(i) = t2_acc[static_cast<std::size_t>(depth)][static_cast<std::size_t>(i)] + above;
    }

    return DecompositionTerms{std::move(pi_010), std::move(pi_001), std::move(t1), std::move(t2),
                              c_alpha};
}

GridFunction recombine(const DecompositionTerms& terms) {
    GridFunction out = linear_combination(terms.c_alpha, terms.t1, -terms.c_alpha, terms.pi_010);
    out = linear_combination(1.0, out, -1.0, terms.pi_001);
    return linear_combination(1.0, out, -1.0, terms.t2);
}

GridFunction commutator_dyadic(const GridFunction& b, const GridFunction& f, double alpha,
                               const ResolvedLattice& lattice, TailMode tails) {
    if (!b.same_shape(f)) throw std::invalid_argument("b and f must share a cell grid");
    const GridFunction integral_f = dyadic_frac_integral(f, alpha, lattice, tails);
    const GridFunction integral_bf =
        dyadic_frac_integral(pointwise_product(b, f), alpha, lattice, tails);
    return linear_combination(1.0, pointwise_product(b, integral_f), -1.0, integral_bf);
}

// --------------------------------------------------------------------------
// Continuum operators
// --------------------------------------------------------------------------

namespace {

// integral over [lo, hi] of |x - y|^(alpha - 1) dy, exact.
double segment_kernel_integral(double lo, double hi, double x, double alpha) {
    const auto antiderivative = [&](double y) {
        const double d = y - x;
        const double s = d >= 0.0 ? 1.0 : -1.0;
        return s * std::pow(std::abs(d), alpha) / alpha;
    };
    return antiderivative(hi) - antiderivative(lo);
}

std::vector<double> continuum_1d(const GridFunction& f, double alpha,
                                 std::span<const Point> points) {
    std::vector<double> out(points.size(), 0.0);
    const std::int64_t cells = f.cell_count();
    const double lo0 = f.root().lower(0);
    const double h = f.cell_side();
    for (std::size_t p = 0; p < points.size(); ++p) {
        const double x = points[p][0];
        KahanSum s;
        for (std::int64_t i = 0; i < cells; ++i) {
            const double v = f.value(i);
            if (v == 0.0) continue;
            const double lo = lo0 + static_cast<double>(i) * h;
            s.add(v * segment_kernel_integral(lo, lo + h, x, alpha));
        }
        out[p] = s.value();
    }
    return out;
}

std::vector<double> continuum_2d(const GridFunction& f, double alpha,
                                 std::span<const Point> points) {
    std::vector<double> out(points.size(), 0.0);
    const std::int64_t cells = f.cell_count();
    const double h = f.cell_side();
    const double cell_vol = f.cell_volume();
    for (std::size_t p = 0; p < points.size(); ++p) {
        const double x0 = points[p][0];
        const double x1 = points[p][1];
        std::int64_t singular = -1;
        const Point pt = points[p];
        if (f.root().contains_point({pt.data(), 2})) singular = f.cell_index_at({pt.data(), 2});
        KahanSum s;
        for (std::int64_t i = 0; i < cells; ++i) {
            const double v = f.value(i);
            if (v == 0.0) continue;
            const DyadicCube cell = f.cell(i);
            if (i != singular) {
                const Point mid = cell.center();
                const double dx = x0 - mid[0];
                const double dy = x1 - mid[1];
                s.add(v * std::pow(dx * dx + dy * dy, 0.5 * (alpha - 2.0)) * cell_vol);
                continue;
            }
            // Singular cell: exact integral of |x-y|^(alpha-2) over the disk
            // inscribed around x, mean-radius midpoint value on the rest.
            double rho = h;
            for (int c = 0; c < 2; ++c) {
                const double xc = (c == 0) ? x0 : x1;
                rho = std::min({rho, xc - cell.lower(c), cell.upper(c) - xc});
            }
            const double far0 = std::max(x0 - cell.lower(0), cell.upper(0) - x0);
            const double far1 = std::max(x1 - cell.lower(1), cell.upper(1) - x1);
            const double dmax = std::hypot(far0, far1);
            double disk_integral = 0.0;
            double disk_area = 0.0;
            if (rho > 0.0) {
                disk_integral = 2.0 * std::numbers::pi * std::pow(rho, alpha) / alpha;
                disk_area = std::numbers::pi * rho * rho;
            }
            const double r_mean = 0.5 * (rho + dmax);
            s.add(v * (disk_integral +
                       (cell_vol - disk_area) * std::pow(r_mean, alpha - 2.0)));
        }
        out[p] = s.value();
    }
    return out;
}

}  // namespace

std::vector<double> continuum_frac_integral(const GridFunction& f, double alpha,
                                            std::span<const Point> eval_points) {
    const int dim = f.dimension();
    if (dim > 2) throw std::invalid_argument("continuum evaluation supports n in {1, 2}");
    check_alpha_open(alpha, dim);
    return dim == 1 ? continuum_1d(f, alpha, eval_points) : continuum_2d(f, alpha, eval_points);
}

std::vector<double> commutator_continuum(const GridFunction& b, const GridFunction& f,
                                         double alpha, std::span<const Point> eval_points) {
    if (!b.same_shape(f)) throw std::invalid_argument("b and f must share a cell grid");
    const std::vector<double> integral_f = continuum_frac_integral(f, alpha, eval_points);
    const std::vector<double> integral_bf =
        continuum_frac_integral(pointwise_product(b, f), alpha, eval_points);
    std::vector<double> out(eval_points.size(), 0.0);
    for (std::size_t i = 0; i < eval_points.size(); ++i) {
        const Point& pt = eval_points[i];
        const std::span<const double> coords{pt.data(), static_cast<std::size_t>(b.dimension())};
        const double bx = b.root().contains_point(coords) ? b.value_at(coords) : 0.0;
        out[i] = bx * integral_f[i] - integral_bf[i];
    }
    return out;
}

}  // namespace dyad
