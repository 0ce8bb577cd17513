#include "dyad/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dyad {

namespace {

constexpr double kExponentRelationTol = 1e-12;

void check_positive_cells(const GridFunction& density) {
    for (double v : density.values()) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("weight cells must be positive and finite");
        }
    }
}

void check_lattice_depth(const Weight& w, const ResolvedLattice& lattice) {
    if (!(lattice.root() == w.root())) {
        throw std::invalid_argument("lattice root must match the weight root");
    }
    if (lattice.depth() > w.resolution()) {
        throw std::invalid_argument("lattice is deeper than the weight resolution");
    }
}

// Per-cube block iteration at the weight resolution.
template <class Fn>
void for_each_cell_in_cube(int dim, int resolution, int level, std::int64_t cube_flat, Fn&& fn) {
    const int down = resolution - level;
    const auto base = flat_decode(cube_flat, dim, level);
    const std::int64_t per_axis = std::int64_t{1} << down;
    std::array<std::int64_t, kMaxDim> rel{};
    bool done = false;
    while (!done) {
        std::array<std::int64_t, kMaxDim> coords{};
        for (int c = 0; c < dim; ++c) {
            coords[static_cast<std::size_t>(c)] =
                (base[static_cast<std::size_t>(c)] << down) + rel[static_cast<std::size_t>(c)];
        }
        fn(flat_encode({coords.data(), static_cast<std::size_t>(dim)}, dim, resolution));
        int axis = dim - 1;
        while (axis >= 0) {
            if (++rel[static_cast<std::size_t>(axis)] < per_axis) break;
            rel[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
        done = axis < 0;
    }
}

// Exact mean of |x - c|^beta over a 1-D cell that lies on one side of c.
double one_sided_power_mean(double lo, double hi, double center, double beta) {
    const double a = std::min(std::abs(lo - center), std::abs(hi - center));
    const double b = std::max(std::abs(lo - center), std::abs(hi - center));
    const double e = beta + 1.0;
    return (std::pow(b, e) - std::pow(a, e)) / (e * (hi - lo));
}

double volume_unit_ball(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return std::numbers::pi;
        default: return 4.0 * std::numbers::pi / 3.0;
    }
}

}  // namespace

// --------------------------------------------------------------------------
// Weight / WeightPair
// --------------------------------------------------------------------------

Weight::Weight(GridFunction density) : density_(std::move(density)) {
    check_positive_cells(density_);
}

Weight Weight::power(double exponent) const {
    return Weight(pointwise_pow(density_, exponent));
}

Weight Weight::refined(int extra_levels) const {
    return Weight(density_.refined(extra_levels));
}

WeightPair::WeightPair(Weight mu, Weight lambda, double p, double q, double alpha)
    : mu_(std::move(mu)),
      lambda_(std::move(lambda)),
      nu_([this] {
          if (!mu_.density().same_shape(lambda_.density())) {
              throw std::invalid_argument("mu and lambda must share a cell grid");
          }
          GridFunction cells(mu_.root(), mu_.resolution());
          for (std::int64_t i = 0; i < cells.cell_count(); ++i) {
              cells.value(i) = mu_.density().value(i) / lambda_.density().value(i);
          }
          return Weight(std::move(cells));
      }()),
      p_(p),
      q_(q),
      alpha_(alpha) {
    if (!(p > 1.0) || !(q > 1.0)) throw std::invalid_argument("p and q must exceed 1");
    const int n = mu_.root().dimension();
    if (!(alpha > 0.0 && alpha < static_cast<double>(n))) {
        throw std::invalid_argument("alpha must lie in (0, n)");
    }
    if (std::abs(1.0 / p - 1.0 / q - alpha / static_cast<double>(n)) > kExponentRelationTol) {
        throw std::invalid_argument("exponents must satisfy 1/p - 1/q = alpha/n");
    }
}

// --------------------------------------------------------------------------
// power_weight
// --------------------------------------------------------------------------

Weight power_weight(double beta, const Point& center, const DyadicCube& root, int resolution) {
    const int dim = root.dimension();
    if (dim == 1 && beta <= -1.0) {
        throw std::invalid_argument("beta must exceed -1 for integrable 1-D cells");
    }
    if (dim >= 2 && beta <= -static_cast<double>(dim)) {
        throw std::invalid_argument("beta must exceed -n for integrable cells");
    }
    // One-sided singularity: the center may not sit in the interior of the root.
    {
        bool interior = true;
        for (int c = 0; c < dim; ++c) {
            const double x = center[static_cast<std::size_t>(c)];
            if (!(x > root.lower(c) && x < root.upper(c))) interior = false;
        }
        if (interior) {
            bool on_boundary = false;
            for (int c = 0; c < dim; ++c) {
                const double x = center[static_cast<std::size_t>(c)];
                if (x == root.lower(c) || x == root.upper(c)) on_boundary = true;
            }
            if (!on_boundary) {
                throw std::invalid_argument("center must lie on the root boundary or outside");
            }
        }
    }

    GridFunction w(root, resolution);
    const std::int64_t n_cells = w.cell_count();
    if (dim == 1) {
        for (std::int64_t i = 0; i < n_cells; ++i) {
            const DyadicCube cell = w.cell(i);
            w.value(i) = one_sided_power_mean(cell.lower(0), cell.upper(0), center[0], beta);
        }
        return Weight(std::move(w));
    }

    for (std::int64_t i = 0; i < n_cells; ++i) {
        const DyadicCube cell = w.cell(i);
        const Point mid = cell.center();
        bool touches = true;
        int boundary_axes = 0;
        for (int c = 0; c < dim; ++c) {
            const double x = center[static_cast<std::size_t>(c)];
            if (x < cell.lower(c) || x > cell.upper(c)) {
                touches = false;
                break;
            }
            if (x == cell.lower(c) || x == cell.upper(c)) ++boundary_axes;
        }
        double dist2 = 0.0;
        for (int c = 0; c < dim; ++c) {
            const double d = mid[static_cast<std::size_t>(c)] - center[static_cast<std::size_t>(c)];
            dist2 += d * d;
        }
        if (!touches) {
            w.value(i) = std::pow(dist2, 0.5 * beta);
            continue;
        }
        // Singular cell: exact radial integral over the ball sector of radius
        // h/2 around the center, centroid value on the rest of the cell.
        const double h = cell.side();
        const double rho = 0.5 * h;
        const double sector = std::ldexp(1.0, -boundary_axes);  // solid-angle fraction
        const double ball_vol = sector * volume_unit_ball(dim) * std::pow(rho, dim);
        const double ball_integral = sector * static_cast<double>(dim) * volume_unit_ball(dim) *
                                     std::pow(rho, beta + dim) / (beta + static_cast<double>(dim));
        const double outside = std::max(cell.volume() - ball_vol, 0.0);
        const double centroid_value = dist2 > 0.0 ? std::pow(dist2, 0.5 * beta) : 0.0;
        w.value(i) = (ball_integral + outside * centroid_value) / cell.volume();
    }
    return Weight(std::move(w));
}

// --------------------------------------------------------------------------
// Characteristics and norms
// --------------------------------------------------------------------------

double ap_characteristic(const Weight& w, double p, const ResolvedLattice& lattice) {
    if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
    check_lattice_depth(w, lattice);
    const double pp = p / (p - 1.0);
    const AveragePyramid avg_w(w.density(), lattice.depth());
    const AveragePyramid avg_dual(pointwise_pow(w.density(), 1.0 - pp), lattice.depth());
    double best = 0.0;
    lattice.for_each([&](int l, std::int64_t i) {
        best = std::max(best, avg_w.average(l, i) * std::pow(avg_dual.average(l, i), p - 1.0));
    });
    return best;
}

double apq_characteristic(const Weight& w, double p, double q, const ResolvedLattice& lattice) {
    if (!(p > 1.0) || !(q > 1.0)) throw std::invalid_argument("p and q must exceed 1");
    const double gap = 1.0 / p - 1.0 / q;
    if (!(gap >= 0.0 && gap < 1.0)) {
        throw std::invalid_argument("exponents violate 1/p - 1/q = alpha/n with alpha in [0, n)");
    }
    check_lattice_depth(w, lattice);
    const double pp = p / (p - 1.0);
    const AveragePyramid avg_q(pointwise_pow(w.density(), q), lattice.depth());
    const AveragePyramid avg_dual(pointwise_pow(w.density(), -pp), lattice.depth());
    double best = 0.0;
    lattice.for_each([&](int l, std::int64_t i) {
        best = std::max(best, avg_q.average(l, i) * std::pow(avg_dual.average(l, i), q / pp));
    });
    return best;
}

double weighted_lp_norm(const GridFunction& f, const Weight& w, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
    if (!f.same_shape(w.density())) throw std::invalid_argument("shape mismatch");
    KahanSum s;
    for (std::int64_t i = 0; i < f.cell_count(); ++i) {
        s.add(std::pow(std::abs(f.value(i)), p) * w.density().value(i));
    }
    return std::pow(s.value() * f.cell_volume(), 1.0 / p);
}

double weighted_bmo_norm(const GridFunction& b, const Weight& w, double q,
                         const ResolvedLattice& lattice) {
    if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
    if (!b.same_shape(w.density())) throw std::invalid_argument("shape mismatch");
    check_lattice_depth(w, lattice);
    const int dim = b.dimension();
    const int res = b.resolution();
    const double cell_vol = b.cell_volume();
    const AveragePyramid avg_b(b, lattice.depth());
    const AveragePyramid avg_w(w.density(), lattice.depth());

    std::vector<double> dual_cells;
    if (q > 1.0) {
        dual_cells.resize(static_cast<std::size_t>(b.cell_count()));
        for (std::int64_t i = 0; i < b.cell_count(); ++i) {
            dual_cells[static_cast<std::size_t>(i)] = std::pow(w.density().value(i), 1.0 - q);
        }
    }

    double best = 0.0;
    lattice.for_each([&](int l, std::int64_t i) {
        const double mean = avg_b.average(l, i);
        const double volume = lattice.cube(l, i).volume();
        const double w_mass = avg_w.average(l, i) * volume;
        KahanSum osc;
        if (q == 1.0) {
            for_each_cell_in_cube(dim, res, l, i, [&](std::int64_t cell) {
                osc.add(std::abs(b.value(cell) - mean));
            });
            best = std::max(best, osc.value() * cell_vol / w_mass);
        } else {
            for_each_cell_in_cube(dim, res, l, i, [&](std::int64_t cell) {
                osc.add(std::pow(std::abs(b.value(cell) - mean), q) *
                        dual_cells[static_cast<std::size_t>(cell)]);
            });
            best = std::max(best, std::pow(osc.value() * cell_vol / w_mass, 1.0 / q));
        }
    });
    return best;
}

MembershipReport membership_report(const WeightPair& pair, const ResolvedLattice& lattice) {
    const double p = pair.p();
    const double q = pair.q();
    const double pp = pair.p_conjugate();
    const double qp = pair.q_conjugate();
    const int n = pair.dimension();

    MembershipReport out;
    out.mu_apq = apq_characteristic(pair.mu(), p, q, lattice);
    out.lambda_apq = apq_characteristic(pair.lambda(), p, q, lattice);
    out.mu_p_ap = ap_characteristic(pair.mu().power(p), p, lattice);
    out.mu_minus_pprime = ap_characteristic(pair.mu().power(-pp), pp, lattice);
    out.mu_q_aq = ap_characteristic(pair.mu().power(q), q, lattice);
    out.mu_minus_qprime = ap_characteristic(pair.mu().power(-qp), qp, lattice);
    out.lambda_p_ap = ap_characteristic(pair.lambda().power(p), p, lattice);
    out.lambda_minus_pprime = ap_characteristic(pair.lambda().power(-pp), pp, lattice);
    out.lambda_q_aq = ap_characteristic(pair.lambda().power(q), q, lattice);
    out.lambda_minus_qprime = ap_characteristic(pair.lambda().power(-qp), qp, lattice);
    out.nu_a2 = ap_characteristic(pair.nu(), 2.0, lattice);

    const AveragePyramid mu_p(pointwise_pow(pair.mu().density(), p), lattice.depth());
    const AveragePyramid lambda_mqp(pointwise_pow(pair.lambda().density(), -qp), lattice.depth());
    const AveragePyramid nu_avg(pair.nu().density(), lattice.depth());
    double best = 0.0;
    lattice.for_each([&](int l, std::int64_t i) {
        const double volume = lattice.cube(l, i).volume();
        const double lhs = std::pow(mu_p.average(l, i) * volume, 1.0 / p) *
                           std::pow(lambda_mqp.average(l, i) * volume, 1.0 / qp);
        const double rhs = nu_avg.average(l, i) * volume *
                           std::pow(volume, pair.alpha() / static_cast<double>(n));
        best = std::max(best, lhs / rhs);
    });
    out.wt_est_ratio = best;
    return out;
}

}  // namespace dyad
