#include "dyad/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dyad/parallel.hpp"
#include "dyad/rng.hpp"

namespace dyad {

namespace {

void check_alpha_unit(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

// Overlap length of [lo1, hi1) and [lo2, hi2).
double overlap(double lo1, double hi1, double lo2, double hi2) {
    return std::max(0.0, std::min(hi1, hi2) - std::max(lo1, lo2));
}

// Bound on the total contribution of scales coarser than scale_min: each
// omitted scale k contributes at most sup_r (r 2^-k)^(alpha-1) = 2^(k(1-alpha)).
double coarse_scale_tail(double alpha, int scale_min) {
    const double ratio = std::exp2(alpha - 1.0);  // per step toward coarser scales
    const double first = std::exp2(static_cast<double>(scale_min - 1) * (1.0 - alpha));
    return first / (1.0 - ratio);
}

}  // namespace

double tent_kernel(double x, double r, double alpha) {
    const double ax = std::abs(x);
    if (ax >= r) return 0.0;
    return std::pow(r, alpha - 1.0) * (1.0 - ax / r);
}

double limit_kernel_constant(double alpha) {
    check_alpha_unit(alpha);
    return 1.0 / ((1.0 - alpha) * (2.0 - alpha));
}

GridSample sample_grid(std::uint64_t seed, std::uint64_t draw_index) {
    std::mt19937_64 rng = make_engine(seed, draw_index);
    const double r = std::exp2(uniform01(rng));  // density 1/(r log 2) on [1, 2)
    const double a = -r * uniform01(rng);        // uniform on (-r, 0]
    return GridSample{a, r, 1.0};
}

GridFunction single_scale_projection(const GridFunction& f, const GridSample& sample, int scale,
                                     double alpha) {
    if (f.dimension() != 1) {
        throw std::invalid_argument("single_scale_projection supports 1-D only");
    }
    check_alpha_unit(alpha);
    const double cell_w = f.cell_side();
    const double root_lo = f.root().lower(0);
    const double root_hi = f.root().upper(0);
    const std::int64_t cells = f.cell_count();

    GridFunction out(f.root(), f.resolution());
    const std::array<double, 1> translation{sample.a};
    const DyadicGrid grid(translation, sample.r, 1);
    for (const DyadicCube& interval : shifted_grid_intervals(grid, scale, root_lo, root_hi)) {
        const double lo = interval.lower(0);
        const double hi = interval.upper(0);
        const double width = hi - lo;
        // <f>_I over the full interval; f vanishes outside its root.
        KahanSum mass;
        const std::int64_t first =
            std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((lo - root_lo) / cell_w)));
        for (std::int64_t i = first; i < cells; ++i) {
            const double c_lo = root_lo + static_cast<double>(i) * cell_w;
            if (c_lo >= hi) break;
            mass.add(f.value(i) * overlap(c_lo, c_lo + cell_w, lo, hi));
        }
        const double term = std::pow(width, alpha) * (mass.value() / width);
        if (term == 0.0) continue;
        for (std::int64_t i = first; i < cells; ++i) {
            const double c_lo = root_lo + static_cast<double>(i) * cell_w;
            if (c_lo >= hi) break;
            out.value(i) += term * overlap(c_lo, c_lo + cell_w, lo, hi) / cell_w;
        }
    }
    return out;
}

KernelEstimate empirical_average_kernel(const KernelAverageOptions& options) {
    check_alpha_unit(options.alpha);
    if (options.num_samples < 1) throw std::invalid_argument("num_samples must be >= 1");
    if (options.abscissae.empty()) throw std::invalid_argument("abscissae must be nonempty");
    double min_abs = std::abs(options.abscissae.front());
    double max_abs = min_abs;
    for (double x : options.abscissae) {
        min_abs = std::min(min_abs, std::abs(x));
        max_abs = std::max(max_abs, std::abs(x));
    }
    if (!(options.probe_width > 0.0) || options.probe_width >= min_abs) {
        throw std::invalid_argument("probe must be narrower than the smallest abscissa");
    }
    const double alpha = options.alpha;
    const double w = options.probe_width;

    // Scale window. Finer scales than scale_max contribute exactly zero on
    // the abscissa window; the coarse tail below scale_min is bounded and the
    // bound is kept under 0.1% of the smallest kernel value.
    int scale_min;
    int scale_max;
    if (options.scale_range) {
        scale_min = options.scale_range->first;
        scale_max = options.scale_range->second;
        if (scale_min > scale_max) throw std::invalid_argument("empty scale range");
    } else {
        scale_max = static_cast<int>(std::ceil(1.0 - std::log2(min_abs - 0.5 * w))) + 1;
        const double target = 1e-3 * limit_kernel_constant(alpha) * std::pow(max_abs, alpha - 1.0);
        scale_min = 0;
        while (coarse_scale_tail(alpha, scale_min) > target) --scale_min;
    }
    const double tail_bound = coarse_scale_tail(alpha, scale_min);

    const std::size_t n_x = options.abscissae.size();
    const int coarse_levels = scale_min < 0 ? -scale_min : 0;
    // Per-sample kernel values at every abscissa: for scale k, the interval
    // containing x has mean overlap(I, probe)/(w h), contributing
    // h^alpha * <probe>_I = h^(alpha-1) * overlap / w. Translating a over
    // (-r, 0] makes the phase uniform at scales >= 0 only; scales above the
    // calibre get the usual random upward extension of the lattice (one
    // position bit per level), which restores a uniform phase there too.
    const auto sample_values = [&](std::int64_t index, std::vector<double>& out_values) {
        std::mt19937_64 rng = make_engine(options.seed, static_cast<std::uint64_t>(index));
        GridSample sample;
        if (options.fixed_calibre) {
            sample.r = *options.fixed_calibre;
            sample.a = -sample.r * uniform01(rng);
        } else {
            sample.r = std::exp2(uniform01(rng));
            sample.a = -sample.r * uniform01(rng);
        }
        std::vector<double> anchors(static_cast<std::size_t>(coarse_levels) + 1, sample.a);
        double offset = 0.0;
        double step = sample.r;
        for (int j = 1; j <= coarse_levels; ++j) {
            offset += (rng() & 1u) ? step : 0.0;
            anchors[static_cast<std::size_t>(j)] = sample.a - offset;
            step *= 2.0;
        }
        const double norm = options.fixed_calibre ? 1.0 : std::numbers::ln2;
        for (std::size_t j = 0; j < n_x; ++j) {
            const double x = options.abscissae[j];
            double acc = 0.0;
            for (int k = scale_min; k <= scale_max; ++k) {
                const double h = sample.r * std::exp2(-k);
                const double anchor = k >= 0 ? sample.a : anchors[static_cast<std::size_t>(-k)];
                const double m = std::floor((x - anchor) / h);
                const double lo = anchor + m * h;
                const double ov = overlap(lo, lo + h, -0.5 * w, 0.5 * w);
                if (ov > 0.0) acc += std::pow(h, alpha - 1.0) * ov / w;
            }
            out_values[j] = norm * acc;
        }
    };

    // Fixed-size blocks, each reduced in index order; block sums combine in
    // order, so the result is identical for any thread count.
    constexpr std::int64_t kBlock = 4096;
    const std::int64_t blocks = (options.num_samples + kBlock - 1) / kBlock;
    struct BlockMoments {
        std::vector<double> sum;
        std::vector<double> sum_sq;
    };
    const std::vector<BlockMoments> partials = parallel_map<BlockMoments>(
        blocks, options.threads, [&](std::int64_t blk) {
            BlockMoments m{std::vector<double>(n_x, 0.0), std::vector<double>(n_x, 0.0)};
            std::vector<KahanSum> sums(n_x);
            std::vector<KahanSum> squares(n_x);
            std::vector<double> vals(n_x, 0.0);
            const std::int64_t lo = blk * kBlock;
            const std::int64_t hi = std::min(options.num_samples, lo + kBlock);
            for (std::int64_t i = lo; i < hi; ++i) {
                sample_values(i, vals);
                for (std::size_t j = 0; j < n_x; ++j) {
                    sums[j].add(vals[j]);
                    squares[j].add(vals[j] * vals[j]);
                }
            }
            for (std::size_t j = 0; j < n_x; ++j) {
                m.sum[j] = sums[j].value();
                m.sum_sq[j] = squares[j].value();
            }
            return m;
        });

    KernelEstimate estimate;
    estimate.abscissae = options.abscissae;
    estimate.alpha = alpha;
    estimate.sample_count = options.num_samples;
    estimate.scale_min = scale_min;
    estimate.scale_max = scale_max;
    estimate.scale_tail_bound = tail_bound;
    estimate.values.resize(n_x);
    estimate.stderrs.resize(n_x);
    estimate.analytic.resize(n_x);
    const auto count = static_cast<double>(options.num_samples);
    for (std::size_t j = 0; j < n_x; ++j) {
        KahanSum total;
        KahanSum total_sq;
        for (const BlockMoments& m : partials) {
            total.add(m.sum[j]);
            total_sq.add(m.sum_sq[j]);
        }
        const double mean = total.value() / count;
        const double var =
            count > 1.0 ? std::max(0.0, (total_sq.value() - count * mean * mean) / (count - 1.0))
                        : 0.0;
        estimate.values[j] = mean;
        estimate.stderrs[j] = std::sqrt(var / count);
        const double x = options.abscissae[j];
        if (options.fixed_calibre) {
            double f_r = 0.0;
            for (int k = scale_min; k <= scale_max; ++k) {
                f_r += tent_kernel(x, *options.fixed_calibre * std::exp2(-k), alpha);
            }
            estimate.analytic[j] = f_r;
        } else {
            estimate.analytic[j] = limit_kernel_constant(alpha) * std::pow(std::abs(x), alpha - 1.0);
        }
    }
    // Smoothing bias of the finite-width probe: Lipschitz constant of the
    // limit kernel on the window times the probe half-width.
    estimate.probe_bias_bound = limit_kernel_constant(alpha) * (1.0 - alpha) *
                                std::pow(min_abs, alpha - 2.0) * 0.5 * w;
    return estimate;
}

}  // namespace dyad
