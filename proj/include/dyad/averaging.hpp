#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dyad/grid.hpp"

namespace dyad {

/// One random dyadic grid: translation a in (-r, 0], calibre r in [1, 2).
struct GridSample {
    double a = 0.0;
    double r = 1.0;
    double weight = 1.0;  // importance weight; 1 for direct sampling
};

/// Monte Carlo estimate of the averaged-lattice kernel on a set of abscissae,
/// normalized so the limit is limit_kernel_constant(alpha) * |x|^(alpha - 1).
struct KernelEstimate {
    std::vector<double> abscissae;
    std::vector<double> values;
    std::vector<double> stderrs;
    std::vector<double> analytic;
    std::int64_t sample_count = 0;
    double alpha = 0.0;
    int scale_min = 0;
    int scale_max = 0;
    double scale_tail_bound = 0.0;  // analytic bound on the omitted coarse scales
    double probe_bias_bound = 0.0;  // kernel Lipschitz constant times probe half-width
};

/// Expected single-scale averaging kernel F_{0,r}: averaging the scale-r grid
/// projection over translations convolves with the tent
///   F_{0,r}(x) = (r^alpha / r) (1 - |x|/r) on [-r, r], 0 outside.
/// (The tent is the autocorrelation of a width-r box, so its support is the
/// full [-r, r].)
double tent_kernel(double x, double r, double alpha);

/// Constant of the averaged limit kernel F(x) = c_alpha |x|^(alpha-1):
/// c_alpha = integral_0^1 (1 - y) y^(-alpha) dy = 1 / ((1-alpha)(2-alpha)).
double limit_kernel_constant(double alpha);

/// Draw (a, r): r with density 1/(r log 2) on [1, 2) (the normalization of
/// dr/r), then a uniform on (-r, 0]. Deterministic per (seed, draw index).
GridSample sample_grid(std::uint64_t seed, std::uint64_t draw_index);

/// Single-scale projection: for every interval I of the sampled grid at the
/// given scale, adds |I|^alpha <f>_I 1_I, resampled onto the cell grid of f
/// with exact overlap fractions.
GridFunction single_scale_projection(const GridFunction& f, const GridSample& sample, int scale,
                                     double alpha);

struct KernelAverageOptions {
    double alpha = 0.5;
    std::int64_t num_samples = 100000;
    double probe_width = 1e-3;
    std::vector<double> abscissae;
    std::optional<std::pair<int, int>> scale_range;  // computed when absent
    std::optional<double> fixed_calibre;             // single-calibre mode
    std::uint64_t seed = 1;
    int threads = 1;
};

/// Averages multi-scale projections of the unit-mass probe
/// 1_[-w/2, w/2] / w over sampled grids and reports the empirical kernel with
/// Monte Carlo standard errors. In the default mode the dr/r average is
/// sampled from its normalized density and the estimate is rescaled by log 2,
/// so values converge to limit_kernel_constant(alpha) |x|^(alpha-1); with a
/// fixed calibre the estimate targets the single-calibre kernel
/// F_r = sum_k F_{0, 2^-k r} and `analytic` holds its truncated scale sum.
KernelEstimate empirical_average_kernel(const KernelAverageOptions& options);

}  // namespace dyad
