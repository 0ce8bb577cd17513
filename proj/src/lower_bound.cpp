#include "dyad/lower_bound.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "dyad/operators.hpp"

namespace dyad {

namespace {

constexpr double kBandLow = 0.125;
constexpr double kBandHigh = 0.5;
constexpr double kInnerFlat = 0.0625;   // constant below this radius
constexpr double kOuterFlat = 0.5625;   // constant beyond this radius

double smoothstep(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }

// 3-point Gauss-Legendre on [lo, hi].
template <class Fn>
auto gauss3(double lo, double hi, Fn&& fn) -> decltype(fn(0.0)) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double xi = std::sqrt(0.6);
    return (fn(mid - half * xi) * (5.0 / 9.0) + fn(mid) * (8.0 / 9.0) +
            fn(mid + half * xi) * (5.0 / 9.0)) *
           half;
}

struct KernelCacheKey {
    int dim;
    double alpha;
    int max_mode;
    bool operator<(const KernelCacheKey& o) const {
        if (dim != o.dim) return dim < o.dim;
        if (alpha != o.alpha) return alpha < o.alpha;
        return max_mode < o.max_mode;
    }
};

}  // namespace

PeriodicRadialKernel::PeriodicRadialKernel(int dimension, double alpha)
    : dim_(dimension), alpha_(alpha) {
    if (dimension < 1 || dimension > 2) {
        throw std::invalid_argument("periodic kernel supports n in {1, 2}");
    }
    if (!(alpha > 0.0 && alpha < static_cast<double>(dimension))) {
        throw std::invalid_argument("alpha must lie in (0, n)");
    }
    inner_constant_ = std::pow(kBandLow, dim_ - alpha_);
    outer_constant_ = std::pow(kBandHigh, dim_ - alpha_);
}

double PeriodicRadialKernel::profile(double rho) const {
    const double power = dim_ - alpha_;
    if (rho <= kInnerFlat) return inner_constant_;
    if (rho < kBandLow) {
        const double s = smoothstep((rho - kInnerFlat) / (kBandLow - kInnerFlat));
        return (1.0 - s) * inner_constant_ + s * std::pow(rho, power);
    }
    if (rho <= kBandHigh) return std::pow(rho, power);
    if (rho < kOuterFlat) {
        const double s = smoothstep((rho - kBandHigh) / (kOuterFlat - kBandHigh));
        return (1.0 - s) * std::pow(rho, power) + s * outer_constant_;
    }
    return outer_constant_;
}

double PeriodicRadialKernel::profile_second_derivative_bound() const {
    const double step = 1e-4;
    double worst = 0.0;
    for (double rho = step; rho <= kOuterFlat + 0.05; rho += step) {
        const double second =
            (profile(rho + step) - 2.0 * profile(rho) + profile(rho - step)) / (step * step);
        worst = std::max(worst, std::abs(second));
    }
    return worst;
}

std::vector<double> PeriodicRadialKernel::fourier_cos_coefficients(int max_mode) const {
    // a_k = int_0^1 K(u) cos(pi k u) du by composite Simpson; K is C^2.
    const int n = 1 << 14;
    const double h = 1.0 / n;
    std::vector<double> values(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) values[static_cast<std::size_t>(i)] = profile(i * h);
    std::vector<double> out(static_cast<std::size_t>(max_mode) + 1, 0.0);
    for (int k = 0; k <= max_mode; ++k) {
        KahanSum s;
        for (int i = 0; i <= n; ++i) {
            const double weight = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            s.add(weight * values[static_cast<std::size_t>(i)] *
                  std::cos(std::numbers::pi * k * i * h));
        }
        out[static_cast<std::size_t>(k)] = s.value() * h / 3.0;
    }
    return out;
}

std::vector<double> PeriodicRadialKernel::fourier_cos_coefficients_2d(int max_mode) const {
    // a_{k1,k2} = int_0^1 int_0^1 K(u) cos(pi k1 u1) cos(pi k2 u2) du.
    const int n = 512;
    const double h = 1.0 / n;
    std::vector<double> table(static_cast<std::size_t>(n + 1) * (n + 1));
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            table[static_cast<std::size_t>(i) * (n + 1) + j] =
                profile(std::hypot(i * h, j * h));
        }
    }
    std::vector<double> cosines(static_cast<std::size_t>(max_mode + 1) * (n + 1));
    for (int k = 0; k <= max_mode; ++k) {
        for (int i = 0; i <= n; ++i) {
            const double weight = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            cosines[static_cast<std::size_t>(k) * (n + 1) + i] =
                weight * std::cos(std::numbers::pi * k * i * h);
        }
    }
    std::vector<double> out(static_cast<std::size_t>(max_mode + 1) * (max_mode + 1), 0.0);
    // Separable pass: first contract rows against cos(pi k2 u2).
    std::vector<double> rows(static_cast<std::size_t>(n + 1) * (max_mode + 1));
    for (int i = 0; i <= n; ++i) {
        for (int k2 = 0; k2 <= max_mode; ++k2) {
            KahanSum s;
            for (int j = 0; j <= n; ++j) {
                s.add(table[static_cast<std::size_t>(i) * (n + 1) + j] *
                      cosines[static_cast<std::size_t>(k2) * (n + 1) + j]);
            }
            rows[static_cast<std::size_t>(i) * (max_mode + 1) + k2] = s.value() * h / 3.0;
        }
    }
    for (int k1 = 0; k1 <= max_mode; ++k1) {
        for (int k2 = 0; k2 <= max_mode; ++k2) {
            KahanSum s;
            for (int i = 0; i <= n; ++i) {
                s.add(rows[static_cast<std::size_t>(i) * (max_mode + 1) + k2] *
                      cosines[static_cast<std::size_t>(k1) * (n + 1) + i]);
            }
            out[static_cast<std::size_t>(k1) * (max_mode + 1) + k2] = s.value() * h / 3.0;
        }
    }
    return out;
}

ProbeGeometry probe_geometry(const ResolvedLattice& lattice, int q_level, std::int64_t q_flat) {
    if (q_level < 2) throw std::domain_error("the enclosing cube would exceed the root");
    if (q_level > lattice.depth()) throw std::domain_error("probe cube outside the lattice");
    const DyadicCube q = lattice.cube(q_level, q_flat);
    // Shared lower corner requires the index to be divisible by 4 per axis.
    for (int c = 0; c < q.dimension(); ++c) {
        if (q.index(c) % 4 != 0) {
            throw std::domain_error("probe cube must share its lower corner with a 4x cube");
        }
    }
    const DyadicCube p = q.ancestor(2);
    if (!lattice.root().contains_cube(p)) {
        throw std::domain_error("the enclosing cube exceeds the root");
    }
    const unsigned far_corner = (1u << q.dimension()) - 1u;
    return ProbeGeometry{q, p, p.child(far_corner)};
}

namespace {

struct ModeCoefficients {
    std::vector<double> values;  // 1-D: a_0..a_max; 2-D: row-major (max+1)^2
    double tail_estimate = 0.0;  // sum over |k| > max of |a_k| (both signs)
};

const ModeCoefficients& cached_coefficients(const PeriodicRadialKernel& kernel, int max_mode) {
    static std::map<KernelCacheKey, ModeCoefficients> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    const KernelCacheKey key{kernel.dimension(), kernel.alpha(), max_mode};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    ModeCoefficients mc;
    const int extended = 4 * max_mode;
    if (kernel.dimension() == 1) {
        const std::vector<double> all = kernel.fourier_cos_coefficients(extended);
        mc.values.assign(all.begin(), all.begin() + max_mode + 1);
        double tail = 0.0;
        for (int k = max_mode + 1; k <= extended; ++k) tail += std::abs(all[static_cast<std::size_t>(k)]);
        // C^2 kernel: |a_k| decays at least like k^-3, so the part beyond 4K
        // is bounded by the integral tail of that rate.
        tail += std::abs(all.back()) * extended / 2.0;
        mc.tail_estimate = 2.0 * tail;
    } else {
        const std::vector<double> all = kernel.fourier_cos_coefficients_2d(extended);
        const int stride = extended + 1;
        mc.values.assign(static_cast<std::size_t>(max_mode + 1) * (max_mode + 1), 0.0);
        for (int k1 = 0; k1 <= max_mode; ++k1) {
            for (int k2 = 0; k2 <= max_mode; ++k2) {
                mc.values[static_cast<std::size_t>(k1) * (max_mode + 1) + k2] =
                    all[static_cast<std::size_t>(k1) * stride + k2];
            }
        }
        double tail = 0.0;
        for (int k1 = 0; k1 <= extended; ++k1) {
            for (int k2 = 0; k2 <= extended; ++k2) {
                if (k1 <= max_mode && k2 <= max_mode) continue;
                // Count sign combinations: each nonzero index doubles.
                const double mult = (k1 == 0 ? 1.0 : 2.0) * (k2 == 0 ? 1.0 : 2.0);
                tail += mult * std::abs(all[static_cast<std::size_t>(k1) * stride + k2]);
            }
        }
        mc.tail_estimate = tail * 1.5;  // allowance for the part beyond 4K per axis
    }
    return cache.emplace(key, std::move(mc)).first->second;
}

}  // namespace

ProbeResult lower_bound_probe_single(const GridFunction& b, const WeightPair& pair,
                                     const ResolvedLattice& lattice, const ProbeGeometry& geometry,
                                     int max_mode) {
    if (max_mode < 1) throw std::invalid_argument("at least one Fourier mode is required");
    const int dim = b.dimension();
    if (dim > 2) throw std::invalid_argument("probe supports n in {1, 2}");
    if (!b.same_shape(pair.mu().density())) throw std::invalid_argument("shape mismatch");
    if (!(lattice.root() == b.root()) || lattice.depth() != b.resolution()) {
        throw std::invalid_argument("lattice root/depth must match the symbol shape");
    }
    const double alpha = pair.alpha();
    const double c_scale = 2.0 * std::sqrt(static_cast<double>(dim)) * geometry.p.side();
    const PeriodicRadialKernel kernel(dim, alpha);
    const ModeCoefficients& modes = cached_coefficients(kernel, max_mode);

    // Cells of Q and P_R at the function resolution.
    std::vector<std::int64_t> q_cells;
    std::vector<std::int64_t> pr_cells;
    for (std::int64_t i = 0; i < b.cell_count(); ++i) {
        const DyadicCube cell = b.cell(i);
        if (geometry.q.contains_cube(cell)) q_cells.push_back(i);
        if (geometry.p_r.contains_cube(cell)) pr_cells.push_back(i);
    }
    const double cell_vol = b.cell_volume();

    // sigma on Q and the oscillation statistics.
    const double b_pr = cube_average(b, geometry.p_r);
    std::vector<double> sigma(q_cells.size(), 0.0);
    KahanSum oscillation;
    for (std::size_t ci = 0; ci < q_cells.size(); ++ci) {
        const double diff = b.value(q_cells[ci]) - b_pr;
        sigma[ci] = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
        oscillation.add(std::abs(diff));
    }
    const double q_oscillation = oscillation.value() * cell_vol;

    KahanSum nu_mass;
    for (std::int64_t i : q_cells) nu_mass.add(pair.nu().density().value(i));
    ProbeResult result;
    result.lhs = q_oscillation / (nu_mass.value() * cell_vol);

    // Norms of the mode functions: |f_k| = 1_{P_R}, |h_k| = |sigma| 1_Q.
    KahanSum f_mass;
    for (std::int64_t i : pr_cells) f_mass.add(std::pow(pair.mu().density().value(i), pair.p()));
    const double f_norm = std::pow(f_mass.value() * cell_vol, 1.0 / pair.p());
    KahanSum h_mass;
    for (std::size_t ci = 0; ci < q_cells.size(); ++ci) {
        if (sigma[ci] != 0.0) {
            h_mass.add(std::pow(pair.lambda().density().value(q_cells[ci]), -pair.q_conjugate()));
        }
    }
    const double h_norm = std::pow(h_mass.value() * cell_vol, 1.0 / pair.q_conjugate());

    // Direct-quadrature oracle pieces: the kernel-weighted positive integral
    // and the absolute kernel mass over Q x P_R.
    KahanSum target;
    KahanSum mass;
    if (dim == 1) {
        for (std::size_t ci = 0; ci < q_cells.size(); ++ci) {
            const DyadicCube cx = b.cell(q_cells[ci]);
            const double bx = b.value(q_cells[ci]);
            for (std::int64_t yj : pr_cells) {
                const DyadicCube cy = b.cell(yj);
                const double by = b.value(yj);
                const double weighted = gauss3(cx.lower(0), cx.upper(0), [&](double x) {
                    return gauss3(cy.lower(0), cy.upper(0), [&](double y) {
                        const double d = std::abs(x - y);
                        return std::pow(d, alpha - 1.0) * kernel.profile(d / c_scale);
                    });
                });
                const double plain = gauss3(cx.lower(0), cx.upper(0), [&](double x) {
                    return gauss3(cy.lower(0), cy.upper(0), [&](double y) {
                        return std::pow(std::abs(x - y), alpha - 1.0);
                    });
                });
                target.add((bx - by) * sigma[ci] * weighted);
                mass.add(std::abs(bx - by) * plain);
            }
        }
    } else {
        for (std::size_t ci = 0; ci < q_cells.size(); ++ci) {
            const Point cx = b.cell(q_cells[ci]).center();
            const double bx = b.value(q_cells[ci]);
            for (std::int64_t yj : pr_cells) {
                const Point cy = b.cell(yj).center();
                const double by = b.value(yj);
                const double d = std::hypot(cx[0] - cy[0], cx[1] - cy[1]);
                const double plain = std::pow(d, alpha - 2.0) * cell_vol * cell_vol;
                target.add((bx - by) * sigma[ci] * plain * kernel.profile(d / c_scale));
                mass.add(std::abs(bx - by) * plain);
            }
        }
    }
    result.recon_target = target.value();
    result.kernel_mass = mass.value();

    // Pairings for every mode through the continuum commutator. Quadrature
    // nodes in Q: 3-point Gauss per cell in 1-D, cell centers in 2-D.
    std::vector<Point> nodes;
    std::vector<double> node_weights;
    std::vector<double> node_sigma;
    if (dim == 1) {
        const double xi = std::sqrt(0.6);
        for (std::size_t ci = 0; ci < q_cells.size(); ++ci) {
            const DyadicCube cx = b.cell(q_cells[ci]);
            const double mid = 0.5 * (cx.lower(0) + cx.upper(0));
            const double half = 0.5 * (cx.upper(0) - cx.lower(0));
            const double offs[3] = {-half * xi, 0.0, half * xi};
            const double wts[3] = {5.0 / 9.0 * half, 8.0 / 9.0 * half, 5.0 / 9.0 * half};
            for (int g = 0; g < 3; ++g) {
                nodes.push_back(point(mid + offs[g]));
                node_weights.push_back(wts[g]);
                node_sigma.push_back(sigma[ci]);
            }
        }
    } else {
        for (std::size_t ci = 0; ci < q_cells.size(); ++ci) {
            nodes.push_back(b.cell(q_cells[ci]).center());
            node_weights.push_back(cell_vol);
            node_sigma.push_back(sigma[ci]);
        }
    }

    using Complex = std::complex<double>;
    const double pi_over_c = std::numbers::pi / c_scale;
    const auto pairing_for = [&](int k1, int k2) -> Complex {
        // f_k cell averages over P_R, exact per axis.
        GridFunction f_re(b.root(), b.resolution());
        GridFunction f_im(b.root(), b.resolution());
        const auto axis_average = [&](double lo, double hi, double freq) -> Complex {
            if (freq == 0.0) return {1.0, 0.0};
            // mean of e^{-i freq y} over [lo, hi]
            const Complex num = std::exp(Complex(0.0, -freq * hi)) - std::exp(Complex(0.0, -freq * lo));
            return num / Complex(0.0, -freq * (hi - lo));
        };
        for (std::int64_t i : pr_cells) {
            const DyadicCube cell = b.cell(i);
            Complex value = axis_average(cell.lower(0), cell.upper(0), pi_over_c * k1);
            if (dim == 2) value *= axis_average(cell.lower(1), cell.upper(1), pi_over_c * k2);
            f_re.value(i) = value.real();
            f_im.value(i) = value.imag();
        }
        const std::vector<double> w_re = commutator_continuum(b, f_re, alpha, nodes);
        const std::vector<double> w_im = commutator_continuum(b, f_im, alpha, nodes);
        Complex sum{0.0, 0.0};
        for (std::size_t ni = 0; ni < nodes.size(); ++ni) {
            if (node_sigma[ni] == 0.0) continue;
            double phase = pi_over_c * k1 * nodes[ni][0];
            if (dim == 2) phase += pi_over_c * k2 * nodes[ni][1];
            const Complex osc{std::cos(phase), std::sin(phase)};
            sum += node_sigma[ni] * node_weights[ni] * osc * Complex(w_re[ni], w_im[ni]);
        }
        return sum;
    };

    Complex recon{0.0, 0.0};
    double best = 0.0;
    if (dim == 1) {
        for (int k = 0; k <= max_mode; ++k) {
            const Complex p_k = pairing_for(k, 0);
            const double a_k = modes.values[static_cast<std::size_t>(k)];
            recon += (k == 0 ? 1.0 : 2.0) * a_k * (k == 0 ? p_k : Complex(p_k.real(), 0.0));
            best = std::max(best, std::abs(p_k));
        }
    } else {
        for (int k1 = 0; k1 <= max_mode; ++k1) {
            const int k2_lo = (k1 == 0) ? 0 : -max_mode;
            for (int k2 = k2_lo; k2 <= max_mode; ++k2) {
                const Complex p_k = pairing_for(k1, k2);
                const double a_k =
                    modes.values[static_cast<std::size_t>(k1) * (max_mode + 1) + std::abs(k2)];
                const bool self_conjugate = (k1 == 0 && k2 == 0);
                recon += self_conjugate ? a_k * p_k : 2.0 * a_k * Complex(p_k.real(), 0.0);
                best = std::max(best, std::abs(p_k));
            }
        }
    }
    result.recon_sum = recon.real();
    const double norms = f_norm * h_norm;
    result.best_pairing = norms > 0.0 ? best / norms : 0.0;
    result.probe_ratio = result.best_pairing > 0.0 ? result.lhs / result.best_pairing : 0.0;
    result.recon_residual = std::abs(result.recon_sum - result.recon_target);
    // Documented budget: mode truncation plus a second-order discretization
    // and quadrature allowance (cell averages of f_k against the C^2 kernel).
    result.recon_bound =
        result.kernel_mass * modes.tail_estimate + 0.01 * std::abs(result.recon_target) + 1e-12;
    return result;
}

}  // namespace dyad
