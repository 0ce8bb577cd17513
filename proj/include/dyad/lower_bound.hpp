#pragma once

#include <vector>

#include "dyad/grid.hpp"
#include "dyad/weights.hpp"

namespace dyad {

/// Smooth radial kernel with period 2 per axis, equal to rho^(n - alpha) on
/// the band 1/8 <= rho <= 1/2. The profile is constant near 0 and beyond
/// 9/16 with quintic smoothstep blends on [1/16, 1/8] and [1/2, 9/16], so the
/// periodic extension is C^2 and its Fourier coefficients are summable.
class PeriodicRadialKernel {
public:
    PeriodicRadialKernel(int dimension, double alpha);

    int dimension() const { return dim_; }
    double alpha() const { return alpha_; }

    double profile(double rho) const;
    double profile_second_derivative_bound() const;

    /// 1-D cosine coefficients: K(u) = a_0 + 2 sum_{k>=1} a_k cos(pi k u).
    std::vector<double> fourier_cos_coefficients(int max_mode) const;
    /// 2-D tensor cosine coefficients, row-major (max_mode+1)^2:
    /// K(u) = sum_{k in Z^2} a_{|k1|,|k2|} e^{i pi k.u}.
    std::vector<double> fourier_cos_coefficients_2d(int max_mode) const;

private:
    int dim_ = 1;
    double alpha_ = 0.5;
    double inner_constant_ = 0.0;
    double outer_constant_ = 0.0;
};

/// Probe geometry: a dyadic cube Q, the cube P with side 4 l(Q) sharing Q's
/// lower corner, and the far child P_R of P (so |x - y| / (2 sqrt(n) l(P))
/// lies in [1/8, 1/2] for x in Q, y in P_R).
struct ProbeGeometry {
    DyadicCube q;
    DyadicCube p;
    DyadicCube p_r;
};

ProbeGeometry probe_geometry(const ResolvedLattice& lattice, int q_level, std::int64_t q_flat);

struct ProbeResult {
    double lhs = 0.0;            // (1/nu(Q)) int_Q |b - <b>_{P_R}| dx
    double best_pairing = 0.0;   // max_k |pairing_k| / (||f_k|| ||h_k||)
    double probe_ratio = 0.0;    // lhs / best_pairing (0 when both vanish)
    double recon_sum = 0.0;      // sum_k a_k pairing_k
    double recon_target = 0.0;   // kernel-weighted positive integral
    double recon_residual = 0.0;
    double recon_bound = 0.0;    // mode-truncation bound plus quadrature budget
    double kernel_mass = 0.0;    // int int |b(x)-b(y)| |x-y|^(alpha-n) over Q x P_R
};

/// One lower-bound probe: pair the oscillatory test functions
/// f_k(y) = e^{-i pi k y / c} 1_{P_R}, h_k(x) = sgn(b - <b>_{P_R}) e^{i pi k x / c} 1_Q
/// (c = 2 sqrt(n) l(P)) against [b, I_alpha] through continuum quadrature,
/// for modes |k| <= max_mode per axis.
ProbeResult lower_bound_probe_single(const GridFunction& b, const WeightPair& pair,
                                     const ResolvedLattice& lattice, const ProbeGeometry& geometry,
                                     int max_mode);

}  // namespace dyad
