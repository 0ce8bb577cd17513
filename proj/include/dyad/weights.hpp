#pragma once

#include "dyad/grid.hpp"

namespace dyad {

/// Strictly positive density on a cell grid.
class Weight {
public:
    explicit Weight(GridFunction density);

    const GridFunction& density() const { return density_; }
    const DyadicCube& root() const { return density_.root(); }
    int resolution() const { return density_.resolution(); }

    /// Cell-wise power of the density (still a weight for any exponent).
    Weight power(double exponent) const;

    /// The same weight on a finer cell grid (cell values repeated).
    Weight refined(int extra_levels) const;

private:
    GridFunction density_;
};

/// Two-weight setting (mu, lambda, p, q, alpha, n) with 1/p - 1/q = alpha/n
/// and the derived Bloom weight nu = mu / lambda.
class WeightPair {
public:
    WeightPair(Weight mu, Weight lambda, double p, double q, double alpha);

    const Weight& mu() const { return mu_; }
    const Weight& lambda() const { return lambda_; }
    const Weight& nu() const { return nu_; }
    double p() const { return p_; }
    double q() const { return q_; }
    double p_conjugate() const { return p_ / (p_ - 1.0); }
    double q_conjugate() const { return q_ / (q_ - 1.0); }
    double alpha() const { return alpha_; }
    int dimension() const { return mu_.root().dimension(); }

private:
    Weight mu_;
    Weight lambda_;
    Weight nu_;
    double p_ = 0.0;
    double q_ = 0.0;
    double alpha_ = 0.0;
};

/// Weight with cell values equal to exact cell averages of |x - center|^beta.
/// In 1-D the averages come from the closed-form antiderivative; the center
/// must sit on the boundary of the root or outside it. In n >= 2 cells are
/// centroid-sampled, except the cell touching the center, which combines the
/// exact radial integral over the inscribed ball sector with the centroid
/// value on the remainder (an O(h) approximation, good enough for the
/// experiment suite).
Weight power_weight(double beta, const Point& center, const DyadicCube& root, int resolution);

/// Dyadic Muckenhoupt characteristic: max over lattice cubes of
/// <w>_Q <w^(1-p')>_Q^(p-1). Powers are taken cell-wise.
double ap_characteristic(const Weight& w, double p, const ResolvedLattice& lattice);

/// Dyadic fractional characteristic: max over lattice cubes of
/// <w^q>_Q <w^(-p')>_Q^(q/p'). Requires 0 <= 1/p - 1/q < 1 so the implied
/// alpha = n(1/p - 1/q) lies in [0, n).
double apq_characteristic(const Weight& w, double p, double q, const ResolvedLattice& lattice);

/// (sum over cells of |f|^p * w * cell volume)^(1/p). Callers pass the weight
/// already raised to the intended power (mu^p, lambda^q, ...).
double weighted_lp_norm(const GridFunction& f, const Weight& w, double p);

/// Weighted dyadic BMO norm. q = 1 is the plain oscillation norm
/// sup_Q (1/w(Q)) int_Q |b - <b>_Q| dx; q > 1 integrates
/// |b - <b>_Q|^q w^(1-q) dx, which reduces to the q = 1 norm at q = 1 and
/// sits above it by Holder for q > 1.
double weighted_bmo_norm(const GridFunction& b, const Weight& w, double q,
                         const ResolvedLattice& lattice);

/// Derived memberships of a weight pair plus the two-weight cube estimate.
struct MembershipReport {
    double mu_apq = 0.0;
    double lambda_apq = 0.0;
    double mu_p_ap = 0.0;            // [mu^p]_{A_p}
    double mu_minus_pprime = 0.0;    // [mu^(-p')]_{A_{p'}}
    double mu_q_aq = 0.0;            // [mu^q]_{A_q}
    double mu_minus_qprime = 0.0;    // [mu^(-q')]_{A_{q'}}
    double lambda_p_ap = 0.0;
    double lambda_minus_pprime = 0.0;
    double lambda_q_aq = 0.0;
    double lambda_minus_qprime = 0.0;
    double nu_a2 = 0.0;
    /// max over cubes of mu^p(Q)^(1/p) lambda^(-q')(Q)^(1/q') / (nu(Q) |Q|^(alpha/n))
    double wt_est_ratio = 0.0;
};

MembershipReport membership_report(const WeightPair& pair, const ResolvedLattice& lattice);

}  // namespace dyad
