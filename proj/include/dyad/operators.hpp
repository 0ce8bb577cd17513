#pragma once

#include <vector>

#include "dyad/grid.hpp"
#include "dyad/haar.hpp"

namespace dyad {

/// The four pieces of the commutator decomposition
///   [b, I_alpha^D] f = c_alpha * t1 - c_alpha * pi_010 - pi_001 - t2,
/// valid (exactly, with extended tails) for b and f of zero root average.
/// c_alpha = 1/(2^alpha - 1) collapses the geometric tower below a cube.
struct DecompositionTerms {
    GridFunction pi_010;  // coefficient of b against the average of f
    GridFunction pi_001;  // coefficient of b against the coefficient of f
    GridFunction t1;      // coarser-scale coefficient sums of f against b
    GridFunction t2;      // ancestor-tower sums against paired coefficients
    double c_alpha = 0.0;
};

/// Dyadic fractional integral: sum over lattice cubes of |Q|^(alpha/n) <f>_Q 1_Q.
/// Extended tails add the analytic descendant tower below the resolution
/// (c_alpha |Q_L(x)|^(alpha/n) f(x)) and the ancestor tower above the root
/// (|root|^(alpha/n - 1) * integral(f) * t/(1-t) with t = 2^(alpha - n)),
/// turning the finite model into the full bi-infinite lattice sum.
GridFunction dyadic_frac_integral(const GridFunction& f, double alpha,
                                  const ResolvedLattice& lattice, TailMode tails);
GridFunction dyadic_frac_integral(const GridFunction& f, double alpha,
                                  const ResolvedLattice& lattice);

/// Dyadic fractional maximal function: pointwise max over lattice cubes
/// containing x of |Q|^(alpha/n) <|f|>_Q. The extended ancestor tower decays
/// geometrically, so only its first term can matter.
GridFunction frac_maximal(const GridFunction& f, double alpha,
                          const ResolvedLattice& lattice, TailMode tails);
GridFunction frac_maximal(const GridFunction& f, double alpha, const ResolvedLattice& lattice);

/// Dyadic square function: sqrt of sum over (Q, sig) of |f^(Q,sig)|^2 1_Q/|Q|.
GridFunction square_function(const GridFunction& f, const ResolvedLattice& lattice);

DecompositionTerms decomposition_terms(const GridFunction& b, const GridFunction& f,
                                       double alpha, const ResolvedLattice& lattice);

/// Recombine the four terms into the commutator.
GridFunction recombine(const DecompositionTerms& terms);

/// b * I_alpha^D(f) - I_alpha^D(b * f), both applications with the same tails.
GridFunction commutator_dyadic(const GridFunction& b, const GridFunction& f, double alpha,
                               const ResolvedLattice& lattice, TailMode tails);

/// Riesz potential of a piecewise-constant function evaluated pointwise:
/// integral of f(y) |x-y|^(alpha-n) dy. Exact per-cell antiderivatives in
/// 1-D; in 2-D the midpoint rule per cell, with the singular cell handled by
/// the exact integral over its inscribed disk plus a mean-radius remainder
/// (O(h) accurate).
std::vector<double> continuum_frac_integral(const GridFunction& f, double alpha,
                                            std::span<const Point> eval_points);

/// b(x) * I_alpha f(x) - I_alpha(b f)(x) at each evaluation point.
std::vector<double> commutator_continuum(const GridFunction& b, const GridFunction& f,
                                         double alpha, std::span<const Point> eval_points);

}  // namespace dyad
