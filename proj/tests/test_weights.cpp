#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dyad/grid.hpp"
#include "dyad/haar.hpp"
#include "dyad/rng.hpp"
#include "dyad/weights.hpp"

using namespace dyad;

namespace {

GridFunction random_function(const DyadicCube& root, int resolution, std::uint64_t seed) {
    std::mt19937_64 rng = make_engine(seed, 0);
    GridFunction f(root, resolution);
    for (std::int64_t i = 0; i < f.cell_count(); ++i) f.value(i) = uniform_in(rng, -1.0, 1.0);
    return f;
}

// Exact average of x^c over [a, b) inside [0, infinity).
double exact_power_average(double c, double a, double b) {
    return (std::pow(b, c + 1.0) - std::pow(a, c + 1.0)) / ((c + 1.0) * (b - a));
}

// Independent A_p oracle for w = x^beta on [0,1): supremum over all dyadic
// intervals up to a depth, with exact analytic power integrals.
double power_ap_oracle(double beta, double p, int depth) {
    const double pp = p / (p - 1.0);
    double best = 0.0;
    for (int k = 0; k <= depth; ++k) {
        const double h = std::ldexp(1.0, -k);
        for (std::int64_t j = 0; j < (std::int64_t{1} << k); ++j) {
            const double a = static_cast<double>(j) * h;
            const double b = a + h;
            const double lhs = exact_power_average(beta, a, b);
            const double rhs = exact_power_average(beta * (1.0 - pp), a, b);
            best = std::max(best, lhs * std::pow(rhs, p - 1.0));
        }
    }
    return best;
}

GridFunction reversed(const GridFunction& f) {
    GridFunction out(f.root(), f.resolution());
    const std::int64_t n = f.cell_count();
    for (std::int64_t i = 0; i < n; ++i) out.value(i) = f.value(n - 1 - i);
    return out;
}

GridFunction step_function(const DyadicCube& root, int resolution) {
    GridFunction b(root, resolution);
    for (std::int64_t i = 0; i < b.cell_count() / 2; ++i) b.value(i) = 1.0;
    return b;
}

Weight ones(const DyadicCube& root, int resolution) {
    GridFunction w(root, resolution);
    for (std::int64_t i = 0; i < w.cell_count(); ++i) w.value(i) = 1.0;
    return Weight(std::move(w));
}

}  // namespace

TEST_CASE("power weight cells") {
    const DyadicCube root = DyadicCube::unit(1);
    SUBCASE("beta = 0 gives the constant weight") {
        const Weight w = power_weight(0.0, point(0.0), root, 4);
        for (std::int64_t i = 0; i < w.density().cell_count(); ++i) {
            CHECK(w.density().value(i) == 1.0);
        }
    }
    SUBCASE("beta = 1/2 first cell at resolution 1") {
        const Weight w = power_weight(0.5, point(0.0), root, 1);
        CHECK(w.density().value(0) ==
              doctest::Approx((2.0 / 3.0) * std::pow(0.5, 1.5) * 2.0).epsilon(1e-13));
        CHECK(w.density().value(0) == doctest::Approx(0.471405).epsilon(1e-6));
    }
    SUBCASE("beta = -1/2 stays finite and positive") {
        const Weight w = power_weight(-0.5, point(0.0), root, 6);
        for (std::int64_t i = 0; i < w.density().cell_count(); ++i) {
            CHECK(w.density().value(i) > 0.0);
            CHECK(std::isfinite(w.density().value(i)));
        }
        // First cell agrees with the antiderivative 2*sqrt(x).
        const double h = w.density().cell_side();
        CHECK(w.density().value(0) == doctest::Approx(2.0 * std::sqrt(h) / h).epsilon(1e-13));
    }
    SUBCASE("non-integrable beta is rejected") {
        CHECK_THROWS_AS(power_weight(-1.0, point(0.0), root, 3), std::invalid_argument);
    }
    SUBCASE("interior center is rejected") {
        CHECK_THROWS_AS(power_weight(0.5, point(0.25), root, 3), std::invalid_argument);
    }
}

TEST_CASE("A_p characteristic") {
    const DyadicCube root = DyadicCube::unit(1);
    SUBCASE("constant weight gives exactly 1") {
        const ResolvedLattice lattice = build_lattice(root, 6);
        CHECK(ap_characteristic(ones(root, 6), 2.0, lattice) == 1.0);
        CHECK(ap_characteristic(ones(root, 6), 1.5, lattice) == 1.0);
    }
    SUBCASE("x^(1/2) at depth 10 against the exact-integral oracle") {
        const int L = 10;
        const Weight w = power_weight(0.5, point(0.0), root, L);
        const double value = ap_characteristic(w, 2.0, build_lattice(root, L));
        const double oracle = power_ap_oracle(0.5, 2.0, L);
        CHECK(oracle == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
        CHECK(value == doctest::Approx(oracle).epsilon(0.02));
    }
    SUBCASE("x^(-3/4) at depth 10") {
        const int L = 10;
        const Weight w = power_weight(-0.75, point(0.0), root, L);
        const double value = ap_characteristic(w, 2.0, build_lattice(root, L));
        const double oracle = power_ap_oracle(-0.75, 2.0, L);
        CHECK(oracle == doctest::Approx(16.0 / 7.0).epsilon(1e-10));
        CHECK(value == doctest::Approx(oracle).epsilon(0.02));
    }
    SUBCASE("depth monotonicity is exact") {
        const Weight w = power_weight(0.5, point(0.0), root, 8);
        double previous = 0.0;
        for (int d = 2; d <= 8; ++d) {
            const double value = ap_characteristic(w, 2.0, build_lattice(root, d));
            CHECK(value >= previous);
            previous = value;
        }
    }
}

TEST_CASE("A_pq characteristic") {
    const DyadicCube root = DyadicCube::unit(1);
    SUBCASE("constant weight gives exactly 1") {
        CHECK(apq_characteristic(ones(root, 6), 4.0 / 3.0, 4.0, build_lattice(root, 6)) == 1.0);
    }
    SUBCASE("x^(1/8) with p = 4/3, q = 4 approaches 4/3") {
        const int L = 10;
        const Weight w = power_weight(0.125, point(0.0), root, L);
        const double value = apq_characteristic(w, 4.0 / 3.0, 4.0, build_lattice(root, L));
        CHECK(value == doctest::Approx(4.0 / 3.0).epsilon(0.02));
    }
    SUBCASE("refinement changes the value by at most 2%") {
        const Weight coarse = power_weight(0.125, point(0.0), root, 9);
        const Weight fine = power_weight(0.125, point(0.0), root, 10);
        const double a = apq_characteristic(coarse, 4.0 / 3.0, 4.0, build_lattice(root, 9));
        const double b = apq_characteristic(fine, 4.0 / 3.0, 4.0, build_lattice(root, 10));
        CHECK(std::abs(b - a) / a <= 0.02);
    }
    SUBCASE("exponent relation is validated") {
        CHECK_THROWS_AS(apq_characteristic(ones(root, 4), 4.0, 4.0 / 3.0, build_lattice(root, 4)),
                        std::invalid_argument);
    }
}

TEST_CASE("weighted Lp norm") {
    const DyadicCube root = DyadicCube::unit(1);
    SUBCASE("constants") {
        GridFunction one(root, 3);
        for (std::int64_t i = 0; i < one.cell_count(); ++i) one.value(i) = 1.0;
        for (double p : {1.0, 2.0, 3.5}) {
            CHECK(weighted_lp_norm(one, ones(root, 3), p) == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
    SUBCASE("single cell mass") {
        const GridFunction f(root, 1, {2.0, 0.0});
        CHECK(weighted_lp_norm(f, ones(root, 1), 2.0) ==
              doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    }
    SUBCASE("direct summation oracle on random data") {
        const GridFunction f = random_function(root, 6, 3);
        GridFunction wd = random_function(root, 6, 4);
        for (std::int64_t i = 0; i < wd.cell_count(); ++i) wd.value(i) = 0.1 + std::abs(wd.value(i));
        const Weight w(wd);
        for (double p : {1.0, 2.0, 3.0}) {
            double direct = 0.0;
            for (std::int64_t i = 0; i < f.cell_count(); ++i) {
                direct += std::pow(std::abs(f.value(i)), p) * w.density().value(i);
            }
            direct = std::pow(direct * f.cell_volume(), 1.0 / p);
            CHECK(weighted_lp_norm(f, w, p) == doctest::Approx(direct).epsilon(1e-13));
        }
    }
    SUBCASE("shape mismatch") {
        const GridFunction f(root, 2);
        CHECK_THROWS_AS(weighted_lp_norm(f, ones(root, 3), 2.0), std::invalid_argument);
    }
}

TEST_CASE("weighted BMO norm") {
    const DyadicCube root = DyadicCube::unit(1);
    const int L = 5;
    const ResolvedLattice lattice = build_lattice(root, L);
    const Weight w = ones(root, L);

    SUBCASE("constants have zero oscillation") {
        GridFunction b(root, L);
        for (std::int64_t i = 0; i < b.cell_count(); ++i) b.value(i) = 4.2;
        for (double q : {1.0, 2.0, 3.0}) CHECK(weighted_bmo_norm(b, w, q, lattice) == 0.0);
    }
    SUBCASE("half indicator attains 1/2 at the root") {
        const GridFunction b = step_function(root, L);
        CHECK(weighted_bmo_norm(b, w, 1.0, lattice) == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(weighted_bmo_norm(b, w, 2.0, lattice) == doctest::Approx(0.5).epsilon(1e-13));
    }
    SUBCASE("q-monotonicity on random samples") {
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const GridFunction b = random_function(root, L, 100 + seed);
            const Weight wp = power_weight(seed % 2 == 0 ? 0.5 : -0.25, point(0.0), root, L);
            const double base = weighted_bmo_norm(b, wp, 1.0, lattice);
            for (double q : {1.5, 2.0, 3.0}) {
                CHECK(weighted_bmo_norm(b, wp, q, lattice) >= base - 1e-10);
            }
        }
    }
    SUBCASE("scaling is exact for power-of-two factors") {
        const GridFunction b = random_function(root, L, 9);
        const double norm = weighted_bmo_norm(b, w, 2.0, lattice);
        CHECK(weighted_bmo_norm(scaled(b, -2.0), w, 2.0, lattice) == 2.0 * norm);
    }
    SUBCASE("reflection symmetry") {
        const GridFunction b = random_function(root, L, 10);
        GridFunction wd = random_function(root, L, 11);
        for (std::int64_t i = 0; i < wd.cell_count(); ++i) wd.value(i) = 0.2 + std::abs(wd.value(i));
        const Weight wr(wd);
        for (double q : {1.0, 2.0}) {
            CHECK(weighted_bmo_norm(b, wr, q, lattice) ==
                  doctest::Approx(weighted_bmo_norm(reversed(b), Weight(reversed(wd)), q, lattice))
                      .epsilon(1e-12));
        }
        CHECK(ap_characteristic(wr, 2.0, lattice) ==
              doctest::Approx(ap_characteristic(Weight(reversed(wd)), 2.0, lattice))
                  .epsilon(1e-12));
    }
}

TEST_CASE("membership report") {
    const DyadicCube root = DyadicCube::unit(1);
    const int L = 8;
    const ResolvedLattice lattice = build_lattice(root, L);
    const double p = 4.0 / 3.0;
    const double q = 4.0;
    const double alpha = 0.5;

    SUBCASE("constant pair: all characteristics and the cube estimate are 1") {
        const WeightPair pair(ones(root, L), ones(root, L), p, q, alpha);
        const MembershipReport report = membership_report(pair, lattice);
        CHECK(report.mu_apq == 1.0);
        CHECK(report.lambda_apq == 1.0);
        CHECK(report.mu_p_ap == 1.0);
        CHECK(report.nu_a2 == 1.0);
        CHECK(report.wt_est_ratio == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("power pair: everything finite, Holder relations hold") {
        const WeightPair pair(power_weight(0.125, point(0.0), root, L), ones(root, L), p, q, alpha);
        const MembershipReport report = membership_report(pair, lattice);
        for (double v : {report.mu_apq, report.lambda_apq, report.mu_p_ap, report.mu_minus_pprime,
                         report.mu_q_aq, report.mu_minus_qprime, report.lambda_p_ap,
                         report.lambda_minus_pprime, report.lambda_q_aq,
                         report.lambda_minus_qprime, report.nu_a2, report.wt_est_ratio}) {
            CHECK(std::isfinite(v));
            CHECK(v > 0.0);
        }
        // nu in A_2 consistency against the pair of A_p characteristics.
        const double lhs = std::pow(report.nu_a2, p);
        const double rhs = report.mu_p_ap * report.lambda_p_ap;
        CHECK(lhs <= rhs * (1.0 + 1e-9));
    }
    SUBCASE("Holder chain of the cube estimate") {
        const Weight mu = power_weight(0.125, point(0.0), root, L);
        const double pp = p / (p - 1.0);
        const double qp = q / (q - 1.0);
        const AveragePyramid dual_q(pointwise_pow(mu.density(), -qp), L);
        const AveragePyramid dual_p(pointwise_pow(mu.density(), -pp), L);
        lattice.for_each([&](int l, std::int64_t i) {
            const double lhs = std::pow(dual_q.average(l, i), 1.0 / qp);
            const double rhs = std::pow(dual_p.average(l, i), 1.0 / pp);
            CHECK(lhs <= rhs + 1e-12);
        });
    }
    SUBCASE("pair validation") {
        CHECK_THROWS_AS(WeightPair(ones(root, L), ones(root, L), 2.0, 4.0, 0.5),
                        std::invalid_argument);
    }
}
