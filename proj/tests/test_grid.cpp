#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dyad/grid.hpp"
#include "dyad/rng.hpp"

using namespace dyad;

namespace {

GridFunction random_function(const DyadicCube& root, int resolution, std::uint64_t seed) {
    std::mt19937_64 rng = make_engine(seed, 0);
    GridFunction f(root, resolution);
    for (std::int64_t i = 0; i < f.cell_count(); ++i) f.value(i) = uniform_in(rng, -1.0, 1.0);
    return f;
}

// Brute-force mean over the cells of a cube, flat left-to-right summation.
double brute_force_average(const GridFunction& f, const DyadicCube& cube) {
    double sum = 0.0;
    std::int64_t count = 0;
    for (std::int64_t i = 0; i < f.cell_count(); ++i) {
        if (cube.contains_cube(f.cell(i))) {
            sum += f.value(i);
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

}  // namespace

TEST_CASE("lattice enumeration counts") {
    CHECK(build_lattice(DyadicCube::unit(1), 2).cube_count() == 7);
    CHECK(build_lattice(DyadicCube::unit(2), 1).cube_count() == 5);
    CHECK(build_lattice(DyadicCube::unit(1), 0).cube_count() == 1);
    CHECK_THROWS_AS(build_lattice(DyadicCube::unit(1), -1), std::invalid_argument);
}

TEST_CASE("children partition and parent round-trips") {
    const DyadicCube root = DyadicCube::unit(2);
    for (const DyadicCube& child : root.children()) {
        CHECK(child.parent() == root);
        CHECK(root.contains_cube(child));
    }
    CHECK(root.children().size() == 4);

    // Level-wise partition of the root: disjoint cells exhaust the volume.
    const ResolvedLattice lattice = build_lattice(root, 3);
    for (int l = 0; l <= 3; ++l) {
        double vol = 0.0;
        for (std::int64_t i = 0; i < lattice.level_count(l); ++i) {
            vol += lattice.cube(l, i).volume();
        }
        CHECK(vol == doctest::Approx(root.volume()).epsilon(1e-14));
    }
    // Every non-root cube's parent is enumerated one level up.
    lattice.for_each([&](int l, std::int64_t i) {
        if (l == 0) return;
        const DyadicCube parent = lattice.cube(l, i).parent();
        CHECK(parent == lattice.cube(l - 1, flat_parent(i, 2, l)));
    });
}

TEST_CASE("standard root ancestors are [0, 2^k)^n") {
    const DyadicCube root = DyadicCube::unit(2);
    DyadicCube up = root;
    for (int k = 1; k <= 4; ++k) {
        up = up.parent();
        CHECK(up.level() == -k);
        CHECK(up.lower(0) == 0.0);
        CHECK(up.lower(1) == 0.0);
        CHECK(up.side() == doctest::Approx(std::ldexp(1.0, k)));
    }
}

TEST_CASE("cube_average basics") {
    const DyadicCube root = DyadicCube::unit(1);
    const GridFunction f(root, 1, {1.0, 3.0});
    CHECK(cube_average(f, root) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(cube_average(f, root.child(0)) == doctest::Approx(1.0).epsilon(1e-15));

    const DyadicCube outside(root.grid(), 1, std::array<std::int64_t, 1>{2});
    CHECK_THROWS_AS(cube_average(f, outside), std::domain_error);
    CHECK_THROWS_AS(cube_average(f, root.child(0).child(0)), std::invalid_argument);
}

TEST_CASE("cube_average equals brute force on random data") {
    for (int dim : {1, 2}) {
        const DyadicCube root = DyadicCube::unit(dim);
        const int resolution = dim == 1 ? 6 : 4;
        const GridFunction f = random_function(root, resolution, 17u + static_cast<unsigned>(dim));
        const ResolvedLattice lattice = build_lattice(root, resolution);
        lattice.for_each([&](int l, std::int64_t i) {
            const DyadicCube cube = lattice.cube(l, i);
            CHECK(cube_average(f, cube) ==
                  doctest::Approx(brute_force_average(f, cube)).epsilon(1e-13));
        });
    }
}

TEST_CASE("average consistency over children is exact") {
    const DyadicCube root = DyadicCube::unit(2);
    const GridFunction f = random_function(root, 5, 23);
    const ResolvedLattice lattice = build_lattice(root, 4);
    lattice.for_each([&](int l, std::int64_t i) {
        if (l == 4) return;
        const DyadicCube cube = lattice.cube(l, i);
        double children_mean = 0.0;
        for (const DyadicCube& child : cube.children()) children_mean += cube_average(f, child);
        children_mean /= 4.0;
        CHECK(cube_average(f, cube) == doctest::Approx(children_mean).epsilon(1e-14));
    });
}

TEST_CASE("point evaluation uses half-open cells") {
    const DyadicCube root = DyadicCube::unit(1);
    const GridFunction f(root, 1, {1.0, 3.0});
    const Point a = point(0.4999999);
    const Point b = point(0.5);
    CHECK(f.value_at({a.data(), 1}) == 1.0);
    CHECK(f.value_at({b.data(), 1}) == 3.0);
    const Point outside = point(1.0);
    CHECK_THROWS_AS(f.value_at({outside.data(), 1}), std::domain_error);
}

TEST_CASE("shifted grid intervals") {
    SUBCASE("a=-0.3, r=1.5, scale 0") {
        const std::array<double, 1> a{-0.3};
        const DyadicGrid grid(a, 1.5, 1);
        const auto intervals = shifted_grid_intervals(grid, 0, 0.0, 1.0);
        REQUIRE(intervals.size() == 1);
        CHECK(intervals[0].lower(0) == doctest::Approx(-0.3).epsilon(1e-15));
        CHECK(intervals[0].upper(0) == doctest::Approx(1.2).epsilon(1e-15));
        const Point zero = point(0.0);
        CHECK(intervals[0].contains_point({zero.data(), 1}));
    }
    SUBCASE("standard grid, scale 1") {
        const auto intervals = shifted_grid_intervals(DyadicGrid::standard(1), 1, 0.0, 1.0);
        REQUIRE(intervals.size() == 2);
        CHECK(intervals[0].lower(0) == 0.0);
        CHECK(intervals[0].upper(0) == 0.5);
        CHECK(intervals[1].lower(0) == 0.5);
        CHECK(intervals[1].upper(0) == 1.0);
    }
    SUBCASE("empty window") {
        CHECK(shifted_grid_intervals(DyadicGrid::standard(1), 0, 1.0, 1.0).empty());
    }
    SUBCASE("coverage and exact abutment on random grids") {
        std::mt19937_64 rng = make_engine(7, 0);
        for (int trial = 0; trial < 50; ++trial) {
            const double r = uniform_in(rng, 1.0, 2.0);
            const double a = -r * uniform01(rng);
            const std::array<double, 1> t{a};
            const DyadicGrid grid(t, r, 1);
            const int scale = static_cast<int>(uniform_index(rng, 5));
            const double lo = uniform_in(rng, -2.0, 0.0);
            const double hi = lo + uniform_in(rng, 0.1, 3.0);
            const auto intervals = shifted_grid_intervals(grid, scale, lo, hi);
            REQUIRE(!intervals.empty());
            CHECK(intervals.front().lower(0) <= lo);
            CHECK(intervals.back().upper(0) >= hi);
            for (std::size_t i = 1; i < intervals.size(); ++i) {
                CHECK(intervals[i].index(0) == intervals[i - 1].index(0) + 1);
                CHECK(intervals[i].lower(0) == intervals[i - 1].upper(0));
            }
        }
    }
}

TEST_CASE("grid nesting: each interval splits into exactly two") {
    const std::array<double, 1> a{-0.7};
    const DyadicGrid grid(a, 1.8, 1);
    const auto coarse = shifted_grid_intervals(grid, 2, -0.5, 0.9);
    for (const DyadicCube& interval : coarse) {
        const auto halves = interval.children();
        REQUIRE(halves.size() == 2);
        CHECK(halves[0].lower(0) == interval.lower(0));
        CHECK(halves[1].upper(0) == doctest::Approx(interval.upper(0)).epsilon(1e-15));
        CHECK(halves[0].upper(0) == halves[1].lower(0));
        CHECK(interval.contains_cube(halves[0]));
        CHECK(interval.contains_cube(halves[1]));
    }
}

TEST_CASE("grid parameter validation") {
    const std::array<double, 1> bad_a{0.5};
    CHECK_THROWS_AS(DyadicGrid(bad_a, 1.0, 1), std::invalid_argument);
    const std::array<double, 1> ok_a{0.0};
    CHECK_THROWS_AS(DyadicGrid(ok_a, 2.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(DyadicGrid(ok_a, 0.5, 1), std::invalid_argument);
}

TEST_CASE("refined function represents the same values") {
    const DyadicCube root = DyadicCube::unit(2);
    const GridFunction f = random_function(root, 3, 5);
    const GridFunction g = f.refined(2);
    CHECK(g.resolution() == 5);
    std::mt19937_64 rng = make_engine(11, 0);
    for (int i = 0; i < 200; ++i) {
        const Point p = point(uniform01(rng), uniform01(rng));
        CHECK(f.value_at({p.data(), 2}) == g.value_at({p.data(), 2}));
    }
}
