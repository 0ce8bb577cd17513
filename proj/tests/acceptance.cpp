// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, not tuned at run time.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dyad/averaging.hpp"
#include "dyad/experiments.hpp"
#include "dyad/grid.hpp"
#include "dyad/haar.hpp"
#include "dyad/lower_bound.hpp"
#include "dyad/operators.hpp"
#include "dyad/rng.hpp"
#include "dyad/weights.hpp"

using namespace dyad;

namespace {

struct Criterion {
    int index;
    std::string name;
    std::function<bool(std::string&)> check;
};

GridFunction random_function(const DyadicCube& root, int resolution, std::uint64_t seed) {
    std::mt19937_64 rng = make_engine(seed, 0);
    GridFunction f(root, resolution);
    for (std::int64_t i = 0; i < f.cell_count(); ++i) f.value(i) = uniform_in(rng, -1.0, 1.0);
    return f;
}

GridFunction constant_one(const DyadicCube& root, int resolution) {
    GridFunction f(root, resolution);
    for (std::int64_t i = 0; i < f.cell_count(); ++i) f.value(i) = 1.0;
    return f;
}

Weight ones(const DyadicCube& root, int resolution) {
    return Weight(constant_one(root, resolution));
}

double cell_inner_product(const GridFunction& a, const GridFunction& b) {
    KahanSum s;
    for (std::int64_t i = 0; i < a.cell_count(); ++i) s.add(a.value(i) * b.value(i));
    return s.value() * a.cell_volume();
}

int run_cli_args(std::vector<std::string> args) {
    std::vector<const char*> argv{"dyad"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// --- criterion 1: Haar suite ------------------------------------------------

bool haar_suite(std::string& detail) {
    double worst = 0.0;
    // Orthonormality by exact cell sums.
    for (int dim : {1, 2}) {
        const int depth = dim == 1 ? 4 : 3;
        const DyadicCube root = DyadicCube::unit(dim);
        const ResolvedLattice lattice = build_lattice(root, depth);
        std::vector<GridFunction> basis;
        lattice.for_each([&](int l, std::int64_t i) {
            if (l >= depth) return;
            for (const HaarSignature sig : HaarSignature::basis(dim)) {
                basis.push_back(haar_function_values(lattice.cube(l, i), sig, root, depth));
            }
        });
        for (std::size_t i = 0; i < basis.size(); ++i) {
            for (std::size_t j = i; j < basis.size(); ++j) {
                const double ip = cell_inner_product(basis[i], basis[j]);
                worst = std::max(worst, std::abs(ip - (i == j ? 1.0 : 0.0)));
            }
        }
    }
    // Parseval and round trip up to depth 6.
    for (int dim : {1, 2}) {
        for (int depth : {4, 6}) {
            const DyadicCube root = DyadicCube::unit(dim);
            const ResolvedLattice lattice = build_lattice(root, depth);
            const GridFunction f =
                random_function(root, depth, 100u + static_cast<unsigned>(10 * dim + depth));
            const HaarCoefficients coeffs = haar_forward(f, lattice);
            double parseval = coeffs.root_average() * coeffs.root_average() * root.volume();
            for (const auto& [key, value] : coeffs.entries()) parseval += value * value;
            const double norm = l2_norm(f);
            worst = std::max(worst, std::abs(parseval - norm * norm));
            const GridFunction back = haar_inverse(coeffs);
            for (std::int64_t i = 0; i < f.cell_count(); ++i) {
                worst = std::max(worst, std::abs(f.value(i) - back.value(i)));
            }
        }
    }
    detail = "max error " + std::to_string(worst);
    return worst <= 1e-12;
}

// --- criterion 2: dyadic operator exactness ----------------------------------

bool operator_exactness(std::string& detail) {
    double worst = 0.0;
    const DyadicCube root1 = DyadicCube::unit(1);
    for (int depth : {2, 4, 6}) {
        const ResolvedLattice lattice = build_lattice(root1, depth);
        const GridFunction one = constant_one(root1, depth);
        GridFunction descend = dyadic_frac_integral(one, 0.5, lattice, TailMode::truncated);
        const double c_half = 1.0 / (std::exp2(0.5) - 1.0);
        for (std::int64_t i = 0; i < descend.cell_count(); ++i) {
            descend.value(i) += c_half * std::pow(descend.cell_side(), 0.5);
            worst = std::max(worst, std::abs(descend.value(i) - (2.0 + std::sqrt(2.0))));
        }
        const GridFunction extended = dyadic_frac_integral(one, 0.5, lattice, TailMode::extended);
        for (std::int64_t i = 0; i < extended.cell_count(); ++i) {
            worst = std::max(worst,
                             std::abs(extended.value(i) - (3.0 + 2.0 * std::sqrt(2.0))));
        }
    }
    // Haar eigenrelation with c_alpha = 1/(2^alpha - 1), n in {1, 2}.
    for (int dim : {1, 2}) {
        const DyadicCube root = DyadicCube::unit(dim);
        const int depth = dim == 1 ? 6 : 4;
        const ResolvedLattice lattice = build_lattice(root, depth);
        for (double alpha : {0.25, 0.5, 0.75}) {
            const double c_alpha = 1.0 / (std::exp2(alpha) - 1.0);
            lattice.for_each([&](int l, std::int64_t i) {
                if (l >= std::min(depth, 3)) return;
                for (const HaarSignature sig : HaarSignature::basis(dim)) {
                    const DyadicCube cube = lattice.cube(l, i);
                    const GridFunction h = haar_function_values(cube, sig, root, depth);
                    const GridFunction image =
                        dyadic_frac_integral(h, alpha, lattice, TailMode::extended);
                    const double factor = c_alpha * std::pow(cube.volume(), alpha / dim);
                    for (std::int64_t c = 0; c < h.cell_count(); ++c) {
                        worst = std::max(worst,
                                         std::abs(image.value(c) - factor * h.value(c)));
                    }
                }
            });
        }
    }
    detail = "max error " + std::to_string(worst);
    return worst <= 1e-12;
}

// --- criterion 3: decomposition identity --------------------------------------

bool decomposition_identity(std::string& detail) {
    long long total_trials = 0;
    double worst = 0.0;
    bool ok = true;
    for (int dim : {1, 2}) {
        for (double ratio : {0.25, 0.5, 0.75}) {
            ExperimentConfig cfg;
            cfg.experiment = "decomp";
            cfg.dimension = dim;
            cfg.depth = 6;
            cfg.alpha = ratio * dim;
            cfg.p = 2.0 / (1.0 + ratio);
            cfg.q = 2.0 / (1.0 - ratio);
            cfg.trials = 17;
            cfg.seed = 1000 + static_cast<std::uint64_t>(100 * dim + 10 * ratio * 4);
            const ExperimentReport report = decomposition_residual(cfg);
            ok = ok && report.passed;
            total_trials += cfg.trials;
            for (const ReportRow& row : report.rows) worst = std::max(worst, row.value);
        }
    }
    detail = std::to_string(total_trials) + " trials, max residual " + std::to_string(worst);
    return ok && total_trials >= 100 && worst <= 1e-10;
}

// --- criterion 4: domination inequalities -------------------------------------

bool domination(std::string& detail) {
    double worst = -1e300;
    long long total_trials = 0;
    bool ok = true;
    for (int dim : {1, 2}) {
        ExperimentConfig cfg;
        cfg.experiment = "dominate";
        cfg.dimension = dim;
        cfg.depth = dim == 1 ? 6 : 5;
        cfg.alpha = 0.5 * dim;
        cfg.p = 2.0 / 1.5;
        cfg.q = 4.0;
        cfg.trials = 50;
        cfg.seed = 2000 + static_cast<std::uint64_t>(dim);
        const ExperimentReport report = domination_check(cfg);
        ok = ok && report.passed;
        total_trials += cfg.trials;
        for (const ReportRow& row : report.rows) worst = std::max(worst, row.value);
    }
    detail = std::to_string(total_trials) + " trials, max signed slack " + std::to_string(worst);
    return ok && total_trials >= 100 && worst <= 1e-12;
}

// --- criterion 5: weighted BMO and characteristics ----------------------------

bool bmo_and_characteristics(std::string& detail) {
    const DyadicCube root = DyadicCube::unit(1);
    std::ostringstream note;

    const ResolvedLattice lattice6 = build_lattice(root, 6);
    const Weight unit = ones(root, 6);
    const bool unit_ok = ap_characteristic(unit, 2.0, lattice6) == 1.0 &&
                         ap_characteristic(unit, 1.5, lattice6) == 1.0 &&
                         apq_characteristic(unit, 4.0 / 3.0, 4.0, lattice6) == 1.0;

    GridFunction step(root, 6);
    for (std::int64_t i = 0; i < step.cell_count() / 2; ++i) step.value(i) = 1.0;
    const double step_bmo = weighted_bmo_norm(step, unit, 1.0, lattice6);
    const bool step_ok = std::abs(step_bmo - 0.5) <= 1e-12;

    const int L = 10;
    const double a2 = ap_characteristic(power_weight(0.5, point(0.0), root, L), 2.0,
                                        build_lattice(root, L));
    const bool a2_ok = std::abs(a2 - 4.0 / 3.0) <= 0.02 * (4.0 / 3.0);

    bool monotone_ok = true;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const GridFunction b = random_function(root, 6, 300 + seed);
        const Weight w = power_weight(seed % 2 == 0 ? 0.5 : -0.25, point(0.0), root, 6);
        const double base = weighted_bmo_norm(b, w, 1.0, lattice6);
        for (double q : {1.5, 2.0, 3.0}) {
            monotone_ok =
                monotone_ok && weighted_bmo_norm(b, w, q, lattice6) >= base - 1e-10;
        }
    }
    note << "unit chars " << (unit_ok ? "exact" : "off") << ", step BMO " << step_bmo
         << ", [x^(1/2)]_(A_2) = " << a2;
    detail = note.str();
    return unit_ok && step_ok && a2_ok && monotone_ok;
}

// --- criterion 6: two-weight cube estimate ------------------------------------

bool weight_estimate(std::string& detail) {
    ExperimentConfig cfg;
    cfg.experiment = "weights-report";
    cfg.depth = 8;
    cfg.drift_tol = 0.02;
    // Constant pair: exponent cancellation makes the ratio identically one.
    const ExperimentReport constant_report = weights_report(cfg);
    bool const_ok = false;
    for (const ReportRow& row : constant_report.rows) {
        if (row.metric == "const_pair_ratio_gap") const_ok = row.value <= 1e-12;
    }
    // Power suite: finite and stable under refinement.
    bool power_ok = true;
    double worst_drift = 0.0;
    const std::vector<std::pair<std::string, std::string>> suite{
        {"power:0.125", "const"}, {"const", "power:0.125"}, {"power:0.125", "power:-0.125"}};
    for (const auto& [mu, lambda] : suite) {
        cfg.mu = WeightSpec::parse(mu);
        cfg.lambda = WeightSpec::parse(lambda);
        const ExperimentReport report = weights_report(cfg);
        power_ok = power_ok && report.passed;
        for (const ReportRow& row : report.rows) {
            if (row.metric == "wt_est_drift") worst_drift = std::max(worst_drift, row.value);
        }
    }
    detail = "const pair exact: " + std::string(const_ok ? "yes" : "no") +
             ", max power-suite drift " + std::to_string(worst_drift);
    return const_ok && constant_report.passed && power_ok && worst_drift <= 0.02;
}

// --- criterion 7: kernel averaging --------------------------------------------

bool kernel_averaging(std::string& detail) {
    const auto started = std::chrono::steady_clock::now();
    ExperimentConfig cfg;
    cfg.experiment = "kernel-avg";
    cfg.samples = 100000;
    cfg.alpha = 0.5;
    cfg.probe_width = 1e-3;
    cfg.abscissae = {0.05, 0.1, 0.2, 0.4};
    cfg.seed = 7;
    const ExperimentReport report = kernel_average(cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                         started)
                               .count();
    // Cross-check one pinned value: the limit constant at alpha = 1/2 is 4/3,
    // so the analytic kernel at x = 0.1 is (4/3) * 10^(1/2).
    bool pinned_ok = false;
    for (const ReportRow& row : report.rows) {
        if (row.metric.rfind("analytic[x=0.1", 0) == 0 &&
            row.metric.find("0.2") == std::string::npos) {
            pinned_ok = std::abs(row.value - (4.0 / 3.0) * std::sqrt(10.0)) <= 1e-10;
        }
    }
    detail = report.summary + ", " + std::to_string(seconds) + " s";
    return report.passed && pinned_ok && seconds < 120.0;
}

// --- criterion 8: duality probe ------------------------------------------------

bool duality(std::string& detail) {
    // Hand check: b = Phi = the root Haar step, w = 1 gives ratio exactly 1.
    const DyadicCube root = DyadicCube::unit(1);
    const ResolvedLattice lattice = build_lattice(root, 4);
    const GridFunction h = haar_function_values(root, {0u, 1}, root, 4);
    const Weight unit = ones(root, 4);
    const double ratio = std::abs(cell_inner_product(h, h)) /
                         (weighted_bmo_norm(h, unit, 2.0, lattice) *
                          weighted_lp_norm(square_function(h, lattice), unit, 1.0));
    const bool hand_ok = std::abs(ratio - 1.0) <= 1e-12;

    ExperimentConfig cfg;
    cfg.experiment = "duality";
    cfg.depth = 6;
    cfg.trials = 200;
    cfg.seed = 5;
    cfg.mu = WeightSpec::parse("power:0.5");
    cfg.drift_tol = 0.05;
    const ExperimentReport report = duality_probe(cfg);
    detail = "hand-check ratio " + std::to_string(ratio) + "; " + report.summary;
    return hand_ok && report.passed;
}

// --- criterion 9: lower-bound probe ---------------------------------------------

bool lower_bound(std::string& detail) {
    ExperimentConfig cfg;
    cfg.experiment = "lower-bound";
    cfg.depth = 8;
    cfg.trials = 10;
    cfg.seed = 17;
    cfg.modes = 16;
    cfg.mu = WeightSpec::parse("power:0.125");
    cfg.p = 4.0 / 3.0;
    cfg.q = 4.0;
    cfg.alpha = 0.5;
    const ExperimentReport report = lower_bound_probe(cfg);
    bool zero_ok = false;
    for (const ReportRow& row : report.rows) {
        if (row.metric == "const_symbol_zero") zero_ok = row.value == 0.0;
    }
    detail = report.summary + "; constant symbol exact: " + (zero_ok ? "yes" : "no");
    return report.passed && zero_ok;
}

// --- criterion 10: equivalence scan ---------------------------------------------

bool equivalence(std::string& detail) {
    ExperimentConfig cfg;
    cfg.experiment = "equiv";
    cfg.depth = 8;
    cfg.trials = 10;
    cfg.seed = 4;
    cfg.mu = WeightSpec::parse("power:0.125");
    cfg.drift_tol = 0.10;
    const ExperimentReport report = equivalence_scan(cfg);
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double scaling_gap = 1.0;
    double const_norm = 1.0;
    for (const ReportRow& row : report.rows) {
        if (row.metric == "min_ratio") min_ratio = row.value;
        if (row.metric == "max_ratio") max_ratio = row.value;
        if (row.metric == "scaling_invariance_gap") scaling_gap = row.value;
        if (row.metric == "const_commutator_norm") const_norm = row.value;
    }
    detail = report.summary;
    return report.passed && scaling_gap <= 1e-12 && const_norm == 0.0 && min_ratio > 0.0 &&
           std::isfinite(max_ratio);
}

// --- criterion 11: reproducibility ----------------------------------------------

bool reproducibility(std::string& detail) {
    const auto out_a = std::filesystem::temp_directory_path() / "dyad_accept_a.csv";
    const auto out_b = std::filesystem::temp_directory_path() / "dyad_accept_b.csv";
    const std::vector<std::vector<std::string>> commands{
        {"decomp", "--depth", "5", "--trials", "10", "--seed", "7"},
        {"dominate", "--depth", "5", "--trials", "10", "--seed", "3"},
        {"duality", "--depth", "5", "--trials", "25", "--seed", "11", "--mu", "power:0.5"},
        {"lower-bound", "--depth", "7", "--trials", "2", "--seed", "2", "--mu", "power:0.125",
         "--p", "1.3333333333333333", "--q", "4", "--alpha", "0.5", "--modes", "6"},
        {"equiv", "--depth", "6", "--trials", "3", "--seed", "4", "--mu", "power:0.125", "--p",
         "1.3333333333333333", "--q", "4", "--alpha", "0.5"},
        {"kernel-avg", "--samples", "30000", "--seed", "3", "--abscissae", "0.1,0.2"},
        {"weights-report", "--depth", "7", "--mu", "power:0.125", "--p", "1.3333333333333333",
         "--q", "4", "--alpha", "0.5"},
    };
    int checked = 0;
    for (const auto& base : commands) {
        auto args_a = base;
        args_a.insert(args_a.end(), {"--threads", "1", "--out", out_a.string()});
        auto args_b = base;
        args_b.insert(args_b.end(), {"--threads", "4", "--out", out_b.string()});
        if (run_cli_args(args_a) != 0) return false;
        if (run_cli_args(args_b) != 0) return false;
        if (slurp(out_a) != slurp(out_b)) return false;
        if (run_cli_args(args_a) != 0) return false;
        if (slurp(out_a) != slurp(out_b)) return false;
        ++checked;
    }
    std::filesystem::remove(out_a);
    std::filesystem::remove(out_b);
    detail = std::to_string(checked) + " subcommands byte-identical at 1 and 4 threads";
    return checked == 7;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "Haar orthonormality, Parseval, round-trip (n in {1,2}, L <= 6, 1e-12)", haar_suite},
        {2, "dyadic fractional integral exactness and eigenrelation (1e-12)", operator_exactness},
        {3, "commutator decomposition residual (>= 100 trials, 1e-10)", decomposition_identity},
        {4, "square-function domination inequalities (>= 100 trials, 1e-12)", domination},
        {5, "weighted BMO and Muckenhoupt characteristics", bmo_and_characteristics},
        {6, "two-weight cube estimate: exact cancellation and <= 2% drift", weight_estimate},
        {7, "Monte Carlo kernel averaging within 5% of the analytic limit", kernel_averaging},
        {8, "weighted H1-BMO duality ratios (200 trials, hand check, <= 5% drift)", duality},
        {9, "oscillatory lower-bound probe (10 symbols, <= 10% mode drift)", lower_bound},
        {10, "commutator norm vs weighted BMO norm equivalence scan", equivalence},
        {11, "byte-identical CSV reruns at 1 and many threads", reproducibility},
    };
    int failures = 0;
    for (const Criterion& criterion : criteria) {
        std::string note;
        bool ok = false;
        try {
            ok = criterion.check(note);
        } catch (const std::exception& error) {
            note = std::string("exception: ") + error.what();
        }
        std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion.index,
                    criterion.name.c_str(), note.c_str());
        if (!ok) ++failures;
    }
    if (failures == 0) {
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
