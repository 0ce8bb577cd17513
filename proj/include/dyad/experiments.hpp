#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dyad/grid.hpp"
#include "dyad/weights.hpp"

namespace dyad {

/// Invalid configuration (maps to CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WeightSpec {
    enum class Family { constant, power };
    Family family = Family::constant;
    double beta = 0.0;
    double center = 0.0;

    static WeightSpec parse(const std::string& text);  // "const" | "power:<beta>[:<center>]"
    std::string describe() const;
};

struct SymbolSpec {
    enum class Family { haar, step, constant };
    Family family = Family::haar;
    int levels = 3;

    static SymbolSpec parse(const std::string& text);  // "haar[:<levels>]" | "step" | "const"
    std::string describe() const;
};

struct ExperimentConfig {
    std::string experiment;
    int dimension = 1;
    int depth = 5;
    double alpha = 0.5;
    double p = 4.0 / 3.0;
    double q = 4.0;
    WeightSpec mu;
    WeightSpec lambda;
    SymbolSpec symbol;
    long long trials = 20;
    std::uint64_t seed = 1;
    std::string output_path;
    // kernel-avg
    long long samples = 100000;
    double probe_width = 1e-3;
    std::vector<double> abscissae{0.05, 0.1, 0.2, 0.4};
    // lower-bound
    int modes = 16;
    // shared
    int threads = 1;
    double drift_tol = 0.05;

    std::string fingerprint() const;
    void validate() const;  // throws ConfigError
};

struct ReportRow {
    std::string metric;
    double value = 0.0;
    double tol_or_stderr = 0.0;
};

/// Named scalar results plus run metadata; serialized as CSV with the fixed
/// schema experiment,fingerprint,metric,value,tolerance_or_stderr,seed,depth,runtime_ms.
/// The runtime column is pinned to 0 so identical configs reproduce the file
/// byte for byte; wall time goes to the summary line instead.
struct ExperimentReport {
    std::string experiment;
    std::string fingerprint;
    std::uint64_t seed = 0;
    int depth = 0;
    std::vector<ReportRow> rows;
    bool passed = true;
    std::string summary;

    void write_csv(const std::string& path) const;
};

ExperimentReport decomposition_residual(const ExperimentConfig& config);
ExperimentReport domination_check(const ExperimentConfig& config);
ExperimentReport duality_probe(const ExperimentConfig& config);
ExperimentReport lower_bound_probe(const ExperimentConfig& config);
ExperimentReport equivalence_scan(const ExperimentConfig& config);
ExperimentReport kernel_average(const ExperimentConfig& config);
ExperimentReport weights_report(const ExperimentConfig& config);

enum class OperatorTag {
    dyadic_frac_integral,
    frac_maximal,
    commutator_dyadic,
    commutator_continuum,
};

/// Lower bound on the L^p(mu^p) -> L^q(lambda^q) operator norm by maximizing
/// the norm ratio over a seeded family of test functions (a constant, random
/// Haar polynomials, indicator atoms, and nu-weighted bumps). The symbol is
/// required for the commutator tags.
double operator_norm_estimate(OperatorTag tag, const WeightPair& pair, const GridFunction* symbol,
                              const ResolvedLattice& lattice, long long trials, std::uint64_t seed);

/// Entry point shared by the binary and the tests: parses one subcommand,
/// runs it, writes the CSV, prints a summary line. Exit codes: 0 pass,
/// 1 invariant failure, 2 usage or configuration error.
int run_cli(int argc, const char* const* argv);

}  // namespace dyad
