#pragma once

#include <compare>
#include <map>
#include <vector>

#include "dyad/grid.hpp"

namespace dyad {

/// Tensor signature of an n-dimensional Haar function. Bit c set means the
/// factor on axis c is the normalized indicator |I|^(-1/2) 1_I; bit clear
/// means the mean-zero step (+|I|^(-1/2) on the left half, - on the right).
/// The all-ones signature is reserved for the normalized indicator itself and
/// is excluded from the orthonormal family.
struct HaarSignature {
    unsigned bits = 0;
    int dimension = 1;

    bool is_all_ones() const { return bits == (1u << dimension) - 1u; }

    /// All basis signatures (everything except all-ones), ascending bits.
    static std::vector<HaarSignature> basis(int dimension);
};

struct HaarKey {
    int level = 0;            // level offset within the lattice, 0..depth-1
    std::int64_t flat = 0;    // lexicographic cube index at that level
    unsigned sig = 0;         // signature bits

    auto operator<=>(const HaarKey&) const = default;
};

/// Sparse spectral representation: coefficients on lattice cubes plus the
/// root average that carries the mean on the root-restricted system.
class HaarCoefficients {
public:
    HaarCoefficients(ResolvedLattice lattice, double root_average = 0.0)
        : lattice_(lattice), root_average_(root_average) {}

    const ResolvedLattice& lattice() const { return lattice_; }
    double root_average() const { return root_average_; }
    void set_root_average(double v) { root_average_ = v; }

    const std::map<HaarKey, double>& entries() const { return entries_; }
    std::map<HaarKey, double>& entries() { return entries_; }

    void set(const HaarKey& key, double value);

private:
    ResolvedLattice lattice_;
    double root_average_ = 0.0;
    std::map<HaarKey, double> entries_;
};

/// Constant value of h_Q^sig on the child of Q selected by corner_bits.
/// Haar functions are constant on strict descendants, so this pins the value
/// on every finer cube under that child.
double haar_child_value(const DyadicCube& cube, HaarSignature sig, unsigned corner_bits);

/// h_Q^sig sampled on the cell grid (root, resolution). Unit L^2 norm;
/// mean zero whenever sig is not all-ones.
GridFunction haar_function_values(const DyadicCube& cube, HaarSignature sig,
                                  const DyadicCube& root, int resolution);

/// Analysis: entries[Q, sig] = <f, h_Q^sig> over lattice cubes at level
/// offsets 0..depth-1, plus the root average. Exact finite sums; exact zeros
/// are dropped from the map.
HaarCoefficients haar_forward(const GridFunction& f, const ResolvedLattice& lattice);

/// Synthesis: the unique grid function with the given coefficients.
GridFunction haar_inverse(const HaarCoefficients& coeffs);

}  // namespace dyad
