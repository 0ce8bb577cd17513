#include "dyad/haar.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace dyad {

namespace {

void check_signature(HaarSignature sig, int dim) {
    if (sig.dimension != dim) throw std::invalid_argument("signature dimension mismatch");
    if (sig.bits >= (1u << dim)) throw std::invalid_argument("signature bits out of range");
}

void check_basis_signature(HaarSignature sig, int dim) {
    check_signature(sig, dim);
    if (sig.is_all_ones()) {
        throw std::invalid_argument("the all-ones signature is not a basis element");
    }
}

// Sign of h on the child picked by corner bits: each oscillating axis flips
// the sign on its upper half.
double child_sign(unsigned sig_bits, unsigned corner_bits, int dim) {
    const unsigned mask = (1u << dim) - 1u;
    const unsigned flips = corner_bits & ~sig_bits & mask;
    return (std::popcount(flips) % 2 == 0) ? 1.0 : -1.0;
}

void check_lattice_matches(const GridFunction& f, const ResolvedLattice& lattice) {
    if (!(lattice.root() == f.root()) || lattice.depth() != f.resolution()) {
        throw std::invalid_argument("lattice root/depth must match the function shape");
    }
}

}  // namespace

std::vector<HaarSignature> HaarSignature::basis(int dimension) {
    std::vector<HaarSignature> out;
    const unsigned all = (1u << dimension) - 1u;
    out.reserve(all);
    for (unsigned bits = 0; bits < all; ++bits) out.push_back({bits, dimension});
    return out;
}

void HaarCoefficients::set(const HaarKey& key, double value) {
    if (key.level < 0 || key.level >= lattice_.depth()) {
        throw std::invalid_argument("coefficient level outside the lattice basis range");
    }
    if (key.flat < 0 || key.flat >= lattice_.level_count(key.level)) {
        throw std::invalid_argument("coefficient cube outside the lattice");
    }
    check_basis_signature({key.sig, lattice_.dimension()}, lattice_.dimension());
    if (value == 0.0) {
        entries_.erase(key);
    } else {
        entries_[key] = value;
    }
}

double haar_child_value(const DyadicCube& cube, HaarSignature sig, unsigned corner_bits) {
    check_basis_signature(sig, cube.dimension());
    return child_sign(sig.bits, corner_bits, cube.dimension()) / std::sqrt(cube.volume());
}

GridFunction haar_function_values(const DyadicCube& cube, HaarSignature sig,
                                  const DyadicCube& root, int resolution) {
    check_basis_signature(sig, root.dimension());
    const int offset = cube.level() - root.level();
    if (offset < 0 || !root.contains_cube(cube)) {
        throw std::domain_error("cube lies outside the root cube");
    }
    if (offset >= resolution) {
        throw std::invalid_argument("no room for oscillation below the cube at this resolution");
    }
    const int dim = root.dimension();
    GridFunction out(root, resolution);
    const double magnitude = 1.0 / std::sqrt(cube.volume());
    const int down = resolution - offset;

    std::array<std::int64_t, kMaxDim> base{};
    for (int c = 0; c < dim; ++c) base[static_cast<std::size_t>(c)] = cube.index(c) - (root.index(c) << offset);

    const std::int64_t cells_per_axis = std::int64_t{1} << down;
    std::array<std::int64_t, kMaxDim> rel{};
    // Odometer over the cell block of the cube.
    bool done = false;
    while (!done) {
        unsigned corner = 0;
        std::array<std::int64_t, kMaxDim> coords{};
        for (int c = 0; c < dim; ++c) {
            coords[static_cast<std::size_t>(c)] =
                (base[static_cast<std::size_t>(c)] << down) + rel[static_cast<std::size_t>(c)];
            if ((rel[static_cast<std::size_t>(c)] >> (down - 1)) & 1) corner |= 1u << c;
        }
        const std::int64_t flat =
            flat_encode({coords.data(), static_cast<std::size_t>(dim)}, dim, resolution);
        out.value(flat) = magnitude * child_sign(sig.bits, corner, dim);

        int axis = dim - 1;
        while (axis >= 0) {
            if (++rel[static_cast<std::size_t>(axis)] < cells_per_axis) break;
            rel[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
        done = axis < 0;
    }
    return out;
}

HaarCoefficients haar_forward(const GridFunction& f, const ResolvedLattice& lattice) {
    check_lattice_matches(f, lattice);
    const int dim = f.dimension();
    const int depth = lattice.depth();
    const AveragePyramid averages(f, depth);

    HaarCoefficients coeffs(lattice, averages.average(0, 0));
    const unsigned children = 1u << dim;
    const double child_fraction = 1.0 / static_cast<double>(children);
    for (int l = 0; l < depth; ++l) {
        const double root_half = std::sqrt(lattice.cube(l, 0).volume());
        const std::int64_t n = lattice.level_count(l);
        for (std::int64_t i = 0; i < n; ++i) {
            for (const HaarSignature sig : HaarSignature::basis(dim)) {
                double sum = 0.0;
                for (unsigned bits = 0; bits < children; ++bits) {
                    sum += child_sign(sig.bits, bits, dim) *
                           averages.average(l + 1, flat_child(i, dim, l, bits));
                }
                // <f, h_Q> = sum over children of avg * (sign/|Q|^(1/2)) * |child|
                const double coef = sum * child_fraction * root_half;
                if (coef != 0.0) coeffs.entries()[{l, i, sig.bits}] = coef;
            }
        }
    }
    return coeffs;
}

GridFunction haar_inverse(const HaarCoefficients& coeffs) {
    const ResolvedLattice& lattice = coeffs.lattice();
    const int dim = lattice.dimension();
    const int depth = lattice.depth();

    // details[l][i]: jump added to the level-(l) average of cube i by the
    // coefficients living on its parent.
    std::vector<std::vector<double>> details(static_cast<std::size_t>(depth) + 1);
    for (int l = 0; l <= depth; ++l) {
        details[static_cast<std::size_t>(l)].assign(
            static_cast<std::size_t>(lattice.level_count(l)), 0.0);
    }
    for (const auto& [key, coef] : coeffs.entries()) {
        if (key.level < 0 || key.level >= depth || key.flat < 0 ||
            key.flat >= lattice.level_count(key.level)) {
            throw std::invalid_argument("coefficient cube outside the lattice");
        }
        check_basis_signature({key.sig, dim}, dim);
        const double magnitude = 1.0 / std::sqrt(lattice.cube(key.level, key.flat).volume());
        for (unsigned bits = 0; bits < (1u << dim); ++bits) {
            const std::int64_t child = flat_child(key.flat, dim, key.level, bits);
            details[static_cast<std::size_t>(key.level + 1)][static_cast<std::size_t>(child)] +=
                coef * magnitude * child_sign(key.sig, bits, dim);
        }
    }

    std::vector<double> means{coeffs.root_average()};
    for (int l = 1; l <= depth; ++l) {
        const std::int64_t n = lattice.level_count(l);
        std::vector<double> next(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) {
            next[static_cast<std::size_t>(i)] =
                means[static_cast<std::size_t>(flat_parent(i, dim, l))] +
                details[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
        }
        means = std::move(next);
    }
    return GridFunction(lattice.root(), depth, std::move(means));
}

}  // namespace dyad
