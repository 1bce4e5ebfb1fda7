#pragma once

#include <cstdint>
#include <random>

#include "iod/matrix.hpp"

namespace iod {

/// Seeded random source with fully specified output.
///
/// mt19937_64 supplies the bit stream and the Gaussian transform is done
/// here (Box-Muller) rather than through std::normal_distribution, whose
/// output is implementation-defined. Two runs with the same seed produce
/// identical values on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (cosine branch only).
    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    /// Complex with independent standard-normal real and imaginary parts.
    Complex cgaussian() {
        const double re = gaussian();
        return Complex(re, gaussian());
    }

    /// Uniform integer in [lo, hi], inclusive.
    Index uniform_index(Index lo, Index hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<Index>(next_u64() % span);
    }

    /// Independent stream derived from the root seed; stable under
    /// reordering of draws on the parent.
    Rng fork(std::uint64_t stream) const {
        std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return Rng(z ^ (z >> 31));
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

inline CMatrix random_complex_gaussian(Index rows, Index cols, Rng& rng) {
    CMatrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) m(r, c) = rng.cgaussian();
    return m;
}

/// Unitary from the QR factorization of a Gaussian matrix, with the Q
/// columns rephased by the signs of diag(R) so the result is independent
/// of the factorization's sign conventions.
inline CMatrix random_unitary(Index dim, Rng& rng) {
    const CMatrix g = random_complex_gaussian(dim, dim, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index c = 0; c < dim; ++c) {
        const Complex d = r(c, c);
        if (std::abs(d) > 0.0) q.col(c) *= d / std::abs(d);
    }
    return q;
}

inline CMatrix random_hermitian(Index dim, Rng& rng) {
    const CMatrix g = random_complex_gaussian(dim, dim, rng);
    return (g + g.adjoint()) * 0.5;
}

}  // namespace iod
