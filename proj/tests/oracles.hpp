#pragma once

// Independent oracles for the test suites. Everything here recomputes
// expected values through a different route than the library: closed-form
// 2x2 factorizations, characteristic polynomials, analytic eigenvalue
// formulas, and naive summation loops.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "iod/matrix.hpp"

namespace oracles {

using iod::CMatrix;
using iod::Complex;
using iod::Index;

/// Largest singular value of a 2x2 complex matrix from the characteristic
/// polynomial of A* A: sigma^2 = (F^2 + sqrt(F^4 - 4 |det|^2)) / 2.
inline double svd2x2_max_singular(Complex a, Complex b, Complex c, Complex d) {
    const double f2 = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
    const double det2 = std::norm(a * d - b * c);
    const double disc = std::sqrt(std::max(0.0, f2 * f2 - 4.0 * det2));
    return std::sqrt((f2 + disc) / 2.0);
}

/// Eigenvalues of a Hermitian 2x2 via the quadratic formula, ascending.
inline std::array<double, 2> herm2x2_eigenvalues(double a11, Complex a12, double a22) {
    const double tr = a11 + a22;
    const double det = a11 * a22 - std::norm(a12);
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    return {(tr - disc) / 2.0, (tr + disc) / 2.0};
}

/// Norm of the n x n tridiagonal all-ones matrix (diagonal included):
/// the extreme eigenvalue 1 + 2 cos(pi / (n + 1)).
inline double band_ones_norm(Index n) {
    return 1.0 + 2.0 * std::cos(M_PI / static_cast<double>(n + 1));
}

/// Norm of the symmetrized unit shift S + S^T on n points: 2 cos(pi/(n+1)).
inline double symmetrized_shift_norm(Index n) {
    return 2.0 * std::cos(M_PI / static_cast<double>(n + 1));
}

/// Entry-by-entry matrix product, no BLAS path.
inline CMatrix naive_product(const CMatrix& a, const CMatrix& b) {
    CMatrix out = CMatrix::Zero(a.rows(), b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < b.cols(); ++j)
            for (Index k = 0; k < a.cols(); ++k) out(i, j) += a(i, k) * b(k, j);
    return out;
}

/// Compression p a p computed with naive products.
inline CMatrix naive_compression(const CMatrix& p, const CMatrix& a) {
    return naive_product(naive_product(p, a), p);
}

/// Sum of the blocks p_i a p_j over all pairs, via naive products.
inline CMatrix naive_block_recomposition(const CMatrix& a,
                                         const std::vector<CMatrix>& projectors) {
    CMatrix sum = CMatrix::Zero(a.rows(), a.cols());
    for (const auto& p : projectors)
        for (const auto& q : projectors)
            sum += naive_product(naive_product(p, a), q);
    return sum;
}

/// Nullspace dimension of the stacked commutation maps x -> x g - g x,
/// assembled entry by entry and factored with Eigen's SVD. This follows a
/// different route than the library's Gram-operator solver.
inline std::vector<CMatrix> commutant_by_stacked_svd(const std::vector<CMatrix>& gens,
                                                     Index dim, double sv_tol = 1e-7) {
    const Index d2 = dim * dim;
    const Index rows = static_cast<Index>(gens.size()) * d2;
    CMatrix stack = CMatrix::Zero(std::max<Index>(rows, 1), d2);
    // Column r + dim*c of the unknown corresponds to x(r, c).
    for (std::size_t g = 0; g < gens.size(); ++g) {
        const CMatrix& gen = gens[g];
        for (Index r = 0; r < dim; ++r) {
            for (Index c = 0; c < dim; ++c) {
                const Index row = static_cast<Index>(g) * d2 + r + dim * c;
                // (x g)(r, c) = sum_k x(r, k) g(k, c)
                for (Index k = 0; k < dim; ++k) stack(row, r + dim * k) += gen(k, c);
                // (g x)(r, c) = sum_k g(r, k) x(k, c)
                for (Index k = 0; k < dim; ++k) stack(row, k + dim * c) -= gen(r, k);
            }
        }
    }
    Eigen::JacobiSVD<CMatrix> svd(stack, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = sv_tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
    std::vector<CMatrix> basis;
    for (Index k = 0; k < d2; ++k) {
        if (k < sv.size() && sv(k) > cutoff) continue;
        basis.push_back(Eigen::Map<const CMatrix>(svd.matrixV().col(k).data(), dim, dim));
    }
    return basis;
}

}  // namespace oracles
