#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace iod {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index   = Eigen::Index;

/// Default relative tolerance used by the numeric predicates.
inline constexpr double kDefaultTol = 1e-9;

/// Threshold below which decomposition blocks are treated as zero,
/// scaled by max(1, norm of the decomposed element).
inline constexpr double kBlockDropTol = 1e-12;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input: unparseable data, unknown identifiers, bad field values.
struct InvalidInput : Error {
    using Error::Error;
};

/// Violated operation precondition: shape or family mismatches, bad partitions.
struct Precondition : Error {
    using Error::Error;
};

/// A limit was requested but the sequence did not settle.
struct NotConverged : Error {
    using Error::Error;
};

inline bool all_finite(const CMatrix& a) {
    return a.allFinite();
}

inline double frobenius_norm(const CMatrix& a) {
    return a.norm();
}

/// Largest singular value. Empty matrices have norm 0.
///
/// Computed as sqrt(lambda_max(a* a)); for the top singular value this is
/// accurate to machine precision and much faster than a full SVD at the
/// truncation sizes this library sweeps.
inline double spectral_norm(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    CMatrix gram = a.adjoint() * a;
    gram = (gram + gram.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    return std::sqrt(std::max(0.0, top));
}

/// Entrywise Hermitian test at relative tolerance tol * max(1, ||a||).
inline bool is_hermitian(const CMatrix& a, double tol = kDefaultTol) {
    if (a.rows() != a.cols()) return false;
    if (a.size() == 0) return true;
    const double scale = std::max(1.0, spectral_norm(a));
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

/// Eigenvalues of the Hermitian part (a + a*)/2, ascending.
inline Eigen::VectorXd hermitian_eigenvalues(const CMatrix& a) {
    if (a.rows() != a.cols()) throw Precondition("not square");
    if (a.size() == 0) return Eigen::VectorXd();
    CMatrix h = (a + a.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

/// Positive-semidefinite test: Hermitian within tol * max(1, ||a||)
/// entrywise and min eigenvalue of the Hermitian part >= -tol * max(1, ||a||).
inline bool is_psd(const CMatrix& a, double tol = kDefaultTol) {
    if (a.rows() != a.cols()) throw Precondition("not square");
    if (a.size() == 0) return true;
    const double scale = std::max(1.0, spectral_norm(a));
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > tol * scale) return false;
    return hermitian_eigenvalues(a).minCoeff() >= -tol * scale;
}

/// The matrix unit E_ij of M_dim.
inline CMatrix matrix_unit(Index dim, Index i, Index j) {
    CMatrix e = CMatrix::Zero(dim, dim);
    e(i, j) = Complex(1.0, 0.0);
    return e;
}

namespace detail {

/// Rotates the leading nonzero entry of each column to the positive real axis.
inline void normalize_column_phases(CMatrix& m, double threshold = 1e-8) {
    for (Index c = 0; c < m.cols(); ++c) {
        for (Index r = 0; r < m.rows(); ++r) {
            const Complex v = m(r, c);
            if (std::abs(v) > threshold) {
                m.col(c) *= std::conj(v) / std::abs(v);
                break;
            }
        }
    }
}

/// Rotates the whole matrix by one phase so its leading nonzero entry
/// (column-major scan) is positive real.
inline void normalize_global_phase(CMatrix& m, double threshold = 1e-8) {
    for (Index c = 0; c < m.cols(); ++c) {
        for (Index r = 0; r < m.rows(); ++r) {
            const Complex v = m(r, c);
            if (std::abs(v) > threshold) {
                m *= std::conj(v) / std::abs(v);
                return;
            }
        }
    }
}

inline CMatrix unvec(const CVector& v, Index dim) {
    // Column-major reshape, matching Eigen's native layout.
    return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

}  // namespace detail

/// Frobenius-orthonormal basis of {x : x g = g x for every generator g}.
///
/// The nullspace of the stacked maps x -> x g - g x is recovered from the
/// d^2 x d^2 Gram operator sum_g L_g* L_g, assembled blockwise from the
/// Kronecker expansion
///     L_g* L_g = (conj(g) g^T) ox I - conj(g) ox g - g^T ox g* + I ox (g* g),
/// so no d^2 x d^2 products are ever formed. Stack singular values below
/// sv_tol * max(1, sigma_max) count as zero.
///
/// An empty generator list yields the matrix-unit basis of the full space.
inline std::vector<CMatrix> commutant_basis(const std::vector<CMatrix>& generators,
                                            Index dim,
                                            double sv_tol = 1e-7) {
    for (const auto& g : generators) {
        if (g.rows() != dim || g.cols() != dim)
            throw Precondition("commutant generator dimension mismatch");
    }
    if (generators.empty()) {
        std::vector<CMatrix> basis;
        basis.reserve(static_cast<std::size_t>(dim * dim));
        for (Index i = 0; i < dim; ++i)
            for (Index j = 0; j < dim; ++j) basis.push_back(matrix_unit(dim, i, j));
        return basis;
    }

    const Index d2 = dim * dim;
    CMatrix gram = CMatrix::Zero(d2, d2);
    for (const auto& g : generators) {
        const CMatrix gc  = g.conjugate();
        const CMatrix ga  = g.adjoint();
        const CMatrix lhs = gc * g.transpose();  // conj(g) g^T
        const CMatrix rhs = ga * g;              // g* g
        // vec index r + dim*c; block (c, c') of the Gram is dim x dim.
        for (Index c = 0; c < dim; ++c) {
            for (Index cp = 0; cp < dim; ++cp) {
                auto block = gram.block(dim * c, dim * cp, dim, dim);
                block -= gc(c, cp) * g + g(cp, c) * ga;
                block.diagonal().array() += lhs(c, cp);
                if (c == cp) block += rhs;
            }
        }
    }
    gram = (gram + gram.adjoint()) * 0.5;

    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
    const Eigen::VectorXd evals = es.eigenvalues();
    const double sigma_max  = std::sqrt(std::max(0.0, evals.maxCoeff()));
    const double sigma_zero = sv_tol * std::max(1.0, sigma_max);
    const double eval_zero  = sigma_zero * sigma_zero;

    std::vector<CMatrix> basis;
    for (Index k = 0; k < d2; ++k) {
        if (evals(k) > eval_zero) continue;
        CMatrix m = detail::unvec(es.eigenvectors().col(k), dim);
        detail::normalize_global_phase(m);
        basis.push_back(std::move(m));
    }
    return basis;
}

}  // namespace iod
