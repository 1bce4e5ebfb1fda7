#pragma once

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "iod/element.hpp"
#include "iod/lazy.hpp"
#include "iod/matrix.hpp"
#include "iod/rng.hpp"

namespace iod {

using SparseCMatrix = Eigen::SparseMatrix<Complex>;

/// Finitely supported coefficient family {lambda_ij e_ij} over matrix units,
/// with a claimed uniform corner-norm bound.
class WeightedUnitFamily {
public:
    using CoefficientMap = std::map<std::pair<Index, Index>, Complex>;

    WeightedUnitFamily(CoefficientMap coefficients, double claimed_bound)
        : coefficients_(std::move(coefficients)), claimed_bound_(claimed_bound) {
        for (const auto& [key, v] : coefficients_) {
            if (key.first < 0 || key.second < 0)
                throw Precondition("negative coefficient index");
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw Precondition("coefficient not finite");
        }
    }

    const CoefficientMap& coefficients() const { return coefficients_; }
    double claimed_bound() const { return claimed_bound_; }

    /// Smallest n such that the support lies in [0, n) x [0, n).
    Index support_extent() const {
        Index extent = 0;
        for (const auto& [key, v] : coefficients_)
            extent = std::max({extent, key.first + 1, key.second + 1});
        return extent;
    }

    /// Dense embedding of the coefficients into M_extent.
    CMatrix dense() const {
        const Index d = support_extent();
        CMatrix m = CMatrix::Zero(d, d);
        for (const auto& [key, v] : coefficients_) m(key.first, key.second) = v;
        return m;
    }

    /// The same data as a scalar-block lazy family.
    LazyBlockFamily as_lazy() const {
        LazyBlockFamily f;
        f.block_size = 1;
        f.claimed_bound = claimed_bound_;
        f.name = "weighted-units";
        f.generator = [coeffs = coefficients_](Index i, Index j) {
            CMatrix b(1, 1);
            auto it = coeffs.find({i, j});
            b(0, 0) = (it == coeffs.end()) ? Complex(0.0, 0.0) : it->second;
            return b;
        };
        return f;
    }

private:
    CoefficientMap coefficients_;
    double claimed_bound_;
};

struct L2BoundReport {
    std::size_t samples = 0;
    double max_ratio = 0.0;          // largest sampled l2 quotient
    double exact_norm = 0.0;         // operator norm of the coefficient matrix
    double materialized_norm = 0.0;  // corner norm of the realized element
    double claimed_bound = 0.0;
    bool within_claimed = true;      // max_ratio <= claimed + tol
    bool ordering_ok = true;         // max_ratio <= exact <= materialized, up to tol
};

/// Samples the quotient sqrt(sum_j |sum_i lambda_ij x_i|^2 / sum_i |x_i|^2)
/// on seeded random vectors and compares against the exact operator norm and
/// the corner norm of the materialized element. Every fifth draw is sharpened
/// by a few power iterations so the sampled supremum approaches the norm.
inline L2BoundReport l2_bound_check(const WeightedUnitFamily& w, std::size_t samples,
                                    std::uint64_t seed, double tol = kDefaultTol) {
    if (samples < 1) throw Precondition("samples must be >= 1");
    L2BoundReport report;
    report.samples = samples;
    report.claimed_bound = w.claimed_bound();

    const Index d = w.support_extent();
    if (d == 0) return report;  // empty support: every quotient is 0

    const CMatrix lambda = w.dense();
    const CMatrix action = lambda.transpose();          // x -> {sum_i lambda_ij x_i}_j
    const CMatrix iterate = lambda.conjugate() * action;  // Hermitian PSD
    report.exact_norm = spectral_norm(lambda);
    report.materialized_norm = iod_norm(materialize(w.as_lazy(), d).second);

    Rng rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        CVector x(d);
        for (Index k = 0; k < d; ++k) x(k) = rng.cgaussian();
        if (s % 5 == 4) {
            for (int step = 0; step < 6; ++step) {
                x = iterate * x;
                const double nrm = x.norm();
                if (nrm < 1e-300) break;
                x /= nrm;
            }
        }
        const double den = x.norm();
        if (den == 0.0) continue;
        report.max_ratio = std::max(report.max_ratio, (action * x).norm() / den);
    }

    report.within_claimed = report.max_ratio <= w.claimed_bound() + tol;
    report.ordering_ok = report.max_ratio <= report.exact_norm + tol &&
                         report.exact_norm <= report.materialized_norm +
                                                  tol * std::max(1.0, report.exact_norm);
    return report;
}

/// Finite model of C(X) (x) M_n for a discrete X with m points, realized in
/// M_{m n}. The ambient space is n x n blocks of size m: the block row/column
/// is the M_n coordinate and the within-block diagonal is the X coordinate.
///
/// basis holds the elements (indicator of x) (x) e_ij, ordered by
/// (x, i, j); abelian_projections holds e_i = identity_m at block (i, i).
struct CxMnModel {
    Index points = 0;       // m = |X|
    Index matrix_size = 0;  // n
    std::vector<CMatrix> basis;
    std::vector<CMatrix> abelian_projections;

    Index ambient_dim() const { return points * matrix_size; }
};

inline CxMnModel build_cx_mn(Index m, Index n) {
    if (m < 1 || n < 1) throw Precondition("model sizes must be >= 1");
    CxMnModel model;
    model.points = m;
    model.matrix_size = n;
    const Index dim = m * n;
    model.basis.reserve(static_cast<std::size_t>(m * n * n));
    for (Index x = 0; x < m; ++x)
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                model.basis.push_back(matrix_unit(dim, i * m + x, j * m + x));
    model.abelian_projections.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        CMatrix e = CMatrix::Zero(dim, dim);
        e.block(i * m, i * m, m, m) = CMatrix::Identity(m, m);
        model.abelian_projections.push_back(std::move(e));
    }
    return model;
}

struct TypeInReport {
    double closure_residual = 0.0;
    Index center_dim = 0;
    std::vector<bool> abelian_ok;
    bool decomposition_ok = false;

    bool passes(Index expected_center_dim, double closure_tol = kDefaultTol) const {
        if (closure_residual > closure_tol) return false;
        if (center_dim != expected_center_dim) return false;
        for (bool ok : abelian_ok)
            if (!ok) return false;
        return decomposition_ok;
    }
};

namespace detail {

inline SparseCMatrix to_sparse(const CMatrix& m, double drop = 1e-14) {
    SparseCMatrix s(m.rows(), m.cols());
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (Index c = 0; c < m.cols(); ++c)
        for (Index r = 0; r < m.rows(); ++r)
            if (std::abs(m(r, c)) > drop) triplets.emplace_back(r, c, m(r, c));
    s.setFromTriplets(triplets.begin(), triplets.end());
    s.makeCompressed();
    return s;
}

/// Inverted index position -> [(basis index, conj(value))] over the sparse
/// basis, used to take inner products against every basis element at once.
class SpanIndex {
public:
    explicit SpanIndex(const std::vector<SparseCMatrix>& basis) {
        for (std::size_t k = 0; k < basis.size(); ++k) {
            for (int outer = 0; outer < basis[k].outerSize(); ++outer) {
                for (SparseCMatrix::InnerIterator it(basis[k], outer); it; ++it) {
                    entries_[{it.row(), it.col()}].emplace_back(k, std::conj(it.value()));
                }
            }
        }
    }

    /// Coefficients <b_k, v> for all k with any support overlap.
    std::map<std::size_t, Complex> coefficients(const SparseCMatrix& v) const {
        std::map<std::size_t, Complex> coeffs;
        for (int outer = 0; outer < v.outerSize(); ++outer) {
            for (SparseCMatrix::InnerIterator it(v, outer); it; ++it) {
                auto hit = entries_.find({it.row(), it.col()});
                if (hit == entries_.end()) continue;
                for (const auto& [k, conj_value] : hit->second)
                    coeffs[k] += conj_value * it.value();
            }
        }
        return coeffs;
    }

    /// Distance from v to the span, assuming the basis is orthonormal:
    /// residual^2 = ||v||^2 - sum_k |<b_k, v>|^2.
    double span_residual(const SparseCMatrix& v) const {
        double norm2 = 0.0;
        for (int outer = 0; outer < v.outerSize(); ++outer)
            for (SparseCMatrix::InnerIterator it(v, outer); it; ++it)
                norm2 += std::norm(it.value());
        double captured = 0.0;
        for (const auto& [k, c] : coefficients(v)) captured += std::norm(c);
        return std::sqrt(std::max(0.0, norm2 - captured));
    }

private:
    std::map<std::pair<Index, Index>, std::vector<std::pair<std::size_t, Complex>>>
        entries_;
};

inline double sparse_frobenius(const SparseCMatrix& m) {
    double norm2 = 0.0;
    for (int outer = 0; outer < m.outerSize(); ++outer)
        for (SparseCMatrix::InnerIterator it(m, outer); it; ++it)
            norm2 += std::norm(it.value());
    return std::sqrt(norm2);
}

}  // namespace detail

/// Structural verification of a C(X) (x) M_n model:
///  (a) closure: every product of basis elements lies in the basis span;
///  (b) center: the commutant of the basis meets the span in exactly
///      `points` dimensions;
///  (c) abelian: each compressed algebra e_i (span) e_i is commutative;
///  (d) decomposition: the e_i form an exact orthogonal resolution of the
///      identity and the blocks e_i b e_j of every basis element stay in
///      the span and re-sum to b.
///
/// The span arithmetic assumes a Frobenius-orthonormal basis (which
/// build_cx_mn produces) and verifies that before relying on it.
inline TypeInReport verify_type_In(const CxMnModel& model, double tol = kDefaultTol) {
    TypeInReport report;
    const std::size_t nb = model.basis.size();

    std::vector<SparseCMatrix> sparse_basis;
    sparse_basis.reserve(nb);
    for (const auto& b : model.basis) sparse_basis.push_back(detail::to_sparse(b));
    const detail::SpanIndex span(sparse_basis);

    // Orthonormality underwrites the span residual formula; this also
    // certifies the Gram rank, i.e. linear independence of the basis.
    for (std::size_t k = 0; k < nb; ++k) {
        auto coeffs = span.coefficients(sparse_basis[k]);
        for (const auto& [l, c] : coeffs) {
            const double expected = (l == k) ? 1.0 : 0.0;
            if (std::abs(c - expected) > 1e-12)
                throw InvalidInput("model basis is not Frobenius-orthonormal");
        }
        if (!coeffs.count(k)) throw InvalidInput("model basis element vanishes");
    }

    // (a) closure of the span under products.
    for (std::size_t k = 0; k < nb; ++k) {
        for (std::size_t l = 0; l < nb; ++l) {
            const SparseCMatrix prod = sparse_basis[k] * sparse_basis[l];
            report.closure_residual =
                std::max(report.closure_residual, span.span_residual(prod));
        }
    }

    // (b) center = commutant of the generators intersected with the span.
    // The intersection dimension is the count of principal angles ~ 0
    // between the two subspaces: singular values of the coefficient matrix
    // of the (orthonormal) commutant basis against the span basis.
    const auto commutant = commutant_basis(model.basis, model.ambient_dim());
    if (!commutant.empty()) {
        CMatrix overlap(static_cast<Index>(nb), static_cast<Index>(commutant.size()));
        overlap.setZero();
        for (std::size_t c = 0; c < commutant.size(); ++c) {
            const SparseCMatrix sc = detail::to_sparse(commutant[c]);
            for (const auto& [k, coeff] : span.coefficients(sc))
                overlap(static_cast<Index>(k), static_cast<Index>(c)) = coeff;
        }
        Eigen::JacobiSVD<CMatrix> svd(overlap);
        for (Index k = 0; k < svd.singularValues().size(); ++k)
            if (svd.singularValues()(k) >= 1.0 - 1e-7) ++report.center_dim;
    }

    // (c) commutativity of each compressed algebra e_i (span) e_i.
    for (const auto& e : model.abelian_projections) {
        const SparseCMatrix se = detail::to_sparse(e);
        std::vector<SparseCMatrix> compressed;
        for (const auto& b : sparse_basis) {
            SparseCMatrix c = se * b * se;
            if (detail::sparse_frobenius(c) > 1e-12) compressed.push_back(std::move(c));
        }
        bool ok = true;
        for (std::size_t u = 0; u < compressed.size() && ok; ++u) {
            for (std::size_t v = u + 1; v < compressed.size() && ok; ++v) {
                const SparseCMatrix comm =
                    compressed[u] * compressed[v] - compressed[v] * compressed[u];
                if (detail::sparse_frobenius(comm) > tol) ok = false;
            }
        }
        report.abelian_ok.push_back(ok);
    }

    // (d) exact resolution of the identity and blockwise recovery.
    bool decomposition_ok = true;
    const Index dim = model.ambient_dim();
    CMatrix esum = CMatrix::Zero(dim, dim);
    for (const auto& e : model.abelian_projections) esum += e;
    if ((esum - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() != 0.0)
        decomposition_ok = false;
    for (std::size_t u = 0; u < model.abelian_projections.size(); ++u)
        for (std::size_t v = u + 1; v < model.abelian_projections.size(); ++v)
            if ((model.abelian_projections[u] * model.abelian_projections[v])
                    .cwiseAbs()
                    .maxCoeff() != 0.0)
                decomposition_ok = false;

    std::vector<SparseCMatrix> sparse_e;
    for (const auto& e : model.abelian_projections)
        sparse_e.push_back(detail::to_sparse(e));
    for (const auto& b : sparse_basis) {
        SparseCMatrix resum(dim, dim);
        for (const auto& ei : sparse_e) {
            for (const auto& ej : sparse_e) {
                const SparseCMatrix block = ei * b * ej;
                if (span.span_residual(block) > tol) decomposition_ok = false;
                resum += block;
            }
        }
        SparseCMatrix diff = resum - b;
        if (detail::sparse_frobenius(diff) > 1e-12) decomposition_ok = false;
    }
    report.decomposition_ok = decomposition_ok;
    return report;
}

}  // namespace iod
