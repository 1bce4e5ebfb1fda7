#pragma once

#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "iod/matrix.hpp"
#include "iod/rng.hpp"

namespace iod {

/// A Hermitian idempotent together with its rank (rounded trace).
struct Projection {
    CMatrix matrix;
    Index rank = 0;

    /// Rank is read off the trace; no validity checks beyond shape.
    /// Use validate_family to audit the algebraic invariants.
    static Projection from_matrix(CMatrix m) {
        if (m.rows() != m.cols()) throw Precondition("projection not square");
        Projection p;
        p.rank   = static_cast<Index>(std::llround(m.trace().real()));
        p.matrix = std::move(m);
        return p;
    }
};

/// Ordered list of pairwise-orthogonal projections summing to the identity.
///
/// Indices are dense 0-based positions in the list. Construction is
/// permissive so that defective families can still be loaded and audited;
/// validate_family reports the violated invariants.
class ProjectionFamily {
public:
    ProjectionFamily(Index dim, std::vector<Projection> members)
        : dim_(dim), members_(std::move(members)) {
        for (const auto& p : members_) {
            if (p.matrix.rows() != dim_)
                throw Precondition("projection dimension mismatch");
        }
    }

    /// Diagonal 0/1 projections onto consecutive coordinate blocks.
    static ProjectionFamily from_partition(Index dim, const std::vector<Index>& sizes) {
        check_partition(dim, sizes);
        std::vector<Projection> members;
        members.reserve(sizes.size());
        Index offset = 0;
        for (Index s : sizes) {
            CMatrix p = CMatrix::Zero(dim, dim);
            p.block(offset, offset, s, s) = CMatrix::Identity(s, s);
            members.push_back({std::move(p), s});
            offset += s;
        }
        return ProjectionFamily(dim, std::move(members));
    }

    /// Partition family conjugated by a seeded random unitary.
    /// Deterministic for a fixed seed.
    static ProjectionFamily random(Index dim, const std::vector<Index>& sizes,
                                   std::uint64_t seed) {
        check_partition(dim, sizes);
        Rng rng(seed);
        const CMatrix u = random_unitary(dim, rng);
        std::vector<Projection> members;
        members.reserve(sizes.size());
        Index offset = 0;
        for (Index s : sizes) {
            CMatrix base = CMatrix::Zero(dim, dim);
            base.block(offset, offset, s, s) = CMatrix::Identity(s, s);
            CMatrix p = u * base * u.adjoint();
            p = (p + p.adjoint()) * 0.5;
            members.push_back({std::move(p), s});
            offset += s;
        }
        return ProjectionFamily(dim, std::move(members));
    }

    Index dim() const { return dim_; }
    std::size_t size() const { return members_.size(); }
    const Projection& member(std::size_t i) const { return members_.at(i); }
    const CMatrix& projector(std::size_t i) const { return members_.at(i).matrix; }
    const std::vector<Projection>& members() const { return members_; }

    CMatrix sum() const {
        CMatrix s = CMatrix::Zero(dim_, dim_);
        for (const auto& p : members_) s += p.matrix;
        return s;
    }

private:
    static void check_partition(Index dim, const std::vector<Index>& sizes) {
        Index total = 0;
        for (Index s : sizes) {
            if (s < 1) throw Precondition("partition mismatch: size < 1");
            total += s;
        }
        if (total != dim) throw Precondition("partition mismatch");
    }

    Index dim_;
    std::vector<Projection> members_;
};

using FamilyPtr = std::shared_ptr<const ProjectionFamily>;

/// Structural equality test used by the "same family" preconditions.
/// Shared ownership short-circuits; otherwise members are compared entrywise.
inline bool same_family(const FamilyPtr& a, const FamilyPtr& b, double tol = 1e-12) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->dim() != b->dim() || a->size() != b->size()) return false;
    for (std::size_t i = 0; i < a->size(); ++i) {
        if ((a->projector(i) - b->projector(i)).cwiseAbs().maxCoeff() > tol)
            return false;
    }
    return true;
}

struct FamilyViolation {
    std::string kind;  // idempotent | self_adjoint | rank | orthogonality | completeness
    Index i = -1;
    Index j = -1;
    double residual = 0.0;

    std::string describe() const {
        std::string s = kind;
        if (i >= 0) {
            s += "(" + std::to_string(i);
            if (j >= 0) s += "," + std::to_string(j);
            s += ")";
        }
        return s;
    }
};

/// Report-only audit of the family invariants; residuals are spectral norms.
inline std::vector<FamilyViolation> validate_family(const ProjectionFamily& f,
                                                    double tol = kDefaultTol) {
    std::vector<FamilyViolation> out;
    const Index n = static_cast<Index>(f.size());
    for (Index i = 0; i < n; ++i) {
        const CMatrix& p = f.projector(static_cast<std::size_t>(i));
        const double sa = spectral_norm(p - p.adjoint());
        if (sa > tol) out.push_back({"self_adjoint", i, -1, sa});
        const double idem = spectral_norm(p * p - p);
        if (idem > tol) out.push_back({"idempotent", i, -1, idem});
        const double tr = p.trace().real();
        const double rk = std::abs(tr - std::llround(tr));
        if (rk > tol) out.push_back({"rank", i, -1, rk});
    }
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const double ortho = spectral_norm(f.projector(static_cast<std::size_t>(i)) *
                                               f.projector(static_cast<std::size_t>(j)));
            if (ortho > tol) out.push_back({"orthogonality", i, j, ortho});
        }
    }
    const double comp =
        spectral_norm(f.sum() - CMatrix::Identity(f.dim(), f.dim()));
    if (comp > tol) out.push_back({"completeness", -1, -1, comp});
    return out;
}

/// Partial isometry x with x x* = member(source) and x* x = member(target).
struct EquivalenceWitness {
    Index source = 0;
    Index target = 0;
    CMatrix isometry;
};

namespace detail {

/// Orthonormal range basis of a projection: eigenvectors of the top `rank`
/// eigenvalues, descending, each column rephased so its leading nonzero
/// coordinate is positive real.
inline CMatrix range_basis(const Projection& p) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es((p.matrix + p.matrix.adjoint()) * 0.5);
    const Index d = p.matrix.rows();
    CMatrix basis(d, p.rank);
    for (Index k = 0; k < p.rank; ++k)
        basis.col(k) = es.eigenvectors().col(d - 1 - k);  // descending eigenvalue
    normalize_column_phases(basis);
    return basis;
}

}  // namespace detail

/// Witnesses for every ordered pair of distinct indices, built from a fixed
/// reference space: x_{st} = basis(s) * basis(t)*, so x_{st}* = x_{ts}.
/// Requires all members to share one rank.
inline std::vector<EquivalenceWitness> equivalence_witnesses(const ProjectionFamily& f) {
    const std::size_t n = f.size();
    if (n == 0) return {};
    const Index rank = f.member(0).rank;
    for (std::size_t i = 1; i < n; ++i) {
        if (f.member(i).rank != rank) {
            std::string ranks;
            for (std::size_t k = 0; k < n; ++k) {
                if (k) ranks += ", ";
                ranks += std::to_string(f.member(k).rank);
            }
            throw Precondition("not pairwise equivalent; ranks [" + ranks + "]");
        }
    }
    std::vector<CMatrix> bases;
    bases.reserve(n);
    for (std::size_t i = 0; i < n; ++i) bases.push_back(detail::range_basis(f.member(i)));

    std::vector<EquivalenceWitness> out;
    out.reserve(n * (n - 1));
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) {
            if (s == t) continue;
            out.push_back({static_cast<Index>(s), static_cast<Index>(t),
                           bases[s] * bases[t].adjoint()});
        }
    }
    return out;
}

}  // namespace iod
