#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "iod/matrix.hpp"
#include "iod/projections.hpp"

namespace iod {

/// Finite ordered set of family indices selecting a corner.
struct CornerSelection {
    std::vector<Index> indices;

    static CornerSelection all(const ProjectionFamily& f) {
        CornerSelection s;
        s.indices.resize(f.size());
        std::iota(s.indices.begin(), s.indices.end(), Index{0});
        return s;
    }

    void validate(std::size_t family_size) const {
        std::vector<bool> seen(family_size, false);
        for (Index k : indices) {
            if (k < 0 || static_cast<std::size_t>(k) >= family_size)
                throw Precondition("corner index out of range");
            if (seen[static_cast<std::size_t>(k)])
                throw Precondition("corner index repeated");
            seen[static_cast<std::size_t>(k)] = true;
        }
    }
};

/// Block family {a_{ij}} of corner-supported matrices together with a
/// uniform bound on all finite corner norms.
///
/// Blocks are stored at full ambient dimension, keyed by (row index,
/// column index) into the family; absent keys are zero blocks. Immutable
/// after construction.
class IodElement {
public:
    using BlockKey = std::pair<Index, Index>;
    using BlockMap = std::map<BlockKey, CMatrix>;

    IodElement(FamilyPtr family, BlockMap blocks, double bound)
        : family_(std::move(family)), blocks_(std::move(blocks)), bound_(bound) {
        if (!family_) throw Precondition("null family");
        const Index d = family_->dim();
        for (const auto& [key, b] : blocks_) {
            if (key.first < 0 || static_cast<std::size_t>(key.first) >= family_->size() ||
                key.second < 0 || static_cast<std::size_t>(key.second) >= family_->size())
                throw Precondition("block index out of range");
            if (b.rows() != d || b.cols() != d)
                throw Precondition("block dimension mismatch");
        }
    }

    static IodElement zero(FamilyPtr family) {
        return IodElement(std::move(family), {}, 0.0);
    }

    const FamilyPtr& family() const { return family_; }
    const BlockMap& blocks() const { return blocks_; }
    double bound() const { return bound_; }

    /// The stored block, or an ambient zero matrix if absent.
    CMatrix block(Index i, Index j) const {
        auto it = blocks_.find({i, j});
        if (it != blocks_.end()) return it->second;
        return CMatrix::Zero(family_->dim(), family_->dim());
    }

    bool has_block(Index i, Index j) const { return blocks_.count({i, j}) > 0; }

private:
    FamilyPtr family_;
    BlockMap blocks_;
    double bound_;
};

namespace detail {

inline void require_same_family(const IodElement& x, const IodElement& y) {
    if (!same_family(x.family(), y.family())) throw Precondition("family mismatch");
}

/// Drops blocks with Frobenius norm below kBlockDropTol * max(1, scale).
inline IodElement::BlockMap prune_blocks(IodElement::BlockMap blocks, double scale) {
    const double cutoff = kBlockDropTol * std::max(1.0, scale);
    for (auto it = blocks.begin(); it != blocks.end();) {
        if (it->second.norm() < cutoff)
            it = blocks.erase(it);
        else
            ++it;
    }
    return blocks;
}

}  // namespace detail

/// Blockwise linear structure: {a_ij} + {b_ij}, lambda * {a_ij}.
/// Bounds combine by triangle inequality and homogeneity.
inline IodElement operator+(const IodElement& x, const IodElement& y) {
    detail::require_same_family(x, y);
    IodElement::BlockMap blocks = x.blocks();
    for (const auto& [key, b] : y.blocks()) {
        auto it = blocks.find(key);
        if (it == blocks.end())
            blocks.emplace(key, b);
        else
            it->second += b;
    }
    const double bound = x.bound() + y.bound();
    return IodElement(x.family(), detail::prune_blocks(std::move(blocks), bound), bound);
}

inline IodElement operator*(Complex lambda, const IodElement& x) {
    IodElement::BlockMap blocks = x.blocks();
    for (auto& [key, b] : blocks) b *= lambda;
    const double bound = std::abs(lambda) * x.bound();
    return IodElement(x.family(), detail::prune_blocks(std::move(blocks), bound), bound);
}

inline IodElement operator*(double lambda, const IodElement& x) {
    return Complex(lambda, 0.0) * x;
}

inline IodElement operator-(const IodElement& x, const IodElement& y) {
    return x + (-1.0 * y);
}

/// Blockwise decomposition {p_i a p_j} of a matrix over a family.
/// Near-zero blocks are omitted; the bound is the ambient operator norm.
inline IodElement decompose(const CMatrix& a, FamilyPtr family) {
    if (!family) throw Precondition("null family");
    if (a.rows() != a.cols() || a.rows() != family->dim())
        throw Precondition("dimension mismatch");
    const double norm = spectral_norm(a);
    IodElement::BlockMap blocks;
    const Index n = static_cast<Index>(family->size());
    for (Index i = 0; i < n; ++i) {
        const CMatrix left = family->projector(static_cast<std::size_t>(i)) * a;
        for (Index j = 0; j < n; ++j) {
            CMatrix b = left * family->projector(static_cast<std::size_t>(j));
            blocks.emplace(IodElement::BlockKey{i, j}, std::move(b));
        }
    }
    return IodElement(std::move(family), detail::prune_blocks(std::move(blocks), norm),
                      norm);
}

/// The identity's decomposition: diagonal blocks p_i, bound 1.
inline IodElement unit_element(FamilyPtr family) {
    if (!family) throw Precondition("null family");
    IodElement::BlockMap blocks;
    for (std::size_t i = 0; i < family->size(); ++i) {
        const Index k = static_cast<Index>(i);
        blocks.emplace(IodElement::BlockKey{k, k}, family->projector(i));
    }
    return IodElement(std::move(family), std::move(blocks), 1.0);
}

/// Sum of all stored blocks; the exact inverse of decompose at finite scale.
inline CMatrix reconstruct(const IodElement& x) {
    CMatrix sum = CMatrix::Zero(x.family()->dim(), x.family()->dim());
    for (const auto& [key, b] : x.blocks()) sum += b;
    return sum;
}

/// Sum of blocks with both indices in the selection.
inline CMatrix corner(const IodElement& x, const CornerSelection& s) {
    s.validate(x.family()->size());
    std::vector<bool> in(x.family()->size(), false);
    for (Index k : s.indices) in[static_cast<std::size_t>(k)] = true;
    CMatrix sum = CMatrix::Zero(x.family()->dim(), x.family()->dim());
    for (const auto& [key, b] : x.blocks()) {
        if (in[static_cast<std::size_t>(key.first)] &&
            in[static_cast<std::size_t>(key.second)])
            sum += b;
    }
    return sum;
}

/// sup over finite corners of the corner norm. The full corner attains the
/// sup at finite scale, so that is what is computed; corner_sweep provides
/// the exhaustive cross-check.
inline double iod_norm(const IodElement& x) {
    return spectral_norm(corner(x, CornerSelection::all(*x.family())));
}

struct CornerSweepViolation {
    std::vector<Index> subset;
    double norm = 0.0;
    double excess = 0.0;
};

struct CornerSweepReport {
    double full_norm = 0.0;
    double sup_norm = 0.0;  // max over swept corners and the full corner
    std::vector<CornerSweepViolation> violations;
    bool monotone_ok() const { return violations.empty(); }
};

namespace detail {

template <typename Visit>
inline void for_each_subset(Index n, Index max_size, Visit&& visit) {
    std::vector<Index> subset;
    auto rec = [&](auto&& self, Index next) -> void {
        if (!subset.empty()) visit(subset);
        if (static_cast<Index>(subset.size()) == max_size) return;
        for (Index k = next; k < n; ++k) {
            subset.push_back(k);
            self(self, k + 1);
            subset.pop_back();
        }
    };
    rec(rec, 0);
}

}  // namespace detail

/// Verification mode of the norm: sweeps every corner of size <= max_size
/// and records any corner whose norm exceeds the full corner's by more
/// than tol * max(1, full).
inline CornerSweepReport corner_sweep(const IodElement& x, Index max_size = 3,
                                      double tol = kDefaultTol) {
    CornerSweepReport report;
    report.full_norm = iod_norm(x);
    report.sup_norm  = report.full_norm;
    const double slack = tol * std::max(1.0, report.full_norm);
    detail::for_each_subset(
        static_cast<Index>(x.family()->size()), max_size,
        [&](const std::vector<Index>& subset) {
            const double nrm = spectral_norm(corner(x, CornerSelection{subset}));
            report.sup_norm = std::max(report.sup_norm, nrm);
            if (nrm > report.full_norm + slack)
                report.violations.push_back({subset, nrm, nrm - report.full_norm});
        });
    return report;
}

/// Corner-positivity order: x <= y iff every finite corner of y - x is PSD.
/// Checks the full corner plus all singleton and pair corners; the latter
/// are implied by the former at finite scale and act as self-consistency
/// sweeps.
inline bool leq(const IodElement& x, const IodElement& y, double tol = kDefaultTol) {
    detail::require_same_family(x, y);
    const IodElement diff = y - x;
    if (!is_psd(corner(diff, CornerSelection::all(*diff.family())), tol)) return false;
    const Index n = static_cast<Index>(diff.family()->size());
    for (Index i = 0; i < n; ++i) {
        if (!is_psd(corner(diff, CornerSelection{{i}}), tol)) return false;
        for (Index j = i + 1; j < n; ++j) {
            if (!is_psd(corner(diff, CornerSelection{{i, j}}), tol)) return false;
        }
    }
    return true;
}

/// Involution {a_ij}* = {a_ji*}; corner norms are preserved, so the bound
/// carries over.
inline IodElement involution(const IodElement& x) {
    IodElement::BlockMap blocks;
    for (const auto& [key, b] : x.blocks())
        blocks.emplace(IodElement::BlockKey{key.second, key.first}, b.adjoint());
    return IodElement(x.family(), std::move(blocks), x.bound());
}

/// Blockwise self-adjointness: a_ij* = a_ji for all pairs, within
/// tol * max(1, bound) entrywise.
inline bool is_hermitian_blockwise(const IodElement& x, double tol = kDefaultTol) {
    const double scale = std::max(1.0, x.bound());
    auto checked = [&](Index i, Index j) {
        const CMatrix lhs = x.block(i, j).adjoint();
        const CMatrix rhs = x.block(j, i);
        return (lhs - rhs).cwiseAbs().maxCoeff() <= tol * scale;
    };
    for (const auto& [key, b] : x.blocks()) {
        if (key.first <= key.second && !checked(key.first, key.second)) return false;
        if (key.first > key.second && !checked(key.second, key.first)) return false;
    }
    return true;
}

/// Hermitian splitting x = h1 + i h2 with both parts blockwise self-adjoint:
/// h1 = (x + x*)/2 and h2 = (x - x*)/(2i) blockwise.
inline std::pair<IodElement, IodElement> hermitian_split(const IodElement& x) {
    const IodElement star = involution(x);
    IodElement h1 = 0.5 * (x + star);
    IodElement h2 = Complex(0.0, -0.5) * (x - star);
    return {std::move(h1), std::move(h2)};
}

/// Block-sum product {a_ij} * {b_ij} = {sum_k a_ik b_kj}, summing over all
/// family indices in index order. The bound is the norm of the result.
inline IodElement star_product(const IodElement& x, const IodElement& y) {
    detail::require_same_family(x, y);
    const Index n = static_cast<Index>(x.family()->size());
    const Index d = x.family()->dim();
    IodElement::BlockMap blocks;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            CMatrix sum = CMatrix::Zero(d, d);
            bool any = false;
            for (Index k = 0; k < n; ++k) {
                if (!x.has_block(i, k) || !y.has_block(k, j)) continue;
                sum += x.block(i, k) * y.block(k, j);
                any = true;
            }
            if (any) blocks.emplace(IodElement::BlockKey{i, j}, std::move(sum));
        }
    }
    blocks = detail::prune_blocks(std::move(blocks), x.bound() * y.bound());
    IodElement result(x.family(), std::move(blocks), x.bound() * y.bound());
    const double norm = iod_norm(result);
    return IodElement(result.family(), result.blocks(), norm);
}

/// Cheap structural audit: corner support of every block and domination of
/// the full corner by the stored bound. Returns violation descriptions.
inline std::vector<std::string> validate_element(const IodElement& x,
                                                 double tol = kDefaultTol) {
    std::vector<std::string> out;
    const auto& f = *x.family();
    for (const auto& [key, b] : x.blocks()) {
        const CMatrix supported = f.projector(static_cast<std::size_t>(key.first)) * b *
                                  f.projector(static_cast<std::size_t>(key.second));
        const double residual = (supported - b).cwiseAbs().maxCoeff();
        if (residual > tol * std::max(1.0, b.norm())) {
            out.push_back("block (" + std::to_string(key.first) + "," +
                          std::to_string(key.second) + ") not corner-supported, residual " +
                          std::to_string(residual));
        }
    }
    const double full = iod_norm(x);
    if (full > x.bound() + tol * std::max(1.0, x.bound()))
        out.push_back("bound " + std::to_string(x.bound()) +
                      " exceeded by full corner norm " + std::to_string(full));
    return out;
}

}  // namespace iod
