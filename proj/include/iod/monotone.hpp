#pragma once

#include <string>
#include <utility>
#include <vector>

#include "iod/element.hpp"
#include "iod/matrix.hpp"

namespace iod {

/// Bounded nondecreasing sequence of blockwise-Hermitian elements over a
/// shared family. Nets over general directed sets are reduced to sequences;
/// finite-scale experiments are constructive.
class MonotoneNet {
public:
    MonotoneNet(std::vector<IodElement> terms, double bound)
        : terms_(std::move(terms)), bound_(bound) {
        if (terms_.empty()) throw Precondition("empty net");
        for (std::size_t k = 1; k < terms_.size(); ++k) {
            if (!same_family(terms_[0].family(), terms_[k].family()))
                throw Precondition("family mismatch");
        }
    }

    const std::vector<IodElement>& terms() const { return terms_; }
    double bound() const { return bound_; }
    const FamilyPtr& family() const { return terms_.front().family(); }

private:
    std::vector<IodElement> terms_;
    double bound_;
};

/// Report-only audit of the net invariants: blockwise Hermitian terms,
/// monotonicity, and domination by bound * unit.
inline std::vector<std::string> validate_net(const MonotoneNet& net,
                                             double tol = kDefaultTol) {
    std::vector<std::string> out;
    const auto& terms = net.terms();
    const IodElement cap = net.bound() * unit_element(net.family());
    for (std::size_t k = 0; k < terms.size(); ++k) {
        if (!is_hermitian_blockwise(terms[k], tol))
            out.push_back("term " + std::to_string(k) + " not blockwise Hermitian");
        if (k + 1 < terms.size() && !leq(terms[k], terms[k + 1], tol))
            out.push_back("terms " + std::to_string(k) + " -> " + std::to_string(k + 1) +
                          " not nondecreasing");
        if (!leq(terms[k], cap, tol))
            out.push_back("term " + std::to_string(k) + " exceeds bound * unit");
    }
    return out;
}

namespace detail {

/// Convergence of a matrix sequence: `needed` consecutive increments below
/// tol in spectral norm. Returns the index where detection fires, or -1.
class IncrementTracker {
public:
    IncrementTracker(double tol, int needed) : tol_(tol), needed_(needed) {}

    void push(double increment) {
        last_ = increment;
        streak_ = (increment < tol_) ? streak_ + 1 : 0;
    }

    bool converged() const { return streak_ >= needed_; }
    double last_increment() const { return last_; }

private:
    double tol_;
    int needed_;
    int streak_ = 0;
    double last_ = 0.0;
};

}  // namespace detail

/// Blockwise least upper bound of a convergent net:
/// diagonal blocks are limits of the singleton corners p_i a_k p_i and
/// off-diagonal blocks are p_i (lim of the pair corner
/// (p_i + p_j) a_k (p_i + p_j)) p_j.
///
/// Every compressed sequence must settle — `needed` consecutive increments
/// below tol, where needed is 3 (fewer only for nets shorter than four
/// terms, where three increments do not exist) — within the first max_iter
/// terms; otherwise the net is rejected with the last observed increment.
inline IodElement blockwise_sup(const MonotoneNet& net, double tol = 1e-8,
                                std::size_t max_iter = 1000) {
    const auto& terms = net.terms();
    const std::size_t n_terms = std::min(terms.size(), max_iter);
    const Index m = static_cast<Index>(net.family()->size());
    const int needed = static_cast<int>(std::min<std::size_t>(3, n_terms - 1));

    struct Sequence {
        CornerSelection sel;
        CMatrix last;
        detail::IncrementTracker tracker;
    };
    std::vector<Sequence> sequences;
    for (Index i = 0; i < m; ++i)
        sequences.push_back({CornerSelection{{i}}, corner(terms[0], CornerSelection{{i}}),
                             detail::IncrementTracker(tol, needed)});
    for (Index i = 0; i < m; ++i)
        for (Index j = i + 1; j < m; ++j)
            sequences.push_back({CornerSelection{{i, j}},
                                 corner(terms[0], CornerSelection{{i, j}}),
                                 detail::IncrementTracker(tol, needed)});

    auto all_converged = [&]() {
        for (const auto& s : sequences)
            if (!s.tracker.converged()) return false;
        return true;
    };

    std::size_t settled_at = 0;
    bool settled = (needed == 0);
    for (std::size_t k = 1; k < n_terms && !settled; ++k) {
        for (auto& s : sequences) {
            CMatrix current = corner(terms[k], s.sel);
            s.tracker.push(spectral_norm(current - s.last));
            s.last = std::move(current);
        }
        if (all_converged()) {
            settled = true;
            settled_at = k;
        }
    }
    if (!settled) {
        double last = 0.0;
        for (const auto& s : sequences) last = std::max(last, s.tracker.last_increment());
        throw NotConverged("net not converged; last increment " + std::to_string(last));
    }

    const IodElement& tail = terms[settled_at];
    const auto& family = *net.family();
    IodElement::BlockMap blocks;
    for (Index i = 0; i < m; ++i) {
        CMatrix diag = corner(tail, CornerSelection{{i}});
        blocks.emplace(IodElement::BlockKey{i, i}, std::move(diag));
        for (Index j = 0; j < m; ++j) {
            if (j == i) continue;
            const CMatrix pair =
                corner(tail, CornerSelection{{std::min(i, j), std::max(i, j)}});
            CMatrix off = family.projector(static_cast<std::size_t>(i)) * pair *
                          family.projector(static_cast<std::size_t>(j));
            blocks.emplace(IodElement::BlockKey{i, j}, std::move(off));
        }
    }
    blocks = detail::prune_blocks(std::move(blocks), net.bound());
    IodElement result(net.family(), std::move(blocks), net.bound());
    return IodElement(result.family(), result.blocks(), iod_norm(result));
}

/// True iff every term of the net lies below the candidate.
inline bool is_upper_bound(const IodElement& candidate, const MonotoneNet& net,
                           double tol = kDefaultTol) {
    if (!same_family(candidate.family(), net.family()))
        throw Precondition("family mismatch");
    for (const auto& term : net.terms())
        if (!leq(term, candidate, tol)) return false;
    return true;
}

}  // namespace iod
