#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "iod/element.hpp"
#include "iod/matrix.hpp"
#include "iod/projections.hpp"

namespace iod {

/// Countable block family given by a pure generator (i, j) -> b x b block,
/// with a claimed uniform bound on all truncated corner norms. All members
/// of the implied projection family share the block size, so the family
/// models pairwise-equivalent projections.
struct LazyBlockFamily {
    Index block_size = 1;
    std::function<CMatrix(Index, Index)> generator;
    double claimed_bound = 0.0;
    std::string name;
};

struct TruncationViolation {
    Index n = 0;       // first truncation size whose corner norm exceeds the bound
    double excess = 0.0;
};

/// Norms of the leading corners at increasing truncation sizes. A report
/// can refute a claimed bound, but certification only ever means
/// "certified up to n = sizes.back()": the genuine membership condition
/// quantifies over all finite corners.
struct TruncationReport {
    std::vector<Index> sizes;
    std::vector<double> norms;
    double claimed_bound = 0.0;
    bool certified = false;
    std::optional<TruncationViolation> violation;

    /// CSV with columns n, corner_norm, claimed_bound, certified.
    std::string to_csv() const {
        std::ostringstream out;
        out << "n,corner_norm,claimed_bound,certified\n";
        out.precision(17);
        for (std::size_t k = 0; k < sizes.size(); ++k) {
            const bool row_ok = norms[k] <= claimed_bound + kDefaultTol;
            out << sizes[k] << ',' << norms[k] << ',' << claimed_bound << ','
                << (row_ok ? "true" : "false") << '\n';
        }
        return out.str();
    }
};

/// Dense leading corner over indices {0..n-1}: an (n b) x (n b) matrix.
inline CMatrix dense_truncation(const LazyBlockFamily& f, Index n) {
    if (n < 1) throw Precondition("truncation size must be >= 1");
    const Index b = f.block_size;
    CMatrix corner = CMatrix::Zero(n * b, n * b);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const CMatrix block = f.generator(i, j);
            if (block.rows() != b || block.cols() != b)
                throw InvalidInput("generator block has wrong shape");
            if (!all_finite(block)) throw InvalidInput("generator block not finite");
            corner.block(i * b, j * b, b, b) = block;
        }
    }
    return corner;
}

inline double truncated_corner_norm(const LazyBlockFamily& f, Index n) {
    return spectral_norm(dense_truncation(f, n));
}

namespace detail {

/// Corner norms are nondecreasing in n (nested corners are compressions),
/// so the first bound violation can be located by bisection.
inline Index first_violation(const LazyBlockFamily& f, double limit, Index lo, Index hi) {
    while (lo + 1 < hi) {
        const Index mid = lo + (hi - lo) / 2;
        if (truncated_corner_norm(f, mid) > limit)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace detail

/// Checks the claimed bound on a doubling schedule 1, 2, 4, ... up to max_n.
/// On a violation the exact first offending truncation size is located and
/// reported together with its excess over the bound.
inline TruncationReport certify_bound(const LazyBlockFamily& f, Index max_n) {
    if (max_n < 1) throw Precondition("max_n must be >= 1");
    TruncationReport report;
    report.claimed_bound = f.claimed_bound;
    const double limit = f.claimed_bound + kDefaultTol;

    std::vector<Index> schedule;
    for (Index n = 1; n < max_n; n *= 2) schedule.push_back(n);
    schedule.push_back(max_n);

    Index last_ok = 0;
    for (Index n : schedule) {
        const double norm = truncated_corner_norm(f, n);
        if (norm > limit) {
            const Index first = detail::first_violation(f, limit, last_ok, n);
            if (first != n) {
                report.sizes.push_back(first);
                report.norms.push_back(truncated_corner_norm(f, first));
            }
            report.sizes.push_back(n);
            report.norms.push_back(norm);
            report.violation = TruncationViolation{
                first, truncated_corner_norm(f, first) - f.claimed_bound};
            report.certified = false;
            return report;
        }
        report.sizes.push_back(n);
        report.norms.push_back(norm);
        last_ok = n;
    }
    report.certified = true;
    return report;
}

/// Corner norms at exactly the scheduled truncation sizes.
inline TruncationReport truncated_norm_curve(const LazyBlockFamily& f,
                                             const std::vector<Index>& schedule) {
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        if (schedule[k] < 1 || (k > 0 && schedule[k] <= schedule[k - 1]))
            throw Precondition("schedule must be strictly increasing and positive");
    }
    TruncationReport report;
    report.claimed_bound = f.claimed_bound;
    report.certified = true;
    for (Index n : schedule) {
        const double norm = truncated_corner_norm(f, n);
        report.sizes.push_back(n);
        report.norms.push_back(norm);
        if (norm > f.claimed_bound + kDefaultTol && report.certified) {
            report.certified = false;
            report.violation = TruncationViolation{n, norm - f.claimed_bound};
        }
    }
    return report;
}

/// Dense realization at truncation n: the equal-block-size partition family
/// and the element whose (i, j) block embeds generator(i, j). The bound is
/// the computed corner norm, so the element invariant holds regardless of
/// the claimed bound.
inline std::pair<FamilyPtr, IodElement> materialize(const LazyBlockFamily& f, Index n) {
    if (n < 1) throw Precondition("truncation size must be >= 1");
    const Index b = f.block_size;
    auto family = std::make_shared<const ProjectionFamily>(
        ProjectionFamily::from_partition(n * b, std::vector<Index>(n, b)));
    const CMatrix dense = dense_truncation(f, n);
    IodElement::BlockMap blocks;
    const double scale = spectral_norm(dense);
    const double cutoff = kBlockDropTol * std::max(1.0, scale);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            CMatrix block = CMatrix::Zero(n * b, n * b);
            block.block(i * b, j * b, b, b) = dense.block(i * b, j * b, b, b);
            if (block.norm() >= cutoff)
                blocks.emplace(IodElement::BlockKey{i, j}, std::move(block));
        }
    }
    return {family, IodElement(family, std::move(blocks), scale)};
}

/// Named builtin families. The diagonal and shift variants accept an
/// arbitrary coefficient sequence.
inline LazyBlockFamily builtin_unit(Index i, Index j) {
    LazyBlockFamily f;
    f.block_size = 1;
    f.claimed_bound = 1.0;
    f.name = "unit(" + std::to_string(i) + "," + std::to_string(j) + ")";
    f.generator = [i, j](Index r, Index c) {
        CMatrix b(1, 1);
        b(0, 0) = (r == i && c == j) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
        return b;
    };
    return f;
}

inline LazyBlockFamily builtin_diagonal(std::function<Complex(Index)> lambda,
                                        double claimed_bound,
                                        std::string label = "diagonal") {
    LazyBlockFamily f;
    f.block_size = 1;
    f.claimed_bound = claimed_bound;
    f.name = std::move(label);
    f.generator = [lambda = std::move(lambda)](Index r, Index c) {
        CMatrix b(1, 1);
        b(0, 0) = (r == c) ? lambda(r) : Complex(0.0, 0.0);
        return b;
    };
    return f;
}

inline LazyBlockFamily builtin_band(Index width, Complex value, double claimed_bound) {
    LazyBlockFamily f;
    f.block_size = 1;
    f.claimed_bound = claimed_bound;
    f.name = "band(" + std::to_string(width) + ")";
    f.generator = [width, value](Index r, Index c) {
        CMatrix b(1, 1);
        b(0, 0) = (std::abs(r - c) <= width) ? value : Complex(0.0, 0.0);
        return b;
    };
    return f;
}

inline LazyBlockFamily builtin_shift(std::function<Complex(Index)> weight,
                                     double claimed_bound,
                                     std::string label = "shift") {
    LazyBlockFamily f;
    f.block_size = 1;
    f.claimed_bound = claimed_bound;
    f.name = std::move(label);
    f.generator = [weight = std::move(weight)](Index r, Index c) {
        CMatrix b(1, 1);
        b(0, 0) = (c == r + 1) ? weight(r) : Complex(0.0, 0.0);
        return b;
    };
    return f;
}

/// Parameters for the name-keyed builtin dispatcher. `sequence` selects the
/// coefficient law for diagonal and shift families:
///   "const"    lambda_k = value
///   "harmonic" lambda_k = value / (k + 1)
///   "linear"   lambda_k = value * (k + 1)
struct BuiltinParams {
    Index i = 0;
    Index j = 0;
    Index width = 1;
    Complex value = Complex(1.0, 0.0);
    std::string sequence = "const";
    double claimed_bound = 1.0;
};

inline LazyBlockFamily builtin_family(const std::string& name, const BuiltinParams& p) {
    auto sequence = [&]() -> std::function<Complex(Index)> {
        if (p.sequence == "const") return [v = p.value](Index) { return v; };
        if (p.sequence == "harmonic")
            return [v = p.value](Index k) { return v / static_cast<double>(k + 1); };
        if (p.sequence == "linear")
            return [v = p.value](Index k) { return v * static_cast<double>(k + 1); };
        throw InvalidInput("unknown sequence '" + p.sequence +
                           "'; valid: const, harmonic, linear");
    };
    if (name == "unit") return builtin_unit(p.i, p.j);
    if (name == "diagonal")
        return builtin_diagonal(sequence(), p.claimed_bound,
                                "diagonal(" + p.sequence + ")");
    if (name == "band") return builtin_band(p.width, p.value, p.claimed_bound);
    if (name == "shift")
        return builtin_shift(sequence(), p.claimed_bound, "shift(" + p.sequence + ")");
    throw InvalidInput("unknown family '" + name +
                       "'; valid: unit, diagonal, band, shift");
}

}  // namespace iod
