#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "iod/element.hpp"
#include "iod/matrix.hpp"
#include "iod/models.hpp"
#include "iod/monotone.hpp"
#include "iod/projections.hpp"
#include "iod/rng.hpp"

namespace iod {

struct SuiteResult {
    std::string suite;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double worst_residual = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

/// Random composition of dim into 1..min(6, dim) positive parts.
inline std::vector<Index> random_sizes(Index dim, Rng& rng) {
    const Index parts = rng.uniform_index(1, std::min<Index>(6, dim));
    std::vector<Index> cuts;
    std::vector<Index> pool(static_cast<std::size_t>(dim - 1));
    std::iota(pool.begin(), pool.end(), Index{1});
    for (Index k = 0; k < parts - 1; ++k) {
        const Index pick = rng.uniform_index(k, static_cast<Index>(pool.size()) - 1);
        std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(pick)]);
        cuts.push_back(pool[static_cast<std::size_t>(k)]);
    }
    cuts.push_back(0);
    cuts.push_back(dim);
    std::sort(cuts.begin(), cuts.end());
    std::vector<Index> sizes;
    for (std::size_t k = 1; k < cuts.size(); ++k) sizes.push_back(cuts[k] - cuts[k - 1]);
    return sizes;
}

struct Instance {
    FamilyPtr family;
    CMatrix matrix;
};

inline Instance random_instance(Index dim, Rng& rng, bool hermitian = false) {
    const auto sizes = random_sizes(dim, rng);
    auto family = std::make_shared<const ProjectionFamily>(
        ProjectionFamily::random(dim, sizes, rng.next_u64()));
    CMatrix a = random_complex_gaussian(dim, dim, rng);
    if (hermitian) a = (a + a.adjoint()) * 0.5;
    return {std::move(family), std::move(a)};
}

inline Index trial_dim(Index requested, Rng& rng) {
    return requested > 0 ? requested : rng.uniform_index(4, 16);
}

/// Net of multiples of the identity converging geometrically to it.
inline std::pair<MonotoneNet, CMatrix> scalar_ramp_net(Index dim, Rng& rng) {
    const auto sizes = random_sizes(dim, rng);
    auto family = std::make_shared<const ProjectionFamily>(
        ProjectionFamily::random(dim, sizes, rng.next_u64()));
    std::vector<IodElement> terms;
    const IodElement u = unit_element(family);
    for (int k = 0; k <= 32; ++k)
        terms.push_back((1.0 - std::pow(0.5, k)) * u);
    for (int k = 0; k < 3; ++k) terms.push_back(terms.back());
    return {MonotoneNet(std::move(terms), 2.0), CMatrix::Identity(dim, dim)};
}

/// Partial sums of a diagonal resolution: k ones then zeros, over the
/// singleton family; settles exactly at the identity.
inline std::pair<MonotoneNet, CMatrix> partial_sum_net(Index dim) {
    auto family = std::make_shared<const ProjectionFamily>(
        ProjectionFamily::from_partition(dim, std::vector<Index>(dim, 1)));
    std::vector<IodElement> terms;
    for (Index k = 0; k <= dim; ++k) {
        CMatrix a = CMatrix::Zero(dim, dim);
        for (Index i = 0; i < k; ++i) a(i, i) = 1.0;
        terms.push_back(decompose(a, family));
    }
    for (int k = 0; k < 3; ++k) terms.push_back(terms.back());
    return {MonotoneNet(std::move(terms), 2.0), CMatrix::Identity(dim, dim)};
}

/// Random PSD increments with geometrically shrinking norms; the ambient
/// limit is within ~2^-32 of the final term.
inline std::pair<MonotoneNet, CMatrix> psd_increment_net(Index dim, Rng& rng) {
    const auto sizes = random_sizes(dim, rng);
    auto family = std::make_shared<const ProjectionFamily>(
        ProjectionFamily::random(dim, sizes, rng.next_u64()));
    CMatrix running = random_hermitian(dim, rng);
    std::vector<IodElement> terms;
    terms.push_back(decompose(running, family));
    for (int k = 1; k <= 32; ++k) {
        const CMatrix g = random_complex_gaussian(dim, dim, rng);
        CMatrix step = g * g.adjoint();
        step *= std::pow(0.5, k) / std::max(1e-12, spectral_norm(step));
        running += step;
        terms.push_back(decompose(running, family));
    }
    for (int k = 0; k < 3; ++k) terms.push_back(terms.back());
    const double bound = spectral_norm(running) + 1.0;
    return {MonotoneNet(std::move(terms), bound), running};
}

}  // namespace detail

inline std::vector<std::string> suite_names() {
    return {"lemma2", "prop3",  "prop4-lemma8", "lemma7",     "remark3",
            "prop9",  "prop12", "example-mn",   "theorem15"};
}

/// Runs one named property suite on seeded random instances. `dim` of 0
/// draws the dimension per trial from {4..16}. Deterministic for a fixed
/// seed: the result is byte-identical across runs.
inline SuiteResult run_suite(const std::string& name, std::size_t trials,
                             std::uint64_t seed, Index dim = 0) {
    const auto names = suite_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::string valid;
        for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
        throw InvalidInput("unknown suite '" + name + "'; valid: " + valid);
    }

    SuiteResult result;
    result.suite = name;
    result.trials = trials;
    result.seed = seed;
    const Rng root(seed);

    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = root.fork(t);
        double residual = 0.0;
        bool ok = true;

        if (name == "prop9") {
            const auto inst = detail::random_instance(detail::trial_dim(dim, rng), rng);
            const IodElement x = decompose(inst.matrix, inst.family);
            residual = spectral_norm(reconstruct(x) - inst.matrix);
            ok = residual <= 1e-11;
        } else if (name == "lemma2") {
            const Index d = detail::trial_dim(dim, rng);
            const auto inst = detail::random_instance(d, rng);
            const IodElement x = decompose(inst.matrix, inst.family);
            const CMatrix b = random_complex_gaussian(d, d, rng);
            const IodElement y = decompose(b, inst.family);
            const double nx = iod_norm(x);
            const double coincidence = std::abs(nx - spectral_norm(inst.matrix)) /
                                       std::max(1.0, spectral_norm(inst.matrix));
            const double triangle =
                std::max(0.0, iod_norm(x + y) - nx - iod_norm(y)) / std::max(1.0, nx);
            const Complex lam = rng.cgaussian();
            const double homog = std::abs(iod_norm(lam * x) - std::abs(lam) * nx) /
                                 std::max(1.0, std::abs(lam) * nx);
            residual = std::max({coincidence, triangle, homog});
            ok = residual <= 1e-9;
        } else if (name == "prop3") {
            const auto inst =
                detail::random_instance(detail::trial_dim(dim, rng), rng, true);
            const IodElement x = decompose(inst.matrix, inst.family);
            const double nx = iod_norm(x);
            const IodElement u = unit_element(inst.family);
            ok = leq(x, nx * u) && leq((-nx) * u, x);
            const IodElement nudged = x + 1e-10 * u;
            if (leq(x, nudged) && leq(nudged, x)) {
                residual = spectral_norm(reconstruct(nudged) - reconstruct(x));
                ok = ok && residual <= 1e-8;
            } else {
                ok = false;
            }
        } else if (name == "prop4-lemma8") {
            const Index d = detail::trial_dim(dim, rng);
            const auto inst = detail::random_instance(d, rng);
            const CMatrix b = random_complex_gaussian(d, d, rng);
            const IodElement x = decompose(inst.matrix, inst.family);
            const IodElement y = decompose(b, inst.family);
            const CMatrix ab = inst.matrix * b;
            residual = spectral_norm(reconstruct(star_product(x, y)) - ab) /
                       std::max(1.0, spectral_norm(ab));
            ok = residual <= 1e-9;
            if (t % 2 == 0) {
                const CMatrix c = random_complex_gaussian(d, d, rng);
                const IodElement z = decompose(c, inst.family);
                const CMatrix lhs = reconstruct(star_product(star_product(x, y), z));
                const CMatrix rhs = reconstruct(star_product(x, star_product(y, z)));
                const double assoc =
                    spectral_norm(lhs - rhs) / std::max(1.0, spectral_norm(lhs));
                residual = std::max(residual, assoc);
                ok = ok && assoc <= 1e-8;
            }
        } else if (name == "lemma7") {
            const Index d = detail::trial_dim(dim, rng);
            const bool make_hermitian = (t % 2 == 0);
            const auto inst = detail::random_instance(d, rng, make_hermitian);
            const IodElement x = decompose(inst.matrix, inst.family);
            const auto [h1, h2] = hermitian_split(x);
            ok = is_hermitian_blockwise(h1) && is_hermitian_blockwise(h2);
            const IodElement recombined = h1 + Complex(0.0, 1.0) * h2;
            residual = spectral_norm(reconstruct(recombined) - reconstruct(x));
            ok = ok && residual <= 1e-12 * std::max(1.0, spectral_norm(inst.matrix));
            ok = ok && (is_hermitian_blockwise(x) == is_hermitian(inst.matrix));
        } else if (name == "remark3") {
            const Index d = detail::trial_dim(dim, rng);
            const auto inst = detail::random_instance(d, rng);
            const CMatrix b = random_complex_gaussian(d, d, rng);
            const IodElement x = decompose(inst.matrix, inst.family);
            const IodElement y = decompose(b, inst.family);
            residual = spectral_norm(reconstruct(involution(x)) - inst.matrix.adjoint());
            ok = residual <= 1e-12 * std::max(1.0, spectral_norm(inst.matrix));
            const CMatrix lhs = reconstruct(involution(star_product(x, y)));
            const CMatrix rhs = reconstruct(star_product(involution(y), involution(x)));
            const double anti =
                spectral_norm(lhs - rhs) / std::max(1.0, spectral_norm(lhs));
            residual = std::max(residual, anti);
            ok = ok && anti <= 1e-9;
        } else if (name == "prop12") {
            const Index d = detail::trial_dim(dim, rng);
            auto [net, limit] = (t % 3 == 0)   ? detail::scalar_ramp_net(d, rng)
                                : (t % 3 == 1) ? detail::partial_sum_net(d)
                                               : detail::psd_increment_net(d, rng);
            const IodElement sup = blockwise_sup(net, 1e-8, 1000);
            residual = spectral_norm(reconstruct(sup) - limit);
            ok = residual <= 1e-7 && is_upper_bound(sup, net, 1e-7) &&
                 is_hermitian_blockwise(sup, 1e-8);
        } else if (name == "example-mn") {
            const Index extent = rng.uniform_index(2, 6);
            WeightedUnitFamily::CoefficientMap coeffs;
            for (Index i = 0; i < extent; ++i)
                for (Index j = 0; j < extent; ++j)
                    if (rng.uniform() < 0.6) coeffs[{i, j}] = rng.cgaussian();
            const CMatrix dense = [&] {
                CMatrix m = CMatrix::Zero(extent, extent);
                for (const auto& [k, v] : coeffs) m(k.first, k.second) = v;
                return m;
            }();
            const double exact = spectral_norm(dense);
            const WeightedUnitFamily w(std::move(coeffs), exact);
            const auto report = l2_bound_check(w, 1000, rng.next_u64());
            residual = std::max(
                std::max(0.0, report.max_ratio - report.exact_norm),
                std::abs(report.exact_norm - report.materialized_norm) /
                    std::max(1.0, report.exact_norm));
            ok = report.within_claimed && report.ordering_ok && residual <= 1e-9;
            if (report.exact_norm > 1e-9)
                ok = ok && report.max_ratio >= 0.95 * report.exact_norm;
        } else {  // theorem15
            static constexpr std::pair<Index, Index> kSizes[] = {
                {1, 2}, {2, 1}, {2, 2}, {1, 3}, {3, 1}, {2, 3}, {3, 2}, {1, 4}, {4, 2}};
            const auto [m, n] = kSizes[t % std::size(kSizes)];
            const auto report = verify_type_In(build_cx_mn(m, n));
            residual = report.closure_residual;
            ok = report.passes(m);
        }

        if (!ok) ++result.failures;
        result.worst_residual = std::max(result.worst_residual, residual);
    }
    return result;
}

}  // namespace iod
