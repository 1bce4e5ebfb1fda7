#include <catch2/catch_amalgamated.hpp>

#include "iod/projections.hpp"
#include "iod/serialization.hpp"
#include "oracles.hpp"

using namespace iod;

TEST_CASE("partition families are diagonal indicator blocks") {
    const auto f = ProjectionFamily::from_partition(2, {1, 1});
    REQUIRE(f.size() == 2);
    CHECK((f.projector(0) - matrix_unit(2, 0, 0)).norm() == 0.0);
    CHECK((f.projector(1) - matrix_unit(2, 1, 1)).norm() == 0.0);

    const auto whole = ProjectionFamily::from_partition(3, {3});
    REQUIRE(whole.size() == 1);
    CHECK((whole.projector(0) - CMatrix::Identity(3, 3)).norm() == 0.0);

    const auto halves = ProjectionFamily::from_partition(4, {2, 2});
    CHECK(halves.member(0).rank == 2);
    CHECK(halves.projector(0)(0, 0) == Complex(1, 0));
    CHECK(halves.projector(1)(3, 3) == Complex(1, 0));
    CHECK(halves.projector(0)(3, 3) == Complex(0, 0));
}

TEST_CASE("partition mismatch is rejected") {
    CHECK_THROWS_AS(ProjectionFamily::from_partition(4, {2, 3}), Precondition);
    CHECK_THROWS_AS(ProjectionFamily::from_partition(4, {5}), Precondition);
    CHECK_THROWS_AS(ProjectionFamily::from_partition(2, {0, 2}), Precondition);
}

TEST_CASE("random families satisfy the invariants tightly") {
    const auto f = ProjectionFamily::random(4, {2, 2}, 7);
    CHECK(validate_family(f, 1e-10).empty());

    const auto single = ProjectionFamily::random(3, {3}, 99);
    REQUIRE(single.size() == 1);
    CHECK((single.projector(0) - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("random families are deterministic in the seed") {
    const auto a = ProjectionFamily::random(5, {2, 3}, 42);
    const auto b = ProjectionFamily::random(5, {2, 3}, 42);
    CHECK(family_to_json(a).dump() == family_to_json(b).dump());

    const auto c = ProjectionFamily::random(5, {2, 3}, 43);
    CHECK(family_to_json(a).dump() != family_to_json(c).dump());
}

TEST_CASE("validate_family reports the violated constraints") {
    const CMatrix e11 = matrix_unit(2, 0, 0);

    SECTION("duplicate member breaks orthogonality and completeness") {
        ProjectionFamily f(2, {Projection::from_matrix(e11), Projection::from_matrix(e11)});
        const auto violations = validate_family(f);
        REQUIRE(violations.size() == 2);
        CHECK(violations[0].describe() == "orthogonality(0,1)");
        CHECK(violations[1].kind == "completeness");
    }

    SECTION("missing member leaves a completeness residual of one") {
        ProjectionFamily f(2, {Projection::from_matrix(e11)});
        const auto violations = validate_family(f);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].kind == "completeness");
        CHECK(violations[0].residual == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("valid partition family has no violations") {
        CHECK(validate_family(ProjectionFamily::from_partition(4, {1, 3})).empty());
    }
}

TEST_CASE("rank equals the count of near-one eigenvalues") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Index dim = rng.uniform_index(3, 8);
        std::vector<Index> sizes;
        Index left = dim;
        while (left > 0) {
            const Index s = rng.uniform_index(1, left);
            sizes.push_back(s);
            left -= s;
        }
        const auto f = ProjectionFamily::random(dim, sizes, rng.next_u64());
        Index total_rank = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const auto eigs = hermitian_eigenvalues(f.projector(i));
            Index near_one = 0;
            for (Index k = 0; k < eigs.size(); ++k)
                if (std::abs(eigs(k) - 1.0) < 1e-6) ++near_one;
            CHECK(near_one == f.member(i).rank);
            total_rank += f.member(i).rank;
        }
        CHECK(total_rank == dim);
    }
}

TEST_CASE("witnesses for the matrix-unit family are the off-diagonal units") {
    const auto f = ProjectionFamily::from_partition(2, {1, 1});
    const auto witnesses = equivalence_witnesses(f);
    REQUIRE(witnesses.size() == 2);

    const auto& w01 = witnesses[0];
    CHECK(w01.source == 0);
    CHECK(w01.target == 1);
    // E12 up to phase; the range-basis convention pins the phase to +1.
    CHECK((w01.isometry - matrix_unit(2, 0, 1)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((w01.isometry * w01.isometry.adjoint() - f.projector(0)).norm() < 1e-12);
}

TEST_CASE("unequal ranks are rejected with the rank list") {
    const auto f = ProjectionFamily::from_partition(3, {2, 1});
    try {
        equivalence_witnesses(f);
        FAIL("expected Precondition");
    } catch (const Precondition& e) {
        const std::string msg = e.what();
        CHECK(msg.find("not pairwise equivalent") != std::string::npos);
        CHECK(msg.find("2, 1") != std::string::npos);
    }
}

TEST_CASE("witnesses satisfy both isometry identities on random families") {
    Rng rng(31);
    for (int trial = 0; trial < 8; ++trial) {
        const auto f = ProjectionFamily::random(4, {2, 2}, rng.next_u64());
        const auto witnesses = equivalence_witnesses(f);
        REQUIRE(witnesses.size() == 2);
        for (const auto& w : witnesses) {
            const CMatrix left = w.isometry * w.isometry.adjoint();
            const CMatrix right = w.isometry.adjoint() * w.isometry;
            CHECK((left - f.projector(static_cast<std::size_t>(w.source))).norm() <= 1e-9);
            CHECK((right - f.projector(static_cast<std::size_t>(w.target))).norm() <= 1e-9);
        }
    }
}

TEST_CASE("the cocycle construction makes adjoints swap endpoints") {
    Rng rng(37);
    const auto f = ProjectionFamily::random(6, {2, 2, 2}, rng.next_u64());
    const auto witnesses = equivalence_witnesses(f);
    REQUIRE(witnesses.size() == 6);
    for (const auto& w : witnesses) {
        for (const auto& back : witnesses) {
            if (back.source != w.target || back.target != w.source) continue;
            CHECK((w.isometry.adjoint() - back.isometry).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}
