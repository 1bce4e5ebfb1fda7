#include <catch2/catch_amalgamated.hpp>

#include "iod/matrix.hpp"
#include "iod/rng.hpp"
#include "oracles.hpp"

using namespace iod;

TEST_CASE("spectral norm on pinned cases") {
    CHECK(spectral_norm(CMatrix::Identity(3, 3)) == Catch::Approx(1.0).margin(1e-12));
    CHECK(spectral_norm(CMatrix::Zero(4, 4)) == 0.0);
    CHECK(spectral_norm(CMatrix(0, 0)) == 0.0);

    CMatrix a(2, 2);
    a << Complex(0, 0), Complex(2, 0), Complex(0, 0), Complex(0, 0);
    const double expected = oracles::svd2x2_max_singular(a(0, 0), a(0, 1), a(1, 0), a(1, 1));
    CHECK(expected == Catch::Approx(2.0).margin(1e-15));
    CHECK(spectral_norm(a) == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("spectral norm agrees with the closed-form 2x2 factorization") {
    Rng rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        const CMatrix a = random_complex_gaussian(2, 2, rng);
        const double expected =
            oracles::svd2x2_max_singular(a(0, 0), a(0, 1), a(1, 0), a(1, 1));
        CHECK(spectral_norm(a) == Catch::Approx(expected).margin(1e-10));
    }
}

TEST_CASE("norm axioms and the C*-identity on random instances") {
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const Index d = rng.uniform_index(2, 12);
        const CMatrix a = random_complex_gaussian(d, d, rng);
        const CMatrix b = random_complex_gaussian(d, d, rng);
        const double na = spectral_norm(a);
        const double nb = spectral_norm(b);
        CHECK(spectral_norm(a + b) <= na + nb + 1e-9 * std::max(1.0, na + nb));
        CHECK(spectral_norm(a * b) <= na * nb + 1e-9 * std::max(1.0, na * nb));
        const double cstar = spectral_norm(a.adjoint() * a);
        CHECK(cstar == Catch::Approx(na * na).epsilon(1e-9));
    }
}

TEST_CASE("is_psd on pinned cases") {
    CHECK(is_psd(CMatrix::Identity(3, 3)));
    CHECK_FALSE(is_psd(-CMatrix::Identity(3, 3)));

    CMatrix a(2, 2);
    a << Complex(2, 0), Complex(1, 0), Complex(1, 0), Complex(2, 0);
    const auto eigs = oracles::herm2x2_eigenvalues(2.0, Complex(1, 0), 2.0);
    CHECK(eigs[0] == Catch::Approx(1.0).margin(1e-14));
    CHECK(eigs[1] == Catch::Approx(3.0).margin(1e-14));
    CHECK(is_psd(a));

    CHECK_THROWS_AS(is_psd(CMatrix::Zero(2, 3)), Precondition);
}

TEST_CASE("is_psd accepts Gram matrices and implies nonnegative diagonal") {
    Rng rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        const Index d = rng.uniform_index(2, 10);
        const CMatrix g = random_complex_gaussian(d, d, rng);
        const CMatrix psd = g * g.adjoint();
        REQUIRE(is_psd(psd));
        for (Index i = 0; i < d; ++i) CHECK(psd(i, i).real() >= -1e-10);

        // Clearly indefinite: push one eigenvalue well below zero.
        CMatrix indef = psd - (spectral_norm(psd) + 1.0) * CMatrix::Identity(d, d);
        CHECK_FALSE(is_psd(indef));
    }
}

TEST_CASE("non-Hermitian matrices are rejected by is_psd") {
    CMatrix a(2, 2);
    a << Complex(1, 0), Complex(1, 0), Complex(0, 0), Complex(1, 0);
    CHECK_FALSE(is_psd(a));
}

TEST_CASE("commutant of the identity is the full matrix space") {
    const auto basis = commutant_basis({CMatrix::Identity(2, 2)}, 2);
    CHECK(basis.size() == 4);
}

TEST_CASE("commutant of all matrix units is the scalars") {
    std::vector<CMatrix> gens;
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 2; ++j) gens.push_back(matrix_unit(2, i, j));

    const auto basis = commutant_basis(gens, 2);
    REQUIRE(basis.size() == 1);
    // Scalar multiple of the identity: off-diagonal zero, equal diagonal.
    const CMatrix& m = basis[0];
    CHECK(std::abs(m(0, 1)) < 1e-10);
    CHECK(std::abs(m(1, 0)) < 1e-10);
    CHECK(std::abs(m(0, 0) - m(1, 1)) < 1e-10);

    const auto reference = oracles::commutant_by_stacked_svd(gens, 2);
    CHECK(reference.size() == 1);
}

TEST_CASE("commutant of diag(1,2) is the diagonal algebra") {
    CMatrix g = CMatrix::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = 2.0;
    const auto basis = commutant_basis({g}, 2);
    REQUIRE(basis.size() == 2);
    for (const auto& m : basis) {
        CHECK(std::abs(m(0, 1)) < 1e-10);
        CHECK(std::abs(m(1, 0)) < 1e-10);
    }
    CHECK(oracles::commutant_by_stacked_svd({g}, 2).size() == 2);
}

TEST_CASE("commutant basis elements commute and are Frobenius-orthonormal") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const Index d = rng.uniform_index(2, 6);
        std::vector<CMatrix> gens;
        const int count = static_cast<int>(rng.uniform_index(1, 3));
        for (int k = 0; k < count; ++k) gens.push_back(random_complex_gaussian(d, d, rng));

        const auto basis = commutant_basis(gens, d);
        const auto reference = oracles::commutant_by_stacked_svd(gens, d);
        CHECK(basis.size() == reference.size());
        for (const auto& m : basis) {
            for (const auto& g : gens)
                CHECK((m * g - g * m).norm() <= 1e-8);
            CHECK(m.norm() == Catch::Approx(1.0).margin(1e-10));
        }
        for (std::size_t u = 0; u < basis.size(); ++u)
            for (std::size_t v = u + 1; v < basis.size(); ++v)
                CHECK(std::abs((basis[u].adjoint() * basis[v]).trace()) < 1e-8);
    }
}

TEST_CASE("empty generator list yields the matrix-unit basis") {
    const auto basis = commutant_basis({}, 3);
    CHECK(basis.size() == 9);
}
