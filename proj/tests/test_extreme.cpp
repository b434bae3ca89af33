#include <catch2/catch_amalgamated.hpp>

#include <matrange/matrange.hpp>

#include <cmath>

using namespace matrange;

namespace {

// Hermitian pair (sqrt(2) Re B, sqrt(2) Im B), whose squares sum to BB*+B*B.
std::pair<ComplexMatrix, ComplexMatrix> split_pair(const ComplexMatrix& b) {
    const cplx rt2(std::sqrt(2.0), 0.0);
    return {b.herm_re() * rt2, b.herm_im() * rt2};
}

std::pair<ComplexMatrix, ComplexMatrix> scaled_random_pair(std::size_t n,
                                                           std::uint64_t seed,
                                                           double target) {
    ComplexMatrix b1 = sample(SampleKind::hermitian_contraction, n, seed);
    ComplexMatrix b2 = sample(SampleKind::hermitian_contraction, n, seed + 7919);
    const double lam = lambda_max(b1 * b1 + b2 * b2);
    const cplx s(std::sqrt(target / lam), 0.0);
    return {b1 * s, b2 * s};
}

} // namespace

TEST_CASE("commuting cosine sine pairs are E1", "[extreme]") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        Rng rng(derive_seed(1200, s));
        const std::size_t n = 2 + s % 3;
        std::vector<cplx> c(n), d(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double th = 2.0 * kPi * rng.uniform_open0();
            c[i] = std::cos(th);
            d[i] = std::sin(th);
        }
        ComplexMatrix b1 = ComplexMatrix::diagonal(c);
        ComplexMatrix b2 = ComplexMatrix::diagonal(d);
        ExtremeVerdict v = classify_extreme(b1, b2);
        REQUIRE(v.kind == ExtremeKind::E1);
        REQUIRE_FALSE(v.witness.has_value());
        REQUIRE_THROWS_AS(nonextreme_witness(b1, b2), DomainError);
    }
}

TEST_CASE("the zero pair is not extreme with a kernel witness", "[extreme]") {
    ExtremeVerdict v = classify_extreme(ComplexMatrix::zero(2, 2), ComplexMatrix::zero(2, 2));
    REQUIRE(v.kind == ExtremeKind::NotExtreme);
    REQUIRE(v.witness.has_value());
    REQUIRE(verify_witness(ComplexMatrix::zero(2, 2), ComplexMatrix::zero(2, 2), *v.witness));
    // The kernel direction admits nearly the full perturbation scale.
    REQUIRE(v.witness->t > 0.9);
}

TEST_CASE("a strictly interior scalar splits at the slack", "[extreme]") {
    ComplexMatrix b1(1, 1), b2(1, 1);
    b1(0, 0) = 0.5;
    ExtremeVerdict v = classify_extreme(b1, b2);
    REQUIRE(v.kind == ExtremeKind::NotExtreme);
    REQUIRE(v.witness.has_value());
    REQUIRE(v.witness->t == Catch::Approx(0.5).margin(1e-9));
    REQUIRE(verify_witness(b1, b2, *v.witness));
}

TEST_CASE("frozen boundary matrices classify as E2", "[extreme]") {
    for (const char* id : {"ex4.9-B", "ex4.10-B"}) {
        auto [b1, b2] = split_pair(named_matrix(id));
        ExtremeVerdict v = classify_extreme(b1, b2);
        REQUIRE(v.kind == ExtremeKind::E2);
        REQUIRE(v.k == 1);
        // Interior block of size 1, coupling block of full rank 2.
        std::size_t rank = 0;
        for (double s : v.stacked_singular_values)
            if (s > 1e-7) ++rank;
        REQUIRE(rank == 2);
        REQUIRE(v.eigenvalues.front() == Catch::Approx(1.0).margin(1e-9));
        REQUIRE(v.eigenvalues.back() == Catch::Approx(2.0 / 3.0).margin(1e-9));
        REQUIRE_THROWS_AS(nonextreme_witness(b1, b2), DomainError);
    }
}

TEST_CASE("band-straddling spectrum is inconclusive, witness still constructible",
          "[extreme]") {
    // Top eigenvalue inside the undecidable band (1-1e-6, 1-1e-8); the zero
    // eigenvalue gives the relaxed witness a kernel direction to use.
    ComplexMatrix b1 = ComplexMatrix::diagonal({std::sqrt(1.0 - 1e-7), 0.0});
    ComplexMatrix b2 = ComplexMatrix::zero(2, 2);
    ExtremeVerdict v = classify_extreme(b1, b2);
    REQUIRE(v.kind == ExtremeKind::Inconclusive);
    REQUIRE(v.offending.size() == 1);
    REQUIRE(v.offending.front() == Catch::Approx(1.0 - 1e-7).margin(1e-9));

    WitnessPair w = nonextreme_witness(b1, b2);
    REQUIRE(verify_witness(b1, b2, w));
    REQUIRE(w.t > 0.9);
}

TEST_CASE("constraint violations and malformed inputs are rejected", "[extreme]") {
    ComplexMatrix big(1, 1);
    big(0, 0) = 1.1;
    REQUIRE_THROWS_AS(classify_extreme(big, ComplexMatrix::zero(1, 1)), ConstraintViolated);
    REQUIRE_THROWS_AS(classify_extreme(jordan_block(2), ComplexMatrix::zero(2, 2)),
                      NonHermitianInput);
    REQUIRE_THROWS_AS(
        classify_extreme(ComplexMatrix::zero(2, 2), ComplexMatrix::zero(3, 3)),
        DimensionMismatch);
}

TEST_CASE("verify_witness rejects corrupted certificates", "[extreme]") {
    ComplexMatrix z = ComplexMatrix::zero(2, 2);
    ExtremeVerdict v = classify_extreme(z, z);
    REQUIRE(v.witness.has_value());
    WitnessPair bad = *v.witness;
    bad.c.first(0, 0) += 0.1; // breaks the midpoint identity
    REQUIRE_FALSE(verify_witness(z, z, bad));

    WitnessPair same = *v.witness;
    same.c = same.d; // breaks distinctness
    REQUIRE_FALSE(verify_witness(z, z, same));
}

TEST_CASE("classification is unitarily covariant", "[extreme]") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        ComplexMatrix u = sample(SampleKind::unitary, 3, derive_seed(1300, s));
        // E2 input stays E2 under simultaneous conjugation.
        auto [b1, b2] = split_pair(named_matrix("ex4.9-B"));
        ComplexMatrix c1 = (u * b1 * u.adjoint()).herm_re();
        ComplexMatrix c2 = (u * b2 * u.adjoint()).herm_re();
        ExtremeVerdict v = classify_extreme(c1, c2);
        REQUIRE(v.kind == ExtremeKind::E2);
        REQUIRE(v.k == 1);
        for (std::size_t i = 0; i < 3; ++i) {
            ExtremeVerdict base = classify_extreme(b1, b2);
            REQUIRE(v.eigenvalues[i] == Catch::Approx(base.eigenvalues[i]).margin(1e-9));
        }
    }
}

TEST_CASE("interior random pairs produce verifiable witnesses", "[extreme]") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto [b1, b2] = scaled_random_pair(3, derive_seed(1400, s), 0.7);
        ExtremeVerdict v = classify_extreme(b1, b2);
        REQUIRE(v.kind == ExtremeKind::NotExtreme);
        REQUIRE(v.witness.has_value());
        REQUIRE(verify_witness(b1, b2, *v.witness));
        REQUIRE(v.witness->t > 1e-9);
    }
}
