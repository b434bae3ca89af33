#include <catch2/catch_amalgamated.hpp>

#include <matrange/matrange.hpp>

#include <cmath>

using namespace matrange;

TEST_CASE("assemble builds A(x)I + B(x)T + B*(x)T*", "[opsys]") {
    ComplexMatrix a = ComplexMatrix::identity(2) * cplx(2.0, 0.0);
    ComplexMatrix b = jordan_block(2);
    ComplexMatrix t = jordan_block(3);
    ComplexMatrix m = assemble(a, b, t);
    REQUIRE(m.rows() == 6);
    REQUIRE(m.cols() == 6);
    // Hand expansion at a few entries: kron(A, I3) has 2 on its diagonal;
    // kron(B, T) writes T into the (0,1) block.
    REQUIRE(m(0, 0) == cplx(2.0, 0.0));
    REQUIRE(m(0, 4) == cplx(1.0, 0.0)); // b(0,1) * t(0,1)
    REQUIRE(m(4, 0) == cplx(1.0, 0.0)); // adjoint mirror
    REQUIRE((m - m.adjoint()).max_abs() == 0.0);

    REQUIRE_THROWS_AS(assemble(ComplexMatrix::identity(3), b, t), DimensionMismatch);
    REQUIRE_THROWS_AS(assemble(ComplexMatrix::zero(2, 3), b, t), DimensionMismatch);
}

TEST_CASE("assemble_unital of hermitian b and t is hermitian", "[opsys]") {
    ComplexMatrix b = sample(SampleKind::gaussian, 2, 9);
    ComplexMatrix m = assemble_unital(b, jordan_block(3));
    REQUIRE(m.rows() == 6);
    REQUIRE((m - m.adjoint()).max_abs() < 1e-14);
}

TEST_CASE("j3 block criterion", "[opsys]") {
    // J2 sits exactly on the constraint surface.
    CriterionResult on = j3_block_criterion(jordan_block(2));
    REQUIRE(on.ok);
    REQUIRE(on.lambda_max == Catch::Approx(1.0).margin(1e-12));

    CriterionResult off = j3_block_criterion(jordan_block(2) * cplx(1.01, 0.0));
    REQUIRE_FALSE(off.ok);

    // Criterion verdict agrees with direct positivity of the assembled element.
    for (std::uint64_t s = 0; s < 25; ++s) {
        ComplexMatrix b = sample(SampleKind::gaussian, 2, 4000 + s) * cplx(0.45, 0.0);
        const bool direct = psd_check(assemble_unital(b, jordan_block(3))).psd;
        REQUIRE(j3_block_criterion(b).ok == direct);
    }
}

TEST_CASE("selfadjoint criterion matches the B-form cross check", "[opsys]") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        ComplexMatrix b1 = sample(SampleKind::hermitian_contraction, 3, 500 + s);
        ComplexMatrix b2 = sample(SampleKind::hermitian_contraction, 3, 900 + s);
        SelfAdjointCriterionResult r = selfadjoint_criterion(b1, b2);
        REQUIRE(r.ok == r.cross_ok);
        // BB*+B*B = (B1^2+B2^2)/2 for B = (B1 - i B2)/2.
        REQUIRE(r.cross_lambda_max == Catch::Approx(r.lambda_max / 2.0).margin(1e-10));
    }
    // Hermitian contractions always pass: B1^2 + B2^2 <= 2I.
    SelfAdjointCriterionResult pass = selfadjoint_criterion(
        ComplexMatrix::identity(2), ComplexMatrix::identity(2) * cplx(-1.0, 0.0));
    REQUIRE(pass.ok);
    REQUIRE(pass.lambda_max == Catch::Approx(2.0).margin(1e-12));

    REQUIRE_THROWS_AS(selfadjoint_criterion(jordan_block(2), ComplexMatrix::identity(2)),
                      NonHermitianInput);
    REQUIRE_THROWS_AS(
        selfadjoint_criterion(ComplexMatrix::identity(2), ComplexMatrix::identity(3)),
        DimensionMismatch);
}

TEST_CASE("ccl identity for the selfadjoint split", "[opsys]") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        ComplexMatrix b1 = sample(SampleKind::hermitian_contraction, 3, 50 + s);
        ComplexMatrix b2 = sample(SampleKind::hermitian_contraction, 3, 150 + s);
        ComplexMatrix b = (b1 - b2 * cplx(0.0, 1.0)) * cplx(0.5, 0.0);
        ComplexMatrix lhs = ccl(b);
        ComplexMatrix rhs = (b1 * b1 + b2 * b2) * cplx(0.5, 0.0);
        REQUIRE((lhs - rhs).max_abs() < 1e-12);
        // Equivalent form via the hermitian parts of B itself:
        // BB* + B*B = 2 (Re B)^2 + 2 (Im B)^2.
        ComplexMatrix re = b.herm_re(), im = b.herm_im();
        REQUIRE((ccl(b) - (re * re + im * im) * cplx(2.0, 0.0)).max_abs() < 1e-12);
    }
}

TEST_CASE("affine norm closed form for the 2x2 shift", "[opsys]") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        Rng rng(7000 + s);
        const double alpha = 0.1 + 3.0 * rng.uniform_open0();
        const double beta = 0.1 + 3.0 * rng.uniform_open0();
        ComplexMatrix j2 = jordan_block(2);
        ComplexMatrix m = ComplexMatrix::identity(2) + j2 * cplx(alpha, 0.0) +
                          j2.adjoint() * cplx(beta, 0.0);
        REQUIRE(j2_affine_norm_closed(alpha, beta) ==
                Catch::Approx(op_norm(m)).margin(1e-9));
    }
    REQUIRE_THROWS_AS(j2_affine_norm_closed(-1.0, 1.0), DomainError);
    REQUIRE_THROWS_AS(j2_affine_norm_closed(1.0, 0.0), DomainError);
}

TEST_CASE("affine norm closed form for the 4x4 normal family", "[opsys]") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        Rng rng(8000 + s);
        const double alpha = 0.1 + 3.0 * rng.uniform_open0();
        const double beta = 0.1 + 3.0 * rng.uniform_open0();
        const double r = 0.5 + 2.0 * rng.uniform_open0();
        ComplexMatrix t = normal4_matrix(r);
        ComplexMatrix m = ComplexMatrix::identity(4) + t * cplx(alpha, 0.0) +
                          t.adjoint() * cplx(beta, 0.0);
        REQUIRE(normal4_affine_norm_closed(alpha, beta, r) ==
                Catch::Approx(op_norm(m)).margin(1e-9));
    }
    REQUIRE_THROWS_AS(normal4_affine_norm_closed(1.0, 1.0, 0.4), DomainError);
    REQUIRE_THROWS_AS(normal4_matrix(0.25), DomainError);
}

TEST_CASE("the degenerate normal family is strictly cheaper than the shift", "[opsys]") {
    // At r = 1/2 (coincident pairs) the family's norm drops below the J2
    // affine norm at the same coefficients: 5.0 < 5.414... for (5, 3).
    const double n4 = normal4_affine_norm_closed(5.0, 3.0, 0.5);
    const double j2 = j2_affine_norm_closed(5.0, 3.0);
    REQUIRE(n4 == Catch::Approx(5.0).margin(1e-12));
    REQUIRE(j2 == Catch::Approx(5.414213562373095).margin(1e-9));
    REQUIRE(n4 < j2);
}

TEST_CASE("implication probe on the exact J3 path", "[opsys]") {
    // X inside the criterion: no violations over 200 sampled B.
    ComplexMatrix x = jordan_block(3) * cplx(0.9, 0.0);
    ProbeReport ok = implication_probe(jordan_block(3), x, 3, 200, 6100);
    REQUIRE(ok.tested == 200);
    REQUIRE(ok.violations.empty());
}

TEST_CASE("implication probe flags a fixture violation", "[opsys]") {
    // ex2.13-B passes the J3 criterion but fails against ex2.13-X.
    ComplexMatrix b = named_matrix("ex2.13-B");
    ComplexMatrix x = named_matrix("ex2.13-X");
    ProbeReport rep = implication_probe(jordan_block(3), x, 2, 50, 6200, {b});
    REQUIRE(rep.tested == 51); // fixture + trials
    REQUIRE_FALSE(rep.violations.empty());
    // The fixture B is the first tested element and must be among the hits.
    bool fixture_hit = false;
    for (const ProbeViolation& v : rep.violations)
        if ((v.B - b).max_abs() < 1e-15) fixture_hit = true;
    REQUIRE(fixture_hit);
    for (const ProbeViolation& v : rep.violations) REQUIRE(v.lambda_min < -1e-7);
}

TEST_CASE("implication probe general-T rejection path", "[opsys]") {
    // T = J2 is not the special-cased J3, so acceptance goes through
    // rejection sampling; X = T must never produce violations.
    ProbeReport rep = implication_probe(jordan_block(2), jordan_block(2), 2, 40, 6300);
    REQUIRE(rep.tested == 40);
    REQUIRE(rep.violations.empty());
}

TEST_CASE("implication probe input validation", "[opsys]") {
    REQUIRE_THROWS_AS(
        implication_probe(jordan_block(3), jordan_block(3), 7, 10, 1), DomainError);
    REQUIRE_THROWS_AS(
        implication_probe(jordan_block(3), jordan_block(3), 0, 10, 1), DomainError);
    REQUIRE_THROWS_AS(
        implication_probe(ComplexMatrix::zero(2, 3), jordan_block(3), 2, 10, 1),
        DimensionMismatch);
}
