#include <catch2/catch_amalgamated.hpp>

#include <matrange/matrange.hpp>

#include <cmath>

using namespace matrange;

TEST_CASE("support values of shift blocks", "[numrange]") {
    REQUIRE(support_value(jordan_block(2), 0.0) == Catch::Approx(0.5).margin(1e-12));
    // W(J3) is a disk of radius cos(pi/4); the support is angle independent.
    REQUIRE(support_value(jordan_block(3), kPi / 7.0) ==
            Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
    REQUIRE_THROWS_AS(support_value(ComplexMatrix::zero(2, 3), 0.0), DimensionMismatch);
}

TEST_CASE("numerical radius of shift blocks equals the cosine law", "[numrange]") {
    for (std::size_t n : {2u, 3u, 4u, 7u, 12u}) {
        const double expected = std::cos(kPi / static_cast<double>(n + 1));
        REQUIRE(numerical_radius(jordan_block(n)) == Catch::Approx(expected).margin(1e-9));
    }
}

TEST_CASE("numerical radius basic values", "[numrange]") {
    REQUIRE(numerical_radius(ComplexMatrix::identity(3)) == Catch::Approx(1.0).margin(1e-10));
    REQUIRE(numerical_radius(ComplexMatrix::zero(2, 2)) == Catch::Approx(0.0).margin(1e-12));
    ComplexMatrix d = ComplexMatrix::diagonal({cplx(1.0, 0.0), cplx(-1.0, 0.0)});
    REQUIRE(numerical_radius(d) == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("numerical radius is rotation invariant", "[numrange]") {
    ComplexMatrix x = sample(SampleKind::gaussian, 3, 777);
    const double base = numerical_radius(x);
    const cplx ph(std::cos(kPi / 5.0), std::sin(kPi / 5.0));
    REQUIRE(numerical_radius(x * ph) == Catch::Approx(base).margin(1e-6));
}

TEST_CASE("support profile grid and refinement", "[numrange]") {
    SupportProfile p = support_profile(jordan_block(2), 256);
    REQUIRE(p.angles.size() == 256);
    REQUIRE(p.values.size() == 256);
    REQUIRE(p.refined_max == Catch::Approx(0.5).margin(1e-10));
    for (double v : p.values) REQUIRE(v == Catch::Approx(0.5).margin(1e-12));
    REQUIRE_THROWS_AS(support_profile(jordan_block(2), 16), DomainError);
}

TEST_CASE("range inclusion verdicts", "[numrange]") {
    // ex2.13-X maps into the J3 disk.
    InclusionResult in = range_inclusion(named_matrix("ex2.13-X"), jordan_block(3));
    REQUIRE(in.included);
    REQUIRE(in.margin >= -1e-9);

    // The J3 disk (radius 1/sqrt 2) does not fit inside the J2 disk (radius 1/2).
    InclusionResult out = range_inclusion(jordan_block(3), jordan_block(2));
    REQUIRE_FALSE(out.included);
    REQUIRE(out.margin == Catch::Approx(0.5 - 1.0 / std::sqrt(2.0)).margin(1e-9));

    // Reflexive inclusion always holds with ~zero margin.
    InclusionResult self = range_inclusion(jordan_block(3), jordan_block(3));
    REQUIRE(self.included);
    REQUIRE(std::abs(self.margin) < 1e-10);
}

TEST_CASE("boundary points of the J2 disk lie on the half circle", "[numrange]") {
    std::vector<BoundaryPoint> pts = boundary_points(jordan_block(2), 64);
    REQUIRE(pts.size() == 64);
    for (const BoundaryPoint& p : pts) {
        REQUIRE(std::abs(p.point) == Catch::Approx(0.5).margin(1e-9));
    }
    REQUIRE_THROWS_AS(boundary_points(jordan_block(2), 4), DomainError);
}

TEST_CASE("boundary points of a hermitian matrix stay on the real segment", "[numrange]") {
    ComplexMatrix d = ComplexMatrix::diagonal({cplx(1.0, 0.0), cplx(-1.0, 0.0)});
    std::vector<BoundaryPoint> pts = boundary_points(d, 32);
    double lo = 2.0, hi = -2.0;
    for (const BoundaryPoint& p : pts) {
        REQUIRE(std::abs(p.point.imag()) < 1e-10);
        lo = std::min(lo, p.point.real());
        hi = std::max(hi, p.point.real());
        REQUIRE(p.point.real() >= -1.0 - 1e-10);
        REQUIRE(p.point.real() <= 1.0 + 1e-10);
    }
    // The endpoint eigenvalues are attained.
    REQUIRE(lo == Catch::Approx(-1.0).margin(1e-10));
    REQUIRE(hi == Catch::Approx(1.0).margin(1e-10));
}
