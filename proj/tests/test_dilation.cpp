#include <catch2/catch_amalgamated.hpp>

#include <matrange/matrange.hpp>

#include <algorithm>
#include <cmath>

using namespace matrange;

namespace {

ComplexMatrix antidiag2(cplx a, cplx b) {
    ComplexMatrix m(2, 2);
    m(0, 1) = a;
    m(1, 0) = b;
    return m;
}

double isometry_defect(const ComplexMatrix& v) {
    return (v.adjoint() * v - ComplexMatrix::identity(v.cols())).max_abs();
}

// Rebuild the direct sum of antidiagonal blocks from a decomposition.
ComplexMatrix blocks_direct_sum(const BlockDecomposition& d) {
    ComplexMatrix s(2 * d.blocks.size(), 2 * d.blocks.size());
    for (std::size_t i = 0; i < d.blocks.size(); ++i) {
        s(2 * i, 2 * i + 1) = d.blocks[i].first;
        s(2 * i + 1, 2 * i) = d.blocks[i].second;
    }
    return s;
}

ComplexMatrix doubling_of(const ComplexMatrix& b) {
    ComplexMatrix m(2 * b.rows(), 2 * b.rows());
    m.set_block(0, b.rows(), b);
    m.set_block(b.rows(), 0, b);
    return m;
}

} // namespace

TEST_CASE("doubling dilation of the 2x2 shift", "[dilation]") {
    DilationResult r = doubling_dilation(jordan_block(2));
    REQUIRE(r.ambient.rows() == 4);
    REQUIRE(r.residual_ccl <= 1e-12);
    REQUIRE(r.residual_compression <= 1e-12);
    REQUIRE(isometry_defect(r.isometry) <= 1e-10);
    REQUIRE((r.ambient.block(0, 2, 2, 2) - jordan_block(2)).max_abs() == 0.0);
    REQUIRE(r.ambient.block(0, 0, 2, 2).max_abs() == 0.0);
}

TEST_CASE("doubling dilation of a scalar", "[dilation]") {
    ComplexMatrix b(1, 1);
    b(0, 0) = 1.0 / std::sqrt(2.0);
    DilationResult r = doubling_dilation(b);
    REQUIRE(r.ambient.rows() == 2);
    REQUIRE(r.ambient(0, 1).real() == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
    REQUIRE(r.ambient(1, 0).real() == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
    REQUIRE(r.residual_ccl <= 1e-12);
    REQUIRE(r.residual_compression <= 1e-12);
}

TEST_CASE("doubling dilation keeps the constraint deficiency", "[dilation]") {
    DilationResult r = doubling_dilation(named_matrix("ex4.9-B"));
    REQUIRE(r.residual_compression <= 1e-12);
    REQUIRE(r.residual_ccl == Catch::Approx(1.0 / 3.0).margin(1e-9));
}

TEST_CASE("structure blocks of an antidiagonal pair", "[dilation]") {
    ComplexMatrix b = antidiag2(0.6, cplx(0.0, 0.8));
    BlockDecomposition d = structure_blocks(b);
    REQUIRE(d.blocks.size() == 2);
    REQUIRE(d.conjugator.rows() == 4);
    REQUIRE(isometry_defect(d.conjugator) <= 1e-10);
    std::vector<double> alphas;
    for (const auto& [al, be] : d.blocks) {
        REQUIRE(std::norm(al) + std::norm(be) == Catch::Approx(1.0).margin(1e-9));
        // Gauge: alpha real nonnegative.
        REQUIRE(std::abs(al.imag()) <= 1e-9);
        REQUIRE(al.real() >= -1e-12);
        alphas.push_back(std::abs(al));
    }
    std::sort(alphas.begin(), alphas.end());
    REQUIRE(alphas[0] == Catch::Approx(0.6).margin(1e-7));
    REQUIRE(alphas[1] == Catch::Approx(0.8).margin(1e-7));

    ComplexMatrix conj = d.conjugator.adjoint() * doubling_of(b) * d.conjugator;
    REQUIRE((conj - blocks_direct_sum(d)).max_abs() <= 1e-8);
}

TEST_CASE("structure blocks of the balanced scalar case", "[dilation]") {
    ComplexMatrix b = ComplexMatrix::identity(2) * cplx(1.0 / std::sqrt(2.0), 0.0);
    BlockDecomposition d = structure_blocks(b);
    REQUIRE(d.blocks.size() == 2);
    for (const auto& [al, be] : d.blocks) {
        REQUIRE(std::abs(al) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-9));
        REQUIRE(std::abs(be) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-9));
    }
    ComplexMatrix conj = d.conjugator.adjoint() * doubling_of(b) * d.conjugator;
    REQUIRE((conj - blocks_direct_sum(d)).max_abs() <= 1e-8);
}

TEST_CASE("structure blocks recover moduli through a unitary conjugation", "[dilation]") {
    ComplexMatrix core = direct_sum(antidiag2(0.8, 0.6), antidiag2(cplx(0.0, 0.6), 0.8));
    ComplexMatrix w = sample(SampleKind::unitary, 4, 321);
    ComplexMatrix b = w * core * w.adjoint();
    BlockDecomposition d = structure_blocks(b);
    REQUIRE(d.blocks.size() == 4);
    for (const auto& [al, be] : d.blocks) {
        REQUIRE(std::norm(al) + std::norm(be) == Catch::Approx(1.0).margin(1e-9));
        const double a = std::abs(al);
        REQUIRE((std::abs(a - 0.6) <= 1e-7 || std::abs(a - 0.8) <= 1e-7));
    }
    ComplexMatrix conj = d.conjugator.adjoint() * doubling_of(b) * d.conjugator;
    REQUIRE((conj - blocks_direct_sum(d)).max_abs() <= 1e-8);
}

TEST_CASE("structure blocks rejects off-boundary input", "[dilation]") {
    REQUIRE_THROWS_AS(structure_blocks(jordan_block(2) * cplx(0.5, 0.0)), NotOnBoundary);
}

TEST_CASE("structure blocks refuses to guess through a smeared cluster", "[dilation]") {
    // Three antidiagonal pairs whose lower singular values chain at spacing
    // 8e-8 (< gap 1e-7) but spread 1.6e-7 (> gap): grouping would be a guess.
    const double s0 = 0.6, s1 = 0.6 + 8e-8, s2 = 0.6 + 1.6e-7;
    ComplexMatrix b = direct_sum(
        direct_sum(antidiag2(s0, std::sqrt(1.0 - s0 * s0)),
                   antidiag2(s1, std::sqrt(1.0 - s1 * s1))),
        antidiag2(s2, std::sqrt(1.0 - s2 * s2)));
    REQUIRE_THROWS_AS(structure_blocks(b), ClusteringAmbiguity);
}

TEST_CASE("dilate_m2 of the zero matrix", "[dilation]") {
    DilationResult r = dilate_m2(ComplexMatrix::zero(2, 2));
    REQUIRE(r.ambient.rows() == 4);
    REQUIRE(r.residual_ccl <= 1e-8);
    REQUIRE(r.residual_compression <= 1e-10);
    REQUIRE(std::abs(r.ambient(0, 2)) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
    REQUIRE(std::abs(r.ambient(1, 3)) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
    REQUIRE(std::abs(r.ambient(2, 2)) <= 1e-12); // r_1 = 0
}

TEST_CASE("dilate_m2 of the shift takes the trace-zero branch", "[dilation]") {
    DilationResult r = dilate_m2(jordan_block(2));
    REQUIRE(r.ambient.rows() == 6);
    REQUIRE(r.residual_ccl <= 1e-8);
    REQUIRE(r.residual_compression <= 1e-10);
    REQUIRE(isometry_defect(r.isometry) <= 1e-10);
    // Diagonal fill-ins carry |w_j|^2 = 1/2 with Re(w_1) = -1/2.
    REQUIRE(r.ambient(2, 2).real() == Catch::Approx(-0.5).margin(1e-9));
    for (std::size_t j = 2; j < 6; ++j)
        REQUIRE(std::norm(r.ambient(j, j)) == Catch::Approx(0.5).margin(1e-9));
}

TEST_CASE("dilate_m2 of a rotated-trace diagonal", "[dilation]") {
    ComplexMatrix b = ComplexMatrix::diagonal({cplx(0.5, 0.0), cplx(0.0, 0.5)});
    DilationResult r = dilate_m2(b);
    REQUIRE(r.ambient.rows() == 4);
    REQUIRE(r.residual_ccl <= 1e-8);
    REQUIRE(r.residual_compression <= 1e-10);
    REQUIRE(std::abs(r.ambient(0, 2)) == Catch::Approx(0.5).margin(1e-9));
    REQUIRE(std::abs(r.ambient(1, 3)) == Catch::Approx(0.5).margin(1e-9));
}

TEST_CASE("dilate_m2 rejects criterion violations", "[dilation]") {
    REQUIRE_THROWS_AS(dilate_m2(ComplexMatrix::identity(2)), CriterionViolated);
    REQUIRE_THROWS_AS(dilate_m2(ComplexMatrix::zero(3, 3)), DimensionMismatch);
}

TEST_CASE("dilate_m2 sweep over admissible inputs", "[dilation]") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        ComplexMatrix b = sample(SampleKind::ccl_sub, 2, derive_seed(2400, s));
        DilationResult r = dilate_m2(b);
        REQUIRE((r.ambient.rows() == 4 || r.ambient.rows() == 6));
        REQUIRE(r.residual_ccl <= 1e-8);
        REQUIRE(r.residual_compression <= 1e-10);
        REQUIRE(isometry_defect(r.isometry) <= 1e-10);
    }
}

TEST_CASE("structure blocks sweep on boundary samples", "[dilation]") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const std::size_t n = 2 + s % 4;
        ComplexMatrix b = sample(SampleKind::ccl_equality, n, derive_seed(2500, s));
        BlockDecomposition d = structure_blocks(b);
        REQUIRE(d.blocks.size() == n);
        REQUIRE(isometry_defect(d.conjugator) <= 1e-9);
        for (const auto& [al, be] : d.blocks)
            REQUIRE(std::norm(al) + std::norm(be) == Catch::Approx(1.0).margin(1e-9));
        ComplexMatrix conj = d.conjugator.adjoint() * doubling_of(b) * d.conjugator;
        REQUIRE((conj - blocks_direct_sum(d)).max_abs() <= 1e-8);
    }
}

TEST_CASE("block criterion transfers positivity to every contracted element",
          "[dilation]") {
    // For boundary B with blocks (alpha, beta): whenever
    // || alpha X + conj(beta) X* || <= 1 for every block, the assembled
    // element I + D (x) X + D* (x) X* with D the block direct sum is PSD.
    for (std::uint64_t s = 0; s < 30; ++s) {
        const std::size_t n = 2 + s % 2;
        ComplexMatrix b = sample(SampleKind::ccl_equality, n, derive_seed(2600, s));
        BlockDecomposition d = structure_blocks(b);
        ComplexMatrix x = sample(SampleKind::gaussian, 2, derive_seed(2700, s));
        double worst = 0.0;
        for (const auto& [al, be] : d.blocks)
            worst = std::max(worst,
                             op_norm(x * al + x.adjoint() * std::conj(be)));
        x *= cplx(1.0 / (worst * 1.001), 0.0);
        ComplexMatrix elem = assemble_unital(blocks_direct_sum(d), x);
        REQUIRE(psd_check(elem, 1e-8).psd);
    }
}

TEST_CASE("bordered completion of a feasible scalar", "[dilation]") {
    ComplexMatrix b(1, 1);
    b(0, 0) = 0.5;
    BorderedResult r = bordered_infeasibility(b);
    REQUIRE(r.feasible);
    REQUIRE(r.min_residual <= 1e-10);
    REQUIRE_FALSE(r.certificate.has_value());
}

TEST_CASE("bordered completion flags the frozen counterexamples", "[dilation]") {
    for (const char* id : {"ex4.9-B", "ex4.10-B"}) {
        BorderedResult r = bordered_infeasibility(named_matrix(id), 1e-6, 8, 150, 0, 0);
        REQUIRE_FALSE(r.feasible);
        REQUIRE(r.min_residual > 1e-6);
        REQUIRE(r.certificate.has_value());
        REQUIRE(r.certificate->forced_gap == Catch::Approx(1.0 / 3.0).margin(1e-9));
    }
}

TEST_CASE("bordered completion is infeasible under rank-2 deficiency", "[dilation]") {
    // One border column cannot repair a deficiency of rank >= 2.
    for (std::uint64_t s = 0; s < 50; ++s) {
        const std::size_t n = 2 + s % 3;
        ComplexMatrix b = sample(SampleKind::ccl_equality, n, derive_seed(2800, s));
        b *= cplx(0.8, 0.0); // ccl becomes 0.64 I: deficiency rank n >= 2
        BorderedResult r = bordered_infeasibility(b, 1e-6, 8, 120, 0, 0);
        REQUIRE_FALSE(r.feasible);
        REQUIRE(r.min_residual > 1e-6);
    }
}

TEST_CASE("bordered completion rejects criterion violations", "[dilation]") {
    REQUIRE_THROWS_AS(bordered_infeasibility(ComplexMatrix::identity(2)), CriterionViolated);
}
