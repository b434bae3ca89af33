#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "matrange/eig.hpp"
#include "matrange/matrix.hpp"
#include "matrange/sample.hpp"

namespace matrange {

// The canonical operator-system element A (x) I + B (x) T + B* (x) T*.
struct OpSysElement {
    ComplexMatrix A;
    ComplexMatrix B;
    ComplexMatrix T;
};

inline ComplexMatrix assemble(const OpSysElement& e) {
    if (!e.A.is_square() || !e.B.is_square() || !e.T.is_square())
        throw DimensionMismatch("assemble: A, B, T must be square");
    if (e.A.rows() != e.B.rows())
        throw DimensionMismatch("assemble: A and B must share dimensions");
    const ComplexMatrix id = ComplexMatrix::identity(e.T.rows());
    return kron(e.A, id) + kron(e.B, e.T) + kron(e.B.adjoint(), e.T.adjoint());
}

inline ComplexMatrix assemble(const ComplexMatrix& a, const ComplexMatrix& b,
                              const ComplexMatrix& t) {
    return assemble(OpSysElement{a, b, t});
}

// Convenience: I (x) I + B (x) T + B* (x) T*.
inline ComplexMatrix assemble_unital(const ComplexMatrix& b, const ComplexMatrix& t) {
    return assemble(ComplexMatrix::identity(b.rows()), b, t);
}

// Block criterion for the Jordan-3 operator system: the assembled element
// I (x) I_3 + B (x) J_3 + B* (x) J_3* is PSD iff BB* + B*B <= I.
struct CriterionResult {
    bool ok = false;
    double lambda_max = 0.0;
};

inline CriterionResult j3_block_criterion(const ComplexMatrix& b) {
    if (!b.is_square()) throw DimensionMismatch("j3_block_criterion requires a square matrix");
    CriterionResult r;
    r.lambda_max = lambda_max(ccl(b));
    r.ok = r.lambda_max <= 1.0 + 1e-9;
    return r;
}

// Self-adjoint form of the same criterion: for Hermitian B1, B2 the pair
// passes iff B1^2 + B2^2 <= 2I. Internally cross-checked against
// j3_block_criterion via B = (B1 - i B2)/2, for which
// BB* + B*B = (B1^2 + B2^2)/2.
struct SelfAdjointCriterionResult {
    bool ok = false;
    double lambda_max = 0.0;       // of B1^2 + B2^2
    bool cross_ok = false;         // verdict of the B-form criterion
    double cross_lambda_max = 0.0; // of BB* + B*B
};

inline SelfAdjointCriterionResult selfadjoint_criterion(const ComplexMatrix& b1,
                                                        const ComplexMatrix& b2) {
    if (!b1.is_hermitian(1e-10 * (1.0 + b1.max_abs())) ||
        !b2.is_hermitian(1e-10 * (1.0 + b2.max_abs())))
        throw NonHermitianInput("selfadjoint_criterion requires Hermitian inputs");
    if (b1.rows() != b2.rows())
        throw DimensionMismatch("selfadjoint_criterion: mismatched sizes");
    SelfAdjointCriterionResult r;
    r.lambda_max = lambda_max(b1 * b1 + b2 * b2);
    r.ok = r.lambda_max <= 2.0 + 1e-9;
    const ComplexMatrix b = (b1 - b2 * cplx(0.0, 1.0)) * cplx(0.5, 0.0);
    const CriterionResult c = j3_block_criterion(b);
    r.cross_ok = c.ok;
    r.cross_lambda_max = c.lambda_max;
    return r;
}

// Closed form for || I_2 + alpha J_2 + beta J_2* || with alpha, beta > 0.
inline double j2_affine_norm_closed(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw DomainError("j2_affine_norm_closed requires positive alpha, beta");
    const double a2 = alpha * alpha, b2 = beta * beta;
    const double inner = (a2 - b2) * (a2 - b2) / 4.0 + (alpha + beta) * (alpha + beta);
    return std::sqrt(1.0 + (a2 + b2) / 2.0 + std::sqrt(inner));
}

// Closed form for || I_4 + alpha T + beta T* || where T is the 4x4 normal
// matrix with Re(lambda_j) = +-1/2 and |lambda_j| = r >= 1/2; v^2 = r^2 - 1/4.
inline double normal4_affine_norm_closed(double alpha, double beta, double r) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw DomainError("normal4_affine_norm_closed requires positive alpha, beta");
    if (!(r >= 0.5)) throw DomainError("normal4_affine_norm_closed requires r >= 1/2");
    const double v2 = r * r - 0.25;
    const double a2 = alpha * alpha, b2 = beta * beta;
    return std::sqrt(1.0 + (a2 + b2) / 4.0 + alpha + beta + alpha * beta / 2.0 +
                     v2 * (alpha - beta) * (alpha - beta));
}

// The 4x4 normal fixture with Re = +-1/2 and modulus r (degenerate pairs at
// r = 1/2).
inline ComplexMatrix normal4_matrix(double r) {
    if (!(r >= 0.5)) throw DomainError("normal4_matrix requires r >= 1/2");
    const double v = std::sqrt(std::max(0.0, r * r - 0.25));
    return ComplexMatrix::diagonal(
        {cplx(0.5, v), cplx(0.5, -v), cplx(-0.5, v), cplx(-0.5, -v)});
}

// Randomized implication probe: samples B at level n with
// I (x) I + B (x) T + B* (x) T* PSD and records every B for which the same
// element with X in place of T fails PSD by margin < -1e-7. Empty violations
// is evidence (not proof) that the T-positivity implies X-positivity at
// level n.
struct ProbeViolation {
    ComplexMatrix B;
    double lambda_min = 0.0;
};

struct ProbeReport {
    std::size_t tested = 0;
    std::vector<ProbeViolation> violations;
};

inline ProbeReport implication_probe(const ComplexMatrix& t, const ComplexMatrix& x,
                                     std::size_t n, std::size_t trials, std::uint64_t seed,
                                     const std::vector<ComplexMatrix>& fixture_bs = {}) {
    if (!t.is_square() || !x.is_square())
        throw DimensionMismatch("implication_probe: T, X must be square");
    if (n == 0 || n > 6) throw DomainError("implication_probe: probe size must be in 1..6");

    const bool t_is_j3 = t.rows() == 3 && (t - jordan_block(3)).max_abs() <= 1e-12;

    ProbeReport report;
    const auto test_b = [&](const ComplexMatrix& b) {
        ++report.tested;
        const PsdResult p = psd_check(assemble_unital(b, x));
        if (p.lambda_min < -1e-7)
            report.violations.push_back(ProbeViolation{b, p.lambda_min});
    };

    for (const ComplexMatrix& b : fixture_bs) {
        if (b.rows() != n || !b.is_square()) continue;
        if (psd_check(assemble_unital(b, t)).psd) test_b(b);
    }

    if (t_is_j3) {
        // Exact characterization: PSD against J_3 iff BB* + B*B <= I, so the
        // constraint can be sampled directly instead of by rejection.
        for (std::size_t k = 0; k < trials; ++k) {
            Rng rng(derive_seed(seed, k));
            test_b(sample_ccl_sub(n, rng));
        }
        return report;
    }

    // Rejection sampling from scaled Gaussians with an adaptive scale.
    double scale = 1.0;
    std::size_t proposals = 0;
    std::size_t accepted = 0;
    std::uint64_t index = 0;
    while (accepted < trials) {
        Rng rng(derive_seed(seed, index++));
        ComplexMatrix g = sample_gaussian(n, rng);
        const double lm = lambda_max(ccl(g));
        if (lm > 0.0) g *= cplx(1.0 / std::sqrt(lm), 0.0);
        g *= cplx(scale * rng.uniform_open0(), 0.0);
        ++proposals;
        if (psd_check(assemble_unital(g, t)).psd) {
            ++accepted;
            scale = std::min(1.0, scale * 1.02);
            test_b(g);
        } else {
            scale = std::max(1e-3, scale * 0.98);
        }
        if (proposals >= 100000 && accepted * 100 < proposals)
            throw SamplerStarvation("implication_probe: acceptance below 1% after " +
                                    std::to_string(proposals) + " proposals");
    }
    return report;
}

} // namespace matrange
