#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "matrange/eig.hpp"
#include "matrange/matrix.hpp"
#include "matrange/numrange.hpp"
#include "matrange/opsys.hpp"
#include "matrange/parallel.hpp"
#include "matrange/sample.hpp"

namespace matrange {

// ---------------------------------------------------------------------------
// Verdicts and certificates
// ---------------------------------------------------------------------------

enum class MemberStatus { Member, NonMember, Inconclusive };

inline const char* to_string(MemberStatus s) {
    switch (s) {
        case MemberStatus::Member: return "Member";
        case MemberStatus::NonMember: return "NonMember";
        case MemberStatus::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct SufficientCcl {
    double lambda_max = 0.0;
};
struct CriterionViolation {
    cplx alpha, beta;
    double norm_excess = 0.0;
};
struct SignedCase {
    std::string pattern; // which of Re/Im is semidefinite, e.g. "Re>=0"
    double sup = 0.0;
};
struct ProbeEvidence {
    std::size_t trials = 0;
    std::size_t violations = 0;
};
struct WitnessCertificate {
    cplx a, b, c;
    double excess = 0.0;
};

using Certificate =
    std::variant<SufficientCcl, CriterionViolation, SignedCase, ProbeEvidence, WitnessCertificate>;

struct Verdict {
    MemberStatus status = MemberStatus::Inconclusive;
    Certificate certificate;
};

// ---------------------------------------------------------------------------
// sup over the coefficient sphere of ||alpha X + beta X*||; by homogeneity
// and a global phase, alpha = cos t, beta = sin t e^{i phi}.
// ---------------------------------------------------------------------------

namespace detail {

struct SupPoint {
    double value = 0.0;
    double t = 0.0;
    double phi = 0.0;
};

inline SupPoint criterion_sup_point(const ComplexMatrix& x, std::size_t grid_t,
                                    std::size_t grid_phi, std::size_t threads = 0) {
    if (!x.is_square()) throw DimensionMismatch("j3_criterion_sup requires a square matrix");
    if (grid_t < 16 || grid_phi < 16)
        throw DomainError("j3_criterion_sup: grid must be at least 16 x 16");
    const ComplexMatrix xs = x.adjoint();
    const auto f = [&](double t, double phi) {
        const cplx alpha(std::cos(t), 0.0);
        const cplx beta = std::sin(t) * std::exp(cplx(0.0, phi));
        return op_norm(x * alpha + xs * beta);
    };
    const double dt = (kPi / 2.0) / static_cast<double>(grid_t);
    const double dphi = (2.0 * kPi) / static_cast<double>(grid_phi);

    std::vector<SupPoint> rows(grid_t + 1);
    parallel_for(grid_t + 1, resolve_threads(threads), [&](std::size_t i) {
        const double t = static_cast<double>(i) * dt;
        SupPoint best;
        best.t = t;
        for (std::size_t j = 0; j < grid_phi; ++j) {
            const double phi = static_cast<double>(j) * dphi;
            const double v = f(t, phi);
            if (v > best.value) {
                best.value = v;
                best.phi = phi;
            }
        }
        rows[i] = best;
    });
    SupPoint best = rows.front();
    for (const SupPoint& r : rows)
        if (r.value > best.value) best = r;

    // Coordinate-wise golden polish around the winning cell.
    for (int round = 0; round < 3; ++round) {
        double arg = best.t;
        const double vt = detail::golden_max(
            [&](double t) { return f(std::clamp(t, 0.0, kPi / 2.0), best.phi); },
            std::max(0.0, best.t - dt), std::min(kPi / 2.0, best.t + dt), 1e-10, &arg);
        if (vt > best.value) {
            best.value = vt;
            best.t = std::clamp(arg, 0.0, kPi / 2.0);
        }
        arg = best.phi;
        const double vp = detail::golden_max([&](double phi) { return f(best.t, phi); },
                                             best.phi - dphi, best.phi + dphi, 1e-10, &arg);
        if (vp > best.value) {
            best.value = vp;
            best.phi = arg;
        }
    }
    return best;
}

} // namespace detail

inline double j3_criterion_sup(const ComplexMatrix& x, std::size_t grid_t = 180,
                               std::size_t grid_phi = 360, std::size_t threads = 0) {
    return detail::criterion_sup_point(x, grid_t, grid_phi, threads).value;
}

// ---------------------------------------------------------------------------
// Membership in the matricial range of the 3x3 Jordan block.
// ---------------------------------------------------------------------------

inline Verdict j3_membership(const ComplexMatrix& x, std::size_t trials = 2000,
                             std::uint64_t seed = 0) {
    if (!x.is_square()) throw DimensionMismatch("j3_membership requires a square matrix");
    Verdict v;

    // (1) sufficient: XX* + X*X <= I.
    const double lam = lambda_max(ccl(x));
    if (lam <= 1.0 + 1e-9) {
        v.status = MemberStatus::Member;
        v.certificate = SufficientCcl{lam};
        return v;
    }

    // Semidefiniteness of Re X / Im X makes the sup criterion decisive in
    // both directions, so it refines the certificate of branch (2) as well.
    const ComplexMatrix re = x.herm_re(), im = x.herm_im();
    std::string pattern;
    if (psd_check(re).psd)
        pattern = "Re>=0";
    else if (psd_check(re * cplx(-1.0)).psd)
        pattern = "Re<=0";
    else if (psd_check(im).psd)
        pattern = "Im>=0";
    else if (psd_check(im * cplx(-1.0)).psd)
        pattern = "Im<=0";

    // (2) necessary criterion violated: sup ||alpha X + beta X*|| > 1.
    const detail::SupPoint sup = detail::criterion_sup_point(x, 180, 360);
    if (sup.value > 1.0 + 1e-6) {
        v.status = MemberStatus::NonMember;
        if (!pattern.empty()) {
            v.certificate = SignedCase{pattern, sup.value};
        } else {
            const cplx alpha(std::cos(sup.t), 0.0);
            const cplx beta = std::sin(sup.t) * std::exp(cplx(0.0, sup.phi));
            v.certificate = CriterionViolation{alpha, beta, sup.value - 1.0};
        }
        return v;
    }

    // (3) semidefinite real or imaginary part: the criterion decides Member.
    if (!pattern.empty()) {
        v.status = MemberStatus::Member; // sup <= 1 + 1e-6 here
        v.certificate = SignedCase{pattern, sup.value};
        return v;
    }

    // (4) honest fallback: sampling evidence only, never a Member label.
    const std::size_t probe_size = std::min<std::size_t>(x.rows(), 4);
    const ProbeReport rep =
        implication_probe(jordan_block(3), x, probe_size, trials, seed);
    v.status = MemberStatus::Inconclusive;
    v.certificate = ProbeEvidence{rep.tested, rep.violations.size()};
    return v;
}

// ---------------------------------------------------------------------------
// Reduction of a 4x4 normal to diag(lambda, -1, i, -i) with Re(lambda) >= 0
// by an invertible affine map z -> a + b z + c conj(z).
// ---------------------------------------------------------------------------

enum class ReductionCase { ReducingSubspace, GeneralPosition };

inline const char* to_string(ReductionCase c) {
    return c == ReductionCase::ReducingSubspace ? "ReducingSubspace" : "GeneralPosition";
}

struct NormalReduction {
    ReductionCase kind = ReductionCase::ReducingSubspace;
    cplx a, b, c, lambda;
    std::array<std::size_t, 4> permutation{}; // input j -> index into (lambda, -1, i, -i)
    bool threshold_inconclusive = false;
};

namespace detail {

inline bool strict_quadrilateral(const std::array<cplx, 4>& z, double tol = 1e-9) {
    const auto cross = [](cplx o, cplx p, cplx q) {
        const cplx u = p - o, v = q - o;
        return u.real() * v.imag() - u.imag() * v.real();
    };
    for (int i = 0; i < 4; ++i) {
        cplx tri[3];
        int t = 0;
        for (int j = 0; j < 4; ++j)
            if (j != i) tri[t++] = z[j];
        const double area = std::abs(cross(tri[0], tri[1], tri[2]));
        if (area < tol) continue; // degenerate triangle cannot contain the point
        const double d1 = cross(tri[0], tri[1], z[i]);
        const double d2 = cross(tri[1], tri[2], z[i]);
        const double d3 = cross(tri[2], tri[0], z[i]);
        const bool has_neg = d1 < -tol * area || d2 < -tol * area || d3 < -tol * area;
        const bool has_pos = d1 > tol * area || d2 > tol * area || d3 > tol * area;
        if (!(has_neg && has_pos)) return false; // inside or on the hull boundary
    }
    return true;
}

inline std::pair<cplx, cplx> reduction_bc(cplx w1, cplx w2, cplx w3) {
    (void)w1;
    const cplx den = w2 * std::conj(w3) - std::conj(w2) * w3;
    const cplx one_pi(1.0, 1.0), one_mi(1.0, -1.0);
    const cplx b = (one_pi * std::conj(w3) - one_mi * std::conj(w2)) / den;
    const cplx c = (one_pi * w3 - one_mi * w2) / (-den);
    return {b, c};
}

} // namespace detail

inline NormalReduction normal4_reduce(const std::array<cplx, 4>& z) {
    NormalReduction out;
    if (!detail::strict_quadrilateral(z)) {
        out.kind = ReductionCase::ReducingSubspace;
        return out;
    }
    const cplx w1 = z[0] - z[3], w2 = z[1] - z[3], w3 = z[2] - z[3];
    if (std::abs(w2 * std::conj(w3) - std::conj(w2) * w3) < 1e-10) {
        // Degenerate denominator: collinear shifted points, a reducing
        // configuration in disguise.
        out.kind = ReductionCase::ReducingSubspace;
        return out;
    }
    auto [b, c] = detail::reduction_bc(w1, w2, w3);
    cplx a = cplx(-1.0) - b * z[3] - c * std::conj(z[3]);
    cplx lam = a + b * z[0] + c * std::conj(z[0]);

    for (int it = 0; it < 6 && lam.real() < -1e-12; ++it) {
        cplx mu, new_w2, new_w3;
        cplx ga, gb; // the linear move g(v) = ga + gb v
        double margin;
        if (lam.imag() >= 0.0) {
            ga = cplx(1.0);
            gb = cplx(0.0, -1.0); // g(v) = 1 - i v
            mu = cplx(1.0) - cplx(0.0, 1.0) * lam;
            new_w2 = cplx(1.0, 1.0);
            new_w3 = cplx(2.0);
            margin = mu.real() + mu.imag() - 2.0;
        } else {
            ga = cplx(1.0);
            gb = cplx(0.0, 1.0); // g(v) = 1 + i v
            mu = cplx(1.0) + cplx(0.0, 1.0) * lam;
            new_w2 = cplx(1.0, -1.0);
            new_w3 = cplx(2.0);
            margin = mu.real() - mu.imag() - 2.0;
        }
        if (std::abs(margin) < 1e-8) out.threshold_inconclusive = true;
        auto [bb, cc] = detail::reduction_bc(mu, new_w2, new_w3);
        const cplx a2 = ga + gb * a, b2 = gb * b, c2 = gb * c;
        a = cplx(-1.0) + bb * a2 + cc * std::conj(a2);
        const cplx b3 = bb * b2 + cc * std::conj(c2);
        const cplx c3 = bb * c2 + cc * std::conj(b2);
        b = b3;
        c = c3;
        lam = a + b * z[0] + c * std::conj(z[0]);
    }
    if (lam.real() < -1e-9) out.threshold_inconclusive = true;

    // Match the four images against the target multiset.
    const cplx targets[4] = {lam, cplx(-1.0), cplx(0.0, 1.0), cplx(0.0, -1.0)};
    bool used[4] = {false, false, false, false};
    for (int j = 0; j < 4; ++j) {
        const cplx img = a + b * z[j] + c * std::conj(z[j]);
        bool matched = false;
        for (int t = 0; t < 4; ++t) {
            if (!used[t] && std::abs(img - targets[t]) <= 1e-8) {
                used[t] = true;
                out.permutation[j] = static_cast<std::size_t>(t);
                matched = true;
                break;
            }
        }
        if (!matched)
            throw NoConvergence(
                "normal4_reduce: image spectrum does not match the target multiset");
    }
    out.kind = ReductionCase::GeneralPosition;
    out.a = a;
    out.b = b;
    out.c = c;
    out.lambda = lam;
    return out;
}

// ---------------------------------------------------------------------------
// Criteria for the operator system of diag(1,-1,i,-i).
// ---------------------------------------------------------------------------

inline std::pair<double, Verdict> cross_cp_criterion(const ComplexMatrix& x,
                                                     std::size_t grid = 720) {
    if (!x.is_square()) throw DimensionMismatch("cross_cp_criterion requires a square matrix");
    if (grid < 64) throw DomainError("cross_cp_criterion: grid must be at least 64");
    const ComplexMatrix re = x.herm_re(), im = x.herm_im();
    const auto f = [&](double phi) { return op_norm(re + im * std::exp(cplx(0.0, phi))); };
    double best = -1.0, best_phi = 0.0;
    const double step = 2.0 * kPi / static_cast<double>(grid);
    for (std::size_t j = 0; j < grid; ++j) {
        const double phi = static_cast<double>(j) * step;
        const double v = f(phi);
        if (v > best) {
            best = v;
            best_phi = phi;
        }
    }
    double arg = best_phi;
    const double refined = detail::golden_max(f, best_phi - step, best_phi + step, 1e-10, &arg);
    if (refined > best) {
        best = refined;
        best_phi = arg;
    }
    Verdict v;
    if (best <= 1.0 + 1e-6) {
        v.status = MemberStatus::Member;
        v.certificate = SufficientCcl{best};
    } else {
        v.status = MemberStatus::NonMember;
        v.certificate = CriterionViolation{cplx(1.0), std::exp(cplx(0.0, best_phi)), best - 1.0};
    }
    return {best, v};
}

// The doubled selfadjoint coupling [[0, 2ReX],[2ImX, 0]].
inline ComplexMatrix ando_tilde(const ComplexMatrix& x) {
    if (!x.is_square()) throw DimensionMismatch("ando_tilde requires a square matrix");
    const std::size_t k = x.rows();
    ComplexMatrix t(2 * k, 2 * k);
    t.set_block(0, k, x.herm_re() * cplx(2.0));
    t.set_block(k, 0, x.herm_im() * cplx(2.0));
    return t;
}

inline double ando_tilde_radius(const ComplexMatrix& x, std::size_t grid = 720) {
    return numerical_radius(ando_tilde(x), grid);
}

// ---------------------------------------------------------------------------
// Numerical-radius factorization: verification and best-effort search.
// ---------------------------------------------------------------------------

struct AndoReport {
    double y_hermitian_residual = 0.0;
    double y_norm = 0.0;
    double z_norm = 0.0;
    double reconstruction_residual = 0.0;
    bool pass = false;
};

inline AndoReport verify_ando_factorization(const ComplexMatrix& t, const ComplexMatrix& y,
                                            const ComplexMatrix& z) {
    if (!t.is_square() || t.rows() != y.rows() || t.rows() != z.rows() || !y.is_square() ||
        !z.is_square())
        throw DimensionMismatch("verify_ando_factorization: incompatible dimensions");
    AndoReport rep;
    rep.y_hermitian_residual = op_norm(y - y.adjoint());
    rep.y_norm = op_norm(y);
    rep.z_norm = op_norm(z);
    const ComplexMatrix yh = y.herm_re();
    const ComplexMatrix id = ComplexMatrix::identity(t.rows());
    const ComplexMatrix sp = psd_sqrt(id + yh);
    const ComplexMatrix sm = psd_sqrt(id - yh);
    rep.reconstruction_residual = op_norm(sp * z * sm - t);
    rep.pass = rep.y_hermitian_residual <= 1e-9 && rep.y_norm <= 1.0 + 1e-9 &&
               rep.z_norm <= 1.0 + 1e-9 && rep.reconstruction_residual <= 1e-8;
    return rep;
}

struct YCertificate {
    bool found = false;
    ComplexMatrix y;
    double lambda_min = 0.0;     // of the certifying block matrix
    std::size_t iterations = 0;
    bool structured = false;     // used the diag(R, -R) slice
};

namespace detail {

inline ComplexMatrix clip_psd(const ComplexMatrix& m) {
    return herm_function(m.herm_re(), [](double v) { return std::max(0.0, v); });
}

struct YSearchOutcome {
    bool converged = false;
    ComplexMatrix y;
    double lambda_min = 0.0;
    std::size_t iterations = 0;
};

inline YSearchOutcome alternating_y(const ComplexMatrix& xt, bool structured, std::size_t cap,
                                    double tol) {
    const std::size_t m = xt.rows();
    const std::size_t k = m / 2;
    const auto slice = [&](const ComplexMatrix& big) {
        const ComplexMatrix h = big.herm_re();
        ComplexMatrix y = (h.block(0, 0, m, m) - h.block(m, m, m, m)) * cplx(0.5);
        y = y.herm_re();
        if (structured) {
            ComplexMatrix r = (y.block(0, 0, k, k) - y.block(k, k, k, k)) * cplx(0.5);
            r = r.herm_re();
            ComplexMatrix sy(m, m);
            sy.set_block(0, 0, r);
            sy.set_block(k, k, r * cplx(-1.0));
            y = std::move(sy);
        }
        ComplexMatrix big2(2 * m, 2 * m);
        const ComplexMatrix id = ComplexMatrix::identity(m);
        big2.set_block(0, 0, id + y);
        big2.set_block(0, m, xt);
        big2.set_block(m, 0, xt.adjoint());
        big2.set_block(m, m, id - y);
        return std::make_pair(big2, y);
    };
    auto [big, y] = slice(ComplexMatrix(2 * m, 2 * m));
    double lm = lambda_min(big);
    std::size_t it = 0;
    for (; it < cap; ++it) {
        const ComplexMatrix p = clip_psd(big);
        auto next = slice(p);
        big = std::move(next.first);
        y = std::move(next.second);
        lm = lambda_min(big);
        if (lm >= -tol) {
            YSearchOutcome out;
            out.converged = true;
            out.y = std::move(y);
            out.lambda_min = lm;
            out.iterations = it + 1;
            return out;
        }
    }
    YSearchOutcome out;
    out.converged = false;
    out.y = std::move(y);
    out.lambda_min = lm;
    out.iterations = it;
    return out;
}

} // namespace detail

inline YCertificate find_Y_certificate(const ComplexMatrix& xt, std::size_t cap = 2000,
                                       double tol = 1e-7, std::size_t grid = 720) {
    if (!xt.is_square()) throw DimensionMismatch("find_Y_certificate requires a square matrix");
    const double w = numerical_radius(xt, grid);
    if (w > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "find_Y_certificate: numerical radius " << w << " exceeds 1";
        throw RadiusExceeded(os.str());
    }
    const std::size_t m = xt.rows();
    bool antidiagonal = (m % 2 == 0) && m > 0;
    if (antidiagonal) {
        const std::size_t k = m / 2;
        antidiagonal = xt.block(0, 0, k, k).max_abs() <= 1e-12 &&
                       xt.block(k, k, k, k).max_abs() <= 1e-12;
    }
    YCertificate cert;
    if (antidiagonal) {
        detail::YSearchOutcome out = detail::alternating_y(xt, /*structured=*/true, cap, tol);
        if (out.converged) {
            cert.found = true;
            cert.structured = true;
            cert.y = std::move(out.y);
            cert.lambda_min = out.lambda_min;
            cert.iterations = out.iterations;
            return cert;
        }
    }
    detail::YSearchOutcome out = detail::alternating_y(xt, /*structured=*/false, cap, tol);
    cert.found = out.converged;
    cert.structured = false;
    cert.y = std::move(out.y);
    cert.lambda_min = out.lambda_min;
    cert.iterations = out.iterations;
    return cert;
}

// Given Y certifying [[I+Y, T],[T*, I-Y]] >= 0, recover the middle
// contraction of the factorization T = (I+Y)^{1/2} Z (I-Y)^{1/2}.
inline ComplexMatrix ando_extract_z(const ComplexMatrix& t, const ComplexMatrix& y) {
    if (!t.is_square() || t.rows() != y.rows() || !y.is_square())
        throw DimensionMismatch("ando_extract_z: incompatible dimensions");
    const ComplexMatrix id = ComplexMatrix::identity(t.rows());
    const ComplexMatrix yh = y.herm_re();
    return psd_pinv_sqrt(id + yh) * t * psd_pinv_sqrt(id - yh);
}

struct Lemma77Data {
    ComplexMatrix r, c1, c2;
};

inline Lemma77Data lemma77_extract(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (!x.is_square() || y.rows() != 2 * x.rows() || !y.is_square())
        throw DimensionMismatch("lemma77_extract: Y must be twice the size of X");
    const std::size_t k = x.rows();
    Lemma77Data out;
    out.r = y.block(0, 0, k, k).herm_re();
    const ComplexMatrix id = ComplexMatrix::identity(k);
    const ComplexMatrix pp = psd_pinv_sqrt(id + out.r);
    const ComplexMatrix pm = psd_pinv_sqrt(id - out.r);
    out.c1 = pp * (x.herm_re() * cplx(2.0)) * pp;
    out.c2 = pm * (x.herm_im() * cplx(2.0)) * pm;
    return out;
}

struct Lemma77Report {
    double residual_re = 0.0;
    double residual_im = 0.0;
    bool pass = false;
};

inline Lemma77Report verify_lemma77(const ComplexMatrix& x, const ComplexMatrix& r,
                                    const ComplexMatrix& c1, const ComplexMatrix& c2) {
    if (!x.is_square() || x.rows() != r.rows() || x.rows() != c1.rows() || x.rows() != c2.rows())
        throw DimensionMismatch("verify_lemma77: incompatible dimensions");
    const double scale_tol = 1e-9;
    for (const ComplexMatrix* m : {&r, &c1, &c2}) {
        if (!m->is_hermitian(scale_tol * (1.0 + m->max_abs())))
            throw NonHermitianInput("verify_lemma77 requires Hermitian R, C1, C2");
        if (op_norm(*m) > 1.0 + 1e-9)
            throw DomainError("verify_lemma77 requires contractions R, C1, C2");
    }
    const std::size_t k = x.rows();
    const ComplexMatrix id = ComplexMatrix::identity(k);
    const ComplexMatrix sp = psd_sqrt((id + r.herm_re()) * cplx(0.5));
    const ComplexMatrix sm = psd_sqrt((id - r.herm_re()) * cplx(0.5));
    Lemma77Report rep;
    rep.residual_re = op_norm(sp * c1 * sp - x.herm_re());
    rep.residual_im = op_norm(sm * c2 * sm - x.herm_im());
    rep.pass = rep.residual_re <= 1e-8 && rep.residual_im <= 1e-8;
    return rep;
}

// ---------------------------------------------------------------------------
// Contractivity checks and witness search on elements aI + bT + cT*.
// ---------------------------------------------------------------------------

struct ContractivityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
};

inline ContractivityReport contractivity_check(const ComplexMatrix& t, const ComplexMatrix& x,
                                               cplx a, cplx b, cplx c, bool re_im_form = false) {
    if (!t.is_square() || !x.is_square())
        throw DimensionMismatch("contractivity_check requires square matrices");
    const auto element = [&](const ComplexMatrix& m) {
        const ComplexMatrix id = ComplexMatrix::identity(m.rows());
        if (re_im_form) return id * a + m.herm_re() * b + m.herm_im() * c;
        return id * a + m * b + m.adjoint() * c;
    };
    ContractivityReport rep;
    rep.lhs = op_norm(element(x));
    rep.rhs = op_norm(element(t));
    rep.ok = rep.lhs <= rep.rhs + 1e-9;
    return rep;
}

struct WitnessSearchResult {
    bool found = false;
    cplx a, b, c;
    double lhs = 0.0;
    double rhs = 0.0;
    double excess = 0.0; // (lhs - rhs) at unit coefficient norm
    std::size_t attempts = 0;
};

inline WitnessSearchResult noncontractive_witness_search(const ComplexMatrix& t,
                                                         const ComplexMatrix& x,
                                                         std::size_t trials = 200,
                                                         std::uint64_t seed = 0) {
    if (!t.is_square() || !x.is_square())
        throw DimensionMismatch("noncontractive_witness_search requires square matrices");
    WitnessSearchResult res;
    const auto margin = [&](cplx a, cplx b, cplx c, double* lhs_out, double* rhs_out) {
        const double nrm =
            std::sqrt(std::norm(a) + std::norm(b) + std::norm(c));
        if (nrm < 1e-300) return -1.0;
        a /= nrm;
        b /= nrm;
        c /= nrm;
        const ContractivityReport rep = contractivity_check(t, x, a, b, c);
        if (lhs_out) *lhs_out = rep.lhs;
        if (rhs_out) *rhs_out = rep.rhs;
        return rep.lhs - rep.rhs;
    };
    const auto accept = [&](cplx a, cplx b, cplx c) {
        double lhs = 0.0, rhs = 0.0;
        const double m = margin(a, b, c, &lhs, &rhs);
        ++res.attempts;
        if (m >= 1e-6) {
            const double nrm = std::sqrt(std::norm(a) + std::norm(b) + std::norm(c));
            res.found = true;
            res.a = a / nrm;
            res.b = b / nrm;
            res.c = c / nrm;
            res.lhs = lhs;
            res.rhs = rhs;
            res.excess = m;
            return true;
        }
        return false;
    };

    // The explicit large-coefficient families, smallest exponents first.
    for (int n = 1; n <= 3; ++n)
        if (accept(cplx(1.0), cplx(std::pow(10.0, 5.0 * n)), cplx(std::pow(10.0, n)))) return res;
    for (int m = 0; m <= 3; ++m)
        if (accept(cplx(1.0), cplx(5.0 * std::pow(10.0, 2.0 * m)),
                   cplx(5.0 * std::pow(10.0, m) - 2.0)))
            return res;

    // Random multi-start local ascent at unit coefficient norm.
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Rng rng(derive_seed(seed, trial));
        cplx a = rng.cgaussian(), b = rng.cgaussian(), c = rng.cgaussian();
        double cur = margin(a, b, c, nullptr, nullptr);
        for (double sigma : {0.3, 0.1, 0.03, 0.01}) {
            for (int step = 0; step < 25; ++step) {
                const cplx an = a + sigma * rng.cgaussian();
                const cplx bn = b + sigma * rng.cgaussian();
                const cplx cn = c + sigma * rng.cgaussian();
                const double cand = margin(an, bn, cn, nullptr, nullptr);
                if (cand > cur) {
                    cur = cand;
                    a = an;
                    b = bn;
                    c = cn;
                }
            }
        }
        if (accept(a, b, c)) return res;
    }
    res.found = false;
    return res;
}

// ---------------------------------------------------------------------------
// Randomized probe of the equivalence conjecture for the Jordan-3 system.
// ---------------------------------------------------------------------------

struct ConjectureReport {
    std::size_t tested = 0;
    std::vector<ProbeViolation> violations;
};

inline ConjectureReport conjecture_probe(const ComplexMatrix& x, std::size_t trials = 1000,
                                         std::uint64_t seed = 0) {
    if (!x.is_square()) throw DimensionMismatch("conjecture_probe requires a square matrix");
    const double sup = j3_criterion_sup(x);
    if (sup > 1.0 + 1e-6) {
        std::ostringstream os;
        os << "conjecture_probe: criterion sup " << sup
           << " exceeds 1; the conjecture premise is empty for this input";
        throw PreconditionVacuous(os.str());
    }
    ConjectureReport rep;
    for (std::size_t kidx = 0; kidx < trials; ++kidx) {
        Rng rng(derive_seed(seed, kidx));
        const std::size_t n = 2 + (kidx / 2) % 3;
        const ComplexMatrix b =
            (kidx % 2 == 0) ? sample_ccl_sub(n, rng) : sample_ccl_equality(n, rng);
        ++rep.tested;
        const PsdResult p = psd_check(assemble_unital(b, x));
        if (p.lambda_min < -1e-7) rep.violations.push_back(ProbeViolation{b, p.lambda_min});
    }
    return rep;
}

} // namespace matrange
