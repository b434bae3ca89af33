#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "matrange/eig.hpp"
#include "matrange/matrix.hpp"

namespace matrange {

// Classification of extreme points of S = {(B1,B2) Hermitian : B1^2+B2^2 <= I}
// and constructive non-extremeness witnesses.

enum class ExtremeKind { E1, E2, NotExtreme, Inconclusive };

inline const char* to_string(ExtremeKind k) {
    switch (k) {
        case ExtremeKind::E1: return "E1";
        case ExtremeKind::E2: return "E2";
        case ExtremeKind::NotExtreme: return "NotExtreme";
        case ExtremeKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct HermitianPair {
    ComplexMatrix first;
    ComplexMatrix second;
};

struct WitnessPair {
    HermitianPair c;
    HermitianPair d;
    double t = 0.0; // perturbation scale actually used
};

struct ExtremeVerdict {
    ExtremeKind kind = ExtremeKind::Inconclusive;
    std::size_t k = 0;                  // E2 block size; 0 when absent
    ComplexMatrix basis;                // unitary; columns sorted ones-first (descending eigenvalues)
    std::vector<double> eigenvalues;    // of B1^2+B2^2, descending
    std::optional<WitnessPair> witness; // present for NotExtreme
    std::vector<double> offending;      // band-ambiguous eigenvalues (Inconclusive)
    ComplexMatrix stacked;              // [X1|X2] in the reported basis (when interior nonempty)
    std::vector<double> stacked_singular_values;
};

namespace detail {

struct ExtremePartition {
    std::vector<double> lam;  // descending
    ComplexMatrix q;          // matching eigenvector columns
    std::vector<std::size_t> ones, zeros, interior;
    std::vector<double> offending;
};

inline ExtremePartition partition_spectrum(const ComplexMatrix& b1, const ComplexMatrix& b2,
                                           bool relaxed) {
    const ComplexMatrix m = b1 * b1 + b2 * b2;
    const HermEigResult eig = herm_eig(m);
    const std::size_t n = b1.rows();
    ExtremePartition part;
    part.lam.resize(n);
    part.q = ComplexMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = n - 1 - i; // descending
        part.lam[i] = eig.eigenvalues[src];
        for (std::size_t r = 0; r < n; ++r) part.q(r, i) = eig.eigenvectors(r, src);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double mu = part.lam[i];
        if (std::abs(mu - 1.0) <= 1e-8) {
            part.ones.push_back(i);
        } else if (relaxed ? (mu <= 1e-6) : (std::abs(mu) <= 1e-8)) {
            part.zeros.push_back(i);
        } else if (relaxed ? (mu < 1.0 - 1e-8) : (mu >= 1e-6 && mu <= 1.0 - 1e-6)) {
            part.interior.push_back(i);
        } else {
            part.offending.push_back(mu);
        }
    }
    return part;
}

inline void require_inputs(const ComplexMatrix& b1, const ComplexMatrix& b2) {
    if (!b1.is_square() || b1.rows() != b2.rows() || b1.cols() != b2.cols())
        throw DimensionMismatch("extreme classification requires same-size square matrices");
    if (!b1.is_hermitian(1e-10 * (1.0 + b1.max_abs())) ||
        !b2.is_hermitian(1e-10 * (1.0 + b2.max_abs())))
        throw NonHermitianInput("extreme classification requires Hermitian inputs");
}

// Orthonormal (Frobenius) basis of Hermitian k x k matrices: diagonal units,
// then for a < b the symmetric and antisymmetric off-diagonal pairs.
inline std::vector<ComplexMatrix> hermitian_basis(std::size_t k) {
    std::vector<ComplexMatrix> basis;
    const double inv_rt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a; b < k; ++b) {
            if (a == b) {
                ComplexMatrix e(k, k);
                e(a, a) = 1.0;
                basis.push_back(std::move(e));
            } else {
                ComplexMatrix s(k, k);
                s(a, b) = inv_rt2;
                s(b, a) = inv_rt2;
                basis.push_back(std::move(s));
                ComplexMatrix w(k, k);
                w(a, b) = cplx(0.0, inv_rt2);
                w(b, a) = cplx(0.0, -inv_rt2);
                basis.push_back(std::move(w));
            }
        }
    return basis;
}

inline bool witness_feasible(const ComplexMatrix& b1, const ComplexMatrix& b2,
                             const ComplexMatrix& p1, const ComplexMatrix& p2, double t) {
    const ComplexMatrix c1 = b1 + p1 * cplx(t), c2 = b2 + p2 * cplx(t);
    const ComplexMatrix d1 = b1 - p1 * cplx(t), d2 = b2 - p2 * cplx(t);
    return lambda_max(c1 * c1 + c2 * c2) <= 1.0 && lambda_max(d1 * d1 + d2 * d2) <= 1.0;
}

inline WitnessPair bisect_witness(const ComplexMatrix& b1, const ComplexMatrix& b2,
                                  const ComplexMatrix& p1, const ComplexMatrix& p2) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (witness_feasible(b1, b2, p1, p2, mid))
            lo = mid;
        else
            hi = mid;
    }
    if (lo <= 1e-9)
        throw WitnessFailure("nonextreme witness: no feasible perturbation scale found");
    WitnessPair w;
    w.t = lo;
    w.c = HermitianPair{(b1 + p1 * cplx(lo)).herm_re(), (b2 + p2 * cplx(lo)).herm_re()};
    w.d = HermitianPair{(b1 - p1 * cplx(lo)).herm_re(), (b2 - p2 * cplx(lo)).herm_re()};
    return w;
}

inline WitnessPair build_witness(const ComplexMatrix& b1, const ComplexMatrix& b2,
                                 const ExtremePartition& part) {
    const std::size_t n = b1.rows();
    if (!part.zeros.empty()) {
        // Case I: perturb along a kernel vector q (B1 q = B2 q = 0), so both
        // endpoints stay feasible up to t = 1 in exact arithmetic.
        const std::size_t zi = part.zeros.back(); // smallest eigenvalue
        ComplexMatrix p1(n, n);
        const double inv_rt2 = 1.0 / std::sqrt(2.0);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                p1(r, c) = inv_rt2 * part.q(r, zi) * std::conj(part.q(c, zi));
        return bisect_witness(b1, b2, p1, p1);
    }

    // Case II: a Hermitian pair (E1, E2) in the interior block annihilating
    // the coupling X1 E1 + X2 E2 = 0.
    const std::size_t k = part.interior.size();
    if (k == 0) throw WitnessFailure("nonextreme witness: no kernel and no interior block");
    const ComplexMatrix b1p = part.q.adjoint() * b1 * part.q;
    const ComplexMatrix b2p = part.q.adjoint() * b2 * part.q;
    const std::size_t m = part.ones.size();
    const std::vector<ComplexMatrix> basis = hermitian_basis(k);
    const std::size_t nb = basis.size(); // k^2

    std::vector<double> coeff(2 * nb, 0.0);
    if (m == 0) {
        coeff[0] = 1.0; // unconstrained: first basis element, E2 = 0
    } else {
        ComplexMatrix x1(m, k), x2(m, k);
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < k; ++c) {
                x1(r, c) = b1p(part.ones[r], part.interior[c]);
                x2(r, c) = b2p(part.ones[r], part.interior[c]);
            }
        // Realified constraint matrix: columns indexed by (which, basis
        // element), rows by the real/imag entries of the m x k image.
        const std::size_t rows = 2 * m * k, cols = 2 * nb;
        std::vector<double> a(rows * cols, 0.0);
        for (std::size_t which = 0; which < 2; ++which)
            for (std::size_t e = 0; e < nb; ++e) {
                const ComplexMatrix img = (which == 0 ? x1 : x2) * basis[e];
                const std::size_t col = which * nb + e;
                std::size_t row = 0;
                for (std::size_t r = 0; r < m; ++r)
                    for (std::size_t c = 0; c < k; ++c) a[(row++) * cols + col] = img(r, c).real();
                for (std::size_t r = 0; r < m; ++r)
                    for (std::size_t c = 0; c < k; ++c) a[(row++) * cols + col] = img(r, c).imag();
            }
        // Smallest right-singular vector via the Gram matrix.
        ComplexMatrix gram(cols, cols);
        for (std::size_t i = 0; i < cols; ++i)
            for (std::size_t j = i; j < cols; ++j) {
                double s = 0.0;
                for (std::size_t r = 0; r < rows; ++r) s += a[r * cols + i] * a[r * cols + j];
                gram(i, j) = s;
                gram(j, i) = s;
            }
        const HermEigResult ge = herm_eig(gram);
        const double sigma_min = std::sqrt(std::max(0.0, ge.eigenvalues.front()));
        if (sigma_min > 1e-7)
            throw WitnessFailure(
                "nonextreme witness: constraint null space is empty (the point appears extreme)");
        for (std::size_t i = 0; i < cols; ++i) coeff[i] = ge.eigenvectors(i, 0).real();
    }

    ComplexMatrix e1(k, k), e2(k, k);
    for (std::size_t i = 0; i < nb; ++i) {
        e1 += basis[i] * cplx(coeff[i]);
        e2 += basis[i] * cplx(coeff[nb + i]);
    }
    ComplexMatrix p1(n, n), p2(n, n);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) {
            p1(part.interior[r], part.interior[c]) = e1(r, c);
            p2(part.interior[r], part.interior[c]) = e2(r, c);
        }
    p1 = (part.q * p1 * part.q.adjoint()).herm_re();
    p2 = (part.q * p2 * part.q.adjoint()).herm_re();
    return bisect_witness(b1, b2, p1, p2);
}

} // namespace detail

// Soundness check used by tests and by the classifier before attaching a
// witness: midpoint, distinctness, and feasibility.
inline bool verify_witness(const ComplexMatrix& b1, const ComplexMatrix& b2,
                           const WitnessPair& w) {
    const double mid1 = ((w.c.first + w.d.first) * cplx(0.5) - b1).max_abs();
    const double mid2 = ((w.c.second + w.d.second) * cplx(0.5) - b2).max_abs();
    if (mid1 > 1e-10 || mid2 > 1e-10) return false;
    const double df = std::hypot((w.c.first - w.d.first).frobenius_norm(),
                                 (w.c.second - w.d.second).frobenius_norm());
    if (df < 1e-6) return false;
    const double f1 = lambda_max(w.c.first * w.c.first + w.c.second * w.c.second);
    const double f2 = lambda_max(w.d.first * w.d.first + w.d.second * w.d.second);
    return f1 <= 1.0 + 1e-9 && f2 <= 1.0 + 1e-9;
}

inline ExtremeVerdict classify_extreme(const ComplexMatrix& b1, const ComplexMatrix& b2) {
    detail::require_inputs(b1, b2);
    const double lam = lambda_max(b1 * b1 + b2 * b2);
    if (lam > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "classify_extreme: lambda_max(B1^2+B2^2) = " << lam << " exceeds 1";
        throw ConstraintViolated(os.str());
    }
    const std::size_t n = b1.rows();
    detail::ExtremePartition part = detail::partition_spectrum(b1, b2, /*relaxed=*/false);

    ExtremeVerdict v;
    v.basis = part.q;
    v.eigenvalues = part.lam;

    // Stacked coupling block [X1|X2] and its singular values, whenever an
    // interior block exists (used for the E2 rank test and for reporting).
    const std::size_t k = part.interior.size();
    const std::size_t m = part.ones.size();
    if (k > 0) {
        const ComplexMatrix b1p = part.q.adjoint() * b1 * part.q;
        const ComplexMatrix b2p = part.q.adjoint() * b2 * part.q;
        ComplexMatrix s(m, 2 * k);
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < k; ++c) {
                s(r, c) = b1p(part.ones[r], part.interior[c]);
                s(r, k + c) = b2p(part.ones[r], part.interior[c]);
            }
        v.stacked = s;
        v.stacked_singular_values = (m > 0) ? singular_values(s) : std::vector<double>{};
    }

    if (!part.offending.empty()) {
        v.kind = ExtremeKind::Inconclusive;
        v.offending = part.offending;
        return v;
    }
    if (part.ones.size() == n) {
        v.kind = ExtremeKind::E1;
        return v;
    }
    if (part.zeros.empty() && k > 0) {
        std::size_t rank = 0;
        for (double s : v.stacked_singular_values)
            if (s > 1e-7) ++rank;
        if (rank == 2 * k) {
            v.kind = ExtremeKind::E2;
            v.k = k;
            return v;
        }
    }
    v.kind = ExtremeKind::NotExtreme;
    WitnessPair w = detail::build_witness(b1, b2, part);
    if (!verify_witness(b1, b2, w))
        throw WitnessFailure("classify_extreme: constructed witness failed verification");
    v.witness = std::move(w);
    return v;
}

inline WitnessPair nonextreme_witness(const ComplexMatrix& b1, const ComplexMatrix& b2) {
    detail::require_inputs(b1, b2);
    const ExtremeVerdict v = classify_extreme(b1, b2);
    if (v.kind == ExtremeKind::E1 || v.kind == ExtremeKind::E2)
        throw DomainError("nonextreme_witness: the point classifies as extreme (" +
                          std::string(to_string(v.kind)) + ")");
    if (v.kind == ExtremeKind::NotExtreme && v.witness) return *v.witness;
    // Inconclusive: best-effort with relaxed bands.
    detail::ExtremePartition part = detail::partition_spectrum(b1, b2, /*relaxed=*/true);
    WitnessPair w = detail::build_witness(b1, b2, part);
    if (!verify_witness(b1, b2, w))
        throw WitnessFailure("nonextreme_witness: constructed witness failed verification");
    return w;
}

} // namespace matrange
