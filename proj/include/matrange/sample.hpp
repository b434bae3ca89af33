#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "matrange/eig.hpp"
#include "matrange/matrix.hpp"

namespace matrange {

// Deterministic seed derivation for parallel work: child k of a run seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

// Seeded generator with a fixed, implementation-independent mapping from
// engine output to uniforms and gaussians (std::normal_distribution is
// implementation-defined; Box-Muller here is reproducible everywhere).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1].
    double uniform_open0() { return 1.0 - uniform(); }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open0();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * kPi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    cplx cgaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return cplx(re, im);
    }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

enum class SampleKind { gaussian, unitary, hermitian_contraction, ccl_equality, ccl_sub };

inline SampleKind sample_kind_from_string(const std::string& s) {
    if (s == "gaussian") return SampleKind::gaussian;
    if (s == "unitary") return SampleKind::unitary;
    if (s == "hermitian_contraction") return SampleKind::hermitian_contraction;
    if (s == "ccl_equality") return SampleKind::ccl_equality;
    if (s == "ccl_sub") return SampleKind::ccl_sub;
    throw DomainError("unknown sample kind: " + s);
}

inline ComplexMatrix sample_gaussian(std::size_t n, Rng& rng) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.cgaussian();
    return m;
}

// Haar-like unitary: orthonormalize a complex Gaussian matrix column by
// column (twice-applied Gram-Schmidt). MGS yields positive diagonal in the
// implicit R factor, which fixes the phase ambiguity deterministically.
inline ComplexMatrix sample_unitary(std::size_t n, Rng& rng) {
    const ComplexMatrix g = sample_gaussian(n, rng);
    std::vector<std::vector<cplx>> cols;
    cols.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<cplx> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = g(i, j);
        if (!detail::mgs_orthonormalize(v, cols, 1e-12))
            throw NoConvergence("sample_unitary: degenerate Gaussian draw");
        cols.push_back(std::move(v));
    }
    ComplexMatrix u(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) u(i, j) = cols[j][i];
    return u;
}

inline ComplexMatrix sample_hermitian_contraction(std::size_t n, Rng& rng) {
    ComplexMatrix h = sample_gaussian(n, rng).herm_re();
    const HermEigResult e = herm_eig(h);
    double lam_abs = 0.0;
    for (double x : e.eigenvalues) lam_abs = std::max(lam_abs, std::abs(x));
    const double u = rng.uniform_open0();
    if (lam_abs == 0.0) return h;
    return h * cplx(u / lam_abs, 0.0);
}

// B with BB* + B*B = I exactly (up to rounding): a direct sum of 2x2
// antidiagonal blocks [[0, a],[b, 0]] with |a|^2 + |b|^2 = 1, conjugated by
// a random unitary. Odd dimension appends one 1x1 block with |b| = 1/sqrt(2),
// the scalar boundary case.
inline ComplexMatrix sample_ccl_equality(std::size_t n, Rng& rng) {
    ComplexMatrix d(n, n);
    std::size_t i = 0;
    while (i + 1 < n) {
        const double t = rng.uniform() * (kPi / 2.0);
        const double p1 = rng.uniform() * 2.0 * kPi;
        const double p2 = rng.uniform() * 2.0 * kPi;
        d(i, i + 1) = std::cos(t) * cplx(std::cos(p1), std::sin(p1));
        d(i + 1, i) = std::sin(t) * cplx(std::cos(p2), std::sin(p2));
        i += 2;
    }
    if (i < n) {
        const double p = rng.uniform() * 2.0 * kPi;
        d(i, i) = cplx(std::cos(p), std::sin(p)) / std::sqrt(2.0);
    }
    const ComplexMatrix w = sample_unitary(n, rng);
    return w * d * w.adjoint();
}

// B with lambda_max(BB* + B*B) <= 1: Gaussian normalized onto the boundary,
// then pulled inward by a uniform factor in (0, 1].
inline ComplexMatrix sample_ccl_sub(std::size_t n, Rng& rng) {
    ComplexMatrix g = sample_gaussian(n, rng);
    const double lm = lambda_max(ccl(g));
    if (lm > 0.0) g *= cplx(1.0 / std::sqrt(lm), 0.0);
    const double u = rng.uniform_open0();
    return g * cplx(u, 0.0);
}

inline ComplexMatrix sample(SampleKind kind, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw DomainError("sample: size must be positive");
    Rng rng(seed);
    switch (kind) {
        case SampleKind::gaussian: return sample_gaussian(n, rng);
        case SampleKind::unitary: return sample_unitary(n, rng);
        case SampleKind::hermitian_contraction: return sample_hermitian_contraction(n, rng);
        case SampleKind::ccl_equality: return sample_ccl_equality(n, rng);
        case SampleKind::ccl_sub: return sample_ccl_sub(n, rng);
    }
    throw DomainError("unknown sample kind");
}

} // namespace matrange
