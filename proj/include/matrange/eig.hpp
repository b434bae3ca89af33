#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "matrange/matrix.hpp"

namespace matrange {

// Eigendecomposition of a Hermitian matrix: H = V diag(values) V*,
// eigenvalues ascending, eigenvector columns orthonormal.
struct HermEigResult {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

namespace detail {

inline double off_diagonal_mass(const ComplexMatrix& h) {
    double s = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (i != j) s += std::norm(h(i, j));
    return std::sqrt(s);
}

} // namespace detail

// Cyclic complex Jacobi eigensolver. Each sweep annihilates every
// off-diagonal entry once with a phased Givens rotation; convergence
// target is off-diagonal Frobenius mass below 1e-12 * ||H||_F within a
// 50-sweep budget. Deterministic: column phases are fixed so the entry
// of largest modulus in each eigenvector is real positive.
inline HermEigResult herm_eig(ComplexMatrix h) {
    if (!h.is_square()) throw DimensionMismatch("herm_eig requires a square matrix");
    const std::size_t n = h.rows();
    const double scale = h.frobenius_norm();
    {
        ComplexMatrix asym = h - h.adjoint();
        if (asym.frobenius_norm() > 1e-10 * (1.0 + scale))
            throw NonHermitianInput("herm_eig: input asymmetry " +
                                    std::to_string(asym.frobenius_norm()) +
                                    " exceeds 1e-10*(1+||H||)");
    }
    // Symmetrize exactly so rounding noise cannot accumulate.
    h = h.herm_re();

    ComplexMatrix v = ComplexMatrix::identity(n);
    if (n > 1) {
        const double target = 1e-12 * scale;
        bool converged = (detail::off_diagonal_mass(h) <= target) || scale == 0.0;
        const int max_sweeps = 50;
        for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
            bool any_rotation = false;
            for (std::size_t p = 0; p + 1 < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    const cplx apq = h(p, q);
                    const double mag = std::abs(apq);
                    if (mag <= 1e-18 * (1.0 + std::abs(h(p, p)) + std::abs(h(q, q))))
                        continue;
                    any_rotation = true;
                    // Phase removal makes the 2x2 pivot real symmetric; then a
                    // standard real Jacobi rotation annihilates it.
                    const cplx phase = apq / mag;
                    const double app = h(p, p).real();
                    const double aqq = h(q, q).real();
                    const double tau = (aqq - app) / (2.0 * mag);
                    const double t =
                        (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;
                    // Unitary plane rotation U: columns p,q mix with
                    // U(p,p)=c, U(q,p)=-s*conj(phase), U(p,q)=s*phase? derived:
                    // first D = diag(1, conj(phase)) makes pivot real, then
                    // real rotation J = [[c, s], [-s, c]]; U = D*J on (p,q).
                    const cplx upp = c;
                    const cplx upq = s;
                    const cplx uqp = -s * std::conj(phase);
                    const cplx uqq = c * std::conj(phase);
                    // H <- U* H U (rows then columns), V <- V U.
                    for (std::size_t j = 0; j < n; ++j) {
                        const cplx hp = h(p, j), hq = h(q, j);
                        h(p, j) = std::conj(upp) * hp + std::conj(uqp) * hq;
                        h(q, j) = std::conj(upq) * hp + std::conj(uqq) * hq;
                    }
                    for (std::size_t i = 0; i < n; ++i) {
                        const cplx hp = h(i, p), hq = h(i, q);
                        h(i, p) = hp * upp + hq * uqp;
                        h(i, q) = hp * upq + hq * uqq;
                        const cplx vp = v(i, p), vq = v(i, q);
                        v(i, p) = vp * upp + vq * uqp;
                        v(i, q) = vp * upq + vq * uqq;
                    }
                    // The rotation annihilates the pivot pair exactly.
                    h(p, q) = 0.0;
                    h(q, p) = 0.0;
                }
            }
            // A sweep with every pivot under the skip threshold cannot make
            // further progress; the remaining mass is at the rounding floor.
            converged = detail::off_diagonal_mass(h) <= target || !any_rotation;
        }
        if (!converged)
            throw NoConvergence("herm_eig: off-diagonal mass " +
                                std::to_string(detail::off_diagonal_mass(h)) +
                                " above 1e-12*||H||_F after 50 sweeps");
    }

    HermEigResult r;
    r.eigenvalues.resize(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = h(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    r.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        r.eigenvalues[j] = d[src];
        // Deterministic phase: largest-modulus entry made real positive.
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = std::abs(v(i, src));
            if (m > best) { best = m; arg = i; }
        }
        cplx ph(1.0, 0.0);
        if (best > 0.0) ph = std::conj(v(arg, src)) / std::abs(v(arg, src));
        for (std::size_t i = 0; i < n; ++i) r.eigenvectors(i, j) = v(i, src) * ph;
    }
    return r;
}

inline double lambda_max(const ComplexMatrix& h) {
    const HermEigResult e = herm_eig(h);
    return e.eigenvalues.empty() ? 0.0 : e.eigenvalues.back();
}

inline double lambda_min(const ComplexMatrix& h) {
    const HermEigResult e = herm_eig(h);
    return e.eigenvalues.empty() ? 0.0 : e.eigenvalues.front();
}

// Operator (spectral) norm = largest singular value = sqrt(lambda_max(A*A)).
inline double op_norm(const ComplexMatrix& a) {
    if (a.empty()) return 0.0;
    const ComplexMatrix g = a.adjoint() * a;
    const double lm = lambda_max(g);
    return std::sqrt(std::max(0.0, lm));
}

// PSD verdict with quantitative margin: true iff
// lambda_min(H) >= -tol * (1 + ||H||). The margin (lambda_min) is always
// reported so callers can exclude boundary bands.
struct PsdResult {
    bool psd = false;
    double lambda_min = 0.0;
};

inline PsdResult psd_check(const ComplexMatrix& h, double tol = 1e-9) {
    const HermEigResult e = herm_eig(h);
    PsdResult r;
    r.lambda_min = e.eigenvalues.empty() ? 0.0 : e.eigenvalues.front();
    const double lmax = e.eigenvalues.empty() ? 0.0 : e.eigenvalues.back();
    const double norm = std::max(std::abs(r.lambda_min), std::abs(lmax));
    r.psd = r.lambda_min >= -tol * (1.0 + norm);
    return r;
}

// Rebuild f(H) = V f(diag) V* for a Hermitian H given entrywise map f.
template <typename F>
inline ComplexMatrix herm_function(const ComplexMatrix& h, F&& f) {
    const HermEigResult e = herm_eig(h);
    const std::size_t n = h.rows();
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double fv = f(e.eigenvalues[k]);
        if (fv == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += fv * e.eigenvectors(i, k) * std::conj(e.eigenvectors(j, k));
    }
    return out;
}

// PSD square root; small negative eigenvalues are clamped to zero.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& h) {
    return herm_function(h, [](double x) { return std::sqrt(std::max(0.0, x)); });
}

// Pseudo-inverse square root of a PSD matrix: eigenvalues below tol map to 0.
inline ComplexMatrix psd_pinv_sqrt(const ComplexMatrix& h, double tol = 1e-9) {
    return herm_function(h, [tol](double x) { return x > tol ? 1.0 / std::sqrt(x) : 0.0; });
}

// Polar decomposition B = U |B| with U unitary (kernel completed
// deterministically) and |B| Hermitian PSD.
struct PolarResult {
    ComplexMatrix unitary_factor;
    ComplexMatrix modulus;
};

namespace detail {

// Twice-applied modified Gram-Schmidt of v against the columns in basis;
// returns false when the residual is (numerically) zero.
inline bool mgs_orthonormalize(std::vector<cplx>& v, const std::vector<std::vector<cplx>>& basis,
                               double drop_tol) {
    const std::size_t n = v.size();
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& w : basis) {
            cplx ip = 0.0;
            for (std::size_t i = 0; i < n; ++i) ip += std::conj(w[i]) * v[i];
            for (std::size_t i = 0; i < n; ++i) v[i] -= ip * w[i];
        }
    }
    double nn = 0.0;
    for (const cplx& x : v) nn += std::norm(x);
    nn = std::sqrt(nn);
    if (nn <= drop_tol) return false;
    for (cplx& x : v) x /= nn;
    return true;
}

} // namespace detail

inline PolarResult polar_decompose(const ComplexMatrix& b) {
    if (!b.is_square()) throw DimensionMismatch("polar_decompose requires a square matrix");
    const std::size_t n = b.rows();
    const HermEigResult e = herm_eig(b.adjoint() * b);
    std::vector<double> sigma(n);
    for (std::size_t i = 0; i < n; ++i) sigma[i] = std::sqrt(std::max(0.0, e.eigenvalues[i]));
    const double smax = n ? sigma.back() : 0.0;

    ComplexMatrix modulus(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (sigma[k] == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                modulus(i, j) += sigma[k] * e.eigenvectors(i, k) * std::conj(e.eigenvectors(j, k));
    }

    // Image vectors u_k = B v_k / sigma_k, built in descending-sigma order
    // and re-orthonormalized for robustness at close singular values.
    std::vector<std::vector<cplx>> used;
    ComplexMatrix u_of(n, n); // column k (ascending index) holds u for v_k
    std::vector<std::size_t> kernel_idx;
    const double sig_tol = 1e-10 * (1.0 + smax);
    for (std::size_t d = 0; d < n; ++d) {
        const std::size_t k = n - 1 - d; // descending sigma
        if (sigma[k] > sig_tol) {
            std::vector<cplx> u(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                cplx s = 0.0;
                for (std::size_t j = 0; j < n; ++j) s += b(i, j) * e.eigenvectors(j, k);
                u[i] = s / sigma[k];
            }
            if (!detail::mgs_orthonormalize(u, used, 1e-12))
                throw NoConvergence("polar_decompose: degenerate image vector");
            used.push_back(u);
            for (std::size_t i = 0; i < n; ++i) u_of(i, k) = u[i];
        } else {
            kernel_idx.push_back(k);
        }
    }
    // Deterministic kernel completion: remaining orthonormal directions are
    // taken from the standard basis in index order; they span ker B*, and the
    // kernel eigenvectors of |B| (in ascending eigenvalue order) map onto
    // them in order.
    std::sort(kernel_idx.begin(), kernel_idx.end());
    std::size_t next = 0;
    for (std::size_t e_i = 0; e_i < n && next < kernel_idx.size(); ++e_i) {
        std::vector<cplx> u(n, 0.0);
        u[e_i] = 1.0;
        if (!detail::mgs_orthonormalize(u, used, 1e-6)) continue;
        used.push_back(u);
        const std::size_t k = kernel_idx[next++];
        for (std::size_t i = 0; i < n; ++i) u_of(i, k) = u[i];
    }
    if (next < kernel_idx.size())
        throw NoConvergence("polar_decompose: kernel completion failed");

    ComplexMatrix u(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                u(i, j) += u_of(i, k) * std::conj(e.eigenvectors(j, k));

    return PolarResult{u, modulus};
}

// Singular values of A, ascending (via eigenvalues of A*A).
inline std::vector<double> singular_values(const ComplexMatrix& a) {
    const HermEigResult e = herm_eig(a.adjoint() * a);
    std::vector<double> s(e.eigenvalues.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sqrt(std::max(0.0, e.eigenvalues[i]));
    return s;
}

// Numerical rank at an absolute singular-value threshold.
inline std::size_t rank_at(const ComplexMatrix& a, double threshold) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    // Work with the smaller Gram matrix side.
    const ComplexMatrix g =
        (a.rows() >= a.cols()) ? a.adjoint() * a : a * a.adjoint();
    const HermEigResult e = herm_eig(g);
    std::size_t r = 0;
    for (double lam : e.eigenvalues)
        if (std::sqrt(std::max(0.0, lam)) > threshold) ++r;
    return r;
}

} // namespace matrange
