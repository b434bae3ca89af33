#pragma once

#include <functional>
#include <vector>

#include "matrange/eig.hpp"
#include "matrange/matrix.hpp"

namespace matrange {

namespace detail {

// Golden-section refinement of a maximum on [a, b]; returns the best value
// seen anywhere (bracket endpoints included), so a non-unimodal profile can
// only improve on the grid value, never lose it.
inline double golden_max(const std::function<double(double)>& f, double a, double b,
                         double width_tol, double* arg_out = nullptr) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    double best = std::max(fc, fd);
    double arg = fc >= fd ? c : d;
    while (b - a > width_tol) {
        if (fc < fd) {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
            if (fd > best) { best = fd; arg = d; }
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
            if (fc > best) { best = fc; arg = c; }
        }
    }
    if (arg_out) *arg_out = arg;
    return best;
}

} // namespace detail

// Support function of the numerical range at angle theta:
// h(theta) = lambda_max(Re(e^{i theta} T)).
inline double support_value(const ComplexMatrix& t, double theta) {
    if (!t.is_square()) throw DimensionMismatch("support_value requires a square matrix");
    const cplx ph(std::cos(theta), std::sin(theta));
    return lambda_max((t * ph).herm_re());
}

// Sampled support function with its refined maximum.
struct SupportProfile {
    std::vector<double> angles;
    std::vector<double> values;
    double refined_theta = 0.0;
    double refined_max = 0.0;
};

inline SupportProfile support_profile(const ComplexMatrix& t, std::size_t grid) {
    if (grid < 64) throw DomainError("support_profile: grid must be >= 64");
    SupportProfile p;
    p.angles.resize(grid);
    p.values.resize(grid);
    std::size_t kmax = 0;
    for (std::size_t k = 0; k < grid; ++k) {
        p.angles[k] = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(grid);
        p.values[k] = support_value(t, p.angles[k]);
        if (p.values[k] > p.values[kmax]) kmax = k;
    }
    const double step = 2.0 * kPi / static_cast<double>(grid);
    const double a = p.angles[kmax] - step;
    const double b = p.angles[kmax] + step;
    double arg = p.angles[kmax];
    const double refined = detail::golden_max(
        [&](double th) { return support_value(t, th); }, a, b, 1e-10, &arg);
    p.refined_max = std::max(refined, p.values[kmax]);
    p.refined_theta = refined >= p.values[kmax] ? arg : p.angles[kmax];
    return p;
}

// Numerical radius w(T) = max over theta of the support function, refined
// by golden section to bracket width 1e-10.
inline double numerical_radius(const ComplexMatrix& t, std::size_t grid = 720) {
    return support_profile(t, grid).refined_max;
}

// Support-dominance inclusion test: W(X) inside closure W(T) iff the
// support gap g(theta) = h_T(theta) - h_X(theta) is >= -1e-9 everywhere.
// The worst grid angle is refined before deciding.
struct InclusionResult {
    bool included = false;
    double margin = 0.0; // min over theta of the support gap
    double worst_theta = 0.0;
};

inline InclusionResult range_inclusion(const ComplexMatrix& x, const ComplexMatrix& t,
                                       std::size_t grid = 720) {
    if (grid < 64) throw DomainError("range_inclusion: grid must be >= 64");
    const auto gap = [&](double th) { return support_value(t, th) - support_value(x, th); };
    double worst = gap(0.0);
    double worst_theta = 0.0;
    const double step = 2.0 * kPi / static_cast<double>(grid);
    for (std::size_t k = 1; k < grid; ++k) {
        const double th = step * static_cast<double>(k);
        const double g = gap(th);
        if (g < worst) { worst = g; worst_theta = th; }
    }
    double arg = worst_theta;
    const double refined = -detail::golden_max(
        [&](double th) { return -gap(th); }, worst_theta - step, worst_theta + step, 1e-10, &arg);
    InclusionResult r;
    r.margin = std::min(worst, refined);
    r.worst_theta = refined <= worst ? arg : worst_theta;
    r.included = r.margin >= -1e-9;
    return r;
}

// Boundary points of the numerical range: for each angle, the point
// <T f, f> where f is the top eigenvector of Re(e^{i theta} T).
struct BoundaryPoint {
    double theta;
    cplx point;
};

inline std::vector<BoundaryPoint> boundary_points(const ComplexMatrix& t, std::size_t m) {
    if (!t.is_square()) throw DimensionMismatch("boundary_points requires a square matrix");
    if (m < 8) throw DomainError("boundary_points: need at least 8 angles");
    std::vector<BoundaryPoint> pts;
    pts.reserve(m);
    const std::size_t n = t.rows();
    for (std::size_t k = 0; k < m; ++k) {
        const double theta = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(m);
        const cplx ph(std::cos(theta), std::sin(theta));
        const HermEigResult e = herm_eig((t * ph).herm_re());
        // Top eigenvector  = last column (ascending order).
        cplx val = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx tf = 0.0;
            for (std::size_t j = 0; j < n; ++j) tf += t(i, j) * e.eigenvectors(j, n - 1);
            val += std::conj(e.eigenvectors(i, n - 1)) * tf;
        }
        pts.push_back(BoundaryPoint{theta, val});
    }
    return pts;
}

} // namespace matrange
