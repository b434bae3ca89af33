#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "matrange/errors.hpp"
#include "matrange/matrix.hpp"

namespace matrange {

// Built-in matrices used by the fixture suite and the CLI.  Each id names the
// matrix by the role it plays in the worked examples shipped with the tool.

namespace detail {

inline ComplexMatrix diag_matrix(const std::vector<cplx>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

// Compression of the 3x3 Jordan block to the span of two real orthonormal
// vectors u, v: entries <J3 u, u>, <J3 v, u>, <J3 u, v>, <J3 v, v>.
inline ComplexMatrix jordan3_compression(const double (&u)[3], const double (&v)[3]) {
    const auto pair = [](const double (&p)[3], const double (&q)[3]) {
        // <J3 p, q> with J3 p = (p2, p3, 0).
        return cplx(p[1] * q[0] + p[2] * q[1], 0.0);
    };
    ComplexMatrix x(2, 2);
    x(0, 0) = pair(u, u);
    x(0, 1) = pair(v, u);
    x(1, 0) = pair(u, v);
    x(1, 1) = pair(v, v);
    return x;
}

} // namespace detail

inline std::vector<std::string> named_matrix_ids() {
    return {"j2",      "j3",      "jn:k",    "ex2.13-X", "ex2.13-B", "ex2.14-T",
            "ex4.9-B", "ex4.10-B", "ex5.9-X", "ex7.9-T",  "ex7.9-X",  "ex8.4-T",
            "ex8.4-B", "ex8.6-T", "n4"};
}

inline ComplexMatrix named_matrix(const std::string& id) {
    if (id == "j2") return jordan_block(2);
    if (id == "j3") return jordan_block(3);
    if (id.rfind("jn:", 0) == 0) {
        const std::string tail = id.substr(3);
        if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
            throw DomainError("named_matrix: jn:k needs a positive integer k");
        const unsigned long k = std::stoul(tail);
        if (k == 0 || k > 64) throw DomainError("named_matrix: jn:k supports 1 <= k <= 64");
        return jordan_block(static_cast<std::size_t>(k));
    }
    if (id == "ex2.13-X") return ComplexMatrix{{0.0, 1.0}, {1.0 / 3.0, 0.0}};
    if (id == "ex2.13-B") return ComplexMatrix{{0.0, 0.97}, {0.22, 0.0}};
    if (id == "ex2.14-T")
        return detail::diag_matrix({cplx(0.5), cplx(0.5), cplx(-0.5), cplx(-0.5)});
    if (id == "ex4.9-B") {
        const double s3 = std::sqrt(3.0);
        ComplexMatrix b(3, 3);
        b(0, 2) = 1.0 / s3;
        b(1, 0) = std::sqrt(2.0 / 3.0);
        b(2, 1) = 1.0 / s3;
        return b;
    }
    if (id == "ex4.10-B") {
        const double s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
        ComplexMatrix b(3, 3);
        b(0, 0) = cplx(0.0, 1.0 / s3);
        b(0, 2) = 1.0 / s6;
        b(1, 1) = 1.0 / s3;
        b(1, 2) = cplx(0.0, 1.0 / s6);
        b(2, 0) = 1.0 / s6;
        b(2, 1) = cplx(0.0, 1.0 / s6);
        return b;
    }
    if (id == "ex5.9-X") {
        const double s3 = std::sqrt(3.0);
        const double u[3] = {-1.0 / s3, -1.0 / std::sqrt(6.0), 1.0 / std::sqrt(2.0)};
        const double v[3] = {-1.0 / std::sqrt(6.0), (1.0 + 3.0 * s3) / (4.0 * s3),
                             (s3 - 1.0) / 4.0};
        return detail::jordan3_compression(u, v);
    }
    if (id == "ex7.9-T")
        return detail::diag_matrix({cplx(0.5), cplx(-1.0), cplx(0.0, 1.0), cplx(0.0, -1.0)});
    if (id == "ex7.9-X") {
        ComplexMatrix x(2, 2);
        x(0, 0) = 0.25;
        x(0, 1) = cplx(0.0, 0.4);
        x(1, 0) = cplx(0.0, 0.4);
        x(1, 1) = -1.0 / std::sqrt(2.0);
        return x;
    }
    if (id == "ex8.4-T") {
        ComplexMatrix t(3, 3);
        t(0, 1) = 1.0;
        t(1, 2) = 2.0;
        return t;
    }
    if (id == "ex8.4-B") {
        ComplexMatrix b(3, 3);
        b(1, 0) = 0.25;
        b(2, 1) = 0.5;
        return b;
    }
    if (id == "ex8.6-T") {
        const auto root = [](double num) { return std::exp(cplx(0.0, num * kPi / 3.0)); };
        return detail::diag_matrix({root(1.0), root(2.0), root(4.0), root(5.0)});
    }
    if (id == "n4")
        return detail::diag_matrix({cplx(1.0), cplx(-1.0), cplx(0.0, 1.0), cplx(0.0, -1.0)});
    throw DomainError("named_matrix: unknown id '" + id + "'");
}

} // namespace matrange
