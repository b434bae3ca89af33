#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "matrange/errors.hpp"

namespace matrange {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Dense row-major complex matrix. The universal carrier for every
// matrix-valued quantity in the toolkit. Constructors reject non-finite
// entries; all sizes are expected to stay desk-scale (n <= ~200).
class ComplexMatrix {
  public:
    ComplexMatrix() : rows_(0), cols_(0) {}

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cplx(0.0, 0.0)) {}

    // Row-major construction from a nested initializer list.
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw DimensionMismatch("ragged initializer list for ComplexMatrix");
            for (const cplx& v : r) a_.push_back(check_finite(v));
        }
    }

    static ComplexMatrix zero(std::size_t rows, std::size_t cols) {
        return ComplexMatrix(rows, cols);
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(const std::vector<cplx>& d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = check_finite(d[i]);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool empty() const { return a_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<cplx>& data() const { return a_; }
    std::vector<cplx>& data() { return a_; }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o, "operator+=");
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o, "operator-=");
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }

    ComplexMatrix& operator*=(cplx s) {
        for (cplx& v : a_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_)
            throw DimensionMismatch("matrix product: " + shape_str(a) + " * " + shape_str(b));
        ComplexMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        }
        return c;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    ComplexMatrix conj() const {
        ComplexMatrix m(*this);
        for (cplx& v : m.a_) v = std::conj(v);
        return m;
    }

    cplx trace() const {
        require_square("trace");
        cplx t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cplx& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    bool all_finite() const {
        for (const cplx& v : a_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    bool is_hermitian(double tol) const {
        if (!is_square()) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
        return true;
    }

    // Hermitian part (A + A*)/2.
    ComplexMatrix herm_re() const {
        require_square("herm_re");
        return ((*this) + adjoint()) * cplx(0.5, 0.0);
    }

    // Skew part mapped to Hermitian: (A - A*)/(2i).
    ComplexMatrix herm_im() const {
        require_square("herm_im");
        return ((*this) - adjoint()) * (cplx(0.0, -0.5));
    }

    ComplexMatrix block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const {
        if (i0 + r > rows_ || j0 + c > cols_)
            throw DimensionMismatch("block exceeds matrix bounds");
        ComplexMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = (*this)(i0 + i, j0 + j);
        return m;
    }

    void set_block(std::size_t i0, std::size_t j0, const ComplexMatrix& m) {
        if (i0 + m.rows_ > rows_ || j0 + m.cols_ > cols_)
            throw DimensionMismatch("set_block exceeds matrix bounds");
        for (std::size_t i = 0; i < m.rows_; ++i)
            for (std::size_t j = 0; j < m.cols_; ++j) (*this)(i0 + i, j0 + j) = m(i, j);
    }

    ComplexMatrix column(std::size_t j) const { return block(0, j, rows_, 1); }

    // Rebuilds the matrix keeping only the selected columns, in order.
    ComplexMatrix select_columns(const std::vector<std::size_t>& idx) const {
        ComplexMatrix m(rows_, idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j)
            for (std::size_t i = 0; i < rows_; ++i) m(i, j) = (*this)(i, idx[j]);
        return m;
    }

  private:
    static cplx check_finite(cplx v) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DomainError("non-finite matrix entry");
        return v;
    }

    static std::string shape_str(const ComplexMatrix& m) {
        return std::to_string(m.rows_) + "x" + std::to_string(m.cols_);
    }

    void require_same_shape(const ComplexMatrix& o, const char* what) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw DimensionMismatch(std::string(what) + ": " + shape_str(*this) + " vs " +
                                    shape_str(o));
    }

    void require_square(const char* what) const {
        if (!is_square())
            throw DimensionMismatch(std::string(what) + " requires a square matrix");
    }

    std::size_t rows_, cols_;
    std::vector<cplx> a_;
};

// Kronecker product. Result dimensions are capped so desk-scale misuse
// fails fast instead of exhausting memory.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                          std::size_t cap = 4096) {
    const std::size_t r = a.rows() * b.rows();
    const std::size_t c = a.cols() * b.cols();
    if (r > cap || c > cap)
        throw DimensionOverflow("kron result " + std::to_string(r) + "x" + std::to_string(c) +
                                " exceeds cap " + std::to_string(cap));
    ComplexMatrix m(r, c);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0, 0.0)) continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    m(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    return m;
}

inline ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), a.cols(), b);
    return m;
}

// Jordan nilpotent block of size n: ones on the superdiagonal.
inline ComplexMatrix jordan_block(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = 1.0;
    return m;
}

// BB* + B*B, the central constraint quantity.
inline ComplexMatrix ccl(const ComplexMatrix& b) {
    const ComplexMatrix bs = b.adjoint();
    return b * bs + bs * b;
}

} // namespace matrange
