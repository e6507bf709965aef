#pragma once

#include "nilinv/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace nilinv {

/// Dense matrix of exact rationals, row-major. Immutable in spirit: all
/// operations return fresh values.
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    /// Row-major initializer, e.g. Mat::from_rows({{0,-1},{1,0}}).
    static Mat from_rows(std::initializer_list<std::initializer_list<long long>> rows) {
        Mat m(rows.size(), rows.size() ? rows.begin()->size() : 0);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != m.cols_) throw std::invalid_argument("Mat::from_rows: ragged rows");
            std::size_t j = 0;
            for (long long v : row) m.at(i, j++) = Rational(v);
            ++i;
        }
        return m;
    }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Rational& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Rational trace() const {
        require_square("trace");
        Rational t;
        for (std::size_t i = 0; i < rows_; ++i) t += at(i, i);
        return t;
    }

    Mat transpose() const {
        Mat t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }

    bool is_skew() const {
        if (!is_square()) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j <= i; ++j)
                if (at(i, j) != -at(j, i)) return false;
        return true;
    }

    Mat& operator+=(const Mat& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    Mat& operator*=(const Rational& c) {
        for (auto& x : a_) x *= c;
        return *this;
    }
    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(Mat a, const Rational& c) { return a *= c; }
    friend Mat operator*(const Rational& c, Mat a) { return a *= c; }
    Mat operator-() const { return *this * Rational(-1); }

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }
    friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

private:
    void require_square(const char* what) const {
        if (!is_square()) throw std::invalid_argument(std::string("Mat: not square in ") + what);
    }
    void require_same_shape(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("Mat: shape mismatch");
    }

    std::size_t rows_, cols_;
    std::vector<Rational> a_;
};

/// Exact product; throws on inner-dimension mismatch.
inline Mat mat_mul(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: dimension mismatch");
    Mat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Rational& aik = a.at(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                const Rational& bkj = b.at(k, j);
                if (!bkj.is_zero()) c.at(i, j) += aik * bkj;
            }
        }
    return c;
}

/// Tr(m1 * m2 * ... * mk), exact. All matrices square of equal dimension.
inline Rational trace_product(std::span<const Mat> ms) {
    if (ms.empty()) throw std::invalid_argument("trace_product: empty list");
    const std::size_t n = ms.front().rows();
    for (const Mat& m : ms)
        if (!m.is_square() || m.rows() != n)
            throw std::invalid_argument("trace_product: dimension mismatch");
    if (ms.size() == 1) return ms.front().trace();
    Mat acc = ms[0];
    for (std::size_t i = 1; i + 1 < ms.size(); ++i) acc = mat_mul(acc, ms[i]);
    // trace of acc * last, without forming the product
    const Mat& last = ms.back();
    Rational t;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const Rational& x = acc.at(i, k);
            if (!x.is_zero()) t += x * last.at(k, i);
        }
    return t;
}

inline Rational trace_product(std::initializer_list<Mat> ms) {
    std::vector<Mat> v(ms);
    return trace_product(std::span<const Mat>(v));
}

/// Monic characteristic polynomial det(lambda*I - A) by the
/// Faddeev-LeVerrier recursion, exact over the rationals.
/// Returns coefficients in descending powers: [1, c1, ..., cn] with
/// p(lambda) = lambda^n + c1 lambda^(n-1) + ... + cn.
inline std::vector<Rational> char_poly(const Mat& a) {
    if (!a.is_square()) throw std::invalid_argument("char_poly: not square");
    const std::size_t n = a.rows();
    std::vector<Rational> c(n + 1);
    c[0] = 1;
    Mat m = Mat::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        if (k > 1) {
            // M_k = A*M_{k-1} + c_{k-1} I
            m = mat_mul(a, m);
            for (std::size_t i = 0; i < n; ++i) m.at(i, i) += c[k - 1];
        }
        Rational t; // Tr(A * M_k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const Rational& x = a.at(i, j);
                if (!x.is_zero()) t += x * m.at(j, i);
            }
        c[k] = -t / Rational(static_cast<long long>(k));
    }
    return c;
}

/// Exact inverse by Gauss-Jordan elimination; throws if singular.
inline Mat inverse(const Mat& a) {
    if (!a.is_square()) throw std::invalid_argument("inverse: not square");
    const std::size_t n = a.rows();
    Mat w = a, inv = Mat::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && w.at(piv, col).is_zero()) ++piv;
        if (piv == n) throw std::domain_error("inverse: singular matrix");
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(w.at(piv, j), w.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        const Rational d = w.at(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            w.at(col, j) /= d;
            inv.at(col, j) /= d;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || w.at(i, col).is_zero()) continue;
            const Rational f = w.at(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                w.at(i, j) -= f * w.at(col, j);
                inv.at(i, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

} // namespace nilinv
