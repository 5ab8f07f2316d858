#pragma once

#include <cstddef>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "detbounds/polynomial.hpp"
#include "detbounds/rational.hpp"

namespace detbounds {

/// Square matrix stored row-major. Order is at least 1.
template <typename T>
class DenseMatrix {
public:
    using value_type = T;

    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n, const T& fill = T(0)) : n_(n), data_(n * n, fill) {
        if (n == 0) throw Error("matrix order must be at least 1");
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }
    /// J: every entry one.
    static DenseMatrix ones(std::size_t n) { return DenseMatrix(n, T(1)); }
    /// U: ones strictly above the diagonal.
    static DenseMatrix strictly_upper(std::size_t n) {
        DenseMatrix m(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) m(i, j) = T(1);
        return m;
    }

    [[nodiscard]] std::size_t order() const { return n_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    [[nodiscard]] DenseMatrix transpose() const {
        DenseMatrix t(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    template <typename F>
    [[nodiscard]] auto map(F&& f) const {
        using U = decltype(f(std::declval<const T&>()));
        DenseMatrix<U> m(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) m(i, j) = f((*this)(i, j));
        return m;
    }

    [[nodiscard]] DenseMatrix principal_submatrix(const std::vector<std::size_t>& idx) const {
        DenseMatrix m(idx.size());
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = 0; b < idx.size(); ++b) m(a, b) = (*this)(idx[a], idx[b]);
        return m;
    }

    [[nodiscard]] T trace() const {
        T t(0);
        for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

    DenseMatrix& operator+=(const DenseMatrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    DenseMatrix& operator-=(const DenseMatrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
    friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }

    template <typename S>
    friend DenseMatrix operator*(const S& s, DenseMatrix a) {
        for (auto& x : a.data_) x = s * x;
        return a;
    }

    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
        a.check_same(b);
        const std::size_t n = a.n_;
        DenseMatrix c(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const T& aik = a(i, k);
                if (aik == T(0)) continue;
                for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) { return a.n_ == b.n_ && a.data_ == b.data_; }

private:
    void check_same(const DenseMatrix& o) const {
        if (o.n_ != n_) throw Error("matrix orders differ");
    }

    std::size_t n_ = 0;
    std::vector<T> data_;
};

using RationalMatrix = DenseMatrix<Rational>;
using PolyMatrix = DenseMatrix<EpsPolynomial>;

/// Fraction-free (Bareiss) determinant of an integer matrix.
inline BigInt det_bareiss(DenseMatrix<BigInt> a) {
    const std::size_t n = a.order();
    int sgn = 1;
    BigInt prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(p, j));
            sgn = -sgn;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
            }
        }
        prev = a(k, k);
    }
    return sgn < 0 ? BigInt(-a(n - 1, n - 1)) : a(n - 1, n - 1);
}

/// Exact determinant: rows are scaled to integers, then Bareiss elimination.
inline Rational det_rational(const RationalMatrix& m) {
    const std::size_t n = m.order();
    DenseMatrix<BigInt> a(n);
    BigInt scale = 1;
    for (std::size_t i = 0; i < n; ++i) {
        BigInt row_den = 1;
        for (std::size_t j = 0; j < n; ++j) row_den = lcm(row_den, denom(m(i, j)));
        for (std::size_t j = 0; j < n; ++j) a(i, j) = numer(m(i, j)) * (row_den / denom(m(i, j)));
        scale *= row_den;
    }
    return Rational(det_bareiss(std::move(a)), scale);
}

/// Instantiates a polynomial matrix at a rational point.
inline RationalMatrix evaluate(const PolyMatrix& m, const Rational& x) {
    return m.map([&](const EpsPolynomial& p) { return p(x); });
}

/// Symbolic determinant by exact evaluation at deg+1 integer points followed
/// by Newton interpolation. deg is bounded by the sum of the row degrees.
inline EpsPolynomial det_symbolic(const PolyMatrix& m) {
    const std::size_t n = m.order();
    std::size_t bound = 0;
    for (std::size_t i = 0; i < n; ++i) {
        int row = 0;
        for (std::size_t j = 0; j < n; ++j) row = std::max(row, m(i, j).degree());
        bound += static_cast<std::size_t>(row);
    }
    std::vector<Rational> xs(bound + 1);
    std::vector<Rational> table(bound + 1);
    for (std::size_t k = 0; k <= bound; ++k) {
        xs[k] = Rational(static_cast<long>(k));
        table[k] = det_rational(evaluate(m, xs[k]));
    }
    // divided differences in place
    for (std::size_t level = 1; level <= bound; ++level)
        for (std::size_t k = bound; k >= level; --k)
            table[k] = (table[k] - table[k - 1]) / (xs[k] - xs[k - level]);
    EpsPolynomial result = EpsPolynomial::constant(table[bound]);
    for (std::size_t k = bound; k-- > 0;) {
        result = result * EpsPolynomial::linear_root(xs[k]) + EpsPolynomial::constant(table[k]);
    }
    return result;
}

/// Max over rows of the sum of absolute values (the infinity norm).
inline Rational max_row_abs_sum(const RationalMatrix& m) {
    Rational best = 0;
    for (std::size_t i = 0; i < m.order(); ++i) {
        Rational s = 0;
        for (std::size_t j = 0; j < m.order(); ++j) s += abs(m(i, j));
        if (i == 0 || s > best) best = s;
    }
    return best;
}

// Text format: first line "n", then n rows of whitespace-separated rationals.

inline RationalMatrix read_matrix(std::istream& in) {
    long n = 0;
    if (!(in >> n) || n < 1) throw ParseError("matrix text must start with a positive order");
    RationalMatrix m(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            std::string tok;
            if (!(in >> tok)) throw ParseError("matrix text ended early");
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = parse_rational(tok);
        }
    return m;
}

inline RationalMatrix parse_matrix(const std::string& text) {
    std::istringstream in(text);
    return read_matrix(in);
}

inline std::string format_matrix(const RationalMatrix& m) {
    std::string s = std::to_string(m.order()) + "\n";
    for (std::size_t i = 0; i < m.order(); ++i) {
        for (std::size_t j = 0; j < m.order(); ++j) {
            if (j != 0) s += ' ';
            s += to_string(m(i, j));
        }
        s += '\n';
    }
    return s;
}

}  // namespace detbounds
