#ifndef WTC_MAT_HPP
#define WTC_MAT_HPP

#include "wtc/rat.hpp"
#include <cassert>
#include <cstddef>
#include <vector>

namespace wtc {

// Dense rectangular matrix over a field type T (Rat or CycloElem).
template <class T>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a((size_t)r * c) {}
    Mat(int r, int c, const T& fill) : rows(r), cols(c), a((size_t)r * c, fill) {}

    T& at(int i, int j) { return a[(size_t)i * cols + j]; }
    const T& at(int i, int j) const { return a[(size_t)i * cols + j]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = T(1);
        return m;
    }

    bool operator==(const Mat& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    Mat transpose() const {
        Mat t(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
        return t;
    }
};

template <class T>
Mat<T> operator*(const Mat<T>& x, const Mat<T>& y) {
    assert(x.cols == y.rows);
    Mat<T> z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const T& v = x.at(i, k);
            if (v == T(0)) continue;
            for (int j = 0; j < y.cols; ++j) z.at(i, j) += v * y.at(k, j);
        }
    return z;
}

template <class T>
Mat<T> operator+(const Mat<T>& x, const Mat<T>& y) {
    assert(x.rows == y.rows && x.cols == y.cols);
    Mat<T> z = x;
    for (size_t i = 0; i < z.a.size(); ++i) z.a[i] += y.a[i];
    return z;
}

template <class T>
Mat<T> operator-(const Mat<T>& x, const Mat<T>& y) {
    assert(x.rows == y.rows && x.cols == y.cols);
    Mat<T> z = x;
    for (size_t i = 0; i < z.a.size(); ++i) z.a[i] -= y.a[i];
    return z;
}

template <class T>
Mat<T> operator*(const T& s, const Mat<T>& x) {
    Mat<T> z = x;
    for (auto& v : z.a) v = s * v;
    return z;
}

template <class T>
std::vector<T> operator*(const Mat<T>& x, const std::vector<T>& v) {
    assert((int)v.size() == x.cols);
    std::vector<T> w(x.rows, T(0));
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j)
            if (!(x.at(i, j) == T(0))) w[i] += x.at(i, j) * v[j];
    return w;
}

template <class T>
struct RrefResult {
    int rank = 0;
    std::vector<int> pivots;           // pivot column per pivot row
    Mat<T> reduced;
    std::vector<std::vector<T>> kernel; // basis of the right null space
};

// Gauss-Jordan over a field. Pivot choice is the first nonzero in the
// column (deterministic); rationals gain nothing fancier at these sizes.
template <class T>
RrefResult<T> rref(const Mat<T>& m) {
    RrefResult<T> res;
    res.reduced = m;
    Mat<T>& r = res.reduced;
    int prow = 0;
    for (int col = 0; col < m.cols && prow < m.rows; ++col) {
        int sel = -1;
        for (int i = prow; i < m.rows; ++i)
            if (!(r.at(i, col) == T(0))) { sel = i; break; }
        if (sel < 0) continue;
        if (sel != prow)
            for (int j = 0; j < m.cols; ++j) std::swap(r.at(sel, j), r.at(prow, j));
        T inv = T(1) / r.at(prow, col);
        for (int j = col; j < m.cols; ++j) r.at(prow, j) = inv * r.at(prow, j);
        for (int i = 0; i < m.rows; ++i) {
            if (i == prow) continue;
            T f = r.at(i, col);
            if (f == T(0)) continue;
            for (int j = col; j < m.cols; ++j) r.at(i, j) -= f * r.at(prow, j);
        }
        res.pivots.push_back(col);
        ++prow;
    }
    res.rank = prow;
    // kernel basis from the free columns
    std::vector<char> ispiv(m.cols, 0);
    for (int c : res.pivots) ispiv[c] = 1;
    for (int fc = 0; fc < m.cols; ++fc) {
        if (ispiv[fc]) continue;
        std::vector<T> v(m.cols, T(0));
        v[fc] = T(1);
        for (int pr = 0; pr < res.rank; ++pr) v[res.pivots[pr]] = -r.at(pr, fc);
        res.kernel.push_back(std::move(v));
    }
    return res;
}

template <class T>
int mat_rank(const Mat<T>& m) { return rref(m).rank; }

// Solve A x = b; returns false when inconsistent. When the system is
// underdetermined, free variables are set to zero.
template <class T>
bool solve_linear(const Mat<T>& A, const std::vector<T>& b, std::vector<T>& x) {
    assert((int)b.size() == A.rows);
    Mat<T> aug(A.rows, A.cols + 1);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, A.cols) = b[i];
    }
    auto rr = rref(aug);
    for (int c : rr.pivots)
        if (c == A.cols) return false;
    x.assign(A.cols, T(0));
    for (int pr = 0; pr < rr.rank; ++pr)
        x[rr.pivots[pr]] = rr.reduced.at(pr, A.cols);
    return true;
}

template <class T>
bool invert(const Mat<T>& m, Mat<T>& out) {
    assert(m.rows == m.cols);
    int n = m.rows;
    if (n == 0) {
        out = Mat<T>(0, 0);
        return true;
    }
    Mat<T> aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = T(1);
    }
    auto rr = rref(aug);
    if (rr.rank < n || rr.pivots[n - 1] != n - 1) return false;
    out = Mat<T>(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) = rr.reduced.at(i, n + j);
    return true;
}

template <class T>
T trace(const Mat<T>& m) {
    T t(0);
    for (int i = 0; i < m.rows; ++i) t += m.at(i, i);
    return t;
}

template <class T>
T det(const Mat<T>& m) {
    assert(m.rows == m.cols);
    Mat<T> r = m;
    int n = m.rows;
    T d(1);
    for (int col = 0; col < n; ++col) {
        int sel = -1;
        for (int i = col; i < n; ++i)
            if (!(r.at(i, col) == T(0))) { sel = i; break; }
        if (sel < 0) return T(0);
        if (sel != col) {
            for (int j = 0; j < n; ++j) std::swap(r.at(sel, j), r.at(col, j));
            d = -d;
        }
        d = d * r.at(col, col);
        T inv = T(1) / r.at(col, col);
        for (int i = col + 1; i < n; ++i) {
            T f = inv * r.at(i, col);
            if (f == T(0)) continue;
            for (int j = col; j < n; ++j) r.at(i, j) -= f * r.at(col, j);
        }
    }
    return d;
}

// Characteristic polynomial coefficients c_0..c_n of det(XI - m), monic,
// by the Faddeev-LeVerrier recursion (valid in characteristic zero).
template <class T>
std::vector<T> charpoly_coeffs(const Mat<T>& m) {
    assert(m.rows == m.cols);
    int n = m.rows;
    std::vector<T> c(n + 1, T(0));
    c[n] = T(1);
    Mat<T> M = Mat<T>::identity(n);
    for (int k = 1; k <= n; ++k) {
        Mat<T> AM = m * M;
        T t = trace(AM);
        T ck = -(T(1) / T(k)) * t;
        c[n - k] = ck;
        M = AM;
        for (int i = 0; i < n; ++i) M.at(i, i) += ck;
    }
    return c;
}

} // namespace wtc

#endif
