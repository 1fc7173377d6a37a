#ifndef WTC_IMAT_HPP
#define WTC_IMAT_HPP

#include "wtc/lattice_forms.hpp"
#include "wtc/mat.hpp"
#include <cassert>
#include <string>
#include <vector>

namespace wtc {

// Small square integer matrix (group elements of GL_n(Z) and the Hecke
// datum a); row-vector convention throughout: vectors act as x * g.
struct IMat {
    int n = 0;
    std::vector<long long> a;

    IMat() = default;
    explicit IMat(int n_) : n(n_), a((size_t)n_ * n_, 0) {}
    long long& at(int i, int j) { return a[(size_t)i * n + j]; }
    long long at(int i, int j) const { return a[(size_t)i * n + j]; }

    static IMat identity(int n) {
        IMat m(n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
    bool operator==(const IMat& o) const { return n == o.n && a == o.a; }
    bool operator!=(const IMat& o) const { return !(*this == o); }
    bool operator<(const IMat& o) const { return a < o.a; }
};

inline IMat operator*(const IMat& x, const IMat& y) {
    assert(x.n == y.n);
    IMat z(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int k = 0; k < x.n; ++k) {
            long long v = x.at(i, k);
            if (!v) continue;
            for (int j = 0; j < x.n; ++j) z.at(i, j) += v * y.at(k, j);
        }
    return z;
}

inline LatVec operator*(const LatVec& x, const IMat& g) {
    assert((int)x.size() == g.n);
    LatVec y(g.n, 0);
    for (int i = 0; i < g.n; ++i) {
        if (!x[i]) continue;
        for (int j = 0; j < g.n; ++j) y[j] += x[i] * g.at(i, j);
    }
    return y;
}

inline long long imat_det(const IMat& m) {
    if (m.n == 1) return m.at(0, 0);
    if (m.n == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    if (m.n == 3)
        return m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) -
               m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0)) +
               m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
    assert(false && "imat_det: n > 3 unsupported");
    return 0;
}

// Inverse of a unimodular matrix (det = +-1), via the adjugate.
inline IMat imat_inverse_unimodular(const IMat& m) {
    long long d = imat_det(m);
    assert(d == 1 || d == -1);
    IMat inv(m.n);
    if (m.n == 1) {
        inv.at(0, 0) = d;
        return inv;
    }
    if (m.n == 2) {
        inv.at(0, 0) = d * m.at(1, 1);
        inv.at(0, 1) = -d * m.at(0, 1);
        inv.at(1, 0) = -d * m.at(1, 0);
        inv.at(1, 1) = d * m.at(0, 0);
        return inv;
    }
    assert(m.n == 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (j + 1) % 3, c1 = (j + 2) % 3;
            // adjugate: cofactor transposed
            inv.at(j, i) = d * (m.at(r0, c0) * m.at(r1, c1) - m.at(r0, c1) * m.at(r1, c0));
        }
    return inv;
}

inline Mat<Rat> imat_to_rat(const IMat& m) {
    Mat<Rat> r(m.n, m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) r.at(i, j) = Rat((long)m.at(i, j));
    return r;
}

inline std::string imat_str(const IMat& m) {
    std::string s = "[";
    for (int i = 0; i < m.n; ++i) {
        if (i) s += ";";
        for (int j = 0; j < m.n; ++j) {
            if (j) s += ",";
            s += std::to_string(m.at(i, j));
        }
    }
    return s + "]";
}

} // namespace wtc

#endif
