#ifndef WTC_POLY_HPP
#define WTC_POLY_HPP

#include "wtc/rat.hpp"
#include "wtc/cyclo.hpp"
#include <cassert>
#include <utility>
#include <vector>

namespace wtc {

// Dense polynomial over a field T, trailing zeros stripped.
template <class T>
struct Poly {
    std::vector<T> c; // c[i] multiplies X^i

    Poly() = default;
    explicit Poly(std::vector<T> coeffs) : c(std::move(coeffs)) { strip(); }
    static Poly constant(const T& v) { return Poly(std::vector<T>{v}); }
    static Poly X() { return Poly(std::vector<T>{T(0), T(1)}); }

    void strip() {
        while (!c.empty() && c.back() == T(0)) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return (int)c.size() - 1; } // -1 for zero
    const T& lead() const { assert(!c.empty()); return c.back(); }
    T coeff(int i) const { return i >= 0 && i < (int)c.size() ? c[i] : T(0); }

    T eval(const T& x) const {
        T v(0);
        for (int i = degree(); i >= 0; --i) v = v * x + c[i];
        return v;
    }

    bool operator==(const Poly& o) const { return c == o.c; }
    bool operator!=(const Poly& o) const { return !(*this == o); }
};

template <class T>
Poly<T> operator+(const Poly<T>& f, const Poly<T>& g) {
    std::vector<T> c(std::max(f.c.size(), g.c.size()), T(0));
    for (size_t i = 0; i < f.c.size(); ++i) c[i] += f.c[i];
    for (size_t i = 0; i < g.c.size(); ++i) c[i] += g.c[i];
    return Poly<T>(std::move(c));
}

template <class T>
Poly<T> operator-(const Poly<T>& f, const Poly<T>& g) {
    std::vector<T> c(std::max(f.c.size(), g.c.size()), T(0));
    for (size_t i = 0; i < f.c.size(); ++i) c[i] += f.c[i];
    for (size_t i = 0; i < g.c.size(); ++i) c[i] -= g.c[i];
    return Poly<T>(std::move(c));
}

template <class T>
Poly<T> operator*(const Poly<T>& f, const Poly<T>& g) {
    if (f.is_zero() || g.is_zero()) return Poly<T>();
    std::vector<T> c(f.c.size() + g.c.size() - 1, T(0));
    for (size_t i = 0; i < f.c.size(); ++i)
        for (size_t j = 0; j < g.c.size(); ++j) c[i + j] += f.c[i] * g.c[j];
    return Poly<T>(std::move(c));
}

template <class T>
Poly<T> operator*(const T& s, const Poly<T>& f) {
    Poly<T> g = f;
    for (auto& v : g.c) v = s * v;
    g.strip();
    return g;
}

template <class T>
std::pair<Poly<T>, Poly<T>> divmod(const Poly<T>& f, const Poly<T>& g) {
    assert(!g.is_zero());
    Poly<T> r = f;
    std::vector<T> q(f.degree() >= g.degree() ? f.degree() - g.degree() + 1 : 0, T(0));
    while (!r.is_zero() && r.degree() >= g.degree()) {
        int k = r.degree() - g.degree();
        T fac = r.lead() / g.lead();
        q[k] = fac;
        for (int i = 0; i <= g.degree(); ++i) r.c[i + k] -= fac * g.c[i];
        r.strip();
    }
    return {Poly<T>(std::move(q)), r};
}

template <class T>
Poly<T> derivative(const Poly<T>& f) {
    if (f.degree() <= 0) return Poly<T>();
    std::vector<T> c(f.degree());
    for (int i = 1; i <= f.degree(); ++i) c[i - 1] = T(i) * f.c[i];
    return Poly<T>(std::move(c));
}

template <class T>
Poly<T> make_monic(const Poly<T>& f) {
    if (f.is_zero()) return f;
    T inv = T(1) / f.lead();
    return inv * f;
}

// Monic gcd via the Euclidean algorithm.
template <class T>
Poly<T> poly_gcd(Poly<T> f, Poly<T> g) {
    while (!g.is_zero()) {
        auto [q, r] = divmod(f, g);
        (void)q;
        f = std::move(g);
        g = std::move(r);
    }
    return make_monic(f);
}

using RatPoly = Poly<Rat>;
using CycloPoly = Poly<CycloElem>;

// --- Rat-specific analysis ------------------------------------------------

// f / gcd(f, f'), monic: same roots, all simple.
RatPoly squarefree_part(const RatPoly& f);

struct RootInterval {
    Rat lo, hi; // lo <= root <= hi; lo == hi for a rational root found exactly
};

// Disjoint isolating intervals for the real roots of a squarefree f,
// in increasing order, via Sturm sequences and rational bisection.
std::vector<RootInterval> isolate_real_roots(const RatPoly& f);

// Number of real roots of squarefree f in (lo, hi].
int sturm_count(const RatPoly& f, const Rat& lo, const Rat& hi);

// Shrink an isolating interval until hi - lo <= width.
RootInterval refine_root(const RatPoly& f, RootInterval iv, const Rat& width);

struct PolyFactor {
    RatPoly factor; // irreducible over Q, monic
    int mult;
};
// Complete factorization into monic irreducibles times a leading unit.
// Degrees in scope are small; beyond cubics a Kronecker-style divisor
// interpolation handles the few remaining cases.
std::vector<PolyFactor> factor_poly(const RatPoly& f);

struct CycloPolyFactor {
    CycloPoly factor;
    int mult;
};
// Factorization over Q(zeta_m) by factoring the rational norm f*conj(f).
// The field is passed explicitly since a rational-coefficient input must
// still split over Q(zeta_m).
std::vector<CycloPolyFactor> factor_poly_cyclo(const CycloPoly& f, int m);

} // namespace wtc

#endif
