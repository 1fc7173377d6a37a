#ifndef WTC_CYCLO_HPP
#define WTC_CYCLO_HPP

#include "wtc/rat.hpp"
#include <string>
#include <utility>

namespace wtc {

// Element of Q(zeta_m) for m in {1,2,3,4,6}, so degree <= 2 over Q.
// Stored as a + b*z with z = zeta_m.  Conductor 2 collapses to 1 since
// zeta_2 = -1 is rational, and any element with b = 0 is renormalized
// to m = 1, so the stored conductor is 1, 3, 4 or 6 and b != 0 whenever
// m > 1.
//
// Reduction rules: m=3: z^2 = -1-z;  m=4: z^2 = -1;  m=6: z^2 = z-1.
// Conjugation:     m=3: zbar = -1-z; m=4: zbar = -z; m=6: zbar = 1-z.
struct CycloElem {
    int m = 1;
    Rat a, b;

    CycloElem() = default;
    CycloElem(int v) : a(v) {}
    CycloElem(long v) : a(v) {}
    CycloElem(const Rat& v) : a(v) {}
    CycloElem(int cond, Rat a_, Rat b_);

    void normalize();
    bool is_zero() const { return a == 0 && b == 0; }
    bool is_rational() const { return m == 1; }

    CycloElem conj() const;
    Rat norm() const;              // this * conj(this), rational
    CycloElem inverse() const;

    bool operator==(const CycloElem& o) const { return m == o.m && a == o.a && b == o.b; }
    bool operator!=(const CycloElem& o) const { return !(*this == o); }

    CycloElem& operator+=(const CycloElem& o);
    CycloElem& operator-=(const CycloElem& o);
    CycloElem& operator*=(const CycloElem& o);
    CycloElem& operator/=(const CycloElem& o);
};

CycloElem operator+(CycloElem x, const CycloElem& y);
CycloElem operator-(CycloElem x, const CycloElem& y);
CycloElem operator-(const CycloElem& x);
CycloElem operator*(CycloElem x, const CycloElem& y);
CycloElem operator/(CycloElem x, const CycloElem& y);

// Primitive m-th root of unity, m in {1,2,3,4,6}.
CycloElem cyclo_zeta(int m);

std::string cyclo_str(const CycloElem& x);
CycloElem cyclo_parse(const std::string& s);

} // namespace wtc

#endif
