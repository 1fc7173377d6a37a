#include "wtc/cyclo.hpp"
#include <stdexcept>

namespace wtc {

CycloElem::CycloElem(int cond, Rat a_, Rat b_) : m(cond), a(std::move(a_)), b(std::move(b_)) {
    if (m == 2) { m = 1; a -= b; b = 0; } // zeta_2 = -1
    normalize();
}

void CycloElem::normalize() {
    if (m == 1 && b != 0) throw std::invalid_argument("conductor 1 with nonzero z part");
    if (b == 0) m = 1;
}

static void promote(CycloElem& x, CycloElem& y) {
    if (x.m == y.m) return;
    if (x.m == 1) { x.m = y.m; return; }
    if (y.m == 1) { y.m = x.m; return; }
    throw std::invalid_argument("mixed cyclotomic conductors");
}

CycloElem& CycloElem::operator+=(const CycloElem& o) {
    CycloElem y = o;
    promote(*this, y);
    a += y.a;
    b += y.b;
    normalize();
    return *this;
}

CycloElem& CycloElem::operator-=(const CycloElem& o) {
    CycloElem y = o;
    promote(*this, y);
    a -= y.a;
    b -= y.b;
    normalize();
    return *this;
}

CycloElem& CycloElem::operator*=(const CycloElem& o) {
    CycloElem y = o;
    promote(*this, y);
    // (a1 + b1 z)(a2 + b2 z) = a1a2 + (a1b2 + a2b1) z + b1b2 z^2
    Rat p = a * y.a, q = a * y.b + y.a * b, r = b * y.b;
    switch (m) {
        case 1: a = p; b = q; break;          // r = 0 here
        case 3: a = p - r; b = q - r; break;  // z^2 = -1 - z
        case 4: a = p - r; b = q; break;      // z^2 = -1
        case 6: a = p - r; b = q + r; break;  // z^2 = z - 1
        default: throw std::invalid_argument("bad conductor");
    }
    normalize();
    return *this;
}

CycloElem CycloElem::conj() const {
    CycloElem c = *this;
    switch (m) {
        case 1: break;
        case 3: c.a = a - b; c.b = -b; break; // zbar = -1 - z
        case 4: c.b = -b; break;              // zbar = -z
        case 6: c.a = a + b; c.b = -b; break; // zbar = 1 - z
        default: throw std::invalid_argument("bad conductor");
    }
    c.normalize();
    return c;
}

Rat CycloElem::norm() const {
    CycloElem n = *this;
    n *= conj();
    if (n.m != 1) throw std::logic_error("norm not rational");
    return n.a;
}

CycloElem CycloElem::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    CycloElem c = conj();
    Rat n = norm();
    c.a /= n;
    c.b /= n;
    c.normalize();
    return c;
}

CycloElem& CycloElem::operator/=(const CycloElem& o) { return *this *= o.inverse(); }

CycloElem operator+(CycloElem x, const CycloElem& y) { return x += y; }
CycloElem operator-(CycloElem x, const CycloElem& y) { return x -= y; }
CycloElem operator*(CycloElem x, const CycloElem& y) { return x *= y; }
CycloElem operator/(CycloElem x, const CycloElem& y) { return x /= y; }
CycloElem operator-(const CycloElem& x) {
    CycloElem y = x;
    y.a = -y.a;
    y.b = -y.b;
    return y;
}

CycloElem cyclo_zeta(int m) {
    switch (m) {
        case 1: return CycloElem(1);
        case 2: return CycloElem(-1);
        case 3: case 4: case 6: return CycloElem(m, Rat(0), Rat(1));
        default: throw std::invalid_argument("unsupported conductor");
    }
}

std::string cyclo_str(const CycloElem& x) {
    return "z" + std::to_string(x.m) + ":" + rat_str(x.a) + "+" + rat_str(x.b) + "*z";
}

CycloElem cyclo_parse(const std::string& s) {
    if (s.empty() || s[0] != 'z') throw std::invalid_argument("bad cyclo: " + s);
    size_t colon = s.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("bad cyclo: " + s);
    int m = std::stoi(s.substr(1, colon - 1));
    std::string body = s.substr(colon + 1);
    // the '+' separating the two coefficients is the only '+' present:
    // rationals serialize with '-' and '/' but never '+'
    size_t plus = body.find('+', 1);
    if (plus == std::string::npos || body.size() < plus + 3 ||
        body.substr(body.size() - 2) != "*z")
        throw std::invalid_argument("bad cyclo: " + s);
    Rat a = rat_parse(body.substr(0, plus));
    Rat b = rat_parse(body.substr(plus + 1, body.size() - plus - 3));
    if (m == 1) {
        if (b != 0) throw std::invalid_argument("bad cyclo: " + s);
        return CycloElem(a);
    }
    return CycloElem(m, a, b);
}

} // namespace wtc
