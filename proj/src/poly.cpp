#include "wtc/poly.hpp"
#include <algorithm>
#include <map>
#include <stdexcept>

namespace wtc {

RatPoly squarefree_part(const RatPoly& f) {
    if (f.is_zero()) throw std::domain_error("squarefree_part of zero");
    if (f.degree() == 0) return RatPoly::constant(Rat(1));
    RatPoly g = poly_gcd(f, derivative(f));
    auto [q, r] = divmod(f, g);
    if (!r.is_zero()) throw std::logic_error("gcd division not exact");
    return make_monic(q);
}

// --- Sturm sequences --------------------------------------------------------

static std::vector<RatPoly> sturm_sequence(const RatPoly& f) {
    std::vector<RatPoly> s;
    s.push_back(f);
    RatPoly d = derivative(f);
    if (!d.is_zero()) s.push_back(d);
    while (s.size() >= 2 && !s.back().is_zero()) {
        auto [q, r] = divmod(s[s.size() - 2], s.back());
        (void)q;
        if (r.is_zero()) break;
        s.push_back(Rat(-1) * r);
    }
    return s;
}

static int sign_variations(const std::vector<RatPoly>& seq, const Rat& x) {
    int var = 0, prev = 0;
    for (const auto& p : seq) {
        int s = sgn(p.eval(x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++var;
        prev = s;
    }
    return var;
}

static int sturm_count_seq(const std::vector<RatPoly>& seq, const Rat& lo, const Rat& hi) {
    return sign_variations(seq, lo) - sign_variations(seq, hi);
}

int sturm_count(const RatPoly& f, const Rat& lo, const Rat& hi) {
    return sturm_count_seq(sturm_sequence(f), lo, hi);
}

// Cauchy bound: all real roots lie in (-B, B).
static Rat root_bound(const RatPoly& f) {
    Rat b(0);
    for (int i = 0; i < f.degree(); ++i) {
        Rat q = abs(f.c[i] / f.lead());
        if (q > b) b = q;
    }
    return b + 1;
}

std::vector<RootInterval> isolate_real_roots(const RatPoly& f) {
    std::vector<RootInterval> out;
    if (f.is_zero()) throw std::domain_error("isolate_real_roots of zero");
    if (f.degree() <= 0) return out;
    auto seq = sturm_sequence(f);
    Rat B = root_bound(f);
    // work on half-open intervals (lo, hi]; f(-B) != 0 by the bound
    struct Item { Rat lo, hi; int count; };
    std::vector<Item> stack{{-B, B, sturm_count_seq(seq, -B, B)}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        if (it.count == 0) continue;
        if (it.count == 1) {
            out.push_back({it.lo, it.hi});
            continue;
        }
        // pick a cut point that is not itself a root, so children partition
        Rat cut = (it.lo + it.hi) / 2;
        while (f.eval(cut) == 0) cut = (it.lo + cut) / 2;
        int left = sturm_count_seq(seq, it.lo, cut);
        stack.push_back({it.lo, cut, left});
        stack.push_back({cut, it.hi, it.count - left});
    }
    std::sort(out.begin(), out.end(), [](const RootInterval& a, const RootInterval& b) {
        return a.lo < b.lo;
    });
    // adjacent intervals may touch at a (non-root) cut point; bisect until
    // they are disjoint as closed intervals
    auto bisect_once = [&](RootInterval& iv) {
        Rat mid = (iv.lo + iv.hi) / 2;
        while (f.eval(mid) == 0) mid = (iv.lo + mid) / 2;
        if (sturm_count_seq(seq, iv.lo, mid) == 1)
            iv.hi = mid;
        else
            iv.lo = mid;
    };
    for (size_t i = 0; i + 1 < out.size(); ++i)
        while (out[i].hi >= out[i + 1].lo) {
            bisect_once(out[i]);
            bisect_once(out[i + 1]);
        }
    return out;
}

RootInterval refine_root(const RatPoly& f, RootInterval iv, const Rat& width) {
    if (iv.lo == iv.hi) return iv;
    auto seq = sturm_sequence(f);
    while (iv.hi - iv.lo > width) {
        Rat mid = (iv.lo + iv.hi) / 2;
        if (f.eval(mid) == 0) return {mid, mid};
        if (sturm_count_seq(seq, iv.lo, mid) == 1)
            iv.hi = mid;
        else
            iv.lo = mid;
    }
    return iv;
}

// --- Factorization over Q ---------------------------------------------------

static std::vector<Int> divisors_of(const Int& n_) {
    Int n = abs(n_);
    if (n == 0) throw std::domain_error("divisors of zero");
    std::vector<Int> ds;
    Int d = 1;
    for (; d * d <= n; ++d) {
        if (n % d == 0) {
            ds.push_back(d);
            if (d * d != n) ds.push_back(n / d);
        }
        if (d > 2000000) throw std::runtime_error("divisor enumeration too large");
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

// Integer polynomial with content 1 and positive leading coefficient,
// equal to f up to a rational unit.
static std::vector<Int> primitive_part(const RatPoly& f) {
    Int den = 1;
    for (const auto& r : f.c) {
        Int d = r.get_den();
        den = den / gcd(den, d) * d;
    }
    std::vector<Int> c;
    Int content = 0;
    for (const auto& r : f.c) {
        Int v = r.get_num() * (den / r.get_den());
        c.push_back(v);
        content = gcd(content, v);
    }
    if (c.back() < 0) content = -content;
    for (auto& v : c) v /= content;
    return c;
}

static RatPoly from_int_coeffs(const std::vector<Int>& c) {
    std::vector<Rat> r;
    r.reserve(c.size());
    for (const auto& v : c) r.emplace_back(v);
    return RatPoly(std::move(r));
}

static RatPoly lagrange_interpolate(const std::vector<Rat>& xs, const std::vector<Rat>& ys) {
    RatPoly acc;
    for (size_t i = 0; i < xs.size(); ++i) {
        RatPoly term = RatPoly::constant(ys[i]);
        for (size_t j = 0; j < xs.size(); ++j) {
            if (j == i) continue;
            Rat scale = 1 / (xs[i] - xs[j]);
            term = term * RatPoly({-xs[j] * scale, scale});
        }
        acc = acc + term;
    }
    return acc;
}

static bool is_integer_poly(const RatPoly& f) {
    for (const auto& r : f.c)
        if (r.get_den() != 1) return false;
    return true;
}

// Finds one monic irreducible factor of a primitive squarefree integer
// polynomial with no rational roots, or returns the (monic) input when
// it is irreducible.  Kronecker interpolation over small sample points.
static RatPoly find_factor(const RatPoly& f) {
    int deg = f.degree();
    if (deg <= 3) return make_monic(f);
    static const long sample[] = {0, 1, -1, 2, -2, 3, -3, 4, -4};
    for (int t = 2; t <= deg / 2; ++t) {
        std::vector<Rat> xs;
        std::vector<std::vector<Int>> divs;
        for (long s : sample) {
            Rat v = f.eval(Rat(s));
            if (v == 0) throw std::logic_error("unexpected integer root");
            xs.emplace_back(s);
            divs.push_back(divisors_of(v.get_num()));
            if ((int)xs.size() == t + 1) break;
        }
        if ((int)xs.size() < t + 1) throw std::runtime_error("not enough sample points");
        // odometer over divisor choices and signs
        std::vector<size_t> idx(t + 1, 0);
        std::vector<int> sign(t + 1, 1);
        long tries = 0;
        while (true) {
            if (++tries > 20000000L) throw std::runtime_error("factor search too large");
            std::vector<Rat> ys;
            for (int i = 0; i <= t; ++i) ys.emplace_back(sign[i] * divs[i][idx[i]]);
            RatPoly g = lagrange_interpolate(xs, ys);
            if (g.degree() == t && is_integer_poly(g)) {
                auto [q, r] = divmod(f, g);
                if (r.is_zero()) {
                    // recurse: g itself may factor further
                    return find_factor(from_int_coeffs(primitive_part(g)));
                }
                (void)q;
            }
            // advance odometer (sign first, then divisor index)
            int pos = 0;
            for (; pos <= t; ++pos) {
                if (sign[pos] == 1) { sign[pos] = -1; break; }
                sign[pos] = 1;
                if (++idx[pos] < divs[pos].size()) break;
                idx[pos] = 0;
            }
            if (pos > t) break;
        }
    }
    return make_monic(f);
}

std::vector<PolyFactor> factor_poly(const RatPoly& f) {
    if (f.is_zero()) throw std::domain_error("factor_poly of zero");
    std::vector<PolyFactor> out;
    if (f.degree() == 0) return out;
    RatPoly rem = make_monic(f);

    auto push = [&](const RatPoly& g) {
        for (auto& pf : out)
            if (pf.factor == g) { ++pf.mult; return; }
        out.push_back({g, 1});
    };

    // powers of X
    while (rem.coeff(0) == 0) {
        push(RatPoly::X());
        auto [q, r] = divmod(rem, RatPoly::X());
        (void)r;
        rem = q;
    }

    // rational roots of the primitive integer model
    while (rem.degree() >= 1) {
        auto ic = primitive_part(rem);
        bool found = false;
        if (rem.degree() == 1) {
            push(make_monic(rem));
            rem = RatPoly::constant(Rat(1));
            break;
        }
        for (const Int& p : divisors_of(ic.front())) {
            for (const Int& q : divisors_of(ic.back())) {
                for (int s : {1, -1}) {
                    Rat cand(s * p, q);
                    cand.canonicalize();
                    if (rem.eval(cand) == 0) {
                        RatPoly lin({-cand, Rat(1)});
                        push(lin);
                        auto [qq, rr] = divmod(rem, lin);
                        if (!rr.is_zero()) throw std::logic_error("root division failed");
                        rem = make_monic(qq);
                        found = true;
                    }
                    if (found) break;
                }
                if (found) break;
            }
            if (found) break;
        }
        if (!found) break;
    }

    // no rational roots remain; peel irreducible factors
    while (rem.degree() >= 2) {
        RatPoly sf = squarefree_part(rem);
        RatPoly g = sf.degree() <= 3 ? sf
                                     : find_factor(from_int_coeffs(primitive_part(sf)));
        // multiplicity by repeated exact division
        int mult = 0;
        while (true) {
            auto [q, r] = divmod(rem, g);
            if (!r.is_zero()) break;
            rem = make_monic(q);
            ++mult;
        }
        if (mult == 0) throw std::logic_error("factor does not divide");
        for (auto& pf : out)
            if (pf.factor == g) { pf.mult += mult; mult = 0; }
        if (mult > 0) out.push_back({g, mult});
    }
    if (rem.degree() != 0) throw std::logic_error("factorization incomplete");
    std::sort(out.begin(), out.end(), [](const PolyFactor& x, const PolyFactor& y) {
        if (x.factor.degree() != y.factor.degree()) return x.factor.degree() < y.factor.degree();
        for (int i = x.factor.degree(); i >= 0; --i)
            if (x.factor.coeff(i) != y.factor.coeff(i)) return x.factor.coeff(i) < y.factor.coeff(i);
        return false;
    });
    return out;
}

// --- Factorization over Q(zeta_m) -------------------------------------------

static bool rat_is_square(const Rat& r, Rat& root) {
    if (r < 0) return false;
    if (r == 0) { root = 0; return true; }
    Int n = r.get_num(), d = r.get_den();
    if (mpz_perfect_square_p(n.get_mpz_t()) && mpz_perfect_square_p(d.get_mpz_t())) {
        Int sn, sd;
        mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
        mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
        root = Rat(sn, sd);
        root.canonicalize();
        return true;
    }
    return false;
}

// z^2 = r0 + r1 z in Q(zeta_m)
static void z_square_rule(int m, Rat& r0, Rat& r1) {
    switch (m) {
        case 3: r0 = -1; r1 = -1; break;
        case 4: r0 = -1; r1 = 0; break;
        case 6: r0 = -1; r1 = 1; break;
        default: throw std::invalid_argument("bad conductor");
    }
}

// Square root of x in Q(zeta_m) when one exists.
static bool cyclo_sqrt(const CycloElem& x, int m, CycloElem& out) {
    if (x.is_zero()) { out = CycloElem(0); return true; }
    Rat r0, r1;
    if (m != 1) z_square_rule(m, r0, r1);
    const Rat& A = x.a;
    const Rat& B = x.b;
    // try rational s = p: p^2 = A, B = 0
    if (B == 0) {
        Rat p;
        if (rat_is_square(A, p)) { out = CycloElem(p); return true; }
    }
    if (m == 1) return false;
    // s = p + q z, q != 0:  A = p^2 + q^2 r0,  B = q (2p + q r1)
    // eliminating p:  (r1^2 + 4 r0) t^2 - (2 B r1 + 4 A) t + B^2 = 0,  t = q^2
    Rat ca = r1 * r1 + 4 * r0;
    Rat cb = -(2 * B * r1 + 4 * A);
    Rat cc = B * B;
    Rat disc = cb * cb - 4 * ca * cc, sd;
    if (!rat_is_square(disc, sd)) return false;
    for (int s : {1, -1}) {
        Rat t = (-cb + s * sd) / (2 * ca);
        Rat q;
        if (t > 0 && rat_is_square(t, q)) {
            for (int s2 : {1, -1}) {
                Rat qq = s2 * q;
                Rat p = (B / qq - qq * r1) / 2;
                CycloElem cand(m, p, qq);
                if (cand * cand == x) { out = cand; return true; }
            }
        }
    }
    return false;
}

static CycloPoly conj_poly(const CycloPoly& f) {
    CycloPoly g = f;
    for (auto& c : g.c) c = c.conj();
    return g;
}

static int poly_conductor(const CycloPoly& f) {
    for (const auto& c : f.c)
        if (c.m != 1) return c.m;
    return 1;
}

static CycloPoly lift_rat_poly(const RatPoly& f) {
    std::vector<CycloElem> c;
    for (const auto& r : f.c) c.emplace_back(r);
    return CycloPoly(std::move(c));
}

// Splits a monic quadratic over Q(zeta_m) when its discriminant is a
// square there; returns true and the two linear factors.
static bool split_quadratic(const CycloPoly& h, int m, CycloPoly& f1, CycloPoly& f2) {
    CycloElem beta = h.coeff(1), gamma = h.coeff(0);
    CycloElem disc = beta * beta - CycloElem(4) * gamma;
    CycloElem sq;
    if (!cyclo_sqrt(disc, m, sq)) return false;
    CycloElem half = CycloElem(Rat(1, 2));
    CycloElem r1 = half * (-beta + sq), r2 = half * (-beta - sq);
    f1 = CycloPoly({-r1, CycloElem(1)});
    f2 = CycloPoly({-r2, CycloElem(1)});
    return true;
}

std::vector<CycloPolyFactor> factor_poly_cyclo(const CycloPoly& f, int m) {
    if (f.is_zero()) throw std::domain_error("factor_poly_cyclo of zero");
    if (m == 2) m = 1;
    int fm = poly_conductor(f);
    if (fm != 1 && fm != m) throw std::invalid_argument("coefficients outside Q(zeta_m)");
    std::vector<CycloPolyFactor> out;
    CycloPoly rem = make_monic(f);

    auto record = [&](const CycloPoly& g, int mult) {
        for (auto& pf : out)
            if (pf.factor == g) { pf.mult += mult; return; }
        out.push_back({g, mult});
    };
    auto divide_out = [&](const CycloPoly& g) {
        int mult = 0;
        while (rem.degree() >= g.degree()) {
            auto [q, r] = divmod(rem, g);
            if (!r.is_zero()) break;
            rem = make_monic(q);
            ++mult;
        }
        if (mult > 0) record(g, mult);
        return mult;
    };
    auto handle_irreducible_over_Q = [&](const RatPoly& g) {
        CycloPoly gl = lift_rat_poly(g);
        if (m == 1 || g.degree() == 1) {
            divide_out(make_monic(gl));
            return;
        }
        // extract all factors of rem lying over g, conjugates included
        while (true) {
            CycloPoly h = poly_gcd(rem, gl);
            if (h.degree() <= 0) break;
            h = make_monic(h);
            if (h.degree() == 2) {
                CycloPoly f1, f2;
                if (split_quadratic(h, m, f1, f2)) {
                    divide_out(f1);
                    divide_out(f2);
                    continue;
                }
            }
            if (divide_out(h) == 0) break; // inert factor fully removed already
        }
    };

    while (rem.degree() >= 1) {
        int before = rem.degree();
        // rational norm of the squarefree part drives the search
        CycloPoly sf = rem;
        {
            CycloPoly d = derivative(rem);
            if (!d.is_zero()) {
                CycloPoly g = poly_gcd(rem, d);
                if (g.degree() > 0) {
                    auto [q, r] = divmod(rem, g);
                    if (!r.is_zero()) throw std::logic_error("cyclo gcd division failed");
                    sf = make_monic(q);
                }
            }
        }
        CycloPoly nrm = sf * conj_poly(sf);
        std::vector<Rat> ratc;
        for (const auto& c : nrm.c) {
            if (c.m != 1) throw std::logic_error("norm has irrational coefficient");
            ratc.push_back(c.a);
        }
        for (const auto& pf : factor_poly(RatPoly(std::move(ratc))))
            handle_irreducible_over_Q(pf.factor);
        if (rem.degree() == before)
            throw std::logic_error("cyclo factorization stalled");
    }
    return out;
}

} // namespace wtc
