#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wtc/affine.hpp"
#include "wtc/cyclo.hpp"
#include "wtc/mat.hpp"
#include "wtc/poly.hpp"

#include <random>

using namespace wtc;

static Mat<Rat> mat2(std::initializer_list<std::initializer_list<long>> rows) {
    Mat<Rat> m((int)rows.size(), (int)rows.begin()->size());
    int i = 0;
    for (auto& r : rows) {
        int j = 0;
        for (long v : r) m.at(i, j++) = Rat(v);
        ++i;
    }
    return m;
}

TEST_CASE("rref basics") {
    auto id = Mat<Rat>::identity(2);
    auto r = rref(id);
    CHECK(r.rank == 2);
    CHECK(r.kernel.empty());

    auto m = mat2({{1, 2}, {2, 4}});
    auto r2 = rref(m);
    CHECK(r2.rank == 1);
    REQUIRE(r2.kernel.size() == 1);
    CHECK(r2.kernel[0] == RatVec{Rat(-2), Rat(1)});

    // boundary matrix of a 3-cycle: edges (01),(12),(20)
    Mat<Rat> d(3, 3);
    d.at(0, 0) = -1; d.at(1, 0) = 1;
    d.at(1, 1) = -1; d.at(2, 1) = 1;
    d.at(2, 2) = -1; d.at(0, 2) = 1;
    auto r3 = rref(d);
    CHECK(r3.rank == 2);
    CHECK(r3.kernel.size() == 1);
}

TEST_CASE("rref rank-nullity on random matrices") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> dim(1, 6), ent(-4, 4);
    for (int trial = 0; trial < 60; ++trial) {
        int rows = dim(rng), cols = dim(rng);
        Mat<Rat> m(rows, cols);
        for (auto& v : m.a) v = Rat(ent(rng));
        auto r = rref(m);
        CHECK(r.rank + (int)r.kernel.size() == cols);
        // kernel vectors really are in the kernel
        for (auto& k : r.kernel) {
            auto mk = m * k;
            for (auto& v : mk) CHECK(v == 0);
        }
    }
}

TEST_CASE("matrix inverse and determinant") {
    auto m = mat2({{2, 1}, {1, 1}});
    Mat<Rat> inv;
    REQUIRE(invert(m, inv));
    CHECK(m * inv == Mat<Rat>::identity(2));
    CHECK(det(m) == 1);
    CHECK(det(mat2({{1, 2}, {2, 4}})) == 0);
}

TEST_CASE("solve_affine: constant vertex systems") {
    // n=2, M={(1,0),(0,1),(1,-1)}, unknowns (Z11, Z12, Z22), all RHS 1
    auto A = mat2({{1, 0, 0}, {0, 0, 1}, {1, -2, 1}});
    RatVec b0{Rat(1), Rat(1), Rat(1)}, b1{Rat(0), Rat(0), Rat(0)};
    auto s = solve_affine(A, b0, b1);
    REQUIRE(s.kind == AffineKind::Unique);
    CHECK(s.z0 == RatVec{Rat(1), Rat(1, 2), Rat(1)});
    CHECK(s.z1 == RatVec{Rat(0), Rat(0), Rat(0)});

    // M = {(1,0),(0,2),(1,-2)}: rows (1,0,0),(0,0,4),(1,-4,4)
    auto A2 = mat2({{1, 0, 0}, {0, 0, 4}, {1, -4, 4}});
    auto s2 = solve_affine(A2, b0, b1);
    REQUIRE(s2.kind == AffineKind::Unique);
    CHECK(s2.z0 == RatVec{Rat(1), Rat(1, 4), Rat(1, 4)});
    CHECK(s2.z1 == RatVec{Rat(0), Rat(0), Rat(0)});
}

TEST_CASE("solve_affine: infeasible, point-only, underdetermined") {
    auto A = mat2({{1}, {1}});
    auto inf = solve_affine(A, {Rat(1), Rat(2)}, {Rat(0), Rat(0)});
    CHECK(inf.kind == AffineKind::Infeasible);

    // z = 1 and z = u' force u' = 1
    auto po = solve_affine(A, {Rat(1), Rat(0)}, {Rat(0), Rat(1)});
    REQUIRE(po.kind == AffineKind::PointOnly);
    CHECK(po.u_point == 1);
    CHECK(po.z_point == RatVec{Rat(1)});

    auto un = solve_affine(mat2({{1, 0}}), {Rat(1)}, {Rat(0)});
    CHECK(un.kind == AffineKind::Underdetermined);

    // pencil with genuinely linear solution: z = 2 + 3u'
    auto lin = solve_affine(mat2({{1}}), {Rat(2)}, {Rat(3)});
    REQUIRE(lin.kind == AffineKind::Unique);
    CHECK(lin.z0 == RatVec{Rat(2)});
    CHECK(lin.z1 == RatVec{Rat(3)});
}

TEST_CASE("charpoly") {
    Mat<Rat> d(2, 2);
    d.at(0, 0) = 7;
    d.at(1, 1) = 14;
    auto c = charpoly_coeffs(d); // X^2 - 21X + 98
    CHECK(c == std::vector<Rat>{Rat(98), Rat(-21), Rat(1)});

    Mat<Rat> one(1, 1);
    one.at(0, 0) = Rat(5);
    CHECK(charpoly_coeffs(one) == std::vector<Rat>{Rat(-5), Rat(1)});

    // companion of X^2 + 3X + 4
    Mat<Rat> comp(2, 2);
    comp.at(0, 1) = Rat(-4);
    comp.at(1, 0) = Rat(1);
    comp.at(1, 1) = Rat(-3);
    CHECK(charpoly_coeffs(comp) == std::vector<Rat>{Rat(4), Rat(3), Rat(1)});
}

TEST_CASE("squarefree_part") {
    RatPoly xm1({Rat(-1), Rat(1)});
    CHECK(squarefree_part(xm1 * xm1) == xm1);
    RatPoly f({Rat(-1), Rat(0), Rat(1)});
    CHECK(squarefree_part(f) == f);
    RatPoly g({Rat(-1, 2), Rat(1)});
    RatPoly h({Rat(2), Rat(1)});
    CHECK(squarefree_part(g * g * g * h) == g * h);
    // property: sf * gcd(f, f') = f up to a constant
    RatPoly prod = g * g * h * xm1;
    auto sf = squarefree_part(prod);
    auto gc = poly_gcd(prod, derivative(prod));
    CHECK(make_monic(sf * gc) == make_monic(prod));
}

TEST_CASE("isolate_real_roots") {
    RatPoly f({Rat(-2), Rat(0), Rat(1)}); // X^2 - 2
    auto iv = isolate_real_roots(f);
    REQUIRE(iv.size() == 2);
    CHECK(iv[0].hi < iv[1].lo);
    for (auto& i : iv)
        CHECK(sgn(f.eval(i.lo)) * sgn(f.eval(i.hi)) <= 0);

    RatPoly g({Rat(1), Rat(0), Rat(1)}); // X^2 + 1
    CHECK(isolate_real_roots(g).empty());

    // u(u - 1/4)(u - 1/3)
    RatPoly u = RatPoly::X();
    RatPoly h = u * RatPoly({Rat(-1, 4), Rat(1)}) * RatPoly({Rat(-1, 3), Rat(1)});
    auto iv3 = isolate_real_roots(h);
    REQUIRE(iv3.size() == 3);
    Rat roots[3] = {Rat(0), Rat(1, 4), Rat(1, 3)};
    for (int i = 0; i < 3; ++i) {
        CHECK(iv3[i].lo <= roots[i]);
        CHECK(roots[i] <= iv3[i].hi);
    }
    CHECK(iv3[0].hi < iv3[1].lo);
    CHECK(iv3[1].hi < iv3[2].lo);

    auto r = refine_root(f, iv[1], Rat(1, 1000));
    CHECK(r.hi - r.lo <= Rat(1, 1000));
    CHECK(r.lo * r.lo <= 2);
    CHECK(2 <= r.hi * r.hi);
}

static RatPoly product_of(const std::vector<PolyFactor>& fs) {
    RatPoly p = RatPoly::constant(Rat(1));
    for (auto& f : fs)
        for (int i = 0; i < f.mult; ++i) p = p * f.factor;
    return p;
}

TEST_CASE("factor_poly over Q") {
    // 1 - 7X + 14X^2 - 8X^3 = (1-X)(1-2X)(1-4X)
    RatPoly f({Rat(1), Rat(-7), Rat(14), Rat(-8)});
    auto fs = factor_poly(f);
    REQUIRE(fs.size() == 3);
    CHECK(product_of(fs) == make_monic(f));
    CHECK(fs[0].factor == RatPoly({Rat(-1), Rat(1)}));
    CHECK(fs[1].factor == RatPoly({Rat(-1, 2), Rat(1)}));
    CHECK(fs[2].factor == RatPoly({Rat(-1, 4), Rat(1)}));

    RatPoly q({Rat(1), Rat(3), Rat(4)}); // discriminant -7: irreducible
    auto qs = factor_poly(q);
    REQUIRE(qs.size() == 1);
    CHECK(qs[0].factor == make_monic(q));
    CHECK(qs[0].mult == 1);

    auto xs = factor_poly(RatPoly({Rat(0), Rat(-1), Rat(1)})); // X^2 - X
    REQUIRE(xs.size() == 2);
    CHECK(product_of(xs) == RatPoly({Rat(0), Rat(-1), Rat(1)}));

    // repeated irreducible quadratic times a linear
    RatPoly x2p1({Rat(1), Rat(0), Rat(1)});
    RatPoly big = x2p1 * x2p1 * RatPoly({Rat(-3), Rat(1)});
    auto bs = factor_poly(big);
    CHECK(product_of(bs) == big);
    bool saw_sq = false;
    for (auto& pf : bs)
        if (pf.factor == x2p1) { CHECK(pf.mult == 2); saw_sq = true; }
    CHECK(saw_sq);

    // degree 4 with two irreducible quadratic factors (Kronecker path)
    RatPoly a({Rat(3), Rat(1), Rat(1)});
    RatPoly b({Rat(5), Rat(-2), Rat(1)});
    auto ks = factor_poly(a * b);
    REQUIRE(ks.size() == 2);
    CHECK(product_of(ks) == a * b);
}

TEST_CASE("cyclotomic arithmetic") {
    auto z3 = cyclo_zeta(3), z4 = cyclo_zeta(4), z6 = cyclo_zeta(6);
    CHECK(z4 * z4 == CycloElem(-1));
    CHECK(z3 * z3 + z3 + CycloElem(1) == CycloElem(0));
    CHECK(z6 * z6 - z6 + CycloElem(1) == CycloElem(0));
    CHECK(cyclo_zeta(2) == CycloElem(-1));

    // z6 = 1 + z3 (both primitive 6th vs 3rd roots): check via cubes
    CHECK(z6 * z6 * z6 == CycloElem(-1));
    CHECK(z3 * z3 * z3 == CycloElem(1));

    CHECK(z4.conj() == -z4);
    CHECK(z4.norm() == 1);
    CHECK(z3 * z3.inverse() == CycloElem(1));
    CHECK((CycloElem(3) + z4) / (CycloElem(3) + z4) == CycloElem(1));

    auto e = CycloElem(6, Rat(2, 3), Rat(-5));
    CHECK(cyclo_parse(cyclo_str(e)) == e);
    CHECK(cyclo_parse(cyclo_str(CycloElem(Rat(-7, 2)))) == CycloElem(Rat(-7, 2)));
}

TEST_CASE("factor_poly_cyclo") {
    CycloPoly x2p1({CycloElem(1), CycloElem(0), CycloElem(1)});
    auto over_q = factor_poly_cyclo(x2p1, 1);
    REQUIRE(over_q.size() == 1);
    CHECK(over_q[0].factor.degree() == 2);

    auto over_qi = factor_poly_cyclo(x2p1, 4);
    REQUIRE(over_qi.size() == 2);
    for (auto& pf : over_qi) CHECK(pf.factor.degree() == 1);
    CycloPoly prod = over_qi[0].factor * over_qi[1].factor;
    CHECK(prod == x2p1);

    // X^2 + 3 splits over Q(zeta_3) with sqrt(-3) = 1 + 2z
    CycloPoly x2p3({CycloElem(3), CycloElem(0), CycloElem(1)});
    auto over_z3 = factor_poly_cyclo(x2p3, 3);
    REQUIRE(over_z3.size() == 2);
    CHECK(over_z3[0].factor * over_z3[1].factor == x2p3);

    // X^2 - 2 stays irreducible over Q(i)
    CycloPoly x2m2({CycloElem(-2), CycloElem(0), CycloElem(1)});
    auto inert = factor_poly_cyclo(x2m2, 4);
    REQUIRE(inert.size() == 1);
    CHECK(inert[0].factor.degree() == 2);

    // mixed: (X - i)^2 (X - 3) over Q(i)
    CycloPoly xmi({-cyclo_zeta(4), CycloElem(1)});
    CycloPoly xm3({CycloElem(-3), CycloElem(1)});
    auto mix = factor_poly_cyclo(xmi * xmi * xm3, 4);
    CycloPoly back = CycloPoly::constant(CycloElem(1));
    for (auto& pf : mix)
        for (int i = 0; i < pf.mult; ++i) back = back * pf.factor;
    CHECK(back == xmi * xmi * xm3);
    bool saw = false;
    for (auto& pf : mix)
        if (pf.factor == xmi) { CHECK(pf.mult == 2); saw = true; }
    CHECK(saw);
}
