#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wtc/cohomology.hpp"
#include "wtc/hecke.hpp"
#include "wtc/temperament.hpp"

#include <numeric>

using namespace wtc;

namespace {

// brute-force coset count oracle: sublattices L0 >= L >= ell*L0 of index
// ell^k, enumerated as row-spans of matrices mod ell
long long sublattice_count(int n, long long ell, int k) {
    // count (n-k)-dim subspaces of F_ell^n by brute force over all
    // echelon-free spans of vector subsets
    std::vector<std::vector<long long>> vecs;
    long long total = 1;
    for (int i = 0; i < n; ++i) total *= ell;
    for (long long code = 1; code < total; ++code) {
        std::vector<long long> v(n);
        long long c = code;
        for (int i = 0; i < n; ++i) {
            v[i] = c % ell;
            c /= ell;
        }
        vecs.push_back(v);
    }
    int r = n - k;
    // subspace = set of member vectors; collect distinct closures of r-subsets
    std::vector<std::vector<int>> found;
    std::vector<int> idx(r);
    std::vector<char> mark;
    long long count = 0;
    std::vector<std::vector<int>> seen;
    auto closure = [&](const std::vector<int>& gens) {
        std::vector<char> in(vecs.size() + 1, 0); // +1: zero vector slot unused
        std::vector<std::vector<long long>> members{std::vector<long long>(n, 0)};
        for (int g : gens) members.push_back(vecs[g]);
        // span by repeated addition
        bool grew = true;
        while (grew) {
            grew = false;
            for (size_t i = 0; i < members.size(); ++i)
                for (size_t j = 0; j < members.size(); ++j) {
                    std::vector<long long> s(n);
                    for (int t = 0; t < n; ++t) s[t] = (members[i][t] + members[j][t]) % ell;
                    if (std::find(members.begin(), members.end(), s) == members.end()) {
                        members.push_back(s);
                        grew = true;
                    }
                }
        }
        std::vector<int> key;
        for (size_t i = 0; i < vecs.size(); ++i)
            if (std::find(members.begin(), members.end(), vecs[i]) != members.end())
                key.push_back((int)i);
        (void)in;
        (void)mark;
        return key;
    };
    long long want = 1;
    for (int i = 0; i < r; ++i) want *= ell;
    std::vector<int> comb(r);
    for (int i = 0; i < r; ++i) comb[i] = i;
    if (r == 0) return 1;
    while (true) {
        auto key = closure(comb);
        if ((long long)key.size() + 1 == want &&
            std::find(seen.begin(), seen.end(), key) == seen.end()) {
            seen.push_back(key);
            ++count;
        }
        int i = r - 1;
        while (i >= 0 && comb[i] == (int)vecs.size() - r + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j = i + 1; j < r; ++j) comb[j] = comb[j - 1] + 1;
    }
    (void)idx;
    return count;
}

} // namespace

TEST_CASE("hecke_cosets: counts and distinctness") {
    // counts against the brute-force subspace oracle
    for (long long ell : {2LL, 3LL}) {
        for (int k = 1; k <= 3; ++k) {
            HeckeDatum h(3, ell, k);
            auto cs = hecke_cosets(h);
            CHECK((long long)cs.size() == sublattice_count(3, ell, k));
            // distinct right cosets: w w'^{-1} never in Gamma
            for (size_t i = 0; i < cs.size(); ++i)
                for (size_t j = i + 1; j < cs.size(); ++j)
                    CHECK(!gamma_member(cs[i] * imat_inverse_unimodular(cs[j]), h));
        }
    }
    HeckeDatum h2(2, 2, 1);
    CHECK(hecke_cosets(h2).size() == 3);
    CHECK(hecke_cosets(HeckeDatum(2, 3, 1)).size() == 4);
    CHECK(hecke_cosets(HeckeDatum(3, 2, 1)).size() == 7);
    CHECK(hecke_cosets(HeckeDatum(3, 2, 2)).size() == 7);
    CHECK(hecke_cosets(HeckeDatum(3, 2, 3)).size() == 1);
    CHECK(hecke_cosets(HeckeDatum(3, 5, 1)).size() == 31);
}

TEST_CASE("hecke_engine: rank 2 classical cohomology dimensions") {
    // H^0 is Q for the trivial character and 0 otherwise; H^1 of the
    // level-N congruence group has dimension 2*genus + cusps - 1
    struct Row {
        int N;
        int h1;
    };
    // derived: genus/cusp data of the classical modular curves
    const Row rows[] = {{1, 0}, {2, 1}, {3, 1}, {4, 2}, {5, 1}, {6, 3}, {7, 1}, {11, 3}};
    for (const auto& r : rows) {
        auto eng = hecke_engine(2, 40, trivial_nebentype(r.N));
        REQUIRE(eng.hb.hdim.size() == 2);
        CHECK(eng.hb.hdim[0] == 1);
        CHECK(eng.hb.hdim[1] == r.h1);
    }
    // nontrivial character: no invariants in degree zero
    auto engq = hecke_engine(2, 40, nebentype_parse(3, "quad"));
    CHECK(engq.hb.hdim[0] == 0);
}

TEST_CASE("hecke_operator: rank 2 degree-zero values and the level-11 eigenvalues") {
    auto eng1 = hecke_engine(2, 40, trivial_nebentype(1));
    REQUIRE(eng1.hb.hdim[0] == 1);

    auto ow21 = orient_wtc(build_wtc(HeckeDatum(2, 2, 1), 40));
    auto op21 = hecke_operator(eng1, ow21);
    CHECK(op21.T[0].at(0, 0) == CycloElem(3)); // ell + 1
    for (const auto& hd : op21.fiber_hdim) CHECK(hd == eng1.hb.hdim);

    auto ow31 = orient_wtc(build_wtc(HeckeDatum(2, 3, 1), 40));
    CHECK(hecke_operator(eng1, ow31).T[0].at(0, 0) == CycloElem(4));

    // scalar datum: the full Hecke pair degenerates and T acts by 1
    auto ow22 = orient_wtc(build_wtc(HeckeDatum(2, 2, 2), 40));
    CHECK(hecke_operator(eng1, ow22).T[0].at(0, 0) == CycloElem(1));

    // level 11: T_2 on H^1 has eigenvalues 3 (Eisenstein: 1 + ell) and
    // -2, -2 (derived: the elliptic curve 11a1 has 5 points mod 2, so
    // a_2 = 2 + 1 - 5 = -2)
    auto eng11 = hecke_engine(2, 40, trivial_nebentype(11));
    REQUIRE(eng11.hb.hdim[1] == 3);
    auto t2 = hecke_operator(eng11, ow21).T[1];
    auto blocks = decompose({t2}, 1);
    std::vector<std::pair<int, CycloElem>> got;
    for (const auto& b : blocks) {
        REQUIRE(b.simple);
        got.push_back({b.basis.cols, b.eigen[0]});
    }
    std::sort(got.begin(), got.end(), [](const auto& x, const auto& y) {
        return x.second.a < y.second.a;
    });
    REQUIRE(got.size() == 2);
    CHECK(got[0] == std::make_pair(2, CycloElem(-2)));
    CHECK(got[1] == std::make_pair(1, CycloElem(3)));

    // T_3 commutes with T_2 and refines to the same blocks: a_3 = 4 - 5 = -1
    auto t3 = hecke_operator(eng11, ow31).T[1];
    CHECK(t2 * t3 == t3 * t2);
    auto joint = decompose({t2, t3}, 1);
    for (const auto& b : joint) {
        if (b.eigen[0] == CycloElem(3))
            CHECK(b.eigen[1] == CycloElem(4));
        else
            CHECK(b.eigen[1] == CycloElem(-1));
    }
}

TEST_CASE("decompose and match_galois: synthetic systems") {
    // commuting pair with a shared 2-dimensional generalized eigenspace
    CMat A(3, 3, CycloElem(0)), B(3, 3, CycloElem(0));
    A.at(0, 0) = CycloElem(3);
    A.at(1, 1) = CycloElem(-2);
    A.at(2, 2) = CycloElem(-2);
    A.at(1, 2) = CycloElem(1); // nontrivial Jordan block
    B.at(0, 0) = CycloElem(4);
    B.at(1, 1) = CycloElem(-1);
    B.at(2, 2) = CycloElem(-1);
    auto blocks = decompose({A, B}, 1);
    REQUIRE(blocks.size() == 2);
    int total = 0;
    for (const auto& b : blocks) total += b.basis.cols;
    CHECK(total == 3);

    // label chi3 + eps + eps^2 from its Hecke polynomials at 2 and 5
    auto quad3 = nebentype_parse(3, "quad");
    auto lbl = match_galois({2, 5},
                            {{{CycloElem(5), CycloElem(1), CycloElem(-1)},
                              {CycloElem(29), CycloElem(19), CycloElem(-1)}}},
                            quad3, 1);
    CHECK(lbl.complete);
    CHECK(lbl.text == "chi3+eps+eps^2");

    // 1 + eps + chi3*eps^2: roots 1, ell, chi(ell) ell^2 at ell = 2
    // a1 = 3 + chi(2)*4 = -1, 2*a2 = 2 + chi(2)(4 + 8) -> a2 = -5, 8*a3 = chi(2)*8
    auto lbl2 = match_galois({2},
                             {{{CycloElem(-1), CycloElem(-5), CycloElem(-1)}}},
                             quad3, 1);
    CHECK(lbl2.complete);
    CHECK(lbl2.text == "1+eps+chi3*eps^2");

    // residual quadratic: eps plus the weight-3 newform factor at ell = 2
    auto quad7 = nebentype_parse(7, "quad");
    auto lbl3 = match_galois({2},
                             {{{CycloElem(-1), CycloElem(-1), CycloElem(1)}}},
                             quad7, 3);
    CHECK(!lbl3.complete);
    CHECK(lbl3.text == "eps+cusp");
    REQUIRE(lbl3.residual.size() == 1);
    CHECK(lbl3.residual[0] == CycloPoly{{CycloElem(1), CycloElem(3), CycloElem(4)}});
}
