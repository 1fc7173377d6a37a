#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wtc/equivariant.hpp"

#include <algorithm>
#include <set>

using namespace wtc;

static IMat neg_identity(int n) {
    IMat m = IMat::identity(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = -1;
    return m;
}

static void report(const ValidationReport& r) {
    for (const auto& s : r.issues) MESSAGE(s);
}

// derived: Gamma for (n, ell, k) = (2, 2, 1) has index 3 in GL_2(Z) and
// chi_orb(GL_2(Z)) = chi_orb(SL_2(Z)) / 2 = -1/24, so every fiber spine
// quotient has orbifold Euler characteristic 3 * (-1/24) = -1/8
static const Rat CHI2 = Rat(-1, 8);

TEST_CASE("orient_fiber: n=2 spine at u=1") {
    HeckeDatum h(2, 2, 1);
    auto fr = fiber_cells(Rat(1), h, 40);
    REQUIRE(fr.closed);
    auto tab = gamma_classify(fr.cells, h);
    REQUIRE(tab.complete);
    auto oc = orient_fiber(tab, Rat(1), h);

    auto vr = validate(oc);
    report(vr);
    CHECK(vr.ok);
    CHECK(oc.maxdim == 1); // the n=2 spine is a graph
    CHECK(vr.orbifold_euler == CHI2);
    CHECK(oc.orbits.size() == tab.reps.size());
    CHECK(oc.cells.size() == tab.cells.size());

    // -I fixes every label and acts trivially on forms
    IMat mi = neg_identity(2);
    for (const auto& o : oc.orbits) {
        bool found = false;
        for (size_t g = 0; g < o.stab.size(); ++g)
            if (o.stab[g] == mi) {
                found = true;
                CHECK(o.stab_sign[g] == 1);
            }
        CHECK(found);
        if (o.dim == 0)
            for (int s : o.stab_sign) CHECK(s == 1);
        if (o.dim == 1) CHECK(oc.boundary[&o - oc.orbits.data()].size() == 2);
    }
}

TEST_CASE("validate: fault injection trips the checks") {
    HeckeDatum h(2, 2, 1);
    auto fr = fiber_cells(Rat(1), h, 40);
    auto tab = gamma_classify(fr.cells, h);
    auto base = orient_fiber(tab, Rat(1), h);
    REQUIRE(validate(base).ok);

    // inconsistent killed flag
    auto oc = base;
    for (auto& o : oc.orbits)
        if (o.killed) {
            for (auto& s : o.stab_sign) s = 1;
            o.killed = false; // recomputed flag would now disagree with signs below
            o.stab_sign.back() = -1;
            break;
        }
    CHECK(!validate(oc).ok);

    // corrupted incidence coefficient
    oc = base;
    for (size_t j = 0; j < oc.orbits.size(); ++j)
        if (!oc.boundary[j].empty()) {
            oc.boundary[j][0].inc = 2;
            break;
        }
    CHECK(!validate(oc).ok);

    // missing facet
    oc = base;
    for (size_t j = 0; j < oc.orbits.size(); ++j)
        if (oc.orbits[j].dim == 1 && oc.boundary[j].size() == 2) {
            oc.boundary[j].pop_back();
            break;
        }
    CHECK(!validate(oc).ok);
}

TEST_CASE("orient_slab: n=2 well-tempered complex, all slabs") {
    HeckeDatum h(2, 2, 1);
    auto w = build_wtc(h, 40);
    REQUIRE(w.slabs.size() + 1 == w.fibers.size());

    std::vector<Rat> fiber_chi;
    for (size_t i = 0; i < w.fibers.size(); ++i) {
        auto oc = orient_fiber(w.fibers[i], w.critical[i], h);
        auto vr = validate(oc);
        report(vr);
        CHECK(vr.ok);
        fiber_chi.push_back(vr.orbifold_euler);
    }
    // the quotient orbifold does not change with the temperament
    for (const auto& chi : fiber_chi) CHECK(chi == CHI2);

    for (size_t i = 0; i < w.slabs.size(); ++i) {
        auto oc = orient_slab(w.slabs[i], w.fibers[i], w.fibers[i + 1], h);
        auto vr = validate(oc);
        report(vr);
        CHECK(vr.ok);
        CHECK(oc.maxdim == 2);
        CHECK(oc.lo_orbits == (int)w.fibers[i].reps.size());
        CHECK(oc.hi_orbits == (int)w.fibers[i + 1].reps.size());

        // end fiber orbits keep their OrbitTable order: inclusion maps of
        // the end complexes into the slab complex are index-identities
        for (int j = 0; j < oc.lo_orbits; ++j) {
            CHECK(oc.orbits[j].dim == w.fibers[i].reps[j].dim);
            CHECK(oc.cells[oc.orbits[j].rep].M == w.fibers[i].reps[j].M);
            CHECK(oc.cells[oc.orbits[j].rep].ulo == w.slabs[i].lo);
        }
        for (int j = 0; j < oc.hi_orbits; ++j) {
            CHECK(oc.orbits[oc.lo_orbits + j].dim == w.fibers[i + 1].reps[j].dim);
            CHECK(oc.cells[oc.orbits[oc.lo_orbits + j].rep].uhi == w.slabs[i].hi);
        }

        // every prism is a proper prism: vertices at both ends
        int pr_off = oc.lo_orbits + oc.hi_orbits;
        CHECK(oc.orbits.size() == pr_off + w.slabs[i].table.reps.size());
        for (size_t j = pr_off; j < oc.orbits.size(); ++j) {
            const auto& cell = oc.cells[oc.orbits[j].rep];
            CHECK(cell.ulo == w.slabs[i].lo);
            CHECK(cell.uhi == w.slabs[i].hi);
            bool at_lo = false, at_hi = false;
            for (const auto& p : cell.verts) {
                if (p.back() == w.slabs[i].lo) at_lo = true;
                if (p.back() == w.slabs[i].hi) at_hi = true;
            }
            CHECK(at_lo);
            CHECK(at_hi);
        }
    }
}

TEST_CASE("orient: n=3 top fiber and top slab") {
    HeckeDatum h(3, 2, 1);
    auto w = build_wtc(h, 80);
    REQUIRE(w.critical.back() == Rat(1));

    auto oc = orient_fiber(w.fibers.back(), Rat(1), h);
    auto vr = validate(oc);
    report(vr);
    CHECK(vr.ok);
    CHECK(oc.maxdim == 3);
    // derived: chi(SL_3(Z)) = zeta(-1) zeta(-2) = 0, and -I acts trivially,
    // so every finite-index subgroup quotient has orbifold chi 0
    CHECK(vr.orbifold_euler == Rat(0));

    size_t last = w.slabs.size() - 1;
    auto sc = orient_slab(w.slabs[last], w.fibers[last], w.fibers[last + 1], h);
    auto sv = validate(sc);
    report(sv);
    CHECK(sv.ok);
    CHECK(sc.maxdim == 4);

    // a live 2-orbit with a live facet exists, so the boundary-square check
    // is not vacuous; flipping one incidence there must break it
    bool flipped = false;
    for (size_t j = 0; j < sc.orbits.size() && !flipped; ++j) {
        if (sc.orbits[j].dim != 2 || sc.orbits[j].killed) continue;
        for (auto& t : sc.boundary[j])
            if (!sc.orbits[t.orbit].killed) {
                t.inc = -t.inc;
                flipped = true;
                break;
            }
    }
    REQUIRE(flipped);
    CHECK(!validate(sc).ok);
}
