#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wtc/lattice_forms.hpp"

#include <random>
#include <set>

using namespace wtc;

static Form form2(long a, long b, long c, long den = 1) {
    Form f(2, 2);
    f.at(0, 0) = Rat(a, den);
    f.at(0, 1) = f.at(1, 0) = Rat(b, den);
    f.at(1, 1) = Rat(c, den);
    return f;
}

// brute-force box enumeration oracle: all sign-normalized x with
// |x_i| <= B and Z[x] <= bound
static std::set<LatVec> box_short(const Form& Z, const Rat& bound, int B) {
    int n = Z.rows;
    std::set<LatVec> out;
    std::vector<long long> x(n, -B);
    while (true) {
        if (!latvec_is_zero(x) && eval_form(Z, x) <= bound)
            out.insert(sign_normalize(x));
        int i = 0;
        for (; i < n; ++i) {
            if (++x[i] <= B) break;
            x[i] = -B;
        }
        if (i == n) break;
    }
    return out;
}

TEST_CASE("eval_form / psi / inner_EE") {
    auto I2 = Mat<Rat>::identity(2);
    CHECK(eval_form(I2, {1, 0}) == 1);
    CHECK(eval_form(form2(2, 1, 2), {1, -1}) == 2);
    CHECK(eval_form(Mat<Rat>::identity(3), {1, 1, 1}) == 3);

    auto p = psi({1, 0});
    CHECK(p.at(0, 0) == 1);
    CHECK(p.at(1, 1) == 0);
    auto p2 = psi({1, 2});
    CHECK(p2.at(0, 1) == 2);
    CHECK(p2.at(1, 1) == 4);
    CHECK(inner_EE(form2(2, 1, 2), psi({1, 1})) == 6);

    // the linear-model identity on random pairs
    std::mt19937 rng(777);
    std::uniform_int_distribution<int> ent(-5, 5);
    for (int t = 0; t < 100; ++t) {
        int n = 2 + (t % 2);
        Form Z(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) Z.at(i, j) = Z.at(j, i) = Rat(ent(rng), 3);
        LatVec x(n);
        bool zero = true;
        for (auto& v : x) {
            v = ent(rng);
            if (v) zero = false;
        }
        if (zero) x[0] = 1;
        CHECK(inner_EE(Z, psi(x)) == eval_form(Z, x));
    }
}

TEST_CASE("in_M0 and weight_u") {
    HeckeDatum h221(2, 2, 1);
    CHECK(in_M0({1, 0}, h221));
    CHECK(!in_M0({0, 1}, h221));
    HeckeDatum h321(3, 2, 1);
    CHECK(in_M0({5, 3, 2}, h321));
    HeckeDatum h332(3, 3, 2);
    CHECK(in_M0({1, 3, 3}, h332));
    CHECK(!in_M0({1, 1, 3}, h332));

    CHECK(weight_u({1, 0}, Rat(1, 3), h221) == 1);
    CHECK(weight_u({0, 1}, Rat(1), h221) == 1);
    CHECK(weight_u({0, 1}, Rat(1, 4), h221) == 4);
    CHECK_THROWS(weight_u({0, 1}, Rat(2), h221));
}

TEST_CASE("is_positive_definite") {
    CHECK(is_positive_definite(Mat<Rat>::identity(3)));
    CHECK(!is_positive_definite(form2(1, 0, 0)));
    CHECK(!is_positive_definite(form2(1, 2, 1)));
    CHECK(is_positive_definite(form2(1, 1, 4, 4))); // [[1,1/4],[1/4,1]] scaled
}

TEST_CASE("short_vectors basics") {
    auto I2 = Mat<Rat>::identity(2);
    auto s1 = short_vectors(I2, Rat(1));
    CHECK(s1 == std::vector<LatVec>{{0, 1}, {1, 0}});
    auto s2 = short_vectors(I2, Rat(2));
    CHECK(s2 == std::vector<LatVec>{{0, 1}, {1, -1}, {1, 0}, {1, 1}});

    Form d(2, 2);
    d.at(0, 0) = 1;
    d.at(1, 1) = Rat(1, 4);
    // the full set {(1,0),(0,1),(0,2),(1,+-1),(1,+-2)} appears at bound 2
    // (Z[(1,2)] = 2); at bound 1 the brute-force box oracle is authoritative
    auto s3 = short_vectors(d, Rat(2));
    std::set<LatVec> expect{{1, 0}, {0, 1}, {0, 2}, {1, 1}, {1, -1}, {1, 2}, {1, -2}};
    CHECK(std::set<LatVec>(s3.begin(), s3.end()) == expect);
    auto s4 = short_vectors(d, Rat(1));
    CHECK(std::set<LatVec>(s4.begin(), s4.end()) == box_short(d, Rat(1), 4));
}

TEST_CASE("short_vectors vs box oracle on random forms") {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> ent(-2, 2), diag(1, 5);
    int done = 0;
    while (done < 50) {
        int n = 2 + (done % 2);
        Form Z(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                long v = (i == j) ? diag(rng) + 2 : ent(rng);
                Z.at(i, j) = Z.at(j, i) = Rat(v, 2);
            }
        if (!is_positive_definite(Z)) continue;
        ++done;
        Rat bound(diag(rng));
        auto sv = short_vectors(Z, bound);
        // a crude but safe box: smallest eigenvalue of Z exceeds
        // min diag / (1 + n); use B = ceil(sqrt(bound * 4)) + 2
        auto oracle = box_short(Z, bound, 8);
        CHECK(std::set<LatVec>(sv.begin(), sv.end()) == oracle);
        for (const auto& x : sv) CHECK(eval_form(Z, x) <= bound);
    }
}

TEST_CASE("minimal_vectors") {
    HeckeDatum h(2, 2, 1);
    auto r1 = minimal_vectors(Mat<Rat>::identity(2), Rat(1), h);
    CHECK(r1.m == 1);
    CHECK(r1.M == std::vector<LatVec>{{0, 1}, {1, 0}});
    CHECK(r1.well_rounded);

    Form d(2, 2);
    d.at(0, 0) = 1;
    d.at(1, 1) = Rat(1, 4);
    auto r2 = minimal_vectors(d, Rat(1, 4), h);
    CHECK(r2.m == 1);
    CHECK(r2.M == std::vector<LatVec>{{0, 2}, {1, 0}});
    CHECK(r2.well_rounded);

    Form s(2, 2);
    s.at(0, 0) = 1;
    s.at(1, 1) = 5;
    auto r3 = minimal_vectors(s, Rat(1), h);
    CHECK(r3.m == 1);
    CHECK(r3.M == std::vector<LatVec>{{1, 0}});
    CHECK(!r3.well_rounded);
}

TEST_CASE("minimal_vectors vs weighted box oracle on random forms") {
    std::mt19937 rng(999);
    std::uniform_int_distribution<int> ent(-1, 1), diag(2, 6), pick(0, 2);
    HeckeDatum hs[] = {HeckeDatum(2, 2, 1), HeckeDatum(3, 2, 1), HeckeDatum(3, 3, 2)};
    Rat us[] = {Rat(1), Rat(1, 2), Rat(1, 4)};
    int done = 0;
    while (done < 50) {
        HeckeDatum h = hs[pick(rng)];
        Rat u = us[pick(rng)];
        if (u < h.u0()) u = h.u0();
        Form Z(h.n, h.n);
        for (int i = 0; i < h.n; ++i)
            for (int j = i; j < h.n; ++j) {
                long v = (i == j) ? diag(rng) : ent(rng);
                Z.at(i, j) = Z.at(j, i) = Rat(v, 2);
            }
        if (!is_positive_definite(Z)) continue;
        ++done;
        auto res = minimal_vectors(Z, u, h);
        // oracle: weighted minimum over the box |x_i| <= 6
        Rat best;
        bool first = true;
        std::set<LatVec> achievers;
        for (const auto& x : box_short(Z, Rat(1000), 6)) {
            Rat w = weight_u(x, u, h) * eval_form(Z, x);
            if (first || w < best) { best = w; first = false; }
        }
        for (const auto& x : box_short(Z, Rat(1000), 6)) {
            Rat w = weight_u(x, u, h) * eval_form(Z, x);
            if (w != best) continue;
            if (u == h.u0() && !in_M0(x, h)) continue;
            achievers.insert(x);
        }
        CHECK(res.m == best);
        CHECK(std::set<LatVec>(res.M.begin(), res.M.end()) == achievers);
    }
}

TEST_CASE("latvec serialization") {
    LatVec x{1, -2, 0};
    CHECK(latvec_str(x) == "(1,-2,0)");
    CHECK(latvec_parse("(1,-2,0)") == x);
    CHECK(sign_normalize({-1, 2}) == LatVec{1, -2});
    CHECK(sign_normalize({0, -3}) == LatVec{0, 3});
}
