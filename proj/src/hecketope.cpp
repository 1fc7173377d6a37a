#include "wtc/hecketope.hpp"
#include "wtc/hull.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wtc {

static Int norm2(const LatVec& x) {
    Int s = 0;
    for (long long v : x) {
        Int w((long)v);
        s += w * w;
    }
    return s;
}

// the `target` shortest nonzero vectors of L0 (or of M0), 2-norm order
// with lex tiebreak, ties at the cutoff included
static std::vector<LatVec> shortest_of(int target, const HeckeDatum& h, bool m0_only) {
    Form I(h.n, h.n);
    for (int i = 0; i < h.n; ++i) I.at(i, i) = 1;
    Rat bound(4);
    if (m0_only) bound = Rat((long)(4 * h.ell * h.ell));
    for (;;) {
        std::vector<LatVec> vs = short_vectors(I, bound);
        if (m0_only) {
            std::vector<LatVec> f;
            for (auto& x : vs)
                if (in_M0(x, h)) f.push_back(x);
            vs.swap(f);
        }
        if ((int)vs.size() >= target) {
            std::sort(vs.begin(), vs.end(), [](const LatVec& a, const LatVec& b) {
                Int na = norm2(a), nb = norm2(b);
                if (na != nb) return na < nb;
                return a < b;
            });
            Int cut = norm2(vs[target - 1]);
            int end = target;
            while (end < (int)vs.size() && norm2(vs[end]) == cut) ++end;
            vs.resize(end);
            return vs;
        }
        bound *= 4;
    }
}

std::vector<LatVec> select_ball(int c, const Rat& u, const HeckeDatum& h) {
    int n = h.n;
    if (c < n * (n + 1) / 2 + 1) throw std::invalid_argument("select_ball: c too small");
    int m = (5 * c + 3) / 4; // ceil(1.25 c)
    auto L1 = shortest_of(m, h, false);
    auto L2 = shortest_of(m, h, true);
    std::set<LatVec> pool(L2.begin(), L2.end());
    std::set<LatVec> l2set = pool;
    for (auto& x : L1)
        if (!l2set.count(x)) pool.insert(x);

    bool at_u0 = (u == h.u0());
    std::set<LatVec> labeled;
    for (auto x : pool) {
        // at u0 the points psi_u(x) and psi(ell x) coincide; keep the M0 label
        if (at_u0 && !in_M0(x, h))
            for (auto& v : x) v *= h.ell;
        labeled.insert(x);
    }

    std::vector<std::pair<Rat, LatVec>> scored;
    for (auto& x : labeled) {
        Rat s = weight_u(x, u, h) * Rat(norm2(x));
        scored.emplace_back(s, x);
    }
    std::sort(scored.begin(), scored.end());
    int end = std::min<int>(c, (int)scored.size());
    while (end < (int)scored.size() && scored[end].first == scored[end - 1].first) ++end;
    std::vector<LatVec> out;
    out.reserve(end);
    for (int i = 0; i < end; ++i) out.push_back(scored[i].second);
    return out;
}

// flatten a symmetric form into the upper-triangle coordinates of E
static std::vector<Rat> point_E(const LatVec& x, const Rat& u, const HeckeDatum& h) {
    Rat w = weight_u(x, u, h);
    std::vector<Rat> p;
    p.reserve((size_t)h.n * (h.n + 1) / 2);
    for (int i = 0; i < h.n; ++i)
        for (int j = i; j < h.n; ++j) {
            Rat v = w * Rat((long)x[i]) * Rat((long)x[j]);
            p.push_back(v);
        }
    return p;
}

// inner_EE(Z, P) = sum_{i<=j} a_{ij} P_{ij} requires halved off-diagonals
static Form functional_to_form(const std::vector<Int>& a, int n, const Rat& scale) {
    Form Z(n, n);
    int idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++idx) {
            Rat v = Rat(a[idx]) * scale;
            if (i == j) {
                Z.at(i, i) = v;
            } else {
                Rat half = v / 2;
                Z.at(i, j) = half;
                Z.at(j, i) = half;
            }
        }
    return Z;
}

static int psi_rank(const std::vector<LatVec>& M, int n) {
    Mat<Rat> m((int)M.size(), n * (n + 1) / 2);
    for (int r = 0; r < (int)M.size(); ++r) {
        int idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j, ++idx)
                m.at(r, idx) = Rat((long)M[r][i]) * Rat((long)M[r][j]);
    }
    return mat_rank(m);
}

// certify a candidate witness: weighted minimum exactly 1 on M, > 1
// elsewhere; equality achievers outside M are adjoined (ball truncation)
static bool certify(const Form& Z, std::vector<LatVec>& M, const Rat& u, const HeckeDatum& h,
                    bool& adjoined) {
    if (!is_positive_definite(Z)) return false;
    std::set<LatVec> mset(M.begin(), M.end());
    for (const auto& x : M) {
        Rat v = weight_u(x, u, h) * eval_form(Z, x);
        if (v != 1) return false;
    }
    Rat cap = Rat(1) / u; // weights are >= 1, so violators have Z[x] <= 1/u
    bool at_u0 = (u == h.u0());
    for (const auto& x : short_vectors(Z, cap)) {
        Rat v = weight_u(x, u, h) * eval_form(Z, x);
        if (v < 1) return false;
        if (v == 1 && !mset.count(x)) {
            if (at_u0 && !in_M0(x, h)) continue; // tie rule: ell x achieves instead
            mset.insert(x);
            adjoined = true;
        }
    }
    M.assign(mset.begin(), mset.end());
    return true;
}

FiberResult fiber_cells(const Rat& u, const HeckeDatum& h, int c) {
    int n = h.n;
    int dimE = n * (n + 1) / 2;
    auto B = select_ball(c, u, h);

    // scale the rational psi_u points to a common integer grid
    std::vector<std::vector<Rat>> qp;
    qp.reserve(B.size());
    Int den = 1;
    for (const auto& x : B) {
        qp.push_back(point_E(x, u, h));
        for (const auto& v : qp.back()) {
            Int d = v.get_den();
            den = den / gcd(den, d) * d;
        }
    }
    std::vector<std::vector<Int>> ipts(qp.size());
    for (size_t i = 0; i < qp.size(); ++i)
        for (const auto& v : qp[i]) {
            Int s = v.get_num() * (den / v.get_den());
            ipts[i].push_back(s);
        }

    // facet certification doubles as the hull expansion predicate: the
    // vertex cells of the fiber are ridge-connected (the retract is
    // connected), so the wrap only needs to expand certified facets and
    // record their immediate artifact neighbors
    struct FacetCert {
        bool pass = false;
        bool adjoined = false;
        std::vector<LatVec> M;
        Form Z;
    };
    std::map<std::vector<int>, FacetCert> cert_cache;
    auto certify_facet = [&](const HullFacet& F) -> const FacetCert& {
        auto it = cert_cache.find(F.on);
        if (it != cert_cache.end()) return it->second;
        FacetCert fc;
        if (F.b < 0) {
            std::vector<LatVec> M;
            M.reserve(F.on.size());
            for (int v : F.on) M.push_back(B[v]);
            std::sort(M.begin(), M.end());
            if (latvec_rank(M) == n) {
                Rat scale = Rat(den) / Rat(F.b);
                Form Z = functional_to_form(F.a, n, scale);
                if (certify(Z, M, u, h, fc.adjoined)) {
                    fc.pass = true;
                    fc.M = std::move(M);
                    fc.Z = std::move(Z);
                }
            }
        }
        return cert_cache.emplace(F.on, std::move(fc)).first->second;
    };

    HullOptions opt;
    opt.min_dim = dimE + 1; // facets only; faces are rebuilt below
    opt.separating_only = true;
    opt.expand = [&](const HullFacet& F) { return certify_facet(F).pass; };
    auto hull = convex_hull(ipts, opt);
    if (hull.degenerate)
        throw std::runtime_error("fiber_cells: degenerate hull, ball too small");

    FiberResult res;
    std::map<std::vector<LatVec>, size_t> by_M;
    auto record = [&](std::vector<LatVec> M, const Form& Z, bool interior) {
        int cdim = dimE - psi_rank(M, n);
        auto it = by_M.find(M);
        if (it == by_M.end()) {
            by_M.emplace(M, res.cells.size());
            res.cells.push_back({std::move(M), cdim, Z, interior});
        } else if (interior) {
            res.cells[it->second].interior = true;
        }
    };

    // each genuine (certified, non-adjoined) facet is a vertex cell
    std::vector<char> genuine(hull.facets.size(), 0);
    std::vector<Form> facet_Z(hull.facets.size());
    for (size_t fi = 0; fi < hull.facets.size(); ++fi) {
        const FacetCert& fc = certify_facet(hull.facets[fi]);
        if (!fc.pass) continue;
        if (fc.adjoined) {
            // true vertex cell, but its dual facet is truncated here
            record(fc.M, fc.Z, false);
            continue;
        }
        genuine[fi] = 1;
        facet_Z[fi] = fc.Z;
        record(fc.M, fc.Z, true);
    }

    // lower faces: close the genuine facet vertex sets under pairwise
    // intersection; only label-spanning intersections can meet X
    std::set<std::vector<int>> seen;
    std::deque<std::vector<int>> queue;
    std::vector<size_t> genuine_ids;
    for (size_t fi = 0; fi < hull.facets.size(); ++fi)
        if (genuine[fi]) {
            genuine_ids.push_back(fi);
            if (seen.insert(hull.facets[fi].on).second) queue.push_back(hull.facets[fi].on);
        }
    auto labels_span = [&](const std::vector<int>& verts) {
        std::vector<LatVec> M;
        for (int v : verts) M.push_back(B[v]);
        return latvec_rank(M) == n;
    };
    while (!queue.empty()) {
        std::vector<int> G = std::move(queue.front());
        queue.pop_front();
        for (size_t fi : genuine_ids) {
            const auto& on = hull.facets[fi].on;
            std::vector<int> inter;
            std::set_intersection(G.begin(), G.end(), on.begin(), on.end(),
                                  std::back_inserter(inter));
            if (inter.size() == G.size() || inter.empty()) continue;
            if (!seen.insert(inter).second) continue;
            if (!labels_span(inter)) continue;
            queue.push_back(std::move(inter));
        }
    }

    for (const auto& G : seen) {
        if (!labels_span(G)) continue;
        // all containing facets decide interiority; genuine ones give the witness
        bool interior = true;
        int cnt = 0;
        Form sum(n, n);
        bool is_facet = false;
        for (size_t fi = 0; fi < hull.facets.size(); ++fi) {
            const auto& on = hull.facets[fi].on;
            if (on.size() < G.size()) continue;
            if (on.size() == G.size()) {
                if (on == G) is_facet = true;
                continue;
            }
            if (!std::includes(on.begin(), on.end(), G.begin(), G.end())) continue;
            if (genuine[fi]) {
                sum = sum + facet_Z[fi];
                ++cnt;
            } else {
                interior = false;
            }
        }
        if (is_facet) continue; // handled above
        if (cnt == 0) continue;
        Form Z = Rat(1, cnt) * sum;
        std::vector<LatVec> M;
        for (int v : G) M.push_back(B[v]);
        std::sort(M.begin(), M.end());
        size_t before = M.size();
        bool adjoined = false;
        if (!certify(Z, M, u, h, adjoined)) continue;
        if (interior && adjoined && M.size() != before)
            res.closed = false; // contradiction: interior faces cannot adjoin
        record(std::move(M), Z, interior && !adjoined);
    }

    bool any_interior = false;
    for (const auto& c : res.cells)
        if (c.interior) any_interior = true;
    if (!any_interior) res.closed = false;

    std::sort(res.cells.begin(), res.cells.end(), [](const FiberCell& a, const FiberCell& b) {
        if (a.dim != b.dim) return a.dim < b.dim;
        return a.M < b.M;
    });
    return res;
}

bool gamma_member(const IMat& g, const HeckeDatum& h, bool conj) {
    if (g.n != h.n) return false;
    long long d = imat_det(g);
    if (d != 1 && d != -1) return false;
    // a g a^{-1} integral: ell | g_ij for i in the top block, j in the
    // bottom; a^{-1} g a integral swaps the blocks
    for (int i = 0; i < h.n - h.k; ++i)
        for (int j = h.n - h.k; j < h.n; ++j) {
            long long v = conj ? g.at(j, i) : g.at(i, j);
            if (v % h.ell != 0) return false;
        }
    return true;
}

// per-vector invariant of the acting group: membership in the preserved
// sublattice (M0 for Gamma, ell L0 a^{-1} cap L0 for the conjugate group)
static bool block_flag(const LatVec& x, const HeckeDatum& h, bool conj) {
    if (!conj) return in_M0(x, h);
    for (int i = 0; i < h.n - h.k; ++i)
        if (x[i] % h.ell != 0) return false;
    return true;
}

std::vector<LatVec> mul_set(const std::vector<LatVec>& M, const IMat& g) {
    std::vector<LatVec> out;
    out.reserve(M.size());
    for (const auto& x : M) out.push_back(sign_normalize(x * g));
    std::sort(out.begin(), out.end());
    return out;
}

static long long content_of(const LatVec& x) {
    long long g = 0;
    for (long long v : x) g = std::gcd(g, v < 0 ? -v : v);
    return g;
}

// all g in Gamma with mul_set(Mfrom, g) == Mto (or just the first)
static std::vector<IMat> enumerate_transporters(const std::vector<LatVec>& Mfrom,
                                                const std::vector<LatVec>& Mto,
                                                const HeckeDatum& h, bool all, bool conj) {
    std::vector<IMat> out;
    if (Mfrom.size() != Mto.size()) return out;
    int n = h.n;

    // independent n-subset of Mfrom
    std::vector<LatVec> base;
    for (const auto& x : Mfrom) {
        auto trial = base;
        trial.push_back(x);
        if (latvec_rank(trial) > (int)base.size()) base.push_back(x);
        if ((int)base.size() == n) break;
    }
    if ((int)base.size() < n) return out;
    // integer inverse via the adjugate: g = adj(Zm) Y / det.  Coordinates
    // here are tiny (short vectors), so int64 is ample headroom.
    std::vector<std::vector<long long>> zm(n, std::vector<long long>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            zm[i][j] = base[i][j];
            if (std::llabs(zm[i][j]) > (1LL << 20))
                throw std::overflow_error("enumerate_transporters: coordinate too large");
        }
    // cofactor expansion; n is 2 or 3 in practice but keep it general
    std::function<long long(const std::vector<std::vector<long long>>&)> idet =
        [&](const std::vector<std::vector<long long>>& m) -> long long {
        int sz = (int)m.size();
        if (sz == 1) return m[0][0];
        long long s = 0, sgn = 1;
        for (int c2 = 0; c2 < sz; ++c2) {
            std::vector<std::vector<long long>> sub(sz - 1, std::vector<long long>(sz - 1));
            for (int i = 1; i < sz; ++i) {
                int cc = 0;
                for (int j = 0; j < sz; ++j)
                    if (j != c2) sub[i - 1][cc++] = m[i][j];
            }
            s += sgn * m[0][c2] * idet(sub);
            sgn = -sgn;
        }
        return s;
    };
    long long det0 = idet(zm);
    if (det0 == 0) return out;
    // adj(Zm)_{ij} = (-1)^{i+j} det(Zm minor ji)
    std::vector<std::vector<long long>> adj(n, std::vector<long long>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<std::vector<long long>> sub(n - 1, std::vector<long long>(n - 1));
            int ri = 0;
            for (int r = 0; r < n; ++r) {
                if (r == j) continue;
                int ci = 0;
                for (int cl = 0; cl < n; ++cl)
                    if (cl != i) sub[ri][ci++] = zm[r][cl];
                ++ri;
            }
            long long d = n == 1 ? 1 : idet(sub);
            adj[i][j] = ((i + j) % 2 ? -d : d);
        }

    // per-position candidates, pruned by the Gamma-invariants of a vector
    std::vector<std::vector<LatVec>> cand(n);
    for (int i = 0; i < n; ++i) {
        long long ci = content_of(base[i]);
        bool mi = block_flag(base[i], h, conj);
        for (const auto& y : Mto)
            if (content_of(y) == ci && block_flag(y, h, conj) == mi) {
                cand[i].push_back(y);
                LatVec neg = y;
                for (auto& v : neg) v = -v;
                cand[i].push_back(neg);
            }
        if (cand[i].empty()) return out;
    }

    std::vector<int> pick(n, 0);
    for (;;) {
        // G = adj * Y, integral iff det0 divides every entry
        bool integral = true;
        IMat g(n);
        for (int r = 0; r < n && integral; ++r)
            for (int j = 0; j < n; ++j) {
                long long s = 0;
                for (int i = 0; i < n; ++i) s += adj[r][i] * cand[i][pick[i]][j];
                if (s % det0 != 0) {
                    integral = false;
                    break;
                }
                g.at(r, j) = s / det0;
            }
        if (integral && gamma_member(g, h, conj) && mul_set(Mfrom, g) == Mto) {
            out.push_back(g);
            if (!all) return out;
        }
        int p = 0;
        while (p < n && ++pick[p] == (int)cand[p].size()) pick[p++] = 0;
        if (p == n) break;
    }
    return out;
}

std::optional<IMat> find_transporter(const std::vector<LatVec>& Mfrom,
                                     const std::vector<LatVec>& Mto, const HeckeDatum& h,
                                     bool conj) {
    auto v = enumerate_transporters(Mfrom, Mto, h, false, conj);
    if (v.empty()) return std::nullopt;
    return v.front();
}

// cheap Gamma-invariants of a cell, used to prune orbit candidates
static std::vector<long long> cell_key(const FiberCell& c, const HeckeDatum& h, bool conj) {
    std::vector<long long> k{(long long)c.dim, (long long)c.M.size()};
    std::vector<long long> per;
    for (const auto& x : c.M)
        per.push_back(2 * content_of(x) + (block_flag(x, h, conj) ? 1 : 0));
    std::sort(per.begin(), per.end());
    k.insert(k.end(), per.begin(), per.end());
    return k;
}

OrbitTable gamma_classify(const std::vector<FiberCell>& cells, const HeckeDatum& h, bool conj) {
    OrbitTable t;
    t.cells = cells;
    t.rep_of.resize(cells.size());
    t.transporters.resize(cells.size());
    std::vector<std::vector<long long>> keys;
    // classify interior cells first so orbit reps are interior whenever possible
    std::vector<size_t> order;
    for (size_t i = 0; i < cells.size(); ++i)
        if (cells[i].interior) order.push_back(i);
    for (size_t i = 0; i < cells.size(); ++i)
        if (!cells[i].interior) order.push_back(i);
    for (size_t i : order) {
        auto key = cell_key(cells[i], h, conj);
        int found = -1;
        IMat g;
        for (size_t r = 0; r < t.reps.size() && found < 0; ++r) {
            if (keys[r] != key) continue;
            auto tr = find_transporter(t.reps[r].M, cells[i].M, h, conj);
            if (tr) {
                found = (int)r;
                g = *tr;
            }
        }
        if (found < 0) {
            found = (int)t.reps.size();
            t.reps.push_back(cells[i]);
            keys.push_back(key);
            g = IMat::identity(h.n);
            t.stabilizers.push_back(
                enumerate_transporters(cells[i].M, cells[i].M, h, true, conj));
        }
        t.rep_of[i] = found;
        t.transporters[i] = g;
    }
    for (const auto& r : t.reps)
        if (!r.interior) t.complete = false;
    return t;
}

std::string fiber_dump(const std::vector<FiberCell>& cells, const Rat& u) {
    std::vector<const FiberCell*> order;
    for (const auto& c : cells) order.push_back(&c);
    std::sort(order.begin(), order.end(), [](const FiberCell* a, const FiberCell* b) {
        if (a->dim != b->dim) return a->dim < b->dim;
        return a->M < b->M;
    });
    std::ostringstream os;
    for (const auto* c : order) {
        os << "CELL dim=" << c->dim << " M={";
        for (size_t i = 0; i < c->M.size(); ++i) {
            if (i) os << ",";
            os << latvec_str(c->M[i]);
        }
        os << "} u=" << rat_str(u) << "\n";
    }
    return os.str();
}

} // namespace wtc
