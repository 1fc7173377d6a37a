#include "wtc/temperament.hpp"
#include "wtc/affine.hpp"
#include "wtc/poly.hpp"
#include <algorithm>
#include <iterator>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>

namespace wtc {

namespace {

// rows of the vertex equality system: weight_{u'}(x) Z[x] = 1, i.e.
// Z[x] = 1 for x in M0 and Z[x] = u' otherwise; unknowns are the upper
// triangle of Z, off-diagonal coefficients doubled by symmetry
void pencil_system(const std::vector<LatVec>& M, const HeckeDatum& h, Mat<Rat>& A, RatVec& b0,
                   RatVec& b1) {
    const int n = h.n;
    A = Mat<Rat>((int)M.size(), n * (n + 1) / 2);
    b0.assign(M.size(), Rat(0));
    b1.assign(M.size(), Rat(0));
    for (size_t r = 0; r < M.size(); ++r) {
        const LatVec& x = M[r];
        int c = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j, ++c)
                A.at((int)r, c) = make_rat((long)(i == j ? x[i] * x[i] : 2 * x[i] * x[j]));
        (in_M0(x, h) ? b0 : b1)[r] = 1;
    }
}

Form unpack_form(const RatVec& z, int n) {
    Form Z(n, n);
    int c = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++c) {
            Z.at(i, j) = z[c];
            Z.at(j, i) = z[c];
        }
    return Z;
}

Form form_at(const Form& Z0, const Form& Z1, const Rat& u) { return Z0 + u * Z1; }

// labels at the u0 fiber: non-M0 achievers tie with their ell-multiple
// in M0 and are dropped in its favor
std::vector<LatVec> tie_map(const std::vector<LatVec>& M, const HeckeDatum& h) {
    std::vector<LatVec> r;
    for (LatVec x : M) {
        if (!in_M0(x, h))
            for (auto& v : x) v *= h.ell;
        r.push_back(sign_normalize(std::move(x)));
    }
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

// det(Z0 + X Z1) by Leibniz expansion; n <= 3 in scope
RatPoly pencil_det(const Form& Z0, const Form& Z1) {
    const int n = Z0.rows;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    RatPoly d;
    do {
        int inv = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (p[i] > p[j]) ++inv;
        RatPoly term = RatPoly::constant(Rat(inv & 1 ? -1 : 1));
        for (int i = 0; i < n; ++i)
            term = term * RatPoly(std::vector<Rat>{Z0.at(i, p[i]), Z1.at(i, p[i])});
        d = d + term;
    } while (std::next_permutation(p.begin(), p.end()));
    return d;
}

struct RootBound {
    bool has_root = false;            // a det root lies between cap and u
    Rat bracket;                      // root-free on the open side toward u
    std::optional<RootInterval> iv;   // bracket's root, refinable
};

bool contains_pt(const RootInterval& iv, const Rat& p) { return iv.lo <= p && p <= iv.hi; }

// nearest det root strictly between u and cap (cap itself included as a
// root location); dir < 0 searches below u, dir > 0 above
RootBound root_bound(const RatPoly& fsf, const Rat& u, const Rat& cap, int dir) {
    RootBound rb;
    rb.bracket = cap;
    if (fsf.degree() < 1) return rb;
    const bool cap_is_root = fsf.eval(cap) == 0;
    if (cap_is_root) {
        rb.has_root = true;
        rb.iv = RootInterval{cap, cap};
    }
    for (auto iv : isolate_real_roots(fsf)) {
        if (cap_is_root && contains_pt(iv, cap)) continue; // that root is cap itself
        while (iv.lo != iv.hi && (contains_pt(iv, u) || contains_pt(iv, cap)))
            iv = refine_root(fsf, iv, (iv.hi - iv.lo) / 4);
        if (dir < 0) {
            if (iv.hi < u && iv.lo > cap && (!rb.has_root || iv.hi > rb.bracket)) {
                rb.has_root = true;
                rb.bracket = iv.hi;
                rb.iv = iv;
            }
        } else {
            if (iv.lo > u && iv.hi < cap && (!rb.has_root || iv.lo < rb.bracket)) {
                rb.has_root = true;
                rb.bracket = iv.lo;
                rb.iv = iv;
            }
        }
    }
    return rb;
}

// all x with weight_t(x) Z[x] <= 1; t <= 1 so the unweighted bound 1 covers both weights
std::vector<LatVec> value_le1(const Form& Z, const Rat& t, const HeckeDatum& h) {
    std::vector<LatVec> out;
    for (auto& x : short_vectors(Z, Rat(1)))
        if (weight_u(x, t, h) * eval_form(Z, x) <= Rat(1)) out.push_back(x);
    return out;
}

// parameter where x's weighted value along the pencil equals 1; the value
// is monotone in u' (linear, or linear-over-u'), so the crossing is unique
bool crossing_of(const LatVec& x, const Form& Z0, const Form& Z1, const HeckeDatum& h, Rat& t) {
    Rat p = eval_form(Z0, x), q = eval_form(Z1, x);
    if (in_M0(x, h)) {
        if (q == 0) return false;
        t = (Rat(1) - p) / q;
    } else {
        if (q == Rat(1)) return false;
        t = p / (Rat(1) - q);
    }
    return true;
}

// probe point t already shows a change, so every vector crossing between
// t and u has weighted value <= 1 at t: the candidate list is complete
void scan_crossings(const VertexPencil& vp, const Form& Zt, const Rat& t, const Rat& u,
                    const HeckeDatum& h, int dir, Rat& uend, std::vector<LatVec>& newv) {
    std::set<LatVec> Mset(vp.M.begin(), vp.M.end());
    bool have = false;
    Rat best;
    std::vector<LatVec> arg;
    for (auto& x : value_le1(Zt, t, h)) {
        if (Mset.count(x)) continue;
        Rat c;
        if (!crossing_of(x, vp.Z0, vp.Z1, h, c)) continue;
        if (dir < 0 ? !(c < u) : !(c > u)) continue;
        if (!have || (dir < 0 ? c > best : c < best)) {
            have = true;
            best = c;
            arg.clear();
        }
        if (c == best) arg.push_back(x);
    }
    if (!have) throw std::runtime_error("temperament: threshold scan found no crossing");
    std::sort(arg.begin(), arg.end());
    uend = best;
    newv = std::move(arg);
}

// checks whether M survives to the sweep boundary ub (possibly saturating
// exactly there); returns false when a crossing lies strictly inside
bool try_boundary(const VertexPencil& vp, const Rat& ub, const HeckeDatum& h, Rat& uend,
                  std::vector<LatVec>& newv) {
    Form Z = form_at(vp.Z0, vp.Z1, ub);
    auto mv = minimal_vectors(Z, ub, h);
    auto expect = ub == h.u0() ? tie_map(vp.M, h) : vp.M;
    if (mv.m == Rat(1) &&
        std::includes(mv.M.begin(), mv.M.end(), expect.begin(), expect.end())) {
        uend = ub;
        newv.clear();
        std::set_difference(mv.M.begin(), mv.M.end(), expect.begin(), expect.end(),
                            std::back_inserter(newv));
        return true;
    }
    return false;
}

void side_search(const VertexPencil& vp, const Rat& u, const HeckeDatum& h, int dir,
                 const RatPoly& fsf, Rat& uend, std::vector<LatVec>& newv) {
    const Rat cap = dir < 0 ? h.u0() : Rat(1);
    if (u == cap) {
        uend = cap;
        newv.clear();
        return;
    }
    auto rb = root_bound(fsf, u, cap, dir);
    if (!rb.has_root) {
        // Z stays definite through the boundary; monotonicity makes the
        // boundary evaluation decisive for the whole range
        if (!try_boundary(vp, cap, h, uend, newv))
            scan_crossings(vp, form_at(vp.Z0, vp.Z1, cap), cap, u, h, dir, uend, newv);
        return;
    }
    // bisect toward the nearest root; new minimal vectors must appear
    // before Z degenerates there
    Rat edge = rb.bracket;
    Rat t = (edge + u) / 2;
    for (int iter = 0; iter < 96; ++iter) {
        Form Zt = form_at(vp.Z0, vp.Z1, t);
        auto mv = minimal_vectors(Zt, t, h);
        if (!(mv.m == Rat(1) && mv.M == vp.M)) {
            scan_crossings(vp, Zt, t, u, h, dir, uend, newv);
            return;
        }
        // tighten the root bracket so the crossing cannot hide under it
        if (rb.iv && rb.iv->lo != rb.iv->hi) {
            *rb.iv = refine_root(fsf, *rb.iv, (rb.iv->hi - rb.iv->lo) / 4);
            edge = dir < 0 ? rb.iv->hi : rb.iv->lo;
        }
        t = (edge + t) / 2;
    }
    throw std::runtime_error("temperament: interval bisection cap exceeded");
}

} // namespace

VertexPencil vertex_interval(const std::vector<LatVec>& M, const Rat& u, const HeckeDatum& h) {
    VertexPencil vp;
    vp.M = M;
    std::sort(vp.M.begin(), vp.M.end());
    Mat<Rat> A;
    RatVec b0, b1;
    pencil_system(vp.M, h, A, b0, b1);
    auto sol = solve_affine(A, b0, b1);
    if (sol.kind == AffineKind::PointOnly) {
        if (sol.u_point != u)
            throw std::runtime_error("temperament: vertex pencil pinned away from u");
        vp.point_only = true;
        vp.u_point = sol.u_point;
        return vp;
    }
    if (sol.kind != AffineKind::Unique)
        throw std::runtime_error("temperament: vertex pencil infeasible or underdetermined");
    vp.Z0 = unpack_form(sol.z0, h.n);
    vp.Z1 = unpack_form(sol.z1, h.n);
    RatPoly fsf = squarefree_part(pencil_det(vp.Z0, vp.Z1));
    side_search(vp, u, h, -1, fsf, vp.u1, vp.new_lo);
    side_search(vp, u, h, +1, fsf, vp.u2, vp.new_hi);
    return vp;
}

Rat next_critical_below(const OrbitTable& fib, const Rat& u, const HeckeDatum& h) {
    Rat best = h.u0();
    for (auto& rep : fib.reps) {
        if (rep.dim != 0) continue;
        auto vp = vertex_interval(rep.M, u, h);
        if (vp.point_only)
            throw std::runtime_error("temperament: next_critical_below at a critical temperament");
        if (vp.u1 > best) best = vp.u1;
    }
    return best;
}

Form vertex_form(const std::vector<LatVec>& M, const Rat& u, const HeckeDatum& h) {
    std::vector<LatVec> Ms = M;
    std::sort(Ms.begin(), Ms.end());
    Mat<Rat> A;
    RatVec b0, b1;
    pencil_system(Ms, h, A, b0, b1);
    auto sol = solve_affine(A, b0, b1);
    if (sol.kind == AffineKind::Unique)
        return form_at(unpack_form(sol.z0, h.n), unpack_form(sol.z1, h.n), u);
    if (sol.kind == AffineKind::PointOnly && sol.u_point == u)
        return unpack_form(sol.z_point, h.n);
    throw std::runtime_error("temperament: no vertex pencil at u");
}

std::vector<LatVec> saturate(const std::vector<LatVec>& M, const Rat& u, const HeckeDatum& h) {
    std::vector<LatVec> Ms = M;
    std::sort(Ms.begin(), Ms.end());
    Form Z = vertex_form(Ms, u, h);
    if (!is_positive_definite(Z))
        throw std::runtime_error("temperament: saturate limit form not positive definite");
    auto mv = minimal_vectors(Z, u, h);
    auto expect = u == h.u0() ? tie_map(Ms, h) : Ms;
    if (!(mv.m == Rat(1)) ||
        !std::includes(mv.M.begin(), mv.M.end(), expect.begin(), expect.end()))
        throw std::runtime_error("temperament: M not contained in the saturated minimal set");
    return mv.M;
}

namespace {

struct Classified {
    FiberResult fr;
    OrbitTable ot;
    int c_used = 0;
};

Classified classified_fiber(const Rat& u, const HeckeDatum& h, int c) {
    int cc = c;
    for (int tries = 0; tries < 4; ++tries, cc *= 2) {
        FiberResult fr = fiber_cells(u, h, cc);
        if (!fr.closed) continue;
        OrbitTable ot = gamma_classify(fr.cells, h);
        if (!ot.complete) continue;
        return {std::move(fr), std::move(ot), cc};
    }
    throw std::runtime_error("temperament: fiber window incomplete after retries at u = " +
                             rat_str(u));
}

} // namespace

WTComplex build_wtc(const HeckeDatum& h, int c) {
    WTComplex w = {h, {}, {}, {}, {}, c};
    const Rat u0 = h.u0();

    // accumulate right to left, reverse at the end
    std::vector<Rat> crits;
    std::vector<int> mult;
    std::vector<OrbitTable> fibs;
    std::vector<SlabData> slabs;

    {
        auto top = classified_fiber(Rat(1), h, c);
        w.c = std::max(w.c, top.c_used);
        crits.push_back(Rat(1));
        mult.push_back(0);
        fibs.push_back(std::move(top.ot));
    }

    Rat crit(1);
    for (int guard = 0; crit != u0; ++guard) {
        if (guard > 64) throw std::runtime_error("temperament: sweep did not terminate");

        // cheap lower bound for the sample from the current critical
        // fiber's own vertex pencils (point_only reps constrain nothing)
        Rat lb = u0;
        for (auto& rep : fibs.back().reps) {
            if (rep.dim != 0) continue;
            auto vp = vertex_interval(rep.M, crit, h);
            if (!vp.point_only && vp.u1 > lb) lb = vp.u1;
        }

        Rat sample = (lb + crit) / 2;
        std::optional<Classified> sf;
        Rat next = u0;
        int nmult = 0;
        for (int attempt = 0;; ++attempt) {
            if (attempt >= 40)
                throw std::runtime_error("temperament: slab sampling retry limit below u = " +
                                         rat_str(crit));
            auto cand = classified_fiber(sample, h, w.c);
            bool degenerate = false, any_vertex = false;
            Rat u1max = u0, u2min = Rat(1);
            std::vector<Rat> u1s;
            for (auto& rep : cand.ot.reps) {
                if (rep.dim != 0) continue;
                any_vertex = true;
                auto vp = vertex_interval(rep.M, sample, h);
                if (vp.point_only) {
                    degenerate = true;
                    break;
                }
                u1s.push_back(vp.u1);
                if (vp.u1 > u1max) u1max = vp.u1;
                if (vp.u2 < u2min) u2min = vp.u2;
            }
            if (!any_vertex)
                throw std::runtime_error("temperament: sample fiber has no vertex orbit");
            // the sample belongs to the slab just below crit exactly when
            // its vertex intervals reach back to crit and none ends at or
            // above the sample itself
            if (!degenerate && u2min == crit && u1max < sample) {
                next = u1max;
                nmult = (int)std::count(u1s.begin(), u1s.end(), next);
                w.c = std::max(w.c, cand.c_used);
                sf = std::move(cand);
                break;
            }
            sample = (sample + crit) / 2;
        }

        SlabData sd;
        sd.lo = next;
        sd.hi = crit;
        sd.sample = sample;
        sd.table = sf->ot;
        // attaching maps: a slab cell closes onto the cell cut out by the
        // saturations of the vertices above it (the barycentric pencil of
        // those vertex pencils achieves 1 exactly on the intersection)
        std::map<std::vector<LatVec>, std::vector<LatVec>> cache_hi, cache_lo;
        for (auto& rep : sd.table.reps) {
            std::vector<const std::vector<LatVec>*> vtx;
            for (auto& cell : sd.table.cells)
                if (cell.dim == 0 &&
                    std::includes(cell.M.begin(), cell.M.end(), rep.M.begin(), rep.M.end()))
                    vtx.push_back(&cell.M);
            auto intersect_sats = [&](const Rat& end,
                                      std::map<std::vector<LatVec>, std::vector<LatVec>>& cache) {
                std::vector<LatVec> acc;
                bool first = true;
                for (auto* Mv : vtx) {
                    auto it = cache.find(*Mv);
                    if (it == cache.end()) it = cache.emplace(*Mv, saturate(*Mv, end, h)).first;
                    if (first) {
                        acc = it->second;
                        first = false;
                    } else {
                        std::vector<LatVec> tmp;
                        std::set_intersection(acc.begin(), acc.end(), it->second.begin(),
                                              it->second.end(), std::back_inserter(tmp));
                        acc.swap(tmp);
                    }
                }
                return acc;
            };
            auto ahi = intersect_sats(crit, cache_hi);
            auto alo = intersect_sats(next, cache_lo);
            auto expect_lo = next == u0 ? tie_map(rep.M, h) : rep.M;
            if (!std::includes(ahi.begin(), ahi.end(), rep.M.begin(), rep.M.end()) ||
                !std::includes(alo.begin(), alo.end(), expect_lo.begin(), expect_lo.end()))
                throw std::runtime_error("temperament: attaching map lost cell vectors");
            sd.attach_hi.push_back(std::move(ahi));
            sd.attach_lo.push_back(std::move(alo));
        }
        slabs.push_back(std::move(sd));

        auto cf = classified_fiber(next, h, w.c);
        w.c = std::max(w.c, cf.c_used);
        crits.push_back(next);
        mult.push_back(nmult);
        fibs.push_back(std::move(cf.ot));
        crit = next;
    }

    std::reverse(crits.begin(), crits.end());
    std::reverse(mult.begin(), mult.end());
    std::reverse(fibs.begin(), fibs.end());
    std::reverse(slabs.begin(), slabs.end());
    w.critical = std::move(crits);
    w.multiplicity = std::move(mult);
    w.fibers = std::move(fibs);
    w.slabs = std::move(slabs);
    return w;
}

} // namespace wtc
