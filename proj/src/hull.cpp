#include "wtc/hull.hpp"
#include "wtc/mat.hpp"
#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace wtc {

using IVec = std::vector<Int>;
using Pts = std::vector<IVec>;

static Int idot(const IVec& x, const IVec& y) {
    Int s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

static IVec isub(const IVec& x, const IVec& y) {
    IVec d(x.size());
    for (size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
    return d;
}

static void normalize_functional(IVec& a, Int& b) {
    Int g = 0;
    for (const auto& v : a) g = gcd(g, v);
    g = gcd(g, b);
    if (g == 0) return;
    for (auto& v : a) v /= g;
    b /= g;
}

// affine rank of the points indexed by `idx`
static int affine_rank(const Pts& pts, const std::vector<int>& idx) {
    if (idx.empty()) return -1;
    Mat<Rat> m((int)idx.size() - 1, (int)pts[0].size());
    for (int i = 1; i < (int)idx.size(); ++i)
        for (int j = 0; j < m.cols; ++j)
            m.at(i - 1, j) = Rat(pts[idx[i]][j] - pts[idx[0]][j]);
    return idx.size() == 1 ? 0 : mat_rank(m);
}

// integer basis of the functionals vanishing on the differences of the
// points indexed by `idx`
static std::vector<IVec> annihilator(const Pts& pts, const std::vector<int>& idx) {
    int s = (int)pts[0].size();
    Mat<Rat> m(std::max(0, (int)idx.size() - 1), s);
    for (int i = 1; i < (int)idx.size(); ++i)
        for (int j = 0; j < s; ++j)
            m.at(i - 1, j) = Rat(pts[idx[i]][j] - pts[idx[0]][j]);
    auto rr = rref(m);
    std::vector<IVec> out;
    for (const auto& k : rr.kernel) {
        Int den = 1;
        for (const auto& r : k) {
            Int d = r.get_den();
            den = den / gcd(den, d) * d;
        }
        IVec v(s);
        Int g = 0;
        for (int j = 0; j < s; ++j) {
            v[j] = k[j].get_num() * (den / k[j].get_den());
            g = gcd(g, v[j]);
        }
        if (g != 0)
            for (auto& vv : v) vv /= g;
        out.push_back(std::move(v));
    }
    return out;
}

static std::vector<int> equality_set(const Pts& pts, const IVec& a, const Int& b) {
    std::vector<int> on;
    for (int i = 0; i < (int)pts.size(); ++i)
        if (idot(a, pts[i]) == b) on.push_back(i);
    return on;
}

// Rotate the supporting hyperplane (a, b) around the affine span of its
// current equality set, in direction w, onto the next point.  Returns
// false when no point lies on the positive side of w.
static bool rotate_onto(const Pts& pts, IVec& a, Int& b, const IVec& w, int base_pt) {
    const IVec& p0 = pts[base_pt];
    // t* = min over {q : w.d_q > 0} of (-a.d_q) / (w.d_q), exact as a
    // fraction (num, den); new functional den*a + num*w
    Int tn = 0, td = 0; // t* = tn/td, td > 0
    for (int q = 0; q < (int)pts.size(); ++q) {
        IVec d = isub(pts[q], p0);
        Int wd = idot(w, d);
        if (wd <= 0) continue;
        Int ad = idot(a, d); // <= 0 by support
        // candidate t_q = -ad / wd
        if (td == 0 || (-ad) * td < tn * wd) { tn = -ad; td = wd; }
    }
    IVec a2(a.size());
    if (td == 0) {
        // no point ever enters from the w side: the rotation passes all
        // the way through w itself; continue with normals w - s*a, s >= 0
        Int sn = 0, sd = 0; // s* = sn/sd, sd > 0
        for (int q = 0; q < (int)pts.size(); ++q) {
            IVec d = isub(pts[q], p0);
            Int ad = idot(a, d);
            if (ad >= 0) continue; // on the hyperplane: no constraint
            Int wd = idot(w, d);   // <= 0 here
            // s_q = wd/ad = (-wd)/(-ad)
            if (sd == 0 || (-wd) * sd < sn * (-ad)) { sn = -wd; sd = -ad; }
        }
        if (sd == 0) return false; // every point on the hyperplane
        for (size_t j = 0; j < a.size(); ++j) a2[j] = sd * w[j] - sn * a[j];
    } else {
        for (size_t j = 0; j < a.size(); ++j) a2[j] = td * a[j] + tn * w[j];
    }
    Int b2 = idot(a2, p0);
    bool zero = true;
    for (const auto& v : a2)
        if (v != 0) { zero = false; break; }
    if (zero) return false;
    normalize_functional(a2, b2);
    a = a2;
    b = b2;
    return true;
}

// Facet enumeration of a full-dimensional point set by wrapping.
// Recursion on the dimension supplies the ridges of each facet.
// With separating_only, only facets whose hyperplane separates the
// origin (b < 0) are expanded; see HullOptions.
static std::vector<HullFacet> wrap_facets(const Pts& pts, bool separating_only = false,
                                          const std::function<bool(const HullFacet&)>* expand =
                                              nullptr) {
    int s = (int)pts[0].size();
    assert((int)pts.size() >= s + 1);

    if (s == 1) {
        // segment: two facets, all argmin and all argmax points (ties kept,
        // so every equality set stays maximal)
        int lo = 0, hi = 0;
        for (int i = 1; i < (int)pts.size(); ++i) {
            if (pts[i][0] < pts[lo][0]) lo = i;
            if (pts[i][0] > pts[hi][0]) hi = i;
        }
        HullFacet flo{{}, {Int(-1)}, -pts[lo][0]};
        HullFacet fhi{{}, {Int(1)}, pts[hi][0]};
        for (int i = 0; i < (int)pts.size(); ++i) {
            if (pts[i][0] == pts[lo][0]) flo.on.push_back(i);
            if (pts[i][0] == pts[hi][0]) fhi.on.push_back(i);
        }
        return {flo, fhi};
    }

    // initial supporting hyperplane: maximize the first coordinate (or,
    // when hunting the origin-separating region, minimize the direction
    // of the point sum, which starts separating whenever possible), then
    // rotate until the equality set spans a hyperplane
    IVec a(s, 0);
    a[0] = 1;
    if (separating_only) {
        IVec c(s, 0);
        for (const auto& p : pts)
            for (int j = 0; j < s; ++j) c[j] += p[j];
        bool zero = true;
        for (const auto& v : c)
            if (v != 0) zero = false;
        if (!zero)
            for (int j = 0; j < s; ++j) a[j] = -c[j];
    }
    Int b = idot(a, pts[0]);
    for (const auto& p : pts) {
        Int v = idot(a, p);
        if (v > b) b = v;
    }
    std::vector<int> on = equality_set(pts, a, b);
    while (affine_rank(pts, on) < s - 1) {
        bool advanced = false;
        for (const auto& w0 : annihilator(pts, on)) {
            for (int sgn2 : {1, -1}) {
                IVec w = w0;
                if (sgn2 < 0)
                    for (auto& v : w) v = -v;
                IVec a2 = a;
                Int b2 = b;
                if (!rotate_onto(pts, a2, b2, w, on[0])) continue;
                auto on2 = equality_set(pts, a2, b2);
                if (affine_rank(pts, on2) > affine_rank(pts, on)) {
                    a = a2;
                    b = b2;
                    on = std::move(on2);
                    advanced = true;
                    break;
                }
            }
            if (advanced) break;
        }
        if (!advanced) throw std::logic_error("hull: initial facet rotation stuck");
    }

    std::map<std::vector<int>, int> facet_ids;
    std::vector<HullFacet> facets;
    std::deque<int> queue;
    auto add_facet = [&](std::vector<int> onset, IVec fa, Int fb) {
        auto it = facet_ids.find(onset);
        if (it != facet_ids.end()) return it->second;
        int id = (int)facets.size();
        facet_ids.emplace(onset, id);
        facets.push_back({std::move(onset), std::move(fa), std::move(fb)});
        queue.push_back(id);
        return id;
    };
    add_facet(on, a, b);

    std::set<std::vector<int>> ridges_done;
    bool found_separating = false;
    while (!queue.empty()) {
        int fid = queue.front();
        queue.pop_front();
        if (separating_only || expand) {
            // expand everything until the accepted region is reached,
            // then only its members (the region is ridge-connected)
            bool ok = (!separating_only || facets[fid].b < 0) &&
                      (!expand || (*expand)(facets[fid]));
            if (ok)
                found_separating = true;
            else if (found_separating)
                continue;
        }
        // local copies: facets vector may reallocate
        std::vector<int> fon = facets[fid].on;
        IVec fa = facets[fid].a;
        Int fb = facets[fid].b;

        // ridges of this facet: facets of the facet's own hull, taken in
        // a projection that drops a coordinate where the normal is nonzero
        int drop = 0;
        while (fa[drop] == 0) ++drop;
        Pts proj;
        proj.reserve(fon.size());
        for (int gi : fon) {
            IVec p;
            p.reserve(s - 1);
            for (int j = 0; j < s; ++j)
                if (j != drop) p.push_back(pts[gi][j]);
            proj.push_back(std::move(p));
        }
        auto subfacets = wrap_facets(proj);
        for (const auto& sf : subfacets) {
            std::vector<int> ridge;
            ridge.reserve(sf.on.size());
            for (int li : sf.on) ridge.push_back(fon[li]);
            std::sort(ridge.begin(), ridge.end());
            if (!ridges_done.insert(ridge).second) continue;

            // pivot across the ridge to the neighboring facet
            auto ann = annihilator(pts, ridge);
            // find w vanishing on the ridge but not on the facet, signed
            // negative on the facet's remaining points
            IVec w;
            bool saw_probe = false;
            // any facet point affinely independent from the ridge works as
            // the probe; skip coincident or dependent ones
            for (int gi : fon) {
                if (std::binary_search(ridge.begin(), ridge.end(), gi)) continue;
                saw_probe = true;
                IVec dprobe = isub(pts[gi], pts[ridge[0]]);
                for (const auto& w0 : ann) {
                    Int v = idot(w0, dprobe);
                    if (v == 0) continue;
                    w = w0;
                    if (v > 0)
                        for (auto& x : w) x = -x;
                    break;
                }
                if (!w.empty()) break;
            }
            if (!saw_probe) throw std::logic_error("hull: ridge equals facet");
            if (w.empty()) throw std::logic_error("hull: no pivot direction");
            IVec na = fa;
            Int nb = fb;
            if (!rotate_onto(pts, na, nb, w, ridge[0]))
                throw std::logic_error("hull: unbounded ridge pivot");
            auto non = equality_set(pts, na, nb);
            add_facet(std::move(non), std::move(na), std::move(nb));
        }
    }
    return facets;
}

HullResult convex_hull(const std::vector<std::vector<Int>>& points, int min_dim) {
    HullOptions opt;
    opt.min_dim = min_dim;
    return convex_hull(points, opt);
}

HullResult convex_hull(const std::vector<std::vector<Int>>& points, const HullOptions& opt) {
    int min_dim = opt.min_dim;
    HullResult res;
    if (points.empty()) throw std::invalid_argument("convex_hull: no points");
    res.ambient = (int)points[0].size();
    std::vector<int> all(points.size());
    for (int i = 0; i < (int)points.size(); ++i) all[i] = i;
    res.affine_dim = affine_rank(points, all);
    if (res.affine_dim < res.ambient) {
        res.degenerate = true;
        return res;
    }

    res.facets = wrap_facets(points, opt.separating_only, opt.expand ? &opt.expand : nullptr);
    if (min_dim >= res.ambient) return res; // facets only, no face lattice

    // face lattice by closing the facet vertex sets under intersection
    std::map<std::vector<int>, int> face_ids; // verts -> index in res.faces
    std::deque<int> queue;
    auto add_face = [&](std::vector<int> verts) -> int {
        auto it = face_ids.find(verts);
        if (it != face_ids.end()) return it->second;
        int d = affine_rank(points, verts);
        if (d < min_dim) return -1;
        int id = (int)res.faces.size();
        face_ids.emplace(verts, id);
        res.faces.push_back({std::move(verts), d, {}});
        if (d > min_dim) queue.push_back(id);
        return id;
    };
    for (const auto& f : res.facets) add_face(f.on);
    while (!queue.empty()) {
        int gid = queue.front();
        queue.pop_front();
        std::vector<int> gverts = res.faces[gid].verts;
        for (const auto& h : res.facets) {
            std::vector<int> inter;
            std::set_intersection(gverts.begin(), gverts.end(), h.on.begin(), h.on.end(),
                                  std::back_inserter(inter));
            if (inter.empty() || inter.size() == gverts.size()) continue;
            add_face(std::move(inter));
        }
    }

    for (auto& face : res.faces) {
        for (int i = 0; i < (int)res.facets.size(); ++i)
            if (std::includes(res.facets[i].on.begin(), res.facets[i].on.end(),
                              face.verts.begin(), face.verts.end()))
                face.facets.push_back(i);
    }
    std::sort(res.faces.begin(), res.faces.end(), [](const HullFace& x, const HullFace& y) {
        if (x.dim != y.dim) return x.dim > y.dim;
        return x.verts < y.verts;
    });
    return res;
}

} // namespace wtc
