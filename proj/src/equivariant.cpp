#include "wtc/equivariant.hpp"
#include <algorithm>
#include <map>
#include <stdexcept>

namespace wtc {

namespace {

// flatten the upper triangle (i <= j) row-major; append u for slab points
RatVec flatten_point(const Form& Z, bool with_u, const Rat& u) {
    RatVec p;
    p.reserve((size_t)Z.rows * (Z.rows + 1) / 2 + (with_u ? 1 : 0));
    for (int i = 0; i < Z.rows; ++i)
        for (int j = i; j < Z.cols; ++j) p.push_back(Z.at(i, j));
    if (with_u) p.push_back(u);
    return p;
}

Form unflatten_point(const RatVec& p, int n) {
    Form Z(n, n);
    size_t k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Z.at(i, j) = p[k];
            Z.at(j, i) = p[k];
            ++k;
        }
    return Z;
}

// the action of t on the model E matching M -> M t on labels:
// Z -> t^{-1} Z t^{-T}; the temperament coordinate is untouched
RatVec act_point(const RatVec& p, const Mat<Rat>& tinv, int n, bool with_u) {
    Form Z = unflatten_point(p, n);
    Form Zp = tinv * Z * tinv.transpose();
    return flatten_point(Zp, with_u, with_u ? p.back() : Rat(0));
}

std::vector<RatVec> act_points(const std::vector<RatVec>& pts, const IMat& t, int n,
                               bool with_u) {
    Mat<Rat> tinv = imat_to_rat(imat_inverse_unimodular(t));
    std::vector<RatVec> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(act_point(p, tinv, n, with_u));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Mat<Rat> frame_diffs(const std::vector<RatVec>& frame) {
    int d = (int)frame.size() - 1;
    int N = (int)frame[0].size();
    Mat<Rat> D(d, N);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < N; ++j) D.at(i, j) = frame[i + 1][j] - frame[0][j];
    return D;
}

int affine_dim(const std::vector<RatVec>& pts) {
    if (pts.empty()) return -1;
    int N = (int)pts[0].size();
    Mat<Rat> D((int)pts.size() - 1, N);
    for (int i = 1; i < (int)pts.size(); ++i)
        for (int j = 0; j < N; ++j) D.at(i - 1, j) = pts[i][j] - pts[0][j];
    return mat_rank(D);
}

// first d+1 affinely independent points of the (sorted) vertex list
std::vector<RatVec> canonical_frame(const std::vector<RatVec>& pts, int d) {
    std::vector<RatVec> f{pts[0]};
    int N = (int)pts[0].size();
    Mat<Rat> D(0, N);
    for (size_t i = 1; i < pts.size() && (int)f.size() < d + 1; ++i) {
        Mat<Rat> D2((int)f.size(), N);
        for (int r = 0; r + 1 < (int)f.size(); ++r)
            for (int j = 0; j < N; ++j) D2.at(r, j) = D.at(r, j);
        for (int j = 0; j < N; ++j) D2.at((int)f.size() - 1, j) = pts[i][j] - pts[0][j];
        if (mat_rank(D2) == (int)f.size()) {
            f.push_back(pts[i]);
            D = D2;
        }
    }
    if ((int)f.size() != d + 1) throw std::runtime_error("equivariant: frame deficient");
    return f;
}

// orientation of frame A relative to frame B (same affine span):
// sign of det X with X diffs(B) = diffs(A)
int sign_rel(const std::vector<RatVec>& A, const std::vector<RatVec>& B) {
    int d = (int)A.size() - 1;
    if ((int)B.size() - 1 != d) throw std::runtime_error("equivariant: frame size mismatch");
    if (d == 0) return 1;
    Mat<Rat> DA = frame_diffs(A), DB = frame_diffs(B);
    Mat<Rat> DBt = DB.transpose();
    Mat<Rat> X(d, d);
    for (int i = 0; i < d; ++i) {
        RatVec rhs(DA.cols);
        for (int j = 0; j < DA.cols; ++j) rhs[j] = DA.at(i, j);
        RatVec xi;
        if (!solve_linear(DBt, rhs, xi))
            throw std::runtime_error("equivariant: frame span mismatch");
        for (int j = 0; j < d; ++j) X.at(i, j) = xi[j];
    }
    return rat_sign(det(X));
}

RatVec barycenter(const std::vector<RatVec>& pts) {
    RatVec b(pts[0].size(), Rat(0));
    for (const auto& p : pts)
        for (size_t j = 0; j < b.size(); ++j) b[j] += p[j];
    Rat inv = Rat(1) / make_rat((long)pts.size());
    for (auto& v : b) v = inv * v;
    return b;
}

// [sigma : facet]: orientation of (outward, facet frame) against sigma's
// canonical frame, outward = barycenter(facet) - barycenter(sigma)
int incidence_sign(const std::vector<RatVec>& sigma_verts,
                   const std::vector<RatVec>& sigma_frame,
                   const std::vector<RatVec>& facet_verts, int facet_dim) {
    auto ff = canonical_frame(facet_verts, facet_dim);
    RatVec bs = barycenter(sigma_verts), bf = barycenter(facet_verts);
    std::vector<RatVec> A;
    A.push_back(ff[0]);
    RatVec q = ff[0];
    for (size_t j = 0; j < q.size(); ++j) q[j] += bf[j] - bs[j];
    A.push_back(q);
    for (size_t i = 1; i < ff.size(); ++i) A.push_back(ff[i]);
    return sign_rel(A, sigma_frame);
}

bool proper_subset(const std::vector<LatVec>& a, const std::vector<LatVec>& b) {
    return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// orientation sign of the transport gamma carrying orbit rep rho onto the
// cell whose sorted vertex list is facet_verts
int transport_sign(const std::vector<RatVec>& rho_frame, const IMat& gamma,
                   const std::vector<RatVec>& facet_verts, int d, int n, bool with_u) {
    Mat<Rat> gi = imat_to_rat(imat_inverse_unimodular(gamma));
    std::vector<RatVec> mapped;
    mapped.reserve(rho_frame.size());
    for (const auto& p : rho_frame) mapped.push_back(act_point(p, gi, n, with_u));
    return sign_rel(mapped, canonical_frame(facet_verts, d));
}

// geometric vertex points of every cell of a fiber window: representatives
// from the vertex forms of the incident dim-0 cells (interior reps see all
// of them), the rest by transport
std::vector<std::vector<RatVec>> fiber_cell_points(const OrbitTable& tab, const Rat& u,
                                                   const HeckeDatum& h, bool with_u) {
    std::map<std::vector<LatVec>, RatVec> vtx;
    for (const auto& c : tab.cells)
        if (c.dim == 0 && !vtx.count(c.M))
            vtx[c.M] = flatten_point(vertex_form(c.M, u, h), with_u, u);
    std::vector<std::vector<RatVec>> rep_pts(tab.reps.size());
    for (size_t j = 0; j < tab.reps.size(); ++j) {
        const auto& rep = tab.reps[j];
        std::vector<RatVec> pts;
        for (const auto& [M, p] : vtx)
            if (std::includes(M.begin(), M.end(), rep.M.begin(), rep.M.end()))
                pts.push_back(p);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        if (affine_dim(pts) != rep.dim)
            throw std::runtime_error("equivariant: fiber rep has deficient vertex set");
        rep_pts[j] = std::move(pts);
    }
    std::vector<std::vector<RatVec>> out(tab.cells.size());
    for (size_t i = 0; i < tab.cells.size(); ++i)
        out[i] = act_points(rep_pts[tab.rep_of[i]], tab.transporters[i], h.n, with_u);
    return out;
}

struct Part {
    std::vector<OrientedCell> cells;
    std::vector<std::vector<RatVec>> frames; // canonical frame per cell
    std::vector<CellOrbit> orbits;
};

Part make_part(const OrbitTable& tab, const std::vector<std::vector<RatVec>>& pts,
               const Rat& ulo, const Rat& uhi, int dim_shift, const HeckeDatum& h,
               bool with_u) {
    if (!tab.complete) throw std::runtime_error("equivariant: incomplete orbit table");
    Part part;
    part.cells.resize(tab.cells.size());
    part.frames.resize(tab.cells.size());
    for (size_t i = 0; i < tab.cells.size(); ++i) {
        OrientedCell& oc = part.cells[i];
        oc.M = tab.cells[i].M;
        oc.ulo = ulo;
        oc.uhi = uhi;
        oc.dim = tab.cells[i].dim + dim_shift;
        oc.verts = pts[i];
        oc.orbit = tab.rep_of[i];
        oc.from_rep = tab.transporters[i];
        part.frames[i] = canonical_frame(oc.verts, oc.dim);
    }
    part.orbits.resize(tab.reps.size());
    for (size_t j = 0; j < tab.reps.size(); ++j) {
        CellOrbit& o = part.orbits[j];
        o.dim = tab.reps[j].dim + dim_shift;
        o.rep = -1;
        for (size_t i = 0; i < tab.cells.size(); ++i)
            if (tab.rep_of[i] == (int)j && tab.cells[i].M == tab.reps[j].M) {
                o.rep = (int)i;
                break;
            }
        if (o.rep < 0) throw std::runtime_error("equivariant: orbit rep not in window");
        o.stab = tab.stabilizers[j];
        const auto& frame = part.frames[o.rep];
        for (const auto& g : o.stab) {
            int s = transport_sign(frame, g, part.cells[o.rep].verts, o.dim, h.n, with_u);
            o.stab_sign.push_back(s);
            if (s < 0) o.killed = true;
        }
    }
    return part;
}

// boundary of each orbit rep against the facets visible in the same part;
// cell indices and orbit indices are offset into the assembled complex
void part_boundary(const Part& part, const OrbitTable& tab, int orbit_off,
                   std::vector<std::vector<BoundaryTerm>>& boundary, const HeckeDatum& h,
                   bool with_u) {
    for (size_t j = 0; j < part.orbits.size(); ++j) {
        const CellOrbit& o = part.orbits[j];
        const OrientedCell& sigma = part.cells[o.rep];
        const auto& sframe = part.frames[o.rep];
        auto& terms = boundary[orbit_off + j];
        for (size_t i = 0; i < part.cells.size(); ++i) {
            const OrientedCell& tau = part.cells[i];
            if (tau.dim != sigma.dim - 1 || !proper_subset(sigma.M, tau.M)) continue;
            int ro = tab.rep_of[i];
            int inc = incidence_sign(sigma.verts, sframe, tau.verts, tau.dim);
            int gs = transport_sign(part.frames[part.orbits[ro].rep], tab.transporters[i],
                                    tau.verts, tau.dim, h.n, with_u);
            terms.push_back({orbit_off + ro, inc, tab.transporters[i], gs});
        }
    }
}

} // namespace

OrientedComplex orient_fiber(const OrbitTable& tab, const Rat& u, const HeckeDatum& h) {
    auto pts = fiber_cell_points(tab, u, h, false);
    Part part = make_part(tab, pts, u, u, 0, h, false);
    OrientedComplex oc = {h, 0, {}, {}, {}, 0, 0};
    oc.boundary.resize(part.orbits.size());
    part_boundary(part, tab, 0, oc.boundary, h, false);
    oc.cells = std::move(part.cells);
    oc.orbits = std::move(part.orbits);
    for (const auto& c : oc.cells) oc.maxdim = std::max(oc.maxdim, c.dim);
    return oc;
}

OrientedComplex orient_slab(const SlabData& sd, const OrbitTable& flo, const OrbitTable& fhi,
                            const HeckeDatum& h) {
    OrientedComplex oc = {h, 0, {}, {}, {}, 0, 0};

    auto lo_pts = fiber_cell_points(flo, sd.lo, h, true);
    auto hi_pts = fiber_cell_points(fhi, sd.hi, h, true);
    Part lo = make_part(flo, lo_pts, sd.lo, sd.lo, 0, h, true);
    Part hi = make_part(fhi, hi_pts, sd.hi, sd.hi, 0, h, true);

    // prism vertex points: both ends of every incident vertex pencil
    std::map<std::vector<LatVec>, std::pair<RatVec, RatVec>> pencil_ends;
    for (const auto& c : sd.table.cells)
        if (c.dim == 0 && !pencil_ends.count(c.M))
            pencil_ends[c.M] = {flatten_point(vertex_form(c.M, sd.lo, h), true, sd.lo),
                                flatten_point(vertex_form(c.M, sd.hi, h), true, sd.hi)};
    std::vector<std::vector<RatVec>> rep_pts(sd.table.reps.size());
    for (size_t j = 0; j < sd.table.reps.size(); ++j) {
        const auto& rep = sd.table.reps[j];
        std::vector<RatVec> pts;
        for (const auto& [M, pq] : pencil_ends)
            if (std::includes(M.begin(), M.end(), rep.M.begin(), rep.M.end())) {
                pts.push_back(pq.first);
                pts.push_back(pq.second);
            }
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        if (affine_dim(pts) != rep.dim + 1)
            throw std::runtime_error("equivariant: degenerate prism");
        rep_pts[j] = std::move(pts);
    }
    std::vector<std::vector<RatVec>> pr_pts(sd.table.cells.size());
    for (size_t i = 0; i < sd.table.cells.size(); ++i)
        pr_pts[i] = act_points(rep_pts[sd.table.rep_of[i]], sd.table.transporters[i], h.n, true);
    Part pr = make_part(sd.table, pr_pts, sd.lo, sd.hi, 1, h, true);

    oc.lo_orbits = (int)lo.orbits.size();
    oc.hi_orbits = (int)hi.orbits.size();
    int pr_off = oc.lo_orbits + oc.hi_orbits;
    int lo_cells = (int)lo.cells.size(), hi_cells = (int)hi.cells.size();

    oc.cells = lo.cells;
    oc.cells.insert(oc.cells.end(), hi.cells.begin(), hi.cells.end());
    oc.cells.insert(oc.cells.end(), pr.cells.begin(), pr.cells.end());
    for (int i = lo_cells; i < lo_cells + hi_cells; ++i) oc.cells[i].orbit += oc.lo_orbits;
    for (size_t i = lo_cells + hi_cells; i < oc.cells.size(); ++i) oc.cells[i].orbit += pr_off;

    oc.orbits = lo.orbits;
    oc.orbits.insert(oc.orbits.end(), hi.orbits.begin(), hi.orbits.end());
    oc.orbits.insert(oc.orbits.end(), pr.orbits.begin(), pr.orbits.end());
    for (int j = oc.lo_orbits; j < pr_off; ++j) oc.orbits[j].rep += lo_cells;
    for (size_t j = pr_off; j < oc.orbits.size(); ++j) oc.orbits[j].rep += lo_cells + hi_cells;

    oc.boundary.resize(oc.orbits.size());
    part_boundary(lo, flo, 0, oc.boundary, h, true);
    part_boundary(hi, fhi, oc.lo_orbits, oc.boundary, h, true);
    part_boundary(pr, sd.table, pr_off, oc.boundary, h, true);

    // prism ends close onto the cells named by the attaching labels;
    // a collapsed end (dimension drop > 1) contributes nothing
    for (size_t j = 0; j < pr.orbits.size(); ++j) {
        const CellOrbit& o = pr.orbits[j];
        const OrientedCell& sigma = pr.cells[o.rep];
        const auto& sframe = pr.frames[o.rep];
        for (int side = 0; side < 2; ++side) {
            const auto& label = side ? sd.attach_hi[j] : sd.attach_lo[j];
            const Part& end = side ? hi : lo;
            const OrbitTable& etab = side ? fhi : flo;
            int eoff = side ? oc.lo_orbits : 0;
            int fo = -1;
            IMat gamma;
            for (size_t k = 0; k < etab.reps.size(); ++k) {
                auto g = find_transporter(etab.reps[k].M, label, h);
                if (g) {
                    fo = (int)k;
                    gamma = *g;
                    break;
                }
            }
            if (fo < 0) throw std::runtime_error("equivariant: attach label has no orbit");
            if (end.orbits[fo].dim != sigma.dim - 1) continue; // collapsed end
            auto fverts = act_points(end.cells[end.orbits[fo].rep].verts, gamma, h.n, true);
            int inc = incidence_sign(sigma.verts, sframe, fverts, sigma.dim - 1);
            int gs = transport_sign(end.frames[end.orbits[fo].rep], gamma, fverts,
                                    sigma.dim - 1, h.n, true);
            oc.boundary[pr_off + j].push_back({eoff + fo, inc, gamma, gs});
        }
    }

    for (const auto& c : oc.cells) oc.maxdim = std::max(oc.maxdim, c.dim);
    return oc;
}

std::vector<RatVec> map_cell_points(const std::vector<RatVec>& pts, const Mat<Rat>& tinv,
                                    int n, bool with_u) {
    std::vector<RatVec> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(act_point(p, tinv, n, with_u));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int transport_sign_points(const std::vector<RatVec>& from, const Mat<Rat>& tinv,
                          const std::vector<RatVec>& to, int dim, int n, bool with_u) {
    auto frame = canonical_frame(from, dim);
    std::vector<RatVec> mapped;
    mapped.reserve(frame.size());
    for (const auto& p : frame) mapped.push_back(act_point(p, tinv, n, with_u));
    return sign_rel(mapped, canonical_frame(to, dim));
}

Mat<Rat> boundary_matrix(const OrientedComplex& oc, int d) {
    std::vector<int> rows, cols;
    std::vector<int> rowpos(oc.orbits.size(), -1);
    for (size_t j = 0; j < oc.orbits.size(); ++j) {
        if (oc.orbits[j].dim == d - 1) {
            rowpos[j] = (int)rows.size();
            rows.push_back((int)j);
        }
        if (oc.orbits[j].dim == d) cols.push_back((int)j);
    }
    Mat<Rat> B((int)rows.size(), (int)cols.size());
    for (size_t c = 0; c < cols.size(); ++c) {
        if (oc.orbits[cols[c]].killed) continue;
        for (const auto& t : oc.boundary[cols[c]]) {
            if (oc.orbits[t.orbit].killed) continue;
            B.at(rowpos[t.orbit], (int)c) += make_rat((long)(t.inc * t.gsign));
        }
    }
    return B;
}

ValidationReport validate(const OrientedComplex& oc) {
    ValidationReport r;
    auto fail = [&](const std::string& s) {
        r.ok = false;
        r.issues.push_back(s);
    };
    for (size_t i = 0; i < oc.cells.size(); ++i)
        if (affine_dim(oc.cells[i].verts) != oc.cells[i].dim)
            fail("cell " + std::to_string(i) + ": vertex span != dim");
    r.orbifold_euler = 0;
    for (size_t j = 0; j < oc.orbits.size(); ++j) {
        const CellOrbit& o = oc.orbits[j];
        if (o.rep < 0 || o.rep >= (int)oc.cells.size() || oc.cells[o.rep].dim != o.dim)
            fail("orbit " + std::to_string(j) + ": bad rep");
        if (o.stab.empty()) fail("orbit " + std::to_string(j) + ": empty stabilizer");
        bool has_id = false, rev = false;
        for (size_t g = 0; g < o.stab.size(); ++g) {
            if (o.stab_sign[g] != 1 && o.stab_sign[g] != -1)
                fail("orbit " + std::to_string(j) + ": bad stabilizer sign");
            if (o.stab_sign[g] < 0) rev = true;
            if (o.stab[g] == IMat::identity(oc.h.n)) {
                has_id = true;
                if (o.stab_sign[g] != 1)
                    fail("orbit " + std::to_string(j) + ": identity reverses");
            }
        }
        if (!has_id) fail("orbit " + std::to_string(j) + ": identity missing");
        if (rev != o.killed) fail("orbit " + std::to_string(j) + ": killed flag wrong");
        if (o.dim >= 1 && oc.boundary[j].size() < 2)
            fail("orbit " + std::to_string(j) + ": boundary too small");
        for (const auto& t : oc.boundary[j]) {
            if ((t.inc != 1 && t.inc != -1) || (t.gsign != 1 && t.gsign != -1))
                fail("orbit " + std::to_string(j) + ": bad boundary sign");
            if (oc.orbits[t.orbit].dim != o.dim - 1)
                fail("orbit " + std::to_string(j) + ": boundary dim mismatch");
        }
        Rat w = Rat(1) / make_rat((long)o.stab.size());
        if (o.dim % 2) r.orbifold_euler -= w;
        else r.orbifold_euler += w;
    }
    for (int d = 2; d <= oc.maxdim; ++d) {
        Mat<Rat> P = boundary_matrix(oc, d - 1) * boundary_matrix(oc, d);
        for (const auto& v : P.a)
            if (v != 0) {
                fail("boundary does not square to zero at dim " + std::to_string(d));
                break;
            }
    }
    return r;
}

} // namespace wtc
