#include "wtc/cohomology.hpp"
#include "wtc/temperament.hpp"
#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace wtc {

namespace {

Mat<Rat> rat_inverse(const IMat& g) {
    Mat<Rat> out;
    if (!invert(imat_to_rat(g), out)) throw std::runtime_error("rat_inverse: singular");
    return out;
}

const InvBlock& orbit_block(const CochainComplex& C, int deg, int orbit) {
    for (const auto& b : C.blocks[deg])
        if (b.orbit == orbit) return b;
    throw std::runtime_error("orbit_block: missing block");
}

// incremental row echelon over Q(zeta_m), rows kept mutually reduced
struct Echelon {
    std::vector<std::vector<CycloElem>> rows;
    std::vector<int> piv;

    bool add(std::vector<CycloElem> v) {
        for (size_t r = 0; r < rows.size(); ++r) {
            CycloElem c = v[piv[r]];
            if (c == CycloElem(0)) continue;
            for (size_t j = 0; j < v.size(); ++j) v[j] -= c * rows[r][j];
        }
        int p = -1;
        for (size_t j = 0; j < v.size(); ++j)
            if (!(v[j] == CycloElem(0))) {
                p = (int)j;
                break;
            }
        if (p < 0) return false;
        CycloElem inv = CycloElem(1) / v[p];
        for (auto& x : v) x *= inv;
        for (size_t r = 0; r < rows.size(); ++r) {
            CycloElem c = rows[r][p];
            if (c == CycloElem(0)) continue;
            for (size_t j = 0; j < v.size(); ++j) rows[r][j] -= c * v[j];
        }
        rows.push_back(std::move(v));
        piv.push_back(p);
        return true;
    }
};

} // namespace

CMat block_coords(const InvBlock& b, const CMat& cols) {
    int w = (int)b.rows.size();
    CMat sub(w, cols.cols);
    for (int i = 0; i < w; ++i)
        for (int j = 0; j < cols.cols; ++j) sub.at(i, j) = cols.at(b.rows[i], j);
    return b.rowinv * sub;
}

CochainComplex cochain_complex(const OrientedComplex& oc, const CoinducedModule& rho) {
    int m = rho.dim;
    CochainComplex C;
    C.maxdeg = oc.maxdim;
    C.dim.assign(C.maxdeg + 1, 0);
    C.blocks.assign(C.maxdeg + 1, {});
    for (size_t o = 0; o < oc.orbits.size(); ++o) {
        const CellOrbit& orb = oc.orbits[o];
        CMat P(m, m, CycloElem(0));
        for (size_t s = 0; s < orb.stab.size(); ++s) {
            CMat A = coind_action(rho, orb.stab[s]);
            if (orb.stab_sign[s] < 0) A = CycloElem(-1) * A;
            P = P + A;
        }
        P = (CycloElem(1) / CycloElem((long)orb.stab.size())) * P;
        if (!(P * P == P)) throw std::runtime_error("cochain_complex: averaging is not a projector");
        auto rr = rref(P);
        InvBlock b;
        b.orbit = (int)o;
        b.basis = CMat(m, rr.rank);
        for (int j = 0; j < rr.rank; ++j)
            for (int i = 0; i < m; ++i) b.basis.at(i, j) = P.at(i, rr.pivots[j]);
        auto rt = rref(b.basis.transpose());
        if (rt.rank != rr.rank) throw std::runtime_error("cochain_complex: basis rank drop");
        b.rows = rt.pivots;
        b.rowinv = CMat(rr.rank, rr.rank);
        if (rr.rank) {
            CMat sq(rr.rank, rr.rank);
            for (int i = 0; i < rr.rank; ++i)
                for (int j = 0; j < rr.rank; ++j) sq.at(i, j) = b.basis.at(b.rows[i], j);
            if (!invert(sq, b.rowinv))
                throw std::runtime_error("cochain_complex: coordinate rows singular");
        }
        b.offset = C.dim[orb.dim];
        C.dim[orb.dim] += rr.rank;
        C.blocks[orb.dim].push_back(std::move(b));
    }

    C.d.resize(C.maxdeg);
    for (int i = 0; i < C.maxdeg; ++i) C.d[i] = CMat(C.dim[i + 1], C.dim[i], CycloElem(0));
    for (size_t o = 0; o < oc.orbits.size(); ++o) {
        int ds = oc.orbits[o].dim;
        if (ds == 0) continue;
        const InvBlock& rowb = orbit_block(C, ds, (int)o);
        std::map<int, CMat> raw;
        for (const auto& t : oc.boundary[o]) {
            CMat A = CycloElem((long)(t.inc * t.gsign)) * coind_action(rho, t.gamma);
            auto it = raw.find(t.orbit);
            if (it == raw.end())
                raw.emplace(t.orbit, std::move(A));
            else
                it->second = it->second + A;
        }
        for (const auto& [to, R] : raw) {
            const InvBlock& colb = orbit_block(C, ds - 1, to);
            CMat RB = R * colb.basis;
            CMat red = block_coords(rowb, RB);
            if (!(rowb.basis * red == RB))
                throw std::runtime_error("cochain_complex: differential escapes the invariants");
            for (int i = 0; i < red.rows; ++i)
                for (int j = 0; j < red.cols; ++j)
                    C.d[ds - 1].at(rowb.offset + i, colb.offset + j) = red.at(i, j);
        }
    }
    for (int i = 0; i + 1 < C.maxdeg; ++i) {
        CMat z = C.d[i + 1] * C.d[i];
        if (!(z == CMat(z.rows, z.cols, CycloElem(0))))
            throw std::runtime_error("cochain_complex: d*d != 0");
    }
    return C;
}

CohomologyBasis cohomology(const CochainComplex& C) {
    CohomologyBasis H;
    H.hdim.assign(C.maxdeg + 1, 0);
    H.reps.resize(C.maxdeg + 1);
    H.proj.resize(C.maxdeg + 1);
    for (int i = 0; i <= C.maxdeg; ++i) {
        int n = C.dim[i];
        if (n == 0) {
            H.reps[i] = CMat(0, 0);
            H.proj[i] = CMat(0, 0);
            continue;
        }
        std::vector<std::vector<CycloElem>> zbasis;
        if (i < C.maxdeg) {
            zbasis = rref(C.d[i]).kernel;
        } else {
            for (int j = 0; j < n; ++j) {
                std::vector<CycloElem> e(n, CycloElem(0));
                e[j] = CycloElem(1);
                zbasis.push_back(std::move(e));
            }
        }
        Echelon ech;
        std::vector<std::vector<CycloElem>> fcols;
        std::vector<int> hpos;
        if (i > 0) {
            const CMat& B = C.d[i - 1];
            for (int j = 0; j < B.cols; ++j) {
                std::vector<CycloElem> v(n);
                for (int r = 0; r < n; ++r) v[r] = B.at(r, j);
                auto keep = v;
                if (ech.add(std::move(v))) fcols.push_back(std::move(keep));
            }
        }
        for (auto& z : zbasis) {
            auto keep = z;
            if (ech.add(std::move(z))) {
                hpos.push_back((int)fcols.size());
                fcols.push_back(std::move(keep));
            }
        }
        for (int j = 0; j < n; ++j) {
            std::vector<CycloElem> e(n, CycloElem(0));
            e[j] = CycloElem(1);
            auto keep = e;
            if (ech.add(std::move(e))) fcols.push_back(std::move(keep));
        }
        if ((int)fcols.size() != n) throw std::runtime_error("cohomology: basis completion failed");
        CMat F(n, n);
        for (int j = 0; j < n; ++j)
            for (int r = 0; r < n; ++r) F.at(r, j) = fcols[j][r];
        CMat Fi;
        if (!invert(F, Fi)) throw std::runtime_error("cohomology: frame singular");
        int hd = (int)hpos.size();
        H.hdim[i] = hd;
        H.reps[i] = CMat(n, hd);
        H.proj[i] = CMat(hd, n);
        for (int t = 0; t < hd; ++t)
            for (int r = 0; r < n; ++r) {
                H.reps[i].at(r, t) = F.at(r, hpos[t]);
                H.proj[i].at(t, r) = Fi.at(hpos[t], r);
            }
    }
    return H;
}

bool is_cochain_map(const std::vector<CMat>& f, const CochainComplex& src,
                    const CochainComplex& tgt) {
    for (int i = 0; i + 1 < (int)f.size(); ++i) {
        if (i >= src.maxdeg || i >= tgt.maxdeg) break;
        if (!(f[i + 1] * src.d[i] == tgt.d[i] * f[i])) return false;
    }
    return true;
}

CMat map_on_cohomology(const CMat& f_deg_i, const CohomologyBasis& src,
                       const CohomologyBasis& tgt, int i) {
    return tgt.proj[i] * f_deg_i * src.reps[i];
}

IMat hecke_a(const HeckeDatum& h) {
    IMat a = IMat::identity(h.n);
    for (int i = h.n - h.k; i < h.n; ++i) a.at(i, i) = h.ell;
    return a;
}

std::vector<IMat> hecke_cosets(const HeckeDatum& h) {
    int n = h.n, k = h.k, r = n - k;
    long long ell = h.ell;
    std::vector<IMat> out;
    // pivot column subsets of size r, lexicographic
    std::vector<int> piv(r);
    for (int i = 0; i < r; ++i) piv[i] = i;
    while (true) {
        std::vector<char> ispiv(n, 0);
        for (int c : piv) ispiv[c] = 1;
        std::vector<std::pair<int, int>> freepos;
        for (int i = 0; i < r; ++i)
            for (int j = piv[i] + 1; j < n; ++j)
                if (!ispiv[j]) freepos.push_back({i, j});
        std::vector<long long> val(freepos.size(), 0);
        while (true) {
            // lattice basis: lifted echelon rows of the subspace, then
            // ell times the non-pivot coordinate vectors
            IMat Cm(n);
            for (int i = 0; i < r; ++i) Cm.at(i, piv[i]) = 1;
            for (size_t t = 0; t < freepos.size(); ++t)
                Cm.at(freepos[t].first, freepos[t].second) = val[t];
            int row = r;
            for (int j = 0; j < n; ++j)
                if (!ispiv[j]) Cm.at(row++, j) = ell;
            // divide the trailing k rows by ell: the coset representative
            IMat w = Cm;
            for (int i = r; i < n; ++i)
                for (int j = 0; j < n; ++j) w.at(i, j) /= ell;
            long long d = imat_det(w);
            if (d != 1 && d != -1) throw std::runtime_error("hecke_cosets: rep not unimodular");
            out.push_back(std::move(w));
            size_t t = 0;
            while (t < val.size() && val[t] == ell - 1) val[t++] = 0;
            if (t == val.size()) break;
            ++val[t];
        }
        int i = r - 1;
        while (i >= 0 && piv[i] == n - r + i) --i;
        if (i < 0) break;
        ++piv[i];
        for (int j = i + 1; j < r; ++j) piv[j] = piv[j - 1] + 1;
    }
    // Gaussian binomial count
    long long num = 1, den = 1;
    for (int i = 0; i < r; ++i) {
        long long pn = 1, pd = 1;
        for (int t = 0; t < n - i; ++t) pn *= ell;
        for (int t = 0; t < r - i; ++t) pd *= ell;
        num *= pn - 1;
        den *= pd - 1;
    }
    if ((long long)out.size() * den != num) throw std::runtime_error("hecke_cosets: bad count");
    return out;
}

HeckeEngine hecke_engine(int n, int c, const Nebentype& eta) {
    long long dummy = 2; // never acts: the k = 0 datum is the identity
    while (std::gcd(dummy, (long long)eta.N) != 1) ++dummy;
    HeckeDatum h0(n, dummy, 0);
    auto fr = fiber_cells(Rat(1), h0, c);
    if (!fr.closed) throw std::runtime_error("hecke_engine: window not closed");
    auto tab = gamma_classify(fr.cells, h0);
    if (!tab.complete) throw std::runtime_error("hecke_engine: window too small");
    OrientedComplex g0 = orient_fiber(tab, Rat(1), h0);
    auto vr = validate(g0);
    if (!vr.ok) throw std::runtime_error("hecke_engine: invalid complex: " + vr.issues.front());
    CoinducedModule rho = coinduced(eta, h0);
    CochainComplex cc = cochain_complex(g0, rho);
    CohomologyBasis hb = cohomology(cc);
    return {h0, std::move(g0), std::move(rho), std::move(cc), std::move(hb)};
}

std::vector<CMat> transfer_p(const HeckeEngine& eng, const OrientedComplex& fine,
                             const CochainComplex& cfine, const HeckeDatum& h) {
    if (fine.maxdim != eng.cc.maxdeg) throw std::runtime_error("transfer_p: degree mismatch");
    auto cosets = hecke_cosets(h);
    std::vector<CMat> f(eng.cc.maxdeg + 1);
    for (int i = 0; i <= eng.cc.maxdeg; ++i)
        f[i] = CMat(eng.cc.dim[i], cfine.dim[i], CycloElem(0));
    for (size_t o = 0; o < eng.g0.orbits.size(); ++o) {
        const CellOrbit& orb = eng.g0.orbits[o];
        const OrientedCell& sig = eng.g0.cells[orb.rep];
        int deg = orb.dim;
        const InvBlock& rowb = orbit_block(eng.cc, deg, (int)o);
        std::map<int, CMat> raw;
        for (const IMat& wmat : cosets) {
            auto Lc = mul_set(sig.M, imat_inverse_unimodular(wmat));
            int ro = -1;
            IMat tc;
            for (size_t j = 0; j < fine.orbits.size() && ro < 0; ++j) {
                if (fine.orbits[j].dim != deg) continue;
                auto t = find_transporter(fine.cells[fine.orbits[j].rep].M, Lc, h);
                if (t) {
                    ro = (int)j;
                    tc = *t;
                }
            }
            if (ro < 0) throw std::runtime_error("transfer_p: translated cell has no orbit");
            IMat tfull = tc * wmat;
            int s = transport_sign_points(fine.cells[fine.orbits[ro].rep].verts,
                                          rat_inverse(tfull), sig.verts, deg, h.n, false);
            CMat A = CycloElem((long)s) * coind_action_gen(eng.rho, tfull);
            auto it = raw.find(ro);
            if (it == raw.end())
                raw.emplace(ro, std::move(A));
            else
                it->second = it->second + A;
        }
        for (const auto& [ro, R] : raw) {
            const InvBlock& colb = orbit_block(cfine, deg, ro);
            CMat RB = R * colb.basis;
            CMat red = block_coords(rowb, RB);
            if (!(rowb.basis * red == RB))
                throw std::runtime_error("transfer_p: value escapes the invariants");
            for (int i = 0; i < red.rows; ++i)
                for (int j = 0; j < red.cols; ++j)
                    f[deg].at(rowb.offset + i, colb.offset + j) = red.at(i, j);
        }
    }
    return f;
}

std::vector<CMat> pullback_q(const HeckeEngine& eng, const OrientedComplex& fine,
                             const CochainComplex& cfine, const HeckeDatum& h) {
    if (fine.maxdim != eng.cc.maxdeg) throw std::runtime_error("pullback_q: degree mismatch");
    IMat a = hecke_a(h);
    std::vector<CMat> f(eng.cc.maxdeg + 1);
    for (int i = 0; i <= eng.cc.maxdeg; ++i)
        f[i] = CMat(cfine.dim[i], eng.cc.dim[i], CycloElem(0));
    for (size_t o = 0; o < fine.orbits.size(); ++o) {
        const CellOrbit& orb = fine.orbits[o];
        const OrientedCell& sig = fine.cells[orb.rep];
        int deg = orb.dim;
        std::vector<LatVec> La;
        for (const auto& x : sig.M) {
            if (!in_M0(x, h)) throw std::runtime_error("pullback_q: label not in M0");
            La.push_back(h.apply_a_inv(x));
        }
        std::sort(La.begin(), La.end());
        int ro = -1;
        IMat t0;
        for (size_t j = 0; j < eng.g0.orbits.size() && ro < 0; ++j) {
            if (eng.g0.orbits[j].dim != deg) continue;
            auto t = find_transporter(eng.g0.cells[eng.g0.orbits[j].rep].M, La, eng.h0);
            if (t) {
                ro = (int)j;
                t0 = *t;
            }
        }
        if (ro < 0) throw std::runtime_error("pullback_q: image cell has no orbit");
        IMat tfull = t0 * a;
        int s = transport_sign_points(eng.g0.cells[eng.g0.orbits[ro].rep].verts,
                                      rat_inverse(tfull), sig.verts, deg, h.n, false);
        CMat R = CycloElem((long)s) * coind_action_gen(eng.rho, tfull);
        const InvBlock& rowb = orbit_block(cfine, deg, (int)o);
        const InvBlock& colb = orbit_block(eng.cc, deg, ro);
        CMat RB = R * colb.basis;
        CMat red = block_coords(rowb, RB);
        if (!(rowb.basis * red == RB))
            throw std::runtime_error("pullback_q: value escapes the invariants");
        for (int i = 0; i < red.rows; ++i)
            for (int j = 0; j < red.cols; ++j)
                f[deg].at(rowb.offset + i, colb.offset + j) = red.at(i, j);
    }
    return f;
}

std::vector<CMat> slab_restriction(const CochainComplex& cslab, const CochainComplex& cfiber,
                                   const OrientedComplex& slab, bool hi_end) {
    int off = hi_end ? slab.lo_orbits : 0;
    int cnt = hi_end ? slab.hi_orbits : slab.lo_orbits;
    std::vector<CMat> f(cfiber.maxdeg + 1);
    for (int i = 0; i <= cfiber.maxdeg; ++i)
        f[i] = CMat(cfiber.dim[i], cslab.dim[i], CycloElem(0));
    for (int j = 0; j < cnt; ++j) {
        int deg = slab.orbits[off + j].dim;
        const InvBlock& colb = orbit_block(cslab, deg, off + j);
        const InvBlock& rowb = orbit_block(cfiber, deg, j);
        CMat red = block_coords(rowb, colb.basis);
        if (!(rowb.basis * red == colb.basis))
            throw std::runtime_error("slab_restriction: end bases differ");
        for (int i = 0; i < red.rows; ++i)
            for (int jj = 0; jj < red.cols; ++jj)
                f[deg].at(rowb.offset + i, colb.offset + jj) = red.at(i, jj);
    }
    return f;
}

OrientedWTC orient_wtc(const WTComplex& w) {
    OrientedWTC ow{w, {}, {}};
    for (size_t i = 0; i < w.fibers.size(); ++i) {
        ow.fibers.push_back(orient_fiber(w.fibers[i], w.critical[i], w.h));
        auto vr = validate(ow.fibers.back());
        if (!vr.ok) throw std::runtime_error("orient_wtc: bad fiber: " + vr.issues.front());
    }
    for (size_t s = 0; s < w.slabs.size(); ++s) {
        ow.slabs.push_back(orient_slab(w.slabs[s], w.fibers[s], w.fibers[s + 1], w.h));
        auto vr = validate(ow.slabs.back());
        if (!vr.ok) throw std::runtime_error("orient_wtc: bad slab: " + vr.issues.front());
    }
    return ow;
}

HeckeOperator hecke_operator(const HeckeEngine& eng, const OrientedWTC& ow) {
    const HeckeDatum& h = ow.w.h;
    int N = eng.rho.eta.N;
    if (N > 1 && std::gcd((long long)N, h.ell) != 1)
        throw std::runtime_error("hecke_operator: ell shares a factor with the level");
    int nf = (int)ow.fibers.size();
    int topdeg = eng.cc.maxdeg;
    std::vector<CochainComplex> cf(nf);
    std::vector<CohomologyBasis> hf(nf);
    for (int i = 0; i < nf; ++i) {
        if (ow.fibers[i].maxdim != topdeg)
            throw std::runtime_error("hecke_operator: fiber dimension mismatch");
        cf[i] = cochain_complex(ow.fibers[i], eng.rho);
        hf[i] = cohomology(cf[i]);
        if (hf[i].hdim != hf[0].hdim)
            throw std::runtime_error("hecke_operator: fibers disagree in cohomology");
    }

    auto q = pullback_q(eng, ow.fibers.front(), cf.front(), h);
    if (!is_cochain_map(q, eng.cc, cf.front()))
        throw std::runtime_error("hecke_operator: pullback is not a cochain map");
    std::vector<CMat> acc(topdeg + 1);
    for (int i = 0; i <= topdeg; ++i) acc[i] = map_on_cohomology(q[i], eng.hb, hf.front(), i);

    for (size_t s = 0; s < ow.slabs.size(); ++s) {
        CochainComplex cs = cochain_complex(ow.slabs[s], eng.rho);
        CohomologyBasis hs = cohomology(cs);
        for (int i = topdeg + 1; i < (int)hs.hdim.size(); ++i)
            if (hs.hdim[i] != 0)
                throw std::runtime_error("hecke_operator: slab cohomology above the fiber degree");
        auto rlo = slab_restriction(cs, cf[s], ow.slabs[s], false);
        auto rhi = slab_restriction(cs, cf[s + 1], ow.slabs[s], true);
        if (!is_cochain_map(rlo, cs, cf[s]) || !is_cochain_map(rhi, cs, cf[s + 1]))
            throw std::runtime_error("hecke_operator: restriction is not a cochain map");
        for (int i = 0; i <= topdeg; ++i) {
            CMat lo = map_on_cohomology(rlo[i], hs, hf[s], i);
            CMat hi = map_on_cohomology(rhi[i], hs, hf[s + 1], i);
            CMat loinv;
            if (!invert(lo, loinv))
                throw std::runtime_error("hecke_operator: low-end restriction not invertible");
            acc[i] = hi * (loinv * acc[i]);
        }
    }

    auto p = transfer_p(eng, ow.fibers.back(), cf.back(), h);
    if (!is_cochain_map(p, cf.back(), eng.cc))
        throw std::runtime_error("hecke_operator: transfer is not a cochain map");
    HeckeOperator op;
    op.ell = h.ell;
    op.k = h.k;
    op.T.resize(topdeg + 1);
    for (int i = 0; i <= topdeg; ++i)
        op.T[i] = map_on_cohomology(p[i], hf.back(), eng.hb, i) * acc[i];
    for (const auto& hfi : hf) op.fiber_hdim.push_back(hfi.hdim);
    return op;
}

CMat hecke_matrix(const HeckeEngine& eng, const OrientedWTC& ow, int degree) {
    return hecke_operator(eng, ow).T[degree];
}

} // namespace wtc
