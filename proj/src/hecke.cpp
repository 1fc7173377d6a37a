#include "wtc/hecke.hpp"
#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace wtc {

namespace {

// restriction of M to the column span of S: the X with S X = M S
CMat restrict_op(const CMat& S, const CMat& M) {
    CMat MS = M * S;
    CMat R(S.cols, S.cols);
    for (int j = 0; j < S.cols; ++j) {
        std::vector<CycloElem> b(S.rows), x;
        for (int i = 0; i < S.rows; ++i) b[i] = MS.at(i, j);
        if (!solve_linear(S, b, x))
            throw std::runtime_error("decompose: subspace not invariant");
        for (int i = 0; i < S.cols; ++i) R.at(i, j) = x[i];
    }
    return R;
}

CMat mat_eval(const CycloPoly& p, const CMat& M) {
    int w = M.rows;
    CMat r(w, w, CycloElem(0));
    for (int i = p.degree(); i >= 0; --i) {
        r = r * M;
        for (int t = 0; t < w; ++t) r.at(t, t) += p.c[i];
    }
    return r;
}

CycloPoly ppow(const CycloPoly& p, int e) {
    CycloPoly r = CycloPoly::constant(CycloElem(1));
    for (int i = 0; i < e; ++i) r = r * p;
    return r;
}

} // namespace

std::vector<EigenBlock> decompose(const std::vector<CMat>& ops, int field_m) {
    if (ops.empty()) return {};
    int n = ops[0].rows;
    for (const auto& A : ops) {
        if (A.rows != n || A.cols != n) throw std::invalid_argument("decompose: shape mismatch");
        for (const auto& B : ops)
            if (!(A * B == B * A)) throw std::runtime_error("decompose: operators do not commute");
    }
    std::vector<EigenBlock> cur;
    if (n == 0) return cur;
    cur.push_back({CMat::identity(n), {}, {}, true});
    for (const CMat& M : ops) {
        std::vector<EigenBlock> next;
        for (auto& blk : cur) {
            CMat R = restrict_op(blk.basis, M);
            CycloPoly cp{charpoly_coeffs(R)};
            auto facs = factor_poly_cyclo(cp, field_m);
            for (const auto& fc : facs) {
                auto rr = rref(mat_eval(ppow(fc.factor, fc.mult), R));
                if (rr.kernel.empty()) throw std::runtime_error("decompose: empty factor kernel");
                CMat K(R.rows, (int)rr.kernel.size());
                for (size_t j = 0; j < rr.kernel.size(); ++j)
                    for (int i = 0; i < R.rows; ++i) K.at(i, (int)j) = rr.kernel[j][i];
                EigenBlock nb;
                nb.basis = blk.basis * K;
                nb.minpoly = blk.minpoly;
                nb.minpoly.push_back(fc.factor);
                nb.eigen = blk.eigen;
                nb.simple = blk.simple;
                if (fc.factor.degree() == 1)
                    nb.eigen.push_back(CycloElem(0) - fc.factor.c[0] / fc.factor.c[1]);
                else {
                    nb.eigen.push_back(CycloElem(0));
                    nb.simple = false;
                }
                next.push_back(std::move(nb));
            }
        }
        cur = std::move(next);
    }
    int total = 0;
    for (const auto& b : cur) total += b.basis.cols;
    if (total != n) throw std::runtime_error("decompose: blocks do not fill the space");
    return cur;
}

CycloPoly hecke_polynomial(long long ell, const std::array<CycloElem, 3>& a) {
    CycloElem l((long)ell);
    return CycloPoly{{CycloElem(1), CycloElem(0) - a[0], l * a[1], CycloElem(0) - l * l * l * a[2]}};
}

GaloisLabel match_galois(const std::vector<long long>& primes,
                         const std::vector<std::array<CycloElem, 3>>& a,
                         const Nebentype& eta, int eta_power) {
    if (primes.size() != a.size()) throw std::invalid_argument("match_galois: size mismatch");
    int phi = 0;
    for (int u = 1; u < eta.N; ++u)
        if (std::gcd(u, eta.N) == 1) ++phi;
    if (!phi) phi = 1;
    std::vector<CycloPoly> P;
    for (size_t i = 0; i < primes.size(); ++i) P.push_back(hecke_polynomial(primes[i], a[i]));

    std::vector<std::pair<int, int>> comps; // (generator exponent, eps power)
    bool found = true;
    while (found) {
        found = false;
        for (int t = 0; t < eta.order && !found; ++t) {
            Nebentype chi = nebentype_power(eta, t);
            for (int mexp = 0; mexp < 3 && !found; ++mexp) {
                bool all = true;
                std::vector<CycloElem> roots(primes.size());
                for (size_t i = 0; i < primes.size() && all; ++i) {
                    CycloElem c = nebentype_value(chi, primes[i]);
                    for (int e = 0; e < mexp; ++e) c *= CycloElem((long)primes[i]);
                    roots[i] = c;
                    if (P[i].degree() < 1 || !(P[i].eval(c.inverse()) == CycloElem(0))) all = false;
                }
                if (!all) continue;
                for (size_t i = 0; i < primes.size(); ++i) {
                    auto [q, r] = divmod(P[i], CycloPoly{{CycloElem(1), CycloElem(0) - roots[i]}});
                    if (!r.is_zero()) throw std::runtime_error("match_galois: inexact division");
                    P[i] = q;
                }
                comps.push_back({(eta_power * t) % phi, mexp});
                found = true;
            }
        }
    }
    GaloisLabel out;
    out.complete = true;
    for (const auto& p : P)
        if (p.degree() > 0) out.complete = false;
    if (!out.complete) out.residual = P;
    std::sort(comps.begin(), comps.end(),
              [](const auto& x, const auto& y) { return std::make_pair(x.second, x.first) <
                                                        std::make_pair(y.second, y.first); });
    for (size_t i = 0; i < comps.size(); ++i) {
        auto [jt, mexp] = comps[i];
        std::string base, eps;
        if (jt > 0) {
            base = "chi" + std::to_string(eta.N);
            if (jt > 1) base += "^" + std::to_string(jt);
        }
        if (mexp > 0) {
            eps = "eps";
            if (mexp > 1) eps += "^" + std::to_string(mexp);
        }
        std::string c = base.empty() && eps.empty() ? "1"
                        : base.empty()              ? eps
                        : eps.empty()               ? base
                                                    : base + "*" + eps;
        if (i) out.text += "+";
        out.text += c;
    }
    if (!out.complete) {
        if (!out.text.empty()) out.text += "+";
        out.text += "cusp";
    }
    return out;
}

} // namespace wtc
