#include "wtc/affine.hpp"
#include <cassert>

namespace wtc {

AffineSolution solve_affine(const Mat<Rat>& A, const RatVec& b0, const RatVec& b1) {
    assert((int)b0.size() == A.rows && (int)b1.size() == A.rows);
    const int n = A.cols;
    AffineSolution sol;

    // rref of [A | b0 | b1]; a pivot landing in either b column means the
    // system is inconsistent for generic u'
    Mat<Rat> aug(A.rows, n + 2);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, n) = b0[i];
        aug.at(i, n + 1) = b1[i];
    }
    auto rr = rref(aug);
    bool generic_consistent = true;
    int rankA = 0;
    for (int c : rr.pivots) {
        if (c >= n) generic_consistent = false;
        else ++rankA;
    }

    if (generic_consistent) {
        if (rankA < n) {
            sol.kind = AffineKind::Underdetermined;
            return sol;
        }
        sol.kind = AffineKind::Unique;
        sol.z0.assign(n, Rat(0));
        sol.z1.assign(n, Rat(0));
        for (int pr = 0; pr < rr.rank; ++pr) {
            sol.z0[rr.pivots[pr]] = rr.reduced.at(pr, n);
            sol.z1[rr.pivots[pr]] = rr.reduced.at(pr, n + 1);
        }
        return sol;
    }

    // treat u' as one more unknown: [A | -b1] (z, u')^T = b0
    Mat<Rat> comb(A.rows, n + 2);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < n; ++j) comb.at(i, j) = A.at(i, j);
        comb.at(i, n) = -b1[i];
        comb.at(i, n + 1) = b0[i];
    }
    auto cr = rref(comb);
    for (int c : cr.pivots)
        if (c == n + 1) {
            sol.kind = AffineKind::Infeasible;
            return sol;
        }
    if (cr.rank < n + 1) {
        sol.kind = AffineKind::Underdetermined;
        return sol;
    }
    sol.kind = AffineKind::PointOnly;
    sol.z_point.assign(n, Rat(0));
    for (int pr = 0; pr < cr.rank; ++pr) {
        if (cr.pivots[pr] == n)
            sol.u_point = cr.reduced.at(pr, n + 1);
        else
            sol.z_point[cr.pivots[pr]] = cr.reduced.at(pr, n + 1);
    }
    return sol;
}

} // namespace wtc
