#ifndef WTC_TEMPERAMENT_HPP
#define WTC_TEMPERAMENT_HPP

#include "wtc/hecketope.hpp"

namespace wtc {

// Pencil of forms through a vertex cell: Z(u') = Z0 + u'*Z1 solves the
// equality system weight_{u'}(x) Z[x] = 1 for x in M.  The validity
// interval (u1, u2] is clamped to the sweep range [1/ell^2, 1]; new_lo /
// new_hi list the vectors whose weighted value reaches 1 at each end
// (empty when the interval is cut off by the sweep boundary itself).
struct VertexPencil {
    std::vector<LatVec> M;
    bool point_only = false;
    Rat u_point;  // point_only: the single temperament where M is solvable
    Form Z0, Z1;
    Rat u1, u2;
    std::vector<LatVec> new_lo, new_hi;
};

// Validity interval of the vertex cell M around u.  pre: M is the exact
// minimal-vector set of a vertex at u.  Thresholds are exact: each
// candidate vector's weighted value along the pencil is monotone in u',
// so a single probe below the nearest det-root bound finds every
// crossing, and the rightmost (resp. leftmost) one is u1 (resp. u2).
VertexPencil vertex_interval(const std::vector<LatVec>& M, const Rat& u, const HeckeDatum& h);

// Largest u1 over the vertex-cell orbit representatives of a fiber at u;
// the cell structure is constant on (result, u).  Returns the sweep
// floor 1/ell^2 when no vertex interval ends earlier.
Rat next_critical_below(const OrbitTable& fib, const Rat& u, const HeckeDatum& h);

// The pencil form of a vertex label evaluated at u: unique for a live
// pencil, and defined for a point-pinned one exactly at its u_point.
Form vertex_form(const std::vector<LatVec>& M, const Rat& u, const HeckeDatum& h);

// Full minimal-vector set of the pencil limit form at u (tie rule applied
// at u0); M is contained in the result up to the u0 relabeling x -> ell*x.
std::vector<LatVec> saturate(const std::vector<LatVec>& M, const Rat& u, const HeckeDatum& h);

// One slab (lo, hi) between adjacent critical temperaments.  table holds
// the fiber at an interior sample point; a slab cell is (M, [lo, hi]).
// attach_lo / attach_hi give, per orbit representative, the saturated
// minimal set M+ of the critical-fiber cell the slab cell closes onto.
struct SlabData {
    Rat lo, hi;
    Rat sample;
    OrbitTable table;
    std::vector<std::vector<LatVec>> attach_lo, attach_hi;
};

struct WTComplex {
    HeckeDatum h;
    std::vector<Rat> critical;      // ascending; front() = 1/ell^2, back() = 1
    std::vector<int> multiplicity;  // vertex orbits realizing each critical value
    std::vector<OrbitTable> fibers; // fiber orbit table per critical value
    std::vector<SlabData> slabs;    // slabs[i] spans (critical[i], critical[i+1])
    int c = 0;                      // largest window size used
};

// Right-to-left sweep from u = 1: fiber, next critical, midpoint sample
// with a verify/retry loop (the sample's vertex intervals must reach back
// exactly to the previous critical value), attaching maps by saturation.
WTComplex build_wtc(const HeckeDatum& h, int c);

} // namespace wtc

#endif
