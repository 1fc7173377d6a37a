#ifndef WTC_HECKETOPE_HPP
#define WTC_HECKETOPE_HPP

#include "wtc/imat.hpp"
#include "wtc/lattice_forms.hpp"
#include <optional>
#include <string>
#include <vector>

namespace wtc {

// One cell of the fiber complex at temperament u, labeled by its set of
// minimal vectors.  witness is a positive definite form whose weighted
// minimum is exactly 1, achieved precisely on M.
struct FiberCell {
    std::vector<LatVec> M; // sorted, sign-normalized
    int dim = 0;
    Form witness;
    // true when every hull facet containing the cell's dual face is
    // certified: the cell's full boundary is then present in the window,
    // so it can serve as the local model of its orbit
    bool interior = false;
};

struct FiberResult {
    std::vector<FiberCell> cells;
    // true when the window is internally consistent and has an interior
    // region; orbit-level completeness is judged by OrbitTable::complete
    bool closed = true;
};

// Candidate vector ball: ~1.25c shortest of L0 and of M0, deduplicated,
// scored by the trace of the weighted rank-one form, best c kept (ties
// extended).  At u = u0, non-M0 labels are replaced by their ell-multiple
// in M0 (the two label the same point of E).
std::vector<LatVec> select_ball(int c, const Rat& u, const HeckeDatum& h);

// Fiber cells at temperament u by convex-hull duality:
// dim(cell) = codim(hull face) - 1.  Faces are kept when their vertex
// labels span Q^n; the witness is certified against all short vectors.
FiberResult fiber_cells(const Rat& u, const HeckeDatum& h, int c);

// Membership in Gamma = Gamma_0 cap a^{-1} Gamma_0 a:
// det = +-1 and a g a^{-1} integral.  With conj = true, membership in the
// conjugate group a Gamma a^{-1} = Gamma_0 cap a Gamma_0 a^{-1} instead
// (the group acting on the u = 1 end in the fiber bijection).
bool gamma_member(const IMat& g, const HeckeDatum& h, bool conj = false);

// {sign_normalize(x g) : x in M}, sorted.
std::vector<LatVec> mul_set(const std::vector<LatVec>& M, const IMat& g);

struct OrbitTable {
    std::vector<FiberCell> cells; // the classified input, in order
    std::vector<FiberCell> reps;  // interior members preferred
    std::vector<std::vector<IMat>> stabilizers; // per rep: all g in Gamma with rep.M g = rep.M
    std::vector<int> rep_of;                    // per cell
    std::vector<IMat> transporters;             // per cell: mul_set(reps[rep_of[i]].M, t) == cells[i].M
    bool complete = true; // every orbit has an interior member; else retry larger c
};

// Gamma-classification of cells via the action M -> M g^{-1}; candidate
// transporters solve z_i g = y_i over independent n-subsets.
OrbitTable gamma_classify(const std::vector<FiberCell>& cells, const HeckeDatum& h,
                          bool conj = false);

// g in Gamma with mul_set(Mfrom, g) == Mto, if any.
std::optional<IMat> find_transporter(const std::vector<LatVec>& Mfrom,
                                     const std::vector<LatVec>& Mto, const HeckeDatum& h,
                                     bool conj = false);

// One line per cell: "CELL dim=<d> M={(..),(..)} u=<p/q>",
// sorted by (dim, lexicographic M).
std::string fiber_dump(const std::vector<FiberCell>& cells, const Rat& u);

} // namespace wtc

#endif
