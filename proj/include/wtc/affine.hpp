#ifndef WTC_AFFINE_HPP
#define WTC_AFFINE_HPP

#include "wtc/mat.hpp"
#include "wtc/rat.hpp"

namespace wtc {

enum class AffineKind {
    Unique,          // one solution z(u') = z0 + u'*z1 for every u'
    PointOnly,       // solvable at exactly one u'
    Underdetermined, // solution space positive-dimensional
    Infeasible,      // no solution for any u'
};

struct AffineSolution {
    AffineKind kind = AffineKind::Infeasible;
    RatVec z0, z1; // Unique: entries of z(u') as linear polynomials z0 + u'*z1
    Rat u_point;   // PointOnly: the unique parameter value
    RatVec z_point; // PointOnly: the solution there
};

// Solves the pencil A z = b0 + u' b1 with u' a formal parameter.
// Used to express vertex forms Z(u') with entries linear in the
// temperament coordinate.
AffineSolution solve_affine(const Mat<Rat>& A, const RatVec& b0, const RatVec& b1);

} // namespace wtc

#endif
