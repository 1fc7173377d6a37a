#ifndef WTC_HECKE_HPP
#define WTC_HECKE_HPP

#include "wtc/cohomology.hpp"

namespace wtc {

// Common generalized eigenspace of a family of commuting operators.
struct EigenBlock {
    CMat basis;                     // ambient x dim, columns span the block
    std::vector<CycloPoly> minpoly; // per operator: the irreducible factor
    std::vector<CycloElem> eigen;   // per operator when the factor is linear
    bool simple = true;             // every factor linear
};

// Iterated splitting into kernels of irreducible characteristic factors,
// over Q(zeta_{field_m}); blocks of a non-split factor stay together and
// are reported with simple = false.
std::vector<EigenBlock> decompose(const std::vector<CMat>& ops, int field_m);

// 1 - a1 X + ell a2 X^2 - ell^3 a3 X^3
CycloPoly hecke_polynomial(long long ell, const std::array<CycloElem, 3>& a);

struct GaloisLabel {
    std::string text;                // "+"-joined components, sorted
    bool complete = false;           // every factor identified
    std::vector<CycloPoly> residual; // per prime, the unidentified factor
};

// Strip factors (1 - chi(ell) ell^m X) shared by every prime from the
// Hecke polynomials of one eigensystem, chi running over powers of the
// nebentype; eta_power is eta's exponent in the Dirichlet generator of
// its level.  Components render as chi{N}^{j}*eps^{m}.
GaloisLabel match_galois(const std::vector<long long>& primes,
                         const std::vector<std::array<CycloElem, 3>>& a,
                         const Nebentype& eta, int eta_power);

} // namespace wtc

#endif
