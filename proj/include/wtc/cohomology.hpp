#ifndef WTC_COHOMOLOGY_HPP
#define WTC_COHOMOLOGY_HPP

#include "wtc/coefficients.hpp"
#include "wtc/equivariant.hpp"
#include "wtc/poly.hpp"
#include <array>

namespace wtc {

using CMat = Mat<CycloElem>;

// Stabilizer-invariant block of one orbit: basis columns span the
// invariants of the coefficient module twisted by the orientation
// character (width 0 when the character kills the orbit); rows + rowinv
// recover coordinates of any column lying in the span.
struct InvBlock {
    int orbit = -1;
    int offset = 0; // column offset within its degree
    CMat basis;     // module_dim x width
    std::vector<int> rows;
    CMat rowinv;
};

struct CochainComplex {
    int maxdeg = 0;
    std::vector<int> dim;                      // per degree
    std::vector<std::vector<InvBlock>> blocks; // per degree, ascending orbit
    std::vector<CMat> d;                       // d[i] : C^i -> C^{i+1}
};

// Equivariant cochains of an oriented complex with coefficients in the
// coinduced module.  The differential is assembled from the orbit-level
// boundary via the left action L(g) = action(g^{-1}), and d*d = 0 is
// checked exactly.
CochainComplex cochain_complex(const OrientedComplex& oc, const CoinducedModule& rho);

// coordinates of columns known to lie in the block's span
CMat block_coords(const InvBlock& b, const CMat& cols);

struct CohomologyBasis {
    std::vector<int> hdim; // per degree
    std::vector<CMat> reps; // dim x hdim cocycle representatives
    std::vector<CMat> proj; // hdim x dim; proj*reps = I and proj kills coboundaries
};

CohomologyBasis cohomology(const CochainComplex& C);

// does f (per degree, target x source) commute with the differentials on
// the degrees where both are defined
bool is_cochain_map(const std::vector<CMat>& f, const CochainComplex& src,
                    const CochainComplex& tgt);

// induced map on H^i of a cochain map
CMat map_on_cohomology(const CMat& f_deg_i, const CohomologyBasis& src,
                       const CohomologyBasis& tgt, int i);

// the datum matrix a = diag(1,..,1,ell,..,ell), k trailing
IMat hecke_a(const HeckeDatum& h);

// Unimodular right coset representatives of Gamma \ Gamma_0, one per
// (n-k)-dimensional subspace of F_ell^n; the count is the Gaussian
// binomial coefficient.
std::vector<IMat> hecke_cosets(const HeckeDatum& h);

// The classical complex at u = 1 with the full group GL_n(Z), shared by
// every Hecke datum in rank n: the degenerate datum k = 0 makes the
// group membership test trivial and all weights 1.
struct HeckeEngine {
    HeckeDatum h0;
    OrientedComplex g0;
    CoinducedModule rho;
    CochainComplex cc;
    CohomologyBasis hb;
};

HeckeEngine hecke_engine(int n, int c, const Nebentype& eta);

// Cochain-level transfer from the finer group Gamma (complex `fine` at
// u = 1, classified for the datum h) down to the full group (`eng`):
// sum over cosets of the translated, sign-transported values.
std::vector<CMat> transfer_p(const HeckeEngine& eng, const OrientedComplex& fine,
                             const CochainComplex& cfine, const HeckeDatum& h);

// Cochain-level pullback along the cell bijection from the u = u0 fiber
// (complex `fine` for Gamma) to the u = 1 classical complex: labels map
// by M -> M a^{-1}, forms by Z -> a Z a^T, coefficients by action(t0 a).
std::vector<CMat> pullback_q(const HeckeEngine& eng, const OrientedComplex& fine,
                             const CochainComplex& cfine, const HeckeDatum& h);

// Restriction of slab cochains to one end fiber (index-aligned orbits).
std::vector<CMat> slab_restriction(const CochainComplex& cslab, const CochainComplex& cfiber,
                                   const OrientedComplex& slab, bool hi_end);

// Everything orientable of one well-tempered complex, reusable across
// coefficient systems.
struct OrientedWTC {
    WTComplex w;
    std::vector<OrientedComplex> fibers;
    std::vector<OrientedComplex> slabs;
};

OrientedWTC orient_wtc(const WTComplex& w);

struct HeckeOperator {
    long long ell = 0;
    int k = 0;
    std::vector<CMat> T;                  // per degree, on the engine's H^i
    std::vector<std::vector<int>> fiber_hdim; // per critical fiber, per degree
};

// T_{ell,k} on H^i of the classical complex: transfer after walking the
// well-tempered complex from u0 to 1 (each slab inverts the restriction
// to its low end on cohomology), after the pullback bijection.
HeckeOperator hecke_operator(const HeckeEngine& eng, const OrientedWTC& ow);

CMat hecke_matrix(const HeckeEngine& eng, const OrientedWTC& ow, int degree);

} // namespace wtc

#endif
