#ifndef WTC_EQUIVARIANT_HPP
#define WTC_EQUIVARIANT_HPP

#include "wtc/temperament.hpp"
#include <string>

namespace wtc {

// One cell of an oriented complex.  verts is the deduplicated,
// lexicographically sorted list of geometric vertex points (coordinates
// in the linear model E, with the temperament appended as a final
// coordinate for slab complexes); the first dim+1 affinely independent
// of them form the canonical orientation frame.
struct OrientedCell {
    std::vector<LatVec> M;
    Rat ulo, uhi; // equal for fiber cells
    int dim = 0;
    std::vector<RatVec> verts;
    int orbit = -1;
    IMat from_rep; // mul_set(rep.M, from_rep) == M; identity on the rep itself
};

struct CellOrbit {
    int rep = -1; // cell index of the representative
    int dim = 0;
    std::vector<IMat> stab;     // full setwise stabilizer in Gamma
    std::vector<int> stab_sign; // orientation character per element
    bool killed = false;        // reversing stabilizer: coinvariants vanish
};

// One facet of an orbit representative: `orbit` is the facet's orbit,
// `inc` the geometric incidence sign in the representative, `gamma` a
// transporter carrying the facet orbit's representative onto the facet,
// `gsign` the orientation sign of that transport.
struct BoundaryTerm {
    int orbit;
    int inc;
    IMat gamma;
    int gsign;
};

struct OrientedComplex {
    HeckeDatum h;
    int maxdim = 0;
    std::vector<OrientedCell> cells;
    std::vector<CellOrbit> orbits;
    std::vector<std::vector<BoundaryTerm>> boundary; // per orbit
    // slab complexes: orbits [0, lo_orbits) are the low end fiber's (in
    // its OrbitTable order), [lo_orbits, lo_orbits + hi_orbits) the high
    // end's, the rest the slab's; fiber complexes have both counts 0
    int lo_orbits = 0, hi_orbits = 0;
};

// Oriented Gamma-equivariant complex of one fiber; orbit order follows
// the OrbitTable's, so index maps into slab complexes are identities.
OrientedComplex orient_fiber(const OrbitTable& tab, const Rat& u, const HeckeDatum& h);

// Oriented complex of a closed slab: both end fibers plus the prisms
// over the open slab, glued along the saturation attachments.
OrientedComplex orient_slab(const SlabData& sd, const OrbitTable& flo, const OrbitTable& fhi,
                            const HeckeDatum& h);

// Orbit-level boundary matrix C_d -> C_{d-1} over Q (trivial coefficients
// with the orientation character); killed orbits give zero rows/columns.
Mat<Rat> boundary_matrix(const OrientedComplex& oc, int d);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> issues;
    Rat orbifold_euler; // sum over orbits of (-1)^dim / |stab|
};

// Regularity of representatives' boundaries, character consistency,
// exact boundary-squares-to-zero, and the orbifold Euler characteristic.
ValidationReport validate(const OrientedComplex& oc);

// Image of a cell's vertex point set under Z -> tinv Z tinv^T (sorted,
// deduplicated); the temperament coordinate, when present, is untouched.
std::vector<RatVec> map_cell_points(const std::vector<RatVec>& pts, const Mat<Rat>& tinv,
                                    int n, bool with_u);

// Orientation sign of that map carrying one cell onto another: the image
// of `from`'s canonical frame measured against `to`'s canonical frame.
int transport_sign_points(const std::vector<RatVec>& from, const Mat<Rat>& tinv,
                          const std::vector<RatVec>& to, int dim, int n, bool with_u);

} // namespace wtc

#endif
