#ifndef WTC_HULL_HPP
#define WTC_HULL_HPP

#include "wtc/rat.hpp"
#include <functional>
#include <vector>

namespace wtc {

// One face of a convex hull.  `verts` holds the indices of every input
// point lying on the face (not only extreme ones: a point interior to a
// face still labels the corresponding minimal-vector set).
struct HullFace {
    std::vector<int> verts; // sorted
    int dim = 0;            // affine dimension
    std::vector<int> facets; // indices of facets containing this face
};

struct HullFacet {
    std::vector<int> on;   // sorted point indices on the hyperplane
    std::vector<Int> a;    // inward functional: a.x <= b for all points
    Int b;
};

struct HullResult {
    bool degenerate = false;
    int ambient = 0;
    int affine_dim = 0; // of the point set (== ambient unless degenerate)
    std::vector<HullFacet> facets;
    // all faces with dim >= min_dim, facets included, sorted by
    // (dim descending, verts lexicographic)
    std::vector<HullFace> faces;
};

struct HullOptions {
    // faces with dim < min_dim are dropped from the face lattice; a value
    // above the ambient dimension skips the (expensive) lattice entirely
    int min_dim = 0;
    // only expand facets whose hyperplane separates the origin from the
    // hull (b < 0); their unexpanded neighbors are still recorded.  The
    // separating region is connected, so this finds all of it.
    bool separating_only = false;
    // optional further restriction: expand only facets this predicate
    // accepts (callers must ensure the accepted region is ridge-connected);
    // until the first accepted facet is found, everything is expanded
    std::function<bool(const HullFacet&)> expand;
};

// Exact face enumeration of conv(points) by gift wrapping; ridge
// structures come from recursive hulls of the facet point sets, so
// degenerate (non-simplicial) facets need no merge step.
HullResult convex_hull(const std::vector<std::vector<Int>>& points, const HullOptions& opt);
HullResult convex_hull(const std::vector<std::vector<Int>>& points, int min_dim);

} // namespace wtc

#endif
