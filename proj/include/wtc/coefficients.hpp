#ifndef WTC_COEFFICIENTS_HPP
#define WTC_COEFFICIENTS_HPP

#include "wtc/cyclo.hpp"
#include "wtc/imat.hpp"
#include "wtc/lattice_forms.hpp"
#include <string>
#include <vector>

namespace wtc {

// Dirichlet character of level N with values in Q(zeta_m); val[r] is the
// value at r mod N, zero off the unit group.
struct Nebentype {
    int N = 1;
    int order = 1;
    std::vector<CycloElem> val;
};

CycloElem nebentype_value(const Nebentype& eta, long long r);
Nebentype trivial_nebentype(int N);

// Generator of the (cyclic) Dirichlet group of level N, sending the
// smallest primitive root mod N to zeta_phi(N).  N in {1..7}.
Nebentype dirichlet_generator(int N);
Nebentype nebentype_power(const Nebentype& chi, int j);

// "triv", "quad", "chi", or "chi^j"
Nebentype nebentype_parse(int N, const std::string& name);

// Right cosets of G' = {g in SL_n(Z) : bottom row = (0,...,0,*) mod N}
// inside GL_n(Z), indexed by (canonical primitive bottom-row class in
// P^{n-1}(Z/N), det sign).  Coset 2i has det +1, coset 2i+1 det -1; the
// degenerate level N = 1 has the single coset of the identity.
struct CosetSpace {
    int N = 1, n = 0;
    std::vector<std::vector<long long>> cls; // sorted canonical class reps
    std::vector<IMat> sec;                   // section matrix per coset
    int count() const { return (int)sec.size(); }
};

CosetSpace coset_space(int N, int n);

// canonical representative of the unit-scaling class of a primitive row v
// mod N; unit is the scalar with v = unit * canonical
struct ClassRef {
    int cls;
    long long unit;
};
ClassRef coset_canonicalize(const CosetSpace& cs, const std::vector<long long>& v);

int coset_index(const CosetSpace& cs, const std::vector<long long>& bottom_row, int det_sign);

// Coinduction of eta from G' to GL_n(Z), extended to the Hecke datum a:
// a basis line per coset; any integer g with det != 0 prime to N acts by
// (class, sign) -> ([class * g], sign * sgn det g) scaled by eta of the
// renormalization unit.  Composition law: action(g1 g2) = action(g2) * action(g1).
struct CoinducedModule {
    Nebentype eta;
    HeckeDatum h;
    CosetSpace cs;
    int dim = 0;
};

CoinducedModule coinduced(const Nebentype& eta, const HeckeDatum& h);
Mat<CycloElem> coind_action(const CoinducedModule& mod, const IMat& g);
Mat<CycloElem> coind_action_a(const CoinducedModule& mod);

// semigroup extension: any integer g with nonzero det prime to the level
Mat<CycloElem> coind_action_gen(const CoinducedModule& mod, const IMat& g);

} // namespace wtc

#endif
