#ifndef WTC_LATTICE_FORMS_HPP
#define WTC_LATTICE_FORMS_HPP

#include "wtc/mat.hpp"
#include "wtc/rat.hpp"
#include <string>
#include <vector>

namespace wtc {

// Integer row vector in L0 = Z^n.  Stored sign-normalized: the first
// nonzero coordinate is positive, since x and -x count as one vector.
using LatVec = std::vector<long long>;

LatVec sign_normalize(LatVec x);
bool latvec_is_zero(const LatVec& x);
std::string latvec_str(const LatVec& x);
LatVec latvec_parse(const std::string& s);

// Symmetric n x n rational matrix: a point Z of the linear model E.
using Form = Mat<Rat>;

// Hecke datum for T_{ell,k}: a = diag(1,...,1,ell,...,ell) with k
// trailing ell's, M0 = L0 a, tau0 = ell, u0 = 1/ell^2.
struct HeckeDatum {
    int n;
    long long ell;
    int k;

    HeckeDatum(int n_, long long ell_, int k_) : n(n_), ell(ell_), k(k_) {}
    Rat u0() const { return Rat(1, (long)(ell * ell)); }
    // x a^{-1}; valid only when in_M0(x) (last k coordinates divisible)
    LatVec apply_a_inv(const LatVec& x) const;
    LatVec apply_a(const LatVec& x) const;
};

Rat eval_form(const Form& Z, const LatVec& x);
Form psi(const LatVec& x);                      // psi(x)_ij = x_i x_j
Rat inner_EE(const Form& A, const Form& B);     // sum A_ij B_ij
bool in_M0(const LatVec& x, const HeckeDatum& h);
Rat weight_u(const LatVec& x, const Rat& u, const HeckeDatum& h);
bool is_positive_definite(const Form& Z);

// All x != 0 (sign-normalized) with Z[x] <= bound, sorted; complete by
// exact Fincke-Pohst enumeration.
std::vector<LatVec> short_vectors(const Form& Z, const Rat& bound);

struct MinResult {
    Rat m;                 // min over x != 0 of weight_u(x) Z[x]
    std::vector<LatVec> M; // sorted achievers, tie rule applied at u0
    bool well_rounded;     // rank of M over Q equals n
};
MinResult minimal_vectors(const Form& Z, const Rat& u, const HeckeDatum& h);

int latvec_rank(const std::vector<LatVec>& vs);

} // namespace wtc

#endif
