#ifndef WTC_REPORT_HPP
#define WTC_REPORT_HPP

#include "wtc/hecke.hpp"
#include "wtc/store.hpp"
#include <memory>
#include <string>
#include <vector>

namespace wtc {

// A store together with its (expensive, nebentype-independent)
// orientation; loaded once per process and shared.
struct OrientedStore {
    Store st;
    OrientedWTC ow;
};

std::shared_ptr<const OrientedStore> oriented_store(const std::string& dir, int n, long long ell,
                                                    int k);

// One simultaneous eigenspace of all requested Hecke operators in a
// fixed cohomological degree.
struct EigenBlockReport {
    int dim = 0;
    bool simple = false;
    std::vector<long long> op_ell;  // operator order, parallel arrays
    std::vector<int> op_k;
    std::vector<CycloElem> value;   // eigenvalue when the factor is linear
    std::vector<std::string> eigen; // "T_ell,k=value" per operator
    std::string label;              // Galois label text (rank 3, simple blocks)
    std::vector<CycloPoly> residual; // unmatched Hecke polynomial factor per prime
};

struct DegreeEigenReport {
    int degree = 0;
    int hdim = 0;
    std::vector<EigenBlockReport> blocks;
};

// Every-time pipeline for one (level, nebentype): load the stores for all
// requested primes and k = 1..n, build the classical engine, compute the
// operators, decompose each requested degree, and (rank 3) match labels.
std::vector<DegreeEigenReport> level_report(const std::string& store_dir, int n,
                                            const std::vector<long long>& primes, int N,
                                            const std::string& etaname,
                                            const std::vector<int>& degrees, int jobs);

} // namespace wtc

#endif
