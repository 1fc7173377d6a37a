#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wtc/report.hpp"

#ifndef WTC_STORE_DIR
#define WTC_STORE_DIR "stores"
#endif

using namespace wtc;

// end-to-end rank 3 run against the committed ell = 2 stores; the heavy
// one-time construction lives in the stores, this re-derives the operators
TEST_CASE("rank 3: T_{2,1} and T_{2,3} on degree-zero cohomology") {
    auto rep = level_report(WTC_STORE_DIR, 3, {2}, 1, "triv", {0, 1, 2, 3}, 1);
    REQUIRE(rep.size() == 4);
    CHECK(rep[0].hdim == 1);
    CHECK(rep[1].hdim == 0);
    CHECK(rep[2].hdim == 0);
    CHECK(rep[3].hdim == 0);
    REQUIRE(rep[0].blocks.size() == 1);
    const auto& b = rep[0].blocks[0];
    CHECK(b.dim == 1);
    CHECK(b.simple);
    bool saw1 = false, saw3 = false;
    for (size_t t = 0; t < b.op_k.size(); ++t) {
        if (b.op_k[t] == 1) {
            CHECK(b.value[t] == CycloElem(7)); // ell^2 + ell + 1
            saw1 = true;
        }
        if (b.op_k[t] == 3) {
            CHECK(b.value[t] == CycloElem(1)); // scalar datum, trivial eta
            saw3 = true;
        }
    }
    CHECK(saw1);
    CHECK(saw3);
    CHECK(b.label == "1+eps+eps^2");
}
