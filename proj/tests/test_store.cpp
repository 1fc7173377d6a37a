#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wtc/store.hpp"
#include "wtc/temperament.hpp"

using namespace wtc;

TEST_CASE("store: byte-deterministic round trip") {
    WTComplex w = build_wtc(HeckeDatum(2, 2, 1), 40);
    std::string text = store_serialize(w, orient_wtc(w));

    Store st = store_load(text);
    CHECK(st.w.h.n == 2);
    CHECK(st.w.h.ell == 2);
    CHECK(st.w.h.k == 1);
    CHECK(st.w.c == 40);
    CHECK(st.w.critical == w.critical);
    CHECK(st.w.multiplicity == w.multiplicity);
    REQUIRE(st.w.fibers.size() == w.fibers.size());
    REQUIRE(st.w.slabs.size() == w.slabs.size());
    for (size_t i = 0; i < w.fibers.size(); ++i)
        CHECK(st.w.fibers[i].cells.size() == w.fibers[i].cells.size());

    // reserializing the loaded complex reproduces the text byte for byte
    std::string again = store_serialize(st.w, orient_wtc(st.w));
    CHECK(again == text);

    CHECK(store_verify(st).empty());
}

TEST_CASE("store: corruption is detected") {
    WTComplex w = build_wtc(HeckeDatum(2, 3, 2), 40);
    std::string text = store_serialize(w, orient_wtc(w));

    std::string bad = text;
    size_t p = bad.find("dim=0");
    REQUIRE(p != std::string::npos);
    bad[p + 4] = '1';
    CHECK_THROWS_WITH_AS(store_load(bad), "store: hash mismatch", std::runtime_error);

    CHECK_THROWS(store_load(text.substr(0, text.size() / 2)));
    CHECK_THROWS(store_load("WTC/1\njunk\n"));
}

TEST_CASE("store: filename scheme") {
    CHECK(store_filename(3, 5, 2) == "wtc_n3_l5_k2.txt");
}
