#ifndef WTC_STORE_HPP
#define WTC_STORE_HPP

#include "wtc/cohomology.hpp"
#include "wtc/temperament.hpp"
#include <string>

namespace wtc {

// One persisted well-tempered complex: the reconstructed combinatorial
// data plus the canonical text it came from (everything before the HASH
// line), kept verbatim so re-serialization is byte-identical.
struct Store {
    WTComplex w;
    std::string body;
};

// 64-bit FNV-1a of the body, lower-case hex.
std::string store_hash(const std::string& body);

// Canonical text: format tag, header, critical temperaments, fiber and
// slab cell sections with attachments, orbit summaries and orbit-level
// boundary triplets from the oriented complexes, and a trailing hash.
std::string store_serialize(const WTComplex& w, const OrientedWTC& ow);

// Parse + hash check + deterministic reclassification of the cells.
Store store_load(const std::string& text);

std::string store_filename(int n, long long ell, int k);

// Compare a store's certified orbit/boundary sections against a fresh
// orientation of its complex; returns human-readable mismatches.
std::vector<std::string> store_verify(const Store& st);

} // namespace wtc

#endif
