#include "wtc/store.hpp"
#include "wtc/hecketope.hpp"
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace wtc {

namespace {

std::string mset_str(const std::vector<LatVec>& M) {
    std::string s = "{";
    for (size_t i = 0; i < M.size(); ++i) {
        if (i) s += ",";
        s += latvec_str(M[i]);
    }
    return s + "}";
}

std::vector<LatVec> mset_parse(const std::string& s) {
    if (s.size() < 2 || s.front() != '{' || s.back() != '}')
        throw std::runtime_error("store: bad vector set " + s);
    std::vector<LatVec> M;
    size_t i = 1;
    while (i + 1 < s.size()) {
        size_t j = s.find(')', i);
        if (j == std::string::npos) throw std::runtime_error("store: bad vector set " + s);
        M.push_back(latvec_parse(s.substr(i, j - i + 1)));
        i = j + 1;
        if (i < s.size() && s[i] == ',') ++i;
    }
    return M;
}

// key=value field extraction from a header-style line
std::string field(const std::string& line, const std::string& key) {
    std::string pat = key + "=";
    size_t p = line.find(pat);
    if (p == std::string::npos) throw std::runtime_error("store: missing field " + key);
    p += pat.size();
    size_t q = line.find(' ', p);
    return line.substr(p, q == std::string::npos ? std::string::npos : q - p);
}

void orbit_section(std::ostringstream& out, const OrientedComplex& oc) {
    out << "ORBITS " << oc.orbits.size() << "\n";
    for (size_t j = 0; j < oc.orbits.size(); ++j) {
        const auto& o = oc.orbits[j];
        out << "O " << j << " dim=" << o.dim << " rep=" << o.rep << " stab=" << o.stab.size()
            << " killed=" << (o.killed ? 1 : 0) << "\n";
    }
    std::ostringstream tri;
    int count = 0;
    for (int d = 1; d <= oc.maxdim; ++d) {
        Mat<Rat> B = boundary_matrix(oc, d);
        for (int i = 0; i < B.rows; ++i)
            for (int j = 0; j < B.cols; ++j)
                if (B.at(i, j) != 0) {
                    tri << "B " << d << " " << i << " " << j << " " << rat_str(B.at(i, j)) << "\n";
                    ++count;
                }
    }
    out << "BOUNDARY " << count << "\n" << tri.str();
}

void cell_section(std::ostringstream& out, const std::vector<FiberCell>& cells) {
    for (const auto& c : cells)
        out << "C dim=" << c.dim << " int=" << (c.interior ? 1 : 0) << " M=" << mset_str(c.M)
            << "\n";
}

} // namespace

std::string store_hash(const std::string& body) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : body) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

std::string store_serialize(const WTComplex& w, const OrientedWTC& ow) {
    std::ostringstream out;
    out << "WTC/1\n";
    out << "H n=" << w.h.n << " ell=" << w.h.ell << " k=" << w.h.k << " c=" << w.c
        << " tool=1.0\n";
    out << "CRITICAL " << w.critical.size() << "\n";
    for (size_t i = 0; i < w.critical.size(); ++i)
        out << "U " << rat_str(w.critical[i]) << " mult=" << w.multiplicity[i] << "\n";
    for (size_t i = 0; i < w.fibers.size(); ++i) {
        out << "FIBER " << i << " u=" << rat_str(w.critical[i]) << " cells="
            << w.fibers[i].cells.size() << "\n";
        cell_section(out, w.fibers[i].cells);
        orbit_section(out, ow.fibers[i]);
    }
    for (size_t s = 0; s < w.slabs.size(); ++s) {
        const SlabData& sd = w.slabs[s];
        out << "SLAB " << s << " lo=" << rat_str(sd.lo) << " hi=" << rat_str(sd.hi)
            << " sample=" << rat_str(sd.sample) << " cells=" << sd.table.cells.size() << "\n";
        cell_section(out, sd.table.cells);
        for (size_t r = 0; r < sd.attach_lo.size(); ++r)
            out << "A " << r << " lo=" << mset_str(sd.attach_lo[r]) << " hi="
                << mset_str(sd.attach_hi[r]) << "\n";
        orbit_section(out, ow.slabs[s]);
    }
    std::string body = out.str();
    return body + "HASH fnv1a64:" + store_hash(body) + "\n";
}

Store store_load(const std::string& text) {
    size_t hp = text.rfind("HASH fnv1a64:");
    if (hp == std::string::npos) throw std::runtime_error("store: missing hash");
    std::string body = text.substr(0, hp);
    std::string want = text.substr(hp + 13);
    while (!want.empty() && (want.back() == '\n' || want.back() == '\r')) want.pop_back();
    if (store_hash(body) != want) throw std::runtime_error("store: hash mismatch");

    std::istringstream in(body);
    std::string line;
    auto next = [&]() {
        if (!std::getline(in, line)) throw std::runtime_error("store: truncated");
        return line;
    };
    if (next() != "WTC/1") throw std::runtime_error("store: bad format tag");
    next();
    int n = std::stoi(field(line, "n"));
    long long ell = std::stoll(field(line, "ell"));
    int k = std::stoi(field(line, "k"));
    int c = std::stoi(field(line, "c"));
    HeckeDatum h(n, ell, k);

    WTComplex w{h, {}, {}, {}, {}, c};
    next();
    int ncrit = std::stoi(line.substr(9));
    for (int i = 0; i < ncrit; ++i) {
        next();
        std::istringstream ls(line);
        std::string tag, uval;
        ls >> tag >> uval;
        w.critical.push_back(rat_parse(uval));
        w.multiplicity.push_back(std::stoi(field(line, "mult")));
    }

    auto read_cells = [&](int count) {
        std::vector<FiberCell> cells;
        for (int i = 0; i < count; ++i) {
            next();
            FiberCell fc;
            fc.dim = std::stoi(field(line, "dim"));
            fc.interior = std::stoi(field(line, "int")) != 0;
            fc.M = mset_parse(field(line, "M"));
            cells.push_back(std::move(fc));
        }
        return cells;
    };
    auto skip_orbit_section = [&]() {
        next(); // ORBITS <count>
        int cnt = std::stoi(line.substr(7));
        for (int i = 0; i < cnt; ++i) next();
        next(); // BOUNDARY <count>
        cnt = std::stoi(line.substr(9));
        for (int i = 0; i < cnt; ++i) next();
    };

    for (int i = 0; i < ncrit; ++i) {
        next(); // FIBER
        int count = std::stoi(field(line, "cells"));
        auto cells = read_cells(count);
        auto tab = gamma_classify(cells, h);
        if (!tab.complete) throw std::runtime_error("store: fiber classification incomplete");
        w.fibers.push_back(std::move(tab));
        skip_orbit_section();
    }
    for (int s = 0; s + 1 < ncrit; ++s) {
        next(); // SLAB
        SlabData sd;
        sd.lo = rat_parse(field(line, "lo"));
        sd.hi = rat_parse(field(line, "hi"));
        sd.sample = rat_parse(field(line, "sample"));
        int count = std::stoi(field(line, "cells"));
        auto cells = read_cells(count);
        sd.table = gamma_classify(cells, h);
        if (!sd.table.complete) throw std::runtime_error("store: slab classification incomplete");
        sd.attach_lo.resize(sd.table.reps.size());
        sd.attach_hi.resize(sd.table.reps.size());
        for (size_t r = 0; r < sd.table.reps.size(); ++r) {
            next();
            size_t idx = std::stoul(line.substr(2));
            if (idx != r) throw std::runtime_error("store: attachment order");
            sd.attach_lo[r] = mset_parse(field(line, "lo"));
            sd.attach_hi[r] = mset_parse(field(line, "hi"));
        }
        w.slabs.push_back(std::move(sd));
        skip_orbit_section();
    }
    return Store{std::move(w), std::move(body)};
}

std::string store_filename(int n, long long ell, int k) {
    return "wtc_n" + std::to_string(n) + "_l" + std::to_string(ell) + "_k" + std::to_string(k) +
           ".txt";
}

std::vector<std::string> store_verify(const Store& st) {
    std::vector<std::string> issues;
    std::string fresh;
    try {
        fresh = store_serialize(st.w, orient_wtc(st.w));
    } catch (const std::exception& e) {
        issues.push_back(std::string("reorientation failed: ") + e.what());
        return issues;
    }
    std::string expect = st.body + "HASH fnv1a64:" + store_hash(st.body) + "\n";
    if (fresh != expect) {
        std::istringstream a(fresh), b(expect);
        std::string la, lb;
        int ln = 1;
        while (std::getline(a, la) && std::getline(b, lb)) {
            if (la != lb) {
                issues.push_back("line " + std::to_string(ln) + ": rebuilt '" + la +
                                 "' vs stored '" + lb + "'");
                break;
            }
            ++ln;
        }
        if (issues.empty()) issues.push_back("length mismatch between rebuilt and stored text");
    }
    return issues;
}

} // namespace wtc
