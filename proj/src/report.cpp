#include "wtc/report.hpp"

#include <array>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace wtc {

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int eta_power_of(const Nebentype& eta, int N) {
    auto gen = dirichlet_generator(N);
    for (int j = 0; j < std::max(gen.order, 1); ++j)
        if (nebentype_power(gen, j).val == eta.val) return j;
    throw std::runtime_error("nebentype not a generator power");
}

std::string pretty(const CycloElem& x) {
    if (x.b == 0) return rat_str(x.a);
    std::string zn = "zeta" + std::to_string(x.m);
    std::string bs = x.b == 1 ? zn : rat_str(x.b) + "*" + zn;
    if (x.a == 0) return bs;
    return rat_str(x.a) + (rat_sign(x.b) > 0 ? "+" : "") + bs;
}

// orientation cache: stores are immutable one-time artifacts, and
// orientation is the expensive eta-independent half of the pipeline
std::map<std::string, std::shared_ptr<const OrientedStore>>& cache() {
    static std::map<std::string, std::shared_ptr<const OrientedStore>> c;
    return c;
}

std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

std::shared_ptr<const OrientedStore> oriented_store(const std::string& dir, int n, long long ell,
                                                    int k) {
    std::filesystem::path p = std::filesystem::path(dir) / store_filename(n, ell, k);
    std::string key = p.string();
    {
        std::lock_guard<std::mutex> lk(cache_mutex());
        auto it = cache().find(key);
        if (it != cache().end()) return it->second;
    }
    if (!std::filesystem::exists(p))
        throw std::runtime_error("missing store " + p.string() + " (run build)");
    Store st = store_load(read_file(p));
    OrientedWTC ow = orient_wtc(st.w);
    auto o = std::make_shared<const OrientedStore>(OrientedStore{std::move(st), std::move(ow)});
    std::lock_guard<std::mutex> lk(cache_mutex());
    cache()[key] = o;
    return o;
}

std::vector<DegreeEigenReport> level_report(const std::string& store_dir, int n,
                                            const std::vector<long long>& primes, int N,
                                            const std::string& etaname,
                                            const std::vector<int>& degrees, int jobs) {
    Nebentype eta = nebentype_parse(N, etaname);
    for (long long ell : primes)
        if (N > 1 && std::gcd(ell, (long long)N) != 1)
            throw std::runtime_error("prime " + std::to_string(ell) + " divides the level");

    struct Slot {
        long long ell;
        int k;
        std::shared_ptr<const OrientedStore> o;
    };
    std::vector<Slot> slots;
    int cmax = 0;
    auto fetch = [&](size_t i) {
        slots[i].o = oriented_store(store_dir, n, slots[i].ell, slots[i].k);
    };
    for (long long ell : primes)
        for (int k = 1; k <= n; ++k) slots.push_back({ell, k, nullptr});
    if (jobs > 1) {
        size_t nexti = 0;
        while (nexti < slots.size()) {
            std::vector<std::future<void>> fut;
            while ((int)fut.size() < jobs && nexti < slots.size())
                fut.push_back(std::async(std::launch::async, fetch, nexti++));
            for (auto& f : fut) f.get();
        }
    } else {
        for (size_t i = 0; i < slots.size(); ++i) fetch(i);
    }
    for (const auto& s : slots) cmax = std::max(cmax, s.o->st.w.c);

    HeckeEngine eng = hecke_engine(n, cmax, eta);
    std::vector<HeckeOperator> ops;
    for (const auto& s : slots) ops.push_back(hecke_operator(eng, s.o->ow));

    // the scalar datum must act as eta(ell) times the identity
    for (const auto& op : ops)
        if (op.k == n) {
            CycloElem want = nebentype_value(eta, op.ell);
            for (const auto& T : op.T)
                if (!(T == want * CMat::identity(T.rows)))
                    throw std::runtime_error("scalar datum is not eta(ell) * identity");
        }

    int field_m = 1;
    for (const auto& v : eta.val) field_m = std::max(field_m, v.m);
    int eta_power = n == 3 ? eta_power_of(eta, N) : 0;

    std::vector<DegreeEigenReport> out;
    for (int i : degrees) {
        if (i > eng.cc.maxdeg) continue;
        DegreeEigenReport dr;
        dr.degree = i;
        dr.hdim = eng.hb.hdim[i];
        std::vector<CMat> mats;
        for (const auto& op : ops) mats.push_back(op.T[i]);
        for (const auto& A : mats)
            for (const auto& B : mats)
                if (!(A * B == B * A)) throw std::runtime_error("Hecke operators fail to commute");
        if (dr.hdim > 0) {
            for (const auto& b : decompose(mats, field_m)) {
                EigenBlockReport rb;
                rb.dim = b.basis.cols;
                rb.simple = b.simple;
                for (size_t t = 0; t < ops.size(); ++t) {
                    rb.op_ell.push_back(ops[t].ell);
                    rb.op_k.push_back(ops[t].k);
                    rb.value.push_back(b.minpoly[t].degree() == 1 ? b.eigen[t] : CycloElem(0));
                    rb.eigen.push_back("T_" + std::to_string(ops[t].ell) + "," +
                                       std::to_string(ops[t].k) + "=" +
                                       (b.minpoly[t].degree() == 1 ? pretty(b.eigen[t])
                                                                   : std::string("(nonsplit)")));
                }
                if (n == 3 && b.simple) {
                    std::vector<std::array<CycloElem, 3>> triples;
                    for (long long ell : primes) {
                        std::array<CycloElem, 3> a;
                        for (size_t t = 0; t < ops.size(); ++t)
                            if (ops[t].ell == ell) a[ops[t].k - 1] = b.eigen[t];
                        triples.push_back(a);
                    }
                    auto lbl = match_galois(primes, triples, eta, eta_power);
                    rb.label = lbl.text;
                    rb.residual = lbl.residual;
                }
                dr.blocks.push_back(std::move(rb));
            }
        }
        out.push_back(std::move(dr));
    }
    return out;
}

} // namespace wtc
