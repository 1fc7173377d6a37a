#include "wtc/coefficients.hpp"
#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace wtc {

namespace {

long long mod_pos(long long x, long long N) {
    long long r = x % N;
    return r < 0 ? r + N : r;
}

std::vector<long long> units_mod(int N) {
    std::vector<long long> us;
    for (long long u = 1; u < N; ++u)
        if (std::gcd(u, (long long)N) == 1) us.push_back(u);
    if (N == 1) us.push_back(0); // the single residue
    return us;
}

CycloElem cyclo_pow(const CycloElem& z, int e) {
    CycloElem r(1);
    for (int i = 0; i < e; ++i) r *= z;
    return r;
}

std::vector<long long> row_mod(const std::vector<long long>& v, int N) {
    std::vector<long long> w(v.size());
    for (size_t i = 0; i < v.size(); ++i) w[i] = mod_pos(v[i], N);
    return w;
}

bool primitive_mod(const std::vector<long long>& v, int N) {
    long long g = N;
    for (long long x : v) g = std::gcd(g, x);
    return g == 1;
}

// unimodular completion: a matrix in GL_n(Z) with the given primitive
// integer vector as its bottom row, det forced to want_det
IMat bottom_row_completion(std::vector<long long> w, int want_det) {
    int n = (int)w.size();
    // column-reduce w to a unit vector, tracking the operations
    IMat V = IMat::identity(n);
    auto colop = [&](int dst, int src, long long q) { // col_dst -= q * col_src
        for (int i = 0; i < n; ++i) V.at(i, dst) -= q * V.at(i, src);
        w[dst] -= q * w[src];
    };
    while (true) {
        int nz = -1, cnt = 0;
        for (int j = 0; j < n; ++j)
            if (w[j]) {
                ++cnt;
                if (nz < 0 || std::llabs(w[j]) < std::llabs(w[nz])) nz = j;
            }
        if (cnt == 0) throw std::runtime_error("coset_space: zero row");
        if (cnt == 1 && std::llabs(w[nz]) == 1) break;
        for (int j = 0; j < n; ++j) {
            if (j == nz || !w[j]) continue;
            long long q = w[j] / w[nz];
            if (q) colop(j, nz, q);
        }
        // if nothing changed, the pivot divides everything left
        bool stuck = true;
        for (int j = 0; j < n; ++j)
            if (j != nz && w[j]) stuck = false;
        if (stuck && std::llabs(w[nz]) != 1)
            throw std::runtime_error("coset_space: row not primitive");
    }
    int pos = 0;
    while (!w[pos]) ++pos;
    // move the unit to the last slot and make it +1
    if (pos != n - 1) {
        for (int i = 0; i < n; ++i) std::swap(V.at(i, pos), V.at(i, n - 1));
        std::swap(w[pos], w[n - 1]);
        for (int i = 0; i < n; ++i) V.at(i, pos) = -V.at(i, pos);
    }
    if (w[n - 1] < 0)
        for (int i = 0; i < n; ++i) V.at(i, n - 1) = -V.at(i, n - 1);
    // now (original w) * V = e_n, so V^{-1} has bottom row = original w
    IMat G = imat_inverse_unimodular(V);
    if (imat_det(G) != want_det)
        for (int j = 0; j < n; ++j) G.at(0, j) = -G.at(0, j);
    return G;
}

// lift a primitive class mod N to a Z-primitive integer vector: bump the
// first coordinate by multiples of N until it is coprime to the rest
std::vector<long long> primitive_lift(std::vector<long long> w, int N) {
    long long M = 0;
    for (size_t i = 1; i < w.size(); ++i) M = std::gcd(M, w[i]);
    if (M == 0) {
        w[1] += N; // keeps the class mod N, makes the tail nonzero
        M = N;
    }
    for (long long k = 0; k <= M; ++k)
        if (std::gcd(w[0] + k * N, M) == 1) {
            w[0] += k * N;
            return w;
        }
    throw std::runtime_error("coset_space: lift failed");
}

} // namespace

CycloElem nebentype_value(const Nebentype& eta, long long r) {
    return eta.val[mod_pos(r, eta.N)];
}

Nebentype trivial_nebentype(int N) {
    Nebentype e;
    e.N = N;
    e.order = 1;
    e.val.assign(N, CycloElem(0));
    for (long long u : units_mod(N)) e.val[u] = CycloElem(1);
    if (N == 1) e.val.assign(1, CycloElem(1));
    return e;
}

Nebentype dirichlet_generator(int N) {
    if (N < 1) throw std::invalid_argument("dirichlet_generator: bad level");
    auto us = units_mod(N);
    int phi = (int)us.size();
    if (N == 1 || N == 2) return trivial_nebentype(N);
    // smallest primitive root
    long long g = -1;
    for (long long c : us) {
        long long x = 1;
        int ord = 0;
        do {
            x = mod_pos(x * c, N);
            ++ord;
        } while (x != 1);
        if (ord == phi) {
            g = c;
            break;
        }
    }
    if (g < 0) throw std::invalid_argument("dirichlet_generator: unit group not cyclic");
    Nebentype chi;
    chi.N = N;
    chi.order = phi;
    chi.val.assign(N, CycloElem(0));
    CycloElem z = cyclo_zeta(phi);
    long long x = 1;
    for (int t = 0; t < phi; ++t) {
        chi.val[x] = cyclo_pow(z, t);
        x = mod_pos(x * g, N);
    }
    return chi;
}

Nebentype nebentype_power(const Nebentype& chi, int j) {
    Nebentype r;
    r.N = chi.N;
    int e = ((j % chi.order) + chi.order) % chi.order;
    r.order = e == 0 ? 1 : chi.order / std::gcd(chi.order, e);
    r.val.assign(chi.val.size(), CycloElem(0));
    for (size_t u = 0; u < chi.val.size(); ++u)
        if (!chi.val[u].is_zero()) r.val[u] = cyclo_pow(chi.val[u], e);
    return r;
}

Nebentype nebentype_parse(int N, const std::string& name) {
    if (name == "triv") return trivial_nebentype(N);
    auto chi = dirichlet_generator(N);
    if (name == "quad") {
        if (chi.order % 2) throw std::invalid_argument("nebentype_parse: no quadratic character");
        return nebentype_power(chi, chi.order / 2);
    }
    if (name == "chi") return chi;
    if (name.rfind("chi^", 0) == 0) return nebentype_power(chi, std::stoi(name.substr(4)));
    throw std::invalid_argument("nebentype_parse: unknown character " + name);
}

CosetSpace coset_space(int N, int n) {
    CosetSpace cs;
    cs.N = N;
    cs.n = n;
    if (N == 1) {
        cs.cls.push_back(std::vector<long long>(n, 0));
        cs.sec.push_back(IMat::identity(n));
        return cs;
    }
    auto us = units_mod(N);
    // canonical class representative: lex-least unit multiple
    std::vector<std::vector<long long>> seen;
    std::vector<long long> v(n, 0);
    while (true) {
        if (primitive_mod(v, N)) {
            std::vector<long long> best = v;
            for (long long u : us) {
                std::vector<long long> w(n);
                for (int i = 0; i < n; ++i) w[i] = mod_pos(u * v[i], N);
                if (w < best) best = w;
            }
            if (best == v) cs.cls.push_back(v);
        }
        int i = n - 1;
        while (i >= 0 && v[i] == N - 1) v[i--] = 0;
        if (i < 0) break;
        ++v[i];
    }
    std::sort(cs.cls.begin(), cs.cls.end());
    for (const auto& c : cs.cls) {
        auto w = primitive_lift(c, N);
        cs.sec.push_back(bottom_row_completion(w, 1));
        cs.sec.push_back(bottom_row_completion(w, -1));
    }
    return cs;
}

ClassRef coset_canonicalize(const CosetSpace& cs, const std::vector<long long>& v0) {
    if (cs.N == 1) return {0, 0};
    auto v = row_mod(v0, cs.N);
    if (!primitive_mod(v, cs.N))
        throw std::runtime_error("coset_canonicalize: row not primitive mod N");
    std::vector<long long> best = v;
    long long bu = 1;
    for (long long u : units_mod(cs.N)) {
        std::vector<long long> w(v.size());
        for (size_t i = 0; i < v.size(); ++i) w[i] = mod_pos(u * v[i], cs.N);
        if (w < best) {
            best = w;
            bu = u;
        }
    }
    auto it = std::lower_bound(cs.cls.begin(), cs.cls.end(), best);
    if (it == cs.cls.end() || *it != best)
        throw std::runtime_error("coset_canonicalize: class missing");
    // v = unit * best with unit = bu^{-1}
    long long unit = 1;
    for (long long u : units_mod(cs.N))
        if (mod_pos(u * bu, cs.N) == 1) unit = u;
    return {(int)(it - cs.cls.begin()), unit};
}

int coset_index(const CosetSpace& cs, const std::vector<long long>& bottom_row, int det_sign) {
    if (cs.N == 1) return 0;
    return 2 * coset_canonicalize(cs, bottom_row).cls + (det_sign < 0 ? 1 : 0);
}

CoinducedModule coinduced(const Nebentype& eta, const HeckeDatum& h) {
    if (eta.N > 1 && h.ell % eta.N == 0)
        throw std::invalid_argument("coinduced: ell divides the level");
    CoinducedModule m = {eta, h, coset_space(eta.N, h.n), 0};
    m.dim = m.cs.count();
    return m;
}

namespace {

Mat<CycloElem> action_by(const CoinducedModule& mod, const IMat& g, long long detg) {
    int d = mod.dim;
    Mat<CycloElem> A(d, d, CycloElem(0));
    if (mod.eta.N == 1) {
        A.at(0, 0) = CycloElem(1);
        return A;
    }
    int flip = detg < 0 ? 1 : 0;
    for (size_t c = 0; c < mod.cs.cls.size(); ++c) {
        std::vector<long long> v(mod.h.n, 0);
        for (int j = 0; j < mod.h.n; ++j)
            for (int i = 0; i < mod.h.n; ++i) v[j] += mod.cs.cls[c][i] * g.at(i, j);
        auto ref = coset_canonicalize(mod.cs, v);
        CycloElem s = nebentype_value(mod.eta, ref.unit);
        for (int sign = 0; sign < 2; ++sign) {
            int from = 2 * (int)c + sign;
            int to = 2 * ref.cls + (sign ^ flip);
            A.at(to, from) = s;
        }
    }
    return A;
}

} // namespace

Mat<CycloElem> coind_action(const CoinducedModule& mod, const IMat& g) {
    long long d = imat_det(g);
    if (d != 1 && d != -1) throw std::invalid_argument("coind_action: not unimodular");
    return action_by(mod, g, d);
}

Mat<CycloElem> coind_action_gen(const CoinducedModule& mod, const IMat& g) {
    long long d = imat_det(g);
    if (d == 0 || (mod.eta.N > 1 && std::gcd(d, (long long)mod.eta.N) != 1))
        throw std::invalid_argument("coind_action_gen: det not prime to the level");
    return action_by(mod, g, d);
}

Mat<CycloElem> coind_action_a(const CoinducedModule& mod) {
    IMat a = IMat::identity(mod.h.n);
    for (int i = mod.h.n - mod.h.k; i < mod.h.n; ++i) a.at(i, i) = mod.h.ell;
    return action_by(mod, a, 1);
}

} // namespace wtc
