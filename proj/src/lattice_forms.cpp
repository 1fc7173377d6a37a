#include "wtc/lattice_forms.hpp"
#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace wtc {

LatVec sign_normalize(LatVec x) {
    for (long long v : x) {
        if (v > 0) return x;
        if (v < 0) {
            for (auto& w : x) w = -w;
            return x;
        }
    }
    return x; // zero vector
}

bool latvec_is_zero(const LatVec& x) {
    for (long long v : x)
        if (v != 0) return false;
    return true;
}

std::string latvec_str(const LatVec& x) {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < x.size(); ++i) {
        if (i) os << ',';
        os << x[i];
    }
    os << ')';
    return os.str();
}

LatVec latvec_parse(const std::string& s) {
    if (s.size() < 2 || s.front() != '(' || s.back() != ')')
        throw std::invalid_argument("bad LatVec: " + s);
    LatVec x;
    std::istringstream is(s.substr(1, s.size() - 2));
    std::string tok;
    while (std::getline(is, tok, ',')) x.push_back(std::stoll(tok));
    return x;
}

LatVec HeckeDatum::apply_a_inv(const LatVec& x) const {
    assert((int)x.size() == n);
    LatVec y = x;
    for (int i = n - k; i < n; ++i) {
        if (y[i] % ell != 0) throw std::domain_error("apply_a_inv: not in M0");
        y[i] /= ell;
    }
    return y;
}

LatVec HeckeDatum::apply_a(const LatVec& x) const {
    assert((int)x.size() == n);
    LatVec y = x;
    for (int i = n - k; i < n; ++i) y[i] *= ell;
    return y;
}

Rat eval_form(const Form& Z, const LatVec& x) {
    assert(Z.rows == Z.cols && (int)x.size() == Z.rows);
    Rat v(0);
    for (int i = 0; i < Z.rows; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < Z.cols; ++j) {
            if (x[j] == 0) continue;
            v += Rat((long)(x[i] * x[j])) * Z.at(i, j);
        }
    }
    return v;
}

Form psi(const LatVec& x) {
    if (latvec_is_zero(x)) throw std::domain_error("psi of zero vector");
    int n = (int)x.size();
    Form f(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) f.at(i, j) = Rat((long)(x[i] * x[j]));
    return f;
}

Rat inner_EE(const Form& A, const Form& B) {
    assert(A.rows == B.rows && A.cols == B.cols);
    Rat v(0);
    for (size_t i = 0; i < A.a.size(); ++i) v += A.a[i] * B.a[i];
    return v;
}

bool in_M0(const LatVec& x, const HeckeDatum& h) {
    assert((int)x.size() == h.n);
    for (int i = h.n - h.k; i < h.n; ++i)
        if (x[i] % h.ell != 0) return false;
    return true;
}

Rat weight_u(const LatVec& x, const Rat& u, const HeckeDatum& h) {
    if (u <= 0 || u > 1) throw std::domain_error("weight_u: u out of (0,1]");
    if (in_M0(x, h)) return Rat(1);
    return 1 / u;
}

bool is_positive_definite(const Form& Z) {
    assert(Z.rows == Z.cols);
    for (int m = 1; m <= Z.rows; ++m) {
        Mat<Rat> sub(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) sub.at(i, j) = Z.at(i, j);
        if (det(sub) <= 0) return false;
    }
    return true;
}

// Largest integer v with v <= q + sqrt(S), for S >= 0; exact.
static Int floor_plus_sqrt(const Rat& q, const Rat& S) {
    assert(S >= 0);
    Int base = rat_floor(q);
    Int fs = rat_floor(S);
    Int root;
    mpz_sqrt(root.get_mpz_t(), fs.get_mpz_t());
    Int v = base + root + 2;
    auto pred = [&](const Int& w) {
        Rat d = Rat(w) - q; // need d <= sqrt(S)
        if (d <= 0) return true;
        return d * d <= S;
    };
    while (!pred(v)) --v;
    return v;
}

std::vector<LatVec> short_vectors(const Form& Z, const Rat& bound) {
    if (!is_positive_definite(Z)) throw std::domain_error("short_vectors: Z not positive definite");
    if (bound <= 0) return {};
    int n = Z.rows;

    // rational Cholesky: Z[x] = sum_i D_i (x_i + sum_{j>i} R_ij x_j)^2
    Mat<Rat> q = Z;
    std::vector<Rat> D(n);
    Mat<Rat> R(n, n);
    for (int i = 0; i < n; ++i) {
        D[i] = q.at(i, i);
        for (int j = i + 1; j < n; ++j) R.at(i, j) = q.at(i, j) / q.at(i, i);
        for (int k2 = i + 1; k2 < n; ++k2)
            for (int l = i + 1; l < n; ++l)
                q.at(k2, l) -= q.at(k2, i) * q.at(i, l) / q.at(i, i);
    }

    std::vector<LatVec> out;
    LatVec x(n, 0);
    // enumerate level i after fixing x_{i+1}..x_{n-1}; T = remaining budget
    auto rec = [&](auto&& self, int i, const Rat& T) -> void {
        if (i < 0) {
            if (!latvec_is_zero(x)) {
                LatVec y = sign_normalize(x);
                out.push_back(y);
            }
            return;
        }
        Rat c(0);
        for (int j = i + 1; j < n; ++j) c += R.at(i, j) * Rat((long)x[j]);
        Rat S = T / D[i];
        Int hi = floor_plus_sqrt(-c, S);
        Int lo = -floor_plus_sqrt(c, S);
        for (Int v = lo; v <= hi; ++v) {
            x[i] = v.get_si();
            Rat term = Rat(v) + c;
            self(self, i - 1, T - D[i] * term * term);
        }
        x[i] = 0;
    };
    rec(rec, n - 1, bound);

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int latvec_rank(const std::vector<LatVec>& vs) {
    if (vs.empty()) return 0;
    Mat<Rat> m((int)vs.size(), (int)vs[0].size());
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m.at(i, j) = Rat((long)vs[i][j]);
    return mat_rank(m);
}

MinResult minimal_vectors(const Form& Z, const Rat& u, const HeckeDatum& h) {
    if (u < h.u0() || u > 1) throw std::domain_error("minimal_vectors: u out of range");
    if (!is_positive_definite(Z)) throw std::domain_error("minimal_vectors: not positive definite");
    int n = Z.rows;
    // weighted length of some basis vector bounds the minimum; weights
    // are >= 1, so achievers satisfy Z[x] <= B0
    Rat B0;
    for (int i = 0; i < n; ++i) {
        LatVec e(n, 0);
        e[i] = 1;
        Rat w = weight_u(e, u, h) * Z.at(i, i);
        if (i == 0 || w < B0) B0 = w;
    }
    auto cands = short_vectors(Z, B0);
    Rat m;
    bool first = true;
    for (const auto& x : cands) {
        Rat w = weight_u(x, u, h) * eval_form(Z, x);
        if (first || w < m) { m = w; first = false; }
    }
    std::vector<LatVec> M;
    bool at_u0 = (u == h.u0());
    for (const auto& x : cands) {
        Rat w = weight_u(x, u, h) * eval_form(Z, x);
        if (w != m) continue;
        if (at_u0 && !in_M0(x, h)) continue; // tie rule: ell*x achieves and stays
        M.push_back(x);
    }
    std::sort(M.begin(), M.end());
    return {m, M, latvec_rank(M) == (int)n};
}

} // namespace wtc
