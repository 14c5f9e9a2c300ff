#include "hallcoh/tube_algebra.hpp"

#include <functional>
#include <sstream>

namespace hallcoh {

void add_term(TubeElement& x, const TubeModule& M, const QScalar& c) {
    if (c.is_zero()) return;
    auto it = x.find(M);
    if (it == x.end()) {
        x.emplace(M, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) x.erase(it);
}

TubeElement tube_one() { return {{TubeModule{}, QScalar(1)}}; }
TubeElement tube_basis(const TubeModule& M) { return {{M, QScalar(1)}}; }

TubeElement tube_add(const TubeElement& x, const TubeElement& y) {
    TubeElement r = x;
    for (auto& [k, c] : y) add_term(r, k, c);
    return r;
}

TubeElement tube_scale(const TubeElement& x, const QScalar& c) {
    TubeElement r;
    for (auto& [k, a] : x) add_term(r, k, a * c);
    return r;
}

TubeElement tube_mul(const Tube& T, const TubeElement& x, const TubeElement& y) {
    TubeElement r;
    for (auto& [a, ca] : x)
        for (auto& [b, cb] : y) {
            QScalar cab = ca * cb;
            for (auto& [C, g] : T.mul(a, b)) add_term(r, C, cab * g);
        }
    return r;
}

TubeElement tube_commutator(const Tube& T, const TubeElement& x, const TubeElement& y) {
    return tube_add(tube_mul(T, x, y), tube_scale(tube_mul(T, y, x), QScalar(-1)));
}

bool tube_is_zero(const TubeElement& x) {
    for (auto& [k, c] : x)
        if (!c.is_zero()) return false;
    return true;
}

std::string tube_str(const Tube& T, const TubeElement& x) {
    if (tube_is_zero(x)) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [k, c] : x) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")*u[" << T.str(k) << "]";
    }
    return os.str();
}

std::vector<int> tube_delta(const Tube& T, int r) { return std::vector<int>(T.m(), r); }

TubeElement c_lr(const Tube& T, int l, int r) {
    TubeElement out;
    if (r == 0) return tube_one();
    for (auto& M : T.soc_restricted(l, tube_delta(T, r))) {
        QScalar c = QScalar::rational(mpq_class(T.aut_order(M)), T.q());
        if (T.end_dim(M) % 2) c = -c;
        add_term(out, M, c);
    }
    QScalar pre = T.vpow(-2L * l * r);
    if (r % 2) pre = -pre;
    return tube_scale(out, pre);
}

TubeElement p_lr(const Tube& T, int l, int r) {
    if (l == 0) return {};
    // r c_r = sum_{s=1}^{r} (1 - v^{-2ls}) p_s c_{r-s}
    std::vector<TubeElement> c(r + 1), p(r + 1);
    for (int s = 0; s <= r; ++s) c[s] = c_lr(T, l, s);
    QScalar one = QScalar::rational(1, T.q());
    for (int s = 1; s <= r; ++s) {
        TubeElement rhs = tube_scale(c[s], QScalar(s));
        for (int t = 1; t < s; ++t)
            rhs = tube_add(rhs, tube_scale(tube_mul(T, p[t], c[s - t]), -(one - T.vpow(-2L * l * t))));
        p[s] = tube_scale(rhs, (one - T.vpow(-2L * l * s)).inverse());
    }
    return p[r];
}

TubeElement pi_lr(const Tube& T, int l, int r) {
    if (l == 0) return {};
    QScalar br = quantum_integer_d(T.q(), T.d(), static_cast<long>(l) * r) / QScalar(r);
    return tube_scale(p_lr(T, l, r), br);
}

TubeElement h_tube(const Tube& T, int j, int k) {
    QScalar w = T.vpow(k) + T.vpow(-k);
    TubeElement r = pi_lr(T, j + 1, k);
    r = tube_add(r, tube_scale(pi_lr(T, j, k), -w));
    if (j - 1 > 0) r = tube_add(r, pi_lr(T, j - 1, k));
    return r;
}

TubeElement eta_core(const Tube& T, int j) {
    std::vector<int> dim = tube_delta(T);
    dim[T.res(j)] -= 1;
    TubeElement out;
    QScalar base = QScalar::rational(1, T.q()) - T.vpow(2);
    for (auto& M : T.soc_restricted(j + 1, dim)) {
        QScalar c = QScalar::rational(1, T.q());
        for (int e = 1; e < T.end_dim(M); ++e) c *= base;
        add_term(out, M, c);
    }
    return out;
}

TubeElement phi1_e(const Tube& C1, int r) {
    if (r == 0) return tube_one();
    TubeModule M;
    for (int i = 0; i < r; ++i) M.push_back(Segment{0, 1});
    return {{M, C1.vpow(static_cast<long>(r) * (r - 1))}};
}

TubeElement phi1_p_newton(const Tube& C1, int r) {
    // p_r = sum_{i=1}^{r-1} (-1)^{i-1} e_i p_{r-i} + (-1)^{r-1} r e_r
    std::vector<TubeElement> p(r + 1);
    for (int s = 1; s <= r; ++s) {
        TubeElement acc = tube_scale(phi1_e(C1, s), QScalar((s % 2 ? 1 : -1) * s));
        for (int i = 1; i < s; ++i)
            acc = tube_add(acc, tube_scale(tube_mul(C1, phi1_e(C1, i), p[s - i]), QScalar(i % 2 ? 1 : -1)));
        p[s] = acc;
    }
    return p[r];
}

TubeElement h_bold(const Tube& C1, int r) {
    TubeElement out;
    for (auto& mu : partitions_of(r)) {
        long l = static_cast<long>(mu.size());
        add_term(out, partition_module(mu), n_factor_d(C1.q(), C1.d(), l - 1));
    }
    return tube_scale(out, quantum_integer_d(C1.q(), C1.d(), r) / QScalar(r));
}

TubeElement h_bold_newton(const Tube& C1, int r) {
    return tube_scale(phi1_p_newton(C1, r), quantum_integer_d(C1.q(), C1.d(), r) / QScalar(r));
}

TubeElement psi_embed(const TubeElement& x, const Tube& target) {
    TubeElement out;
    for (auto& [M, c] : x) {
        TubeModule N;
        for (auto& s : M) N.push_back(Segment{0, target.m() * s.len});
        std::sort(N.begin(), N.end());
        add_term(out, N, c);
    }
    return out;
}

namespace {

void add_ext(ExtTubeElement& x, const ExtTubeKey& k, const QScalar& c) {
    if (c.is_zero()) return;
    auto it = x.find(k);
    if (it == x.end()) {
        x.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) x.erase(it);
}

int sym_local(const Tube& T, const std::vector<int>& a, const std::vector<int>& b) {
    return T.euler(a, b) + T.euler(b, a);
}

std::vector<int> vec_add(std::vector<int> a, const std::vector<int>& b, int sign = 1) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += sign * b[i];
    return a;
}

// all beta with 0 <= beta <= dim componentwise
std::vector<std::vector<int>> sub_dims(const std::vector<int>& dim) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(dim.size(), 0);
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == dim.size()) {
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= dim[i]; ++k) {
            cur[i] = k;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

}  // namespace

ExtTubeElement ext_mul(const Tube& T, const ExtTubeElement& x, const ExtTubeElement& y) {
    ExtTubeElement r;
    for (auto& [ka, ca] : x)
        for (auto& [kb, cb] : y) {
            // (u_a K_mu)(u_b K_nu) = v^{(mu,b)} u_a u_b K_{mu+nu}
            QScalar c = ca * cb * T.vpow(sym_local(T, ka.second, T.dimvec(kb.first)));
            auto mu = vec_add(ka.second, kb.second);
            for (auto& [C, g] : T.mul(ka.first, kb.first)) add_ext(r, {C, mu}, c * g);
        }
    return r;
}

ExtTubeElement ext_from(const TubeElement& x, const std::vector<int>& mu) {
    ExtTubeElement r;
    for (auto& [M, c] : x) add_ext(r, {M, mu}, c);
    return r;
}

ExtTubeElement antipode(const Tube& T, const TubeModule& G) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int, TubeModule>, ExtTubeElement> memo;
    auto key = std::make_tuple(T.m(), T.q(), T.d(), G);
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    std::vector<int> zero(T.m(), 0);
    ExtTubeElement out;
    if (G.empty()) {
        out[{TubeModule{}, zero}] = QScalar(1);
    } else {
        auto dG = T.dimvec(G);
        for (auto& beta : sub_dims(dG)) {
            if (beta == zero) continue;
            auto alpha = vec_add(dG, beta, -1);
            for (auto& [A, B, c] : T.delta(G, alpha, beta)) {
                ExtTubeElement Kb{{{TubeModule{}, vec_add(zero, beta, -1)}, QScalar(1)}};
                ExtTubeElement uB{{{B, zero}, QScalar(1)}};
                ExtTubeElement t = ext_mul(T, ext_mul(T, Kb, antipode(T, A)), uB);
                for (auto& [k, a] : t) add_ext(out, k, -(c * a));
            }
        }
    }
    std::lock_guard<std::mutex> lk(mu);
    memo[key] = out;
    return out;
}

ExtTubeElement antipode_axiom_right(const Tube& T, const TubeModule& G) {
    std::vector<int> zero(T.m(), 0);
    auto dG = T.dimvec(G);
    ExtTubeElement out;
    for (auto& beta : sub_dims(dG)) {
        auto alpha = vec_add(dG, beta, -1);
        for (auto& [A, B, c] : T.delta(G, alpha, beta)) {
            ExtTubeElement left{{{A, beta}, c}};
            for (auto& [k, a] : ext_mul(T, left, antipode(T, B))) add_ext(out, k, a);
        }
    }
    return out;
}

ExtTubeElement antipode_axiom_left(const Tube& T, const TubeModule& G) {
    std::vector<int> zero(T.m(), 0);
    auto dG = T.dimvec(G);
    ExtTubeElement out;
    for (auto& beta : sub_dims(dG)) {
        auto alpha = vec_add(dG, beta, -1);
        for (auto& [A, B, c] : T.delta(G, alpha, beta)) {
            // S(u_A K_B) = K_{-B} S(u_A)
            ExtTubeElement Kb{{{TubeModule{}, vec_add(zero, beta, -1)}, c}};
            ExtTubeElement uB{{{B, zero}, QScalar(1)}};
            for (auto& [k, a] : ext_mul(T, ext_mul(T, Kb, antipode(T, A)), uB)) add_ext(out, k, a);
        }
    }
    return out;
}

}  // namespace hallcoh
