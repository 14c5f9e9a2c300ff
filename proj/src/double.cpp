#include "hallcoh/double.hpp"

#include <set>
#include <sstream>

namespace hallcoh {

namespace {

mpq_class aut_inv(const mpz_class& a) {
    mpq_class r(mpz_class(1), a);
    r.canonicalize();
    return r;
}

}  // namespace

void d_add_term(DoubleElement& x, const DKey& k, const QScalar& c) {
    if (c.is_zero()) return;
    auto it = x.find(k);
    if (it == x.end()) {
        x.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) x.erase(it);
}

DoubleElement d_add(const DoubleElement& x, const DoubleElement& y) {
    DoubleElement r = x;
    for (auto& [k, c] : y) d_add_term(r, k, c);
    return r;
}

DoubleElement d_sub(const DoubleElement& x, const DoubleElement& y) {
    DoubleElement r = x;
    for (auto& [k, c] : y) d_add_term(r, k, -c);
    return r;
}

DoubleElement d_scale(const DoubleElement& x, const QScalar& c) {
    DoubleElement r;
    if (c.is_zero()) return r;
    for (auto& [k, a] : x) r.emplace(k, a * c);
    return r;
}

bool d_is_zero(const DoubleElement& x) { return x.empty(); }

DoubleElement DoubleAlgebra::one() const { return torus(M_.weights().zero()); }

DoubleElement DoubleAlgebra::torus(const Cls& mu) const { return {{DKey{SheafKey{}, mu, SheafKey{}}, QScalar(1)}}; }

DoubleElement DoubleAlgebra::plus(const HallElement& x, const Cls& mu) const {
    DoubleElement r;
    for (auto& [k, c] : x) d_add_term(r, DKey{k, mu, SheafKey{}}, c);
    return r;
}

DoubleElement DoubleAlgebra::minus(const HallElement& x, const Cls& nu) const {
    DoubleElement r;
    for (auto& [k, c] : x) d_add_term(r, DKey{SheafKey{}, nu, k}, c);
    return r;
}

DoubleElement DoubleAlgebra::mul(const DoubleElement& x, const DoubleElement& y) const {
    DoubleElement r;
    const int q = M_.q();
    for (auto& [kx, cx] : x)
        for (auto& [ky, cy] : y) {
            const DoubleElement& S = straighten(kx.minus, ky.plus);
            for (auto& [ks, cs] : S) {
                // K_mu u+_e = v^{(mu,e)} u+_e K_mu and u-_f K_nu = v^{(nu,f)} K_nu u-_f
                int tw = form(kx.torus, M_.cls(ks.plus)) + form(ky.torus, M_.cls(ks.minus));
                QScalar c = cx * cy * cs * qv_pow(q, tw);
                Cls t = cls_add(cls_add(kx.torus, ks.torus), ky.torus);
                const HallTerms& P = M_.mul(kx.plus, ks.plus);
                const HallTerms& N = M_.mul(ks.minus, ky.minus);
                for (auto& [A, ca] : P)
                    for (auto& [B, cb] : N) d_add_term(r, DKey{A, t, B}, c * ca * cb);
            }
        }
    return r;
}

DoubleElement DoubleAlgebra::commutator(const DoubleElement& x, const DoubleElement& y) const {
    return d_sub(mul(x, y), mul(y, x));
}

const DoubleElement& DoubleAlgebra::straighten(const SheafKey& a, const SheafKey& b) const {
    auto key = std::make_pair(a, b);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    DoubleElement r = compute_straighten(a, b);
    std::lock_guard<std::mutex> lk(mu_);
    auto [it, ins] = memo_.emplace(std::move(key), std::move(r));
    return it->second;
}

size_t DoubleAlgebra::straighten_cache_size() const {
    std::lock_guard<std::mutex> lk(mu_);
    return memo_.size();
}

std::vector<std::tuple<SheafKey, SheafKey, DoubleElement>> DoubleAlgebra::straighten_table() const {
    std::lock_guard<std::mutex> lk(mu_);
    std::vector<std::tuple<SheafKey, SheafKey, DoubleElement>> out;
    for (auto& [k, v] : memo_) out.emplace_back(k.first, k.second, v);
    return out;
}

void DoubleAlgebra::preload_straighten(const SheafKey& a, const SheafKey& b, DoubleElement value) const {
    std::lock_guard<std::mutex> lk(mu_);
    memo_.emplace(std::make_pair(a, b), std::move(value));
}

DoubleElement DoubleAlgebra::compute_straighten(const SheafKey& a, const SheafKey& b) const {
    const WeightData& w = M_.weights();
    if (a.is_zero() || b.is_zero()) return {{DKey{b, w.zero(), a}, QScalar(1)}};
    if (a.rank() > 1 || b.rank() > 1)
        throw UnsupportedStratum("straightening with the rank-two object " + M_.str(a.rank() > 1 ? a : b));
    const int q = M_.q();
    const Cls cA = M_.cls(a), cB = M_.cls(b);
    auto inv_aut = [&](const SheafKey& k) { return QScalar::rational(aut_inv(M_.aut_order(k)), q); };
    // The double relation for (u_a, u_b): with Delta(u_a) = sum c- u_{a2} K_{a1} (x) u_{a1} and
    // Delta(u_b) = sum c+ u_{b1} K_{b2} (x) u_{b2},
    //   sum_{a1 ~ b1} c+ c- / a_{b1} u-_{a2} K_{-a1} u+_{b2} = sum_{a2 ~ b2} c+ c- / a_{b2} u+_{b1} K_{b2} u-_{a1};
    // the term with a1 = b1 = 0 is u-_a u+_b.
    std::set<Cls> rhs, lhs;
    auto ta = M_.torsion_sub_classes(a), tb = M_.torsion_sub_classes(b);
    for (auto& t : tb) rhs.insert(t);
    for (auto& t : ta) lhs.insert(t);
    if (a.rank() >= 1 && b.rank() >= 1) {
        for (auto& t : ta) rhs.insert(cls_sub(cA, t));
        for (auto& t : tb) lhs.insert(cls_sub(cB, t));
    }
    lhs.erase(w.zero());
    DoubleElement out;
    // Only matching iso classes pair up: the coproduct of the smaller object is computed first and
    // restricts the other one to the classes it meets. slot 0 is the quotient, slot 1 the subobject.
    auto size = [&](const SheafKey& x) {
        int n = 0;
        for (auto& [pt, mod] : x.torsion) n += M_.tube(pt).length(mod) * pt.residue_degree();
        return n;
    };
    const bool a_first = size(a) <= size(b);
    auto matched = [&](const Cls& alA, const Cls& beA, int sa, const Cls& alB, const Cls& beB, int sb) {
        auto restrict_by = [](const DeltaTerms& d, int slot) {
            CohModel::KeyFilter f;
            for (auto& t : d) f.insert(slot == 0 ? std::get<0>(t) : std::get<1>(t));
            return f;
        };
        std::pair<DeltaTerms, DeltaTerms> r;
        if (a_first) {
            r.first = M_.delta(a, alA, beA);
            if (r.first.empty()) return r;
            auto f = restrict_by(r.first, sa);
            r.second = M_.delta_matching(b, alB, beB, sb == 0 ? &f : nullptr, sb == 1 ? &f : nullptr);
        } else {
            r.second = M_.delta(b, alB, beB);
            if (r.second.empty()) return r;
            auto f = restrict_by(r.second, sb);
            r.first = M_.delta_matching(a, alA, beA, sa == 0 ? &f : nullptr, sa == 1 ? &f : nullptr);
        }
        return r;
    };
    for (auto& k : rhs) {
        auto [dA, dB] = matched(k, cls_sub(cA, k), 0, cls_sub(cB, k), k, 1);
        for (auto& [a2, a1, cm] : dA)
            for (auto& [b1, b2, cp] : dB) {
                if (!(a2 == b2)) continue;
                d_add_term(out, DKey{b1, k, a1}, cp * cm * inv_aut(b2));
            }
    }
    for (auto& k : lhs) {
        auto [dA, dB] = matched(cls_sub(cA, k), k, 1, k, cls_sub(cB, k), 0);
        for (auto& [a2, a1, cm] : dA)
            for (auto& [b1, b2, cp] : dB) {
                if (!(a1 == b1)) continue;
                QScalar c = cp * cm * inv_aut(b1);
                const int s0 = -form(k, M_.cls(b2));
                const DoubleElement& S = straighten(a2, b2);
                for (auto& [ks, cs] : S) {
                    int tw = s0 - form(k, M_.cls(ks.minus));
                    d_add_term(out, DKey{ks.plus, cls_sub(ks.torus, k), ks.minus}, -(c * cs * qv_pow(q, tw)));
                }
            }
    }
    return out;
}

QScalar DoubleAlgebra::pairing(const DoubleElement& x, const DoubleElement& y) const {
    const int q = M_.q();
    QScalar r;
    for (auto& [kx, cx] : x) {
        if (!kx.minus.is_zero()) throw std::invalid_argument("pairing: left argument has negative parts");
        Cls al = M_.cls(kx.plus);
        const Cls& mu = kx.torus;
        // u+_alpha K_mu = v^{-(mu,alpha)} K_mu u+_alpha
        QScalar c0 = cx * qv_pow(q, -form(mu, al));
        for (auto& [ky, cy] : y) {
            if (!ky.plus.is_zero()) throw std::invalid_argument("pairing: right argument has positive parts");
            if (!(kx.plus == ky.minus)) continue;
            const Cls& nu = ky.torus;
            int e = -form(mu, nu) - form(al, nu) + form(mu, al);
            r += c0 * cy * qv_pow(q, e) * QScalar::rational(aut_inv(M_.aut_order(kx.plus)), q);
        }
    }
    return r;
}

DoubleElement DoubleAlgebra::central_reduce(const DoubleElement& x) const {
    DoubleElement r;
    const int di = M_.weights().delta_index();
    for (auto& [k, c] : x) {
        DKey k2 = k;
        k2.torus[di] = 0;
        d_add_term(r, k2, c);
    }
    return r;
}

std::string DoubleAlgebra::str(const DoubleElement& x) const {
    if (x.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [k, c] : x) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        if (!k.plus.is_zero()) os << "*u+[" << M_.str(k.plus) << "]";
        if (!cls_is_zero(k.torus)) os << "*K" << cls_str(k.torus);
        if (!k.minus.is_zero()) os << "*u-[" << M_.str(k.minus) << "]";
    }
    return os.str();
}

// ---------------------------------------------------------------------------------------------

std::string vertex_name(const Vertex& s) {
    if (s.star()) return "*";
    return "[" + std::to_string(s.branch + 1) + "," + std::to_string(s.j) + "]";
}

std::vector<Vertex> Generators::vertices() const {
    const WeightData& w = D_.weights();
    std::vector<Vertex> out{Vertex{}};
    for (int i = 0; i < w.branches(); ++i)
        for (int j = 1; j < w.weight(i); ++j) out.push_back(Vertex{i, j});
    return out;
}

Cls Generators::k_class(const Vertex& s) const {
    const WeightData& w = D_.weights();
    return s.star() ? w.alpha_star() : w.simple_class(s.branch, s.j);
}

int Generators::cartan(const Vertex& s, const Vertex& t) const { return D_.weights().sym(k_class(s), k_class(t)); }

DoubleElement Generators::K(const Vertex& s, int power) const { return D_.torus(cls_scale(k_class(s), power)); }

const DoubleElement& Generators::h(const Vertex& s, int r) const { return get('h', s, r); }
const DoubleElement& Generators::xplus(const Vertex& s, int t) const { return get('+', s, t); }
const DoubleElement& Generators::xminus(const Vertex& s, int t) const { return get('-', s, t); }
const DoubleElement& Generators::psi(const Vertex& s, int m) const { return get('p', s, m); }
const DoubleElement& Generators::phi(const Vertex& s, int m) const { return get('f', s, m); }
const DoubleElement& Generators::theta_star(int m) const { return get('t', Vertex{}, m); }

const DoubleElement& Generators::get(char kind, const Vertex& s, int t) const {
    auto key = std::make_tuple(kind, s, t);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    DoubleElement r = compute(kind, s, t);
    std::lock_guard<std::mutex> lk(mu_);
    auto [it, ins] = memo_.emplace(key, std::move(r));
    return it->second;
}

DoubleElement Generators::exp_coeff(const Vertex& s, int m, int sign) const {
    // coefficient of u^m in exp(sign (v - v^-1) sum_k h_{s, sign k} u^k), via E_m = sum_k (k/m) X_k E_{m-k}
    if (m == 0) return D_.one();
    const int q = D_.model().q();
    QScalar vv = qv_pow(q, 1) - qv_pow(q, -1);
    DoubleElement r;
    for (int k = 1; k <= m; ++k) {
        DoubleElement X = d_scale(h(s, sign * k), QScalar(sign) * vv * QScalar::rational(mpq_class(k, m), q));
        const DoubleElement& E = get(sign > 0 ? 'E' : 'F', s, m - k);
        r = d_add(r, D_.mul(X, E));
    }
    return r;
}

DoubleElement Generators::compute(char kind, const Vertex& s, int t) const {
    const CohModel& M = D_.model();
    const int q = M.q();
    auto Q = [q](long n) { return quantum_integer(q, n); };
    auto frac = [q](long a, const QScalar& b) { return QScalar::rational(mpq_class(a), q) / b; };
    switch (kind) {
        case 'E':
            return exp_coeff(s, t, 1);
        case 'F':
            return exp_coeff(s, t, -1);
        case 't':
            return get('E', Vertex{}, t);
        case 'p':
            if (t < 0) return {};
            return D_.mul(K(s), get('E', s, t));
        case 'f':
            if (t > 0) return {};
            return D_.mul(K(s, -1), get('F', s, -t));
        case 'h': {
            if (t == 0) throw std::invalid_argument("h: index must be nonzero");
            int r = std::abs(t);
            HallElement x = s.star() ? build_Tr(M, r) : h_tube_elem(M, s.branch, s.j, r);
            return t > 0 ? D_.plus(x) : d_scale(D_.minus(x), QScalar(-1));
        }
        case '+': {
            if (s.star()) return D_.plus(hall_basis(M.line_c(t)));
            if (t == 0) return D_.plus(hall_basis(M.simple(s.branch, s.j)));
            if (t >= 1) return d_scale(D_.commutator(h(s, t), xplus(s, 0)), frac(t, Q(2 * t)));
            if (t == -1) {
                // -v^{-j} (sum (1 - v^2)^{End - 1} u-_M) K_{-e_j}, moved into K u- order
                Cls e = k_class(s);
                HallElement core = eta_core_elem(M, s.branch, s.j);
                HallElement moved;
                for (auto& [k, c] : core)
                    hall_add_term(moved, k, c * qv_pow(q, -M.weights().sym(e, M.cls(k))));
                return d_scale(D_.minus(moved, cls_neg(e)), -qv_pow(q, -s.j));
            }
            int k = -t - 1;
            return d_scale(D_.commutator(h(s, -k), xplus(s, -1)), frac(-k, Q(-2 * k)));
        }
        case '-': {
            if (s.star()) return d_scale(D_.minus(hall_basis(M.line_c(-t))), -qv_pow(q, 1));
            if (t == 0) return d_scale(D_.minus(hall_basis(M.simple(s.branch, s.j))), -qv_pow(q, 1));
            if (t == 1)
                return d_scale(D_.plus(eta_core_elem(M, s.branch, s.j), k_class(s)), qv_pow(q, 1 - s.j));
            if (t >= 2) {
                int k = t - 1;
                return d_scale(D_.commutator(h(s, k), xminus(s, 1)), frac(-k, Q(2 * k)));
            }
            int k = -t;
            return d_scale(D_.commutator(h(s, -k), xminus(s, 0)), frac(k, Q(-2 * k)));
        }
    }
    throw std::logic_error("Generators: unknown kind");
}

}  // namespace hallcoh
