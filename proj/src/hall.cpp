#include "hallcoh/hall.hpp"

#include <sstream>

namespace hallcoh {

void hall_add_term(HallElement& x, const SheafKey& k, const QScalar& c) {
    if (c.is_zero()) return;
    auto it = x.find(k);
    if (it == x.end()) {
        x.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) x.erase(it);
}

HallElement hall_basis(const SheafKey& k) { return {{k, QScalar(1)}}; }

HallElement hall_add(const HallElement& x, const HallElement& y) {
    HallElement r = x;
    for (auto& [k, c] : y) hall_add_term(r, k, c);
    return r;
}

HallElement hall_sub(const HallElement& x, const HallElement& y) {
    HallElement r = x;
    for (auto& [k, c] : y) hall_add_term(r, k, -c);
    return r;
}

HallElement hall_scale(const HallElement& x, const QScalar& c) {
    HallElement r;
    if (c.is_zero()) return r;
    for (auto& [k, a] : x) r.emplace(k, a * c);
    return r;
}

HallElement hall_mul(const CohModel& M, const HallElement& x, const HallElement& y) {
    HallElement r;
    for (auto& [a, ca] : x)
        for (auto& [b, cb] : y) {
            QScalar c = ca * cb;
            for (auto& [k, ck] : M.mul(a, b)) hall_add_term(r, k, c * ck);
        }
    return r;
}

HallElement hall_commutator(const CohModel& M, const HallElement& x, const HallElement& y) {
    return hall_sub(hall_mul(M, x, y), hall_mul(M, y, x));
}

bool hall_is_zero(const HallElement& x) { return x.empty(); }

std::string hall_str(const CohModel& M, const HallElement& x) {
    if (x.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [k, c] : x) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")*u[" << M.str(k) << "]";
    }
    return os.str();
}

bool hall_homogeneous(const CohModel& M, const HallElement& x, const Cls& c) {
    for (auto& [k, a] : x)
        if (M.cls(k) != c) return false;
    return true;
}

HallElement theta(const CohModel& M, const ClosedPoint& x, const TubeElement& t) {
    HallElement r;
    for (auto& [N, c] : t) hall_add_term(r, M.torsion(x, N), c);
    return r;
}

HallElement build_Tr(const CohModel& M, int r) {
    if (r < 1) throw std::invalid_argument("build_Tr: r must be positive");
    HallElement out;
    const int q = M.q();
    Tube C1(1, q, 1);
    TubeElement hr = h_bold(C1, r);
    for (auto& x : M.ring().closed_points(r)) {
        if (x.exceptional()) {
            out = hall_add(out, theta(M, x, psi_embed(hr, M.tube(x))));
        } else {
            int d = x.residue_degree();
            if (r % d) continue;
            // h_bold over F_{q^d} carries [r/d]_{v^d} / (r/d); the point contributes d [r]/r times the
            // partition sum, so rescale by [r] / [r/d]_{v^d}
            int k = r / d;
            QScalar c = quantum_integer(q, r) / quantum_integer_d(q, d, k);
            out = hall_add(out, hall_scale(theta(M, x, h_bold(M.tube(x), k)), c));
        }
    }
    return out;
}

HallElement pi_elem(const CohModel& M, int branch, int l, int r) {
    ClosedPoint x{branch, {}};
    return theta(M, x, pi_lr(M.tube(x), l, r));
}

HallElement h_tube_elem(const CohModel& M, int branch, int j, int r) {
    ClosedPoint x{branch, {}};
    return theta(M, x, h_tube(M.tube(x), j, r));
}

HallElement eta_core_elem(const CohModel& M, int branch, int j) {
    ClosedPoint x{branch, {}};
    return theta(M, x, eta_core(M.tube(x), j));
}

}  // namespace hallcoh
