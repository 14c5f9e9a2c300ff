#include "hallcoh/gring.hpp"

#include <mutex>
#include <sstream>

namespace hallcoh {

namespace {
int md(long x, int p) { return static_cast<int>(((x % p) + p) % p); }
int inv_mod(int x, int p) {
    for (int y = 1; y < p; ++y)
        if ((x * y) % p == 1) return y;
    throw std::domain_error("inv_mod: not invertible");
}
}  // namespace

Poly poly_trim(Poly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

int poly_deg(const Poly& f) { return static_cast<int>(poly_trim(f).size()) - 1; }

Poly poly_mul(const Poly& f, const Poly& g, int p) {
    if (f.empty() || g.empty()) return {};
    Poly r(f.size() + g.size() - 1, 0);
    for (size_t i = 0; i < f.size(); ++i)
        if (f[i])
            for (size_t j = 0; j < g.size(); ++j) r[i + j] = (r[i + j] + f[i] * g[j]) % p;
    return poly_trim(r);
}

Poly poly_add(const Poly& f, const Poly& g, int p) {
    Poly r(std::max(f.size(), g.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) r[i] = md((i < f.size() ? f[i] : 0) + (i < g.size() ? g[i] : 0), p);
    return poly_trim(r);
}

void poly_divmod(const Poly& f0, const Poly& g0, int p, Poly& quo, Poly& rem) {
    Poly f = poly_trim(f0), g = poly_trim(g0);
    if (g.empty()) throw std::domain_error("poly_divmod: division by zero");
    int dg = static_cast<int>(g.size()) - 1;
    int lead_inv = inv_mod(g.back(), p);
    quo.assign(f.size() >= g.size() ? f.size() - g.size() + 1 : 0, 0);
    while (!f.empty() && static_cast<int>(f.size()) - 1 >= dg) {
        int shift = static_cast<int>(f.size()) - 1 - dg;
        int c = (f.back() * lead_inv) % p;
        quo[shift] = c;
        for (int i = 0; i <= dg; ++i) f[shift + i] = md(f[shift + i] - c * g[i], p);
        f = poly_trim(f);
    }
    quo = poly_trim(quo);
    rem = f;
}

Poly poly_monic(const Poly& f0, int p) {
    Poly f = poly_trim(f0);
    if (f.empty()) return f;
    int c = inv_mod(f.back(), p);
    for (auto& x : f) x = (x * c) % p;
    return f;
}

Poly poly_gcd(Poly f, Poly g, int p) {
    f = poly_trim(f);
    g = poly_trim(g);
    while (!g.empty()) {
        Poly q, r;
        poly_divmod(f, g, p, q, r);
        f = g;
        g = r;
    }
    return poly_monic(f, p);
}

const std::vector<Poly>& irreducibles(int p, int d) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::vector<Poly>> cache;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find({p, d});
        if (it != cache.end()) return it->second;
    }
    std::vector<std::vector<Poly>> lower;
    for (int e = 1; 2 * e <= d; ++e) lower.push_back(irreducibles(p, e));
    std::vector<Poly> out;
    long total = 1;
    for (int i = 0; i < d; ++i) total *= p;
    for (long code = 0; code < total; ++code) {
        Poly f(d + 1, 0);
        f[d] = 1;
        long c = code;
        for (int i = 0; i < d; ++i) {
            f[i] = static_cast<int>(c % p);
            c /= p;
        }
        bool irr = true;
        for (auto& group : lower)
            for (auto& g : group) {
                Poly qq, r;
                poly_divmod(f, g, p, qq, r);
                if (r.empty()) {
                    irr = false;
                    break;
                }
            }
        if (irr) out.push_back(f);
    }
    std::lock_guard<std::mutex> lk(mu);
    auto [it, ins] = cache.emplace(std::make_pair(p, d), std::move(out));
    return it->second;
}

long necklace_count(int p, int d) {
    auto mobius = [](int n) {
        int r = 1;
        for (int k = 2; k * k <= n; ++k)
            if (n % k == 0) {
                n /= k;
                if (n % k == 0) return 0;
                r = -r;
            }
        if (n > 1) r = -r;
        return r;
    };
    long s = 0;
    for (int e = 1; e <= d; ++e)
        if (d % e == 0) {
            long pw = 1;
            for (int i = 0; i < d / e; ++i) pw *= p;
            s += mobius(e) * pw;
        }
    return s / d;
}

Cls torsion_class(const WeightData& w, const TorsionObject& T) {
    Cls c = w.zero();
    for (auto& [x, M] : T)
        for (auto& seg : M) {
            if (x.exceptional()) {
                for (int k = 0; k < seg.len; ++k) c = cls_add(c, w.simple_class(x.branch, seg.top - k));
            } else {
                c = cls_add(c, cls_scale(w.delta(), x.residue_degree() * seg.len));
            }
        }
    return c;
}

bool Section::is_zero() const {
    for (int c : coeffs)
        if (c) return false;
    return true;
}

GRing::GRing(const WeightData& w) : w_(w), p_(w.q()) {
    if (w.q() != 2 && w.q() != 3 && w.q() != 5 && w.q() != 7)
        throw std::invalid_argument("GRing: q must be a prime in {2,3,5,7}");
}

NormalMonomial GRing::monomial(const VecL& x, int k) const {
    NormalMonomial m;
    m.e1 = x.b[0] + w_.weight(0) * (x.a - k);
    m.e2 = x.b[1] + w_.weight(1) * k;
    for (int s = 2; s < w_.branches(); ++s) m.bs.push_back(x.b[s]);
    return m;
}

std::vector<NormalMonomial> GRing::component_basis(const VecL& x) const {
    std::vector<NormalMonomial> out;
    for (int k = 0; k < component_dim(x); ++k) out.push_back(monomial(x, k));
    return out;
}

Section GRing::monomial_section(const NormalMonomial& m) const {
    std::vector<int> b(w_.branches(), 0);
    b[0] = m.e1;
    b[1] = m.e2;
    for (size_t s = 0; s < m.bs.size(); ++s) b[s + 2] = m.bs[s];
    Section r;
    r.degree = w_.normal_form(0, b);
    r.coeffs.assign(r.degree.a + 1, 0);
    // k = number of Y factors = e2 div p2
    r.coeffs[m.e2 / w_.weight(1)] = 1;
    return r;
}

Section GRing::one() const {
    Section r;
    r.degree = w_.c_multiple(0);
    r.coeffs = {1};
    return r;
}

Section GRing::x_section(int i) const {
    Section r;
    r.degree = w_.x_vec(i);
    r.coeffs.assign(r.degree.a + 1, 0);
    if (r.degree.a == 0) r.coeffs[0] = 1;
    else if (i == 0) r.coeffs[0] = 1;  // x_1 = X when p_1 = 1
    else if (i == 1) r.coeffs[1] = 1;  // x_2 = Y when p_2 = 1
    else {
        // weight-1 marked point s >= 3: x_s = Y - lambda_s X
        r.coeffs[0] = md(-w_.lambda(i), p_);
        r.coeffs[1] = 1;
    }
    return r;
}

Section GRing::multiply(const Section& s, const Section& t) const {
    const int nb = w_.branches();
    // binary forms as (formal degree, polynomial in z)
    Poly f = poly_mul(poly_trim(s.coeffs), poly_trim(t.coeffs), p_);
    int a = s.degree.a + t.degree.a;
    std::vector<int> b(nb, 0);
    for (int i = 0; i < nb; ++i) {
        int e = s.degree.b[i] + t.degree.b[i];
        int p = w_.weight(i);
        if (e >= p) {
            e -= p;
            a += 1;
            if (i == 0) {
            } else if (i == 1) {
                f = poly_mul(f, {0, 1}, p_);
            } else {
                f = poly_mul(f, {md(-w_.lambda(i), p_), 1}, p_);
            }
        }
        b[i] = e;
    }
    Section r;
    r.degree = VecL{a, b};
    r.coeffs.assign(a + 1, 0);
    for (size_t k = 0; k < f.size(); ++k) r.coeffs[k] = f[k];
    return r;
}

DivisorProfile GRing::factor(const Section& s) const {
    if (s.is_zero()) throw std::domain_error("factor: zero section");
    DivisorProfile D;
    Poly f = poly_trim(s.coeffs);
    const int nb = w_.branches();
    int m0 = s.degree.b[0] + w_.weight(0) * (s.degree.a - poly_deg(f));
    if (m0) D[ClosedPoint{0, {}}] = m0;
    auto strip = [&](const Poly& lin) {
        int k = 0;
        while (true) {
            Poly qq, r;
            poly_divmod(f, lin, p_, qq, r);
            if (!r.empty()) break;
            f = qq;
            ++k;
        }
        return k;
    };
    int m1 = s.degree.b[1] + w_.weight(1) * strip({0, 1});
    if (m1) D[ClosedPoint{1, {}}] = m1;
    for (int i = 2; i < nb; ++i) {
        int m = s.degree.b[i] + w_.weight(i) * strip({md(-w_.lambda(i), p_), 1});
        if (m) D[ClosedPoint{i, {}}] = m;
    }
    for (int d = 1; poly_deg(f) >= 1; ++d) {
        for (auto& g : irreducibles(p_, d)) {
            if (poly_deg(f) < d) break;
            int k = strip(g);
            if (k) D[ClosedPoint{-1, g}] = k;
        }
    }
    return D;
}

TorsionObject GRing::divisor_torsion(const VecL& target, const DivisorProfile& D) const {
    TorsionObject T;
    for (auto& [x, m] : D) {
        if (m <= 0) continue;
        if (x.exceptional()) {
            int p = w_.weight(x.branch);
            T[x] = TubeModule{Segment{md(target.b[x.branch], p), m}};
        } else {
            T[x] = TubeModule{Segment{0, m}};
        }
    }
    return T;
}

TorsionObject GRing::cokernel_type(const VecL& source, const Section& s) const {
    if (s.is_zero()) throw std::domain_error("cokernel_type: zero section");
    return divisor_torsion(w_.add(source, s.degree), factor(s));
}

void GRing::enumerate_sections(const VecL& x, const std::function<void(const Section&)>& fn) const {
    int dim = component_dim(x);
    if (dim > section_cap)
        throw ResourceError("enumerate_sections: component dimension " + std::to_string(dim) + " exceeds cap");
    Section s;
    s.degree = x;
    s.coeffs.assign(dim, 0);
    while (true) {
        fn(s);
        int i = 0;
        for (; i < dim; ++i) {
            s.coeffs[i] = (s.coeffs[i] + 1) % p_;
            if (s.coeffs[i] != 0) break;
        }
        if (i == dim) return;
    }
}

std::vector<ClosedPoint> GRing::closed_points(int max_degree) const {
    std::vector<ClosedPoint> out;
    for (int i = 0; i < w_.branches(); ++i) out.push_back(ClosedPoint{i, {}});
    for (int d = 1; d <= max_degree; ++d)
        for (auto& g : irreducibles(p_, d)) {
            if (d == 1) {
                int root = md(-g[0], p_);
                bool marked = false;
                for (int i = 1; i < w_.branches(); ++i)
                    if (w_.lambda(i) == root) marked = true;
                if (marked) continue;
            }
            out.push_back(ClosedPoint{-1, g});
        }
    return out;
}

std::string GRing::point_str(const ClosedPoint& x) const {
    std::ostringstream os;
    if (x.exceptional()) {
        os << "l" << (x.branch + 1);
        return os.str();
    }
    os << "[";
    bool first = true;
    for (int k = static_cast<int>(x.poly.size()) - 1; k >= 0; --k) {
        if (!x.poly[k]) continue;
        if (!first) os << "+";
        first = false;
        if (k == 0 || x.poly[k] != 1) os << x.poly[k];
        if (k >= 1) os << "z";
        if (k >= 2) os << "^" << k;
    }
    os << "]";
    return os.str();
}

}  // namespace hallcoh
