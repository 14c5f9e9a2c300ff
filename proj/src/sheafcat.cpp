#include "hallcoh/sheafcat.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace hallcoh {

namespace {

mpz_class zpow(long b, long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(e));
    return r;
}

// all dimension vectors 0 <= d <= top
std::vector<std::vector<int>> dims_below(const std::vector<int>& top) {
    std::vector<std::vector<int>> out{{}};
    for (int t : top) {
        std::vector<std::vector<int>> nxt;
        for (auto& v : out)
            for (int k = 0; k <= t; ++k) {
                auto w = v;
                w.push_back(k);
                nxt.push_back(std::move(w));
            }
        out = std::move(nxt);
    }
    return out;
}

bool all_zero(const std::vector<int>& v) {
    return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
}

void add_to(std::map<SheafKey, QScalar>& acc, const SheafKey& k, const QScalar& c) {
    if (c.is_zero()) return;
    auto it = acc.find(k);
    if (it == acc.end()) acc.emplace(k, c);
    else {
        it->second += c;
        if (it->second.is_zero()) acc.erase(it);
    }
}

HallTerms to_terms(const std::map<SheafKey, QScalar>& acc) { return HallTerms(acc.begin(), acc.end()); }

int max_len(const TubeModule& M) {
    int r = 0;
    for (auto& s : M) r = std::max(r, s.len);
    return r;
}

}  // namespace

CohModel::CohModel(const WeightData& w, ModelOptions opt) : w_(w), R_(w), opt_(opt) {
    R_.section_cap = opt_.section_cap;
    if (opt_.rank2 && !is_p1())
        throw UnsupportedStratum("rank-two middle terms are only modelled exactly on the projective line");
}

bool CohModel::is_p1() const {
    for (int i = 0; i < w_.branches(); ++i)
        if (w_.weight(i) != 1) return false;
    return true;
}

const Tube& CohModel::tube(const ClosedPoint& x) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = tubes_.find(x);
        if (it != tubes_.end()) return *it->second;
    }
    std::unique_ptr<Tube> t;
    if (x.exceptional()) t = std::make_unique<Tube>(w_.weight(x.branch), w_.q(), 1);
    else t = std::make_unique<Tube>(1, w_.q(), x.residue_degree());
    t->enum_cap = opt_.enum_cap;
    std::lock_guard<std::mutex> lk(mu_);
    auto [it, ins] = tubes_.emplace(x, std::move(t));
    return *it->second;
}

SheafKey CohModel::line(const VecL& x) const {
    SheafKey k;
    k.lines.push_back(w_.normal_form(x.a, x.b));
    return k;
}

SheafKey CohModel::torsion(const ClosedPoint& x, const TubeModule& M) const {
    SheafKey k;
    if (!M.empty()) k.torsion[x] = tube(x).normalize(M);
    return k;
}

SheafKey CohModel::torsion(const TorsionObject& T) const {
    SheafKey k;
    for (auto& [x, M] : T)
        if (!M.empty()) k.torsion[x] = tube(x).normalize(M);
    return k;
}

SheafKey CohModel::simple(int branch, int j, int len) const {
    ClosedPoint x{branch, {}};
    return torsion(x, tube(x).segment(j, len));
}

SheafKey CohModel::direct_sum(const SheafKey& a, const SheafKey& b) const {
    SheafKey r = a;
    r.lines.insert(r.lines.end(), b.lines.begin(), b.lines.end());
    std::sort(r.lines.begin(), r.lines.end());
    for (auto& [x, M] : b.torsion) {
        auto it = r.torsion.find(x);
        if (it == r.torsion.end()) r.torsion[x] = M;
        else it->second = tube(x).direct_sum(it->second, M);
    }
    return r;
}

SheafKey CohModel::torsion_part(const SheafKey& a) const {
    SheafKey r;
    r.torsion = a.torsion;
    return r;
}

std::string CohModel::str(const SheafKey& a) const {
    if (a.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& L : a.lines) {
        if (!first) os << "+";
        first = false;
        os << "O(" << L.a;
        if (!is_p1()) {
            os << ";";
            for (size_t i = 0; i < L.b.size(); ++i) os << (i ? "," : "") << L.b[i];
        }
        os << ")";
    }
    for (auto& [x, M] : a.torsion) {
        if (!first) os << "+";
        first = false;
        os << R_.point_str(x) << ":" << tube(x).str(M);
    }
    return os.str();
}

Cls CohModel::local_class(const ClosedPoint& x, const std::vector<int>& dimvec) const {
    Cls c = w_.zero();
    if (x.exceptional()) {
        for (size_t s = 0; s < dimvec.size(); ++s)
            c = cls_add(c, cls_scale(w_.simple_class(x.branch, static_cast<int>(s)), dimvec[s]));
    } else {
        c = cls_scale(w_.delta(), dimvec[0] * x.residue_degree());
    }
    return c;
}

Cls CohModel::cls(const SheafKey& a) const {
    Cls c = w_.zero();
    for (auto& L : a.lines) c = cls_add(c, w_.class_of_line(L));
    for (auto& [x, M] : a.torsion) c = cls_add(c, local_class(x, tube(x).dimvec(M)));
    return c;
}

int CohModel::vertex_of(const ClosedPoint& x, const VecL& L) const {
    return x.exceptional() ? L.b[x.branch] : 0;
}

int CohModel::hom_line_torsion(const VecL& L, const TorsionObject& T) const {
    int d = 0;
    for (auto& [x, M] : T) d += tube(x).dimvec(M)[vertex_of(x, L)] * x.residue_degree();
    return d;
}

int CohModel::hom_dim(const SheafKey& a, const SheafKey& b) const {
    int d = 0;
    for (auto& L : a.lines) {
        for (auto& L2 : b.lines) d += R_.component_dim(w_.sub(L2, L));
        d += hom_line_torsion(L, b.torsion);
    }
    for (auto& [x, M] : a.torsion) {
        auto it = b.torsion.find(x);
        if (it != b.torsion.end()) d += tube(x).hom_dim(M, it->second) * x.residue_degree();
    }
    return d;
}

int CohModel::ext_dim(const SheafKey& a, const SheafKey& b) const {
    int e = hom_dim(a, b) - euler(a, b);
    if (e < 0)
        throw std::logic_error("ext_dim: negative value for (" + str(a) + ", " + str(b) + ")");
    return e;
}

mpz_class CohModel::aut_order(const SheafKey& a) const {
    mpz_class at = 1;
    for (auto& [x, M] : a.torsion) at *= tube(x).aut_order(M);
    const long q = w_.q();
    if (a.rank() == 0) return at;
    if (a.rank() == 1) return (q - 1) * zpow(q, hom_line_torsion(a.lines[0], a.torsion)) * at;
    if (a.rank() == 2 && a.torsion.empty() && is_p1()) {
        int c = a.lines[0].a, d = a.lines[1].a;
        if (c == d) return mpz_class((q * q - 1) * (q * q - q));
        return (q - 1) * (q - 1) * zpow(q, std::abs(d - c) + 1);
    }
    throw UnsupportedStratum("aut_order: " + str(a) + " is outside the modelled strata");
}

void CohModel::require_rank_le1(const SheafKey& a, const char* what) const {
    if (a.rank() > 1) throw UnsupportedStratum(std::string(what) + ": rank " + std::to_string(a.rank()) + " object " + str(a));
}

const std::map<DivisorProfile, long>& CohModel::section_divisors(const VecL& degree) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = div_memo_.find(degree);
        if (it != div_memo_.end()) return it->second;
    }
    std::map<DivisorProfile, long> out;
    R_.enumerate_sections(degree, [&](const Section& s) {
        if (s.is_zero()) return;
        out[R_.factor(s)] += 1;
    });
    std::lock_guard<std::mutex> lk(mu_);
    auto [it, ins] = div_memo_.emplace(degree, std::move(out));
    return it->second;
}

std::map<TorsionObject, long> CohModel::cokernel_counts(const VecL& source, const VecL& target) const {
    std::map<TorsionObject, long> out;
    VecL diff = w_.sub(target, source);
    if (R_.component_dim(diff) == 0) return out;
    for (auto& [D, n] : section_divisors(diff)) out[R_.divisor_torsion(target, D)] += n;
    return out;
}

int CohModel::minimal_jet_depth(int mult, const TubeModule& Tp) const {
    // the image of the jet contains everything of depth >= mult + (nilpotency of f), and a
    // segment of length len is annihilated by len arrows
    return mult + max_len(Tp) + 1;
}

TubeModule CohModel::jet_cokernel(const ClosedPoint& x, int top, int mult, const TubeModule& Tp,
                                  const std::vector<int>& f, int depth) const {
    const Tube& T = tube(x);
    const GF& F = T.field();
    const int m = T.m();
    if (depth < mult + 1) throw std::invalid_argument("jet_cokernel: depth must exceed the multiplicity");
    MatrixRep J = T.realize(T.segment(top, depth));
    MatrixRep P = T.realize(Tp);
    MatrixRep R;
    R.m = m;
    R.dims.resize(m);
    for (int s = 0; s < m; ++s) R.dims[s] = J.dims[s] + P.dims[s];
    R.arrow.resize(m);
    for (int s = 0; s < m; ++s) {
        int t = T.res(s - 1);
        Mat A(R.dims[t], R.dims[s]);
        for (int i = 0; i < J.dims[t]; ++i)
            for (int j = 0; j < J.dims[s]; ++j) A.at(i, j) = J.arrow[s].at(i, j);
        for (int i = 0; i < P.dims[t]; ++i)
            for (int j = 0; j < P.dims[s]; ++j) A.at(J.dims[t] + i, J.dims[s] + j) = P.arrow[s].at(i, j);
        R.arrow[s] = A;
    }
    int v = T.res(top - mult);
    if (static_cast<int>(f.size()) != P.dims[v]) throw std::invalid_argument("jet_cokernel: f has wrong length");
    std::vector<int> w(R.dims[v], 0);
    w[mult / m] = 1;  // e_mult: the basis vector of depth mult in the uniserial jet
    for (int i = 0; i < P.dims[v]; ++i) w[J.dims[v] + i] = f[i];
    std::vector<std::vector<std::vector<int>>> cols(m);
    int s = v;
    while (!all_zero(w)) {
        cols[s].push_back(w);
        const Mat& A = R.arrow[s];
        std::vector<int> nw(A.rows, 0);
        for (int i = 0; i < A.rows; ++i) {
            int acc = 0;
            for (int j = 0; j < A.cols; ++j) acc = F.add(acc, F.mul(A.at(i, j), w[j]));
            nw[i] = acc;
        }
        w = std::move(nw);
        s = T.res(s - 1);
    }
    SubSpace X(m);
    for (int t = 0; t < m; ++t) {
        X[t] = Mat(R.dims[t], static_cast<int>(cols[t].size()));
        for (size_t c = 0; c < cols[t].size(); ++c)
            for (int i = 0; i < R.dims[t]; ++i) X[t].at(i, static_cast<int>(c)) = cols[t][c][i];
    }
    return T.classify_quot(R, X);
}

long CohModel::jet_count(const ClosedPoint& x, int top, int mult, const TubeModule& Tp, const TubeModule& Tt,
                         int depth) const {
    const Tube& T = tube(x);
    top = T.res(top);
    if (depth == 0) depth = minimal_jet_depth(mult, Tp);
    auto key = std::make_tuple(x, top, mult, Tp, Tt, depth);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = jet_memo_.find(key);
        if (it != jet_memo_.end()) return it->second;
    }
    int v = T.res(top - mult);
    int dim = Tp.empty() ? 0 : T.dimvec(Tp)[v];
    long count = 0;
    if (mult == 0) {
        // the jet component is an isomorphism onto the line: cokernel is T' whatever f is
        if (T.normalize(Tp) == T.normalize(Tt)) {
            count = 1;
            for (int i = 0; i < dim; ++i) count *= T.field_size();
        }
    } else {
        std::vector<int> f(dim, 0);
        const int Q = T.field_size();
        while (true) {
            if (jet_cokernel(x, top, mult, Tp, f, depth) == Tt) ++count;
            int i = 0;
            for (; i < dim; ++i) {
                f[i] = (f[i] + 1) % Q;
                if (f[i]) break;
            }
            if (i == dim) break;
        }
    }
    std::lock_guard<std::mutex> lk(mu_);
    jet_memo_.emplace(key, count);
    return count;
}

SheafKey CohModel::cokernel(const VecL& source, const Section& s, const TorsionObject& Tq,
                            const std::map<ClosedPoint, std::vector<int>>& f, const Window& win) const {
    if (s.is_zero()) throw UnsupportedStratum("cokernel: zero line component leaves the modelled strata");
    VecL target = w_.add(source, s.degree);
    DivisorProfile D = R_.factor(s);
    std::set<ClosedPoint> pts;
    for (auto& [x, m] : D) pts.insert(x);
    for (auto& [x, M] : Tq) pts.insert(x);
    TorsionObject out;
    for (auto& x : pts) {
        int mult = D.count(x) ? D.at(x) : 0;
        TubeModule Tp = Tq.count(x) ? Tq.at(x) : TubeModule{};
        int depth = win.jet_depth ? std::max(win.jet_depth, mult + 1) : minimal_jet_depth(mult, Tp);
        int top = tube(x).res(vertex_of(x, target));
        TubeModule C;
        if (mult == 0) {
            C = Tp;
        } else {
            std::vector<int> fx;
            auto it = f.find(x);
            int v = tube(x).res(top - mult);
            int dim = Tp.empty() ? 0 : tube(x).dimvec(Tp)[v];
            if (it != f.end()) fx = it->second;
            fx.resize(dim, 0);
            C = jet_cokernel(x, top, mult, Tp, fx, depth);
        }
        if (!C.empty()) out[x] = C;
    }
    return torsion(out);
}

int CohModel::hom_line_torsion_jet(const VecL& L, const TorsionObject& Tq, int depth) const {
    int d = 0;
    for (auto& [x, M] : Tq) {
        const Tube& T = tube(x);
        int N = depth ? depth : T.length(M) + 1;
        d += T.hom_dim(T.segment(vertex_of(x, L), N), M) * x.residue_degree();
    }
    return d;
}

// ---------------------------------------------------------------------------------------------
// products

const HallTerms& CohModel::mul(const SheafKey& A, const SheafKey& B) const {
    auto key = std::make_pair(A, B);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = mul_memo_.find(key);
        if (it != mul_memo_.end()) return it->second;
    }
    HallTerms r = compute_mul(A, B);
    std::lock_guard<std::mutex> lk(mu_);
    auto [it, ins] = mul_memo_.emplace(std::move(key), std::move(r));
    return it->second;
}

HallTerms CohModel::compute_mul(const SheafKey& A, const SheafKey& B) const {
    if (A.is_zero()) return {{B, QScalar(1)}};
    if (B.is_zero()) return {{A, QScalar(1)}};
    const int ra = A.rank(), rb = B.rank();
    if (ra == 0 && rb == 0) return mul_torsion(A.torsion, B.torsion);
    if (ra == 1 && rb == 0) return mul_line_torsion(A.lines[0], A.torsion, B.torsion);
    if (ra == 0 && rb == 1) {
        // u_T (u_L u_TB) v^{-<L,TB>}
        const VecL& L = B.lines[0];
        QScalar pre = vpow(-hom_line_torsion(L, B.torsion));
        std::map<SheafKey, QScalar> acc;
        for (auto& [E, c] : mul_torsion_line(A.torsion, L))
            for (auto& [C, c2] : mul(E, torsion(B.torsion))) add_to(acc, C, pre * c * c2);
        return to_terms(acc);
    }
    if (ra == 1 && rb == 1) {
        if (!A.torsion.empty() || !B.torsion.empty())
            throw UnsupportedStratum("product " + str(A) + " * " + str(B) + " needs rank-two bundles with torsion");
        if (!opt_.rank2)
            throw UnsupportedStratum("product " + str(A) + " * " + str(B) +
                                     " needs rank-two middle terms (disabled on this configuration)");
        return mul_lines_p1(A.lines[0], B.lines[0]);
    }
    throw UnsupportedStratum("product " + str(A) + " * " + str(B) + " involves rank >= 2 factors");
}

HallTerms CohModel::mul_torsion(const TorsionObject& A, const TorsionObject& B) const {
    std::set<ClosedPoint> pts;
    for (auto& [x, M] : A) pts.insert(x);
    for (auto& [x, M] : B) pts.insert(x);
    std::vector<std::pair<ClosedPoint, std::vector<std::pair<TubeModule, QScalar>>>> local;
    for (auto& x : pts) {
        auto ia = A.find(x);
        auto ib = B.find(x);
        if (ia != A.end() && ib != B.end()) local.push_back({x, tube(x).mul(ia->second, ib->second)});
        else local.push_back({x, {{ia != A.end() ? ia->second : ib->second, QScalar(1)}}});
    }
    HallTerms out;
    TorsionObject cur;
    std::function<void(size_t, QScalar)> rec = [&](size_t i, QScalar c) {
        if (i == local.size()) {
            SheafKey k;
            k.torsion = cur;
            out.push_back({k, c});
            return;
        }
        for (auto& [M, cm] : local[i].second) {
            cur[local[i].first] = M;
            rec(i + 1, c * cm);
        }
        cur.erase(local[i].first);
    };
    rec(0, QScalar(1));
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return out;
}

HallTerms CohModel::mul_line_torsion(const VecL& L, const TorsionObject& TA, const TorsionObject& TB) const {
    QScalar pre = vpow(-hom_line_torsion(L, TA));
    std::map<SheafKey, QScalar> acc;
    for (auto& [C, c] : mul_torsion(TA, TB)) {
        SheafKey k = C;
        k.lines = {L};
        add_to(acc, k, pre * c * vpow(hom_line_torsion(L, C.torsion)));
    }
    return to_terms(acc);
}

HallTerms CohModel::mul_torsion_line(const TorsionObject& T, const VecL& L) const {
    // u_T u_L = v^<T,L> sum_E g^E_{T,L} u_E with E = L' + T', T' < T; g counts pairs (s, f)
    // with s: L -> L' nonzero and coker(s, f) ~ T, divided by |Aut L| = q - 1.
    SheafKey TK = torsion(T);
    SheafKey LK = line(L);
    QScalar pre = vpow(euler(TK, LK));
    std::vector<ClosedPoint> pts;
    std::vector<std::vector<TubeModule>> cands;
    for (auto& [x, M] : T) {
        pts.push_back(x);
        std::vector<TubeModule> cs;
        for (auto& d : dims_below(tube(x).dimvec(M))) {
            if (all_zero(d)) cs.push_back({});
            else
                for (auto& N : tube(x).modules_of_dim(d)) cs.push_back(N);
        }
        cands.push_back(std::move(cs));
    }
    Cls base = cls_add(cls(LK), cls(TK));
    std::map<SheafKey, QScalar> acc;
    TorsionObject Tp;
    const long q = w_.q();
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i < pts.size()) {
            for (auto& N : cands[i]) {
                if (N.empty()) Tp.erase(pts[i]);
                else Tp[pts[i]] = N;
                rec(i + 1);
            }
            Tp.erase(pts[i]);
            return;
        }
        Cls cl = cls_sub(base, torsion_class(w_, Tp));
        VecL Lp;
        if (!w_.line_of_class(cl, Lp)) return;
        VecL diff = w_.sub(Lp, L);
        if (R_.component_dim(diff) == 0) return;
        mpz_class total = 0;
        for (auto& [D, n] : section_divisors(diff)) {
            std::set<ClosedPoint> sup;
            for (auto& [x, m] : D) sup.insert(x);
            for (auto& x : pts) sup.insert(x);
            mpz_class prod = n;
            for (auto& x : sup) {
                int mult = D.count(x) ? D.at(x) : 0;
                TubeModule tp = Tp.count(x) ? Tp.at(x) : TubeModule{};
                TubeModule tt = T.count(x) ? T.at(x) : TubeModule{};
                long c = jet_count(x, vertex_of(x, Lp), mult, tp, tt);
                if (c == 0) {
                    prod = 0;
                    break;
                }
                prod *= c;
            }
            total += prod;
        }
        if (total == 0) return;
        if (total % (q - 1) != 0) throw std::logic_error("mul_torsion_line: count not divisible by q-1");
        SheafKey E = torsion(Tp);
        E.lines = {Lp};
        add_to(acc, E, pre * QScalar::rational(mpq_class(mpz_class(total / (q - 1))), w_.q()));
    };
    rec(0);
    return to_terms(acc);
}

namespace {

// binary forms of formal degree e (coefficients of X^{e-k} Y^k) have a common zero on P^1
bool forms_coprime(const Poly& f, int e1, const Poly& g, int e2, int p) {
    Poly a = poly_trim(f), b = poly_trim(g);
    if (a.empty() && b.empty()) return false;
    if (a.empty()) return e2 == 0;
    if (b.empty()) return e1 == 0;
    if (poly_deg(a) < e1 && poly_deg(b) < e2) return false;  // both vanish at X = 0
    return poly_deg(poly_gcd(a, b, p)) <= 0;
}

void for_each_form(int dim, int p, const std::function<void(const Poly&)>& fn) {
    Poly f(std::max(dim, 0), 0);
    while (true) {
        fn(f);
        int i = 0;
        for (; i < dim; ++i) {
            f[i] = (f[i] + 1) % p;
            if (f[i]) break;
        }
        if (i >= dim) return;
    }
}

}  // namespace

HallTerms CohModel::mul_lines_p1(const VecL& L1, const VecL& L2) const {
    // quotient O(a1), subobject O(a2): E = O(c) + O(d), c <= d, c + d = a1 + a2; subobjects are
    // images of coprime pairs (s1, s2) of degrees (c - a2, d - a2) modulo scalars.
    const int a1 = L1.a, a2 = L2.a, p = w_.q();
    QScalar pre = vpow(euler(line(L1), line(L2)));
    std::map<SheafKey, QScalar> acc;
    for (int c = std::min(a1, a2); 2 * c <= a1 + a2; ++c) {
        int d = a1 + a2 - c;
        int e1 = c - a2, e2 = d - a2;
        int n1 = std::max(0, e1 + 1), n2 = std::max(0, e2 + 1);
        if (n1 + n2 > opt_.section_cap + 2)
            throw ResourceError("mul_lines_p1: section pairs of dimension " + std::to_string(n1 + n2));
        long count = 0;
        for_each_form(n1, p, [&](const Poly& s1) {
            for_each_form(n2, p, [&](const Poly& s2) {
                if (forms_coprime(s1, e1, s2, e2, p)) ++count;
            });
        });
        if (count == 0) continue;
        if (count % (p - 1) != 0) throw std::logic_error("mul_lines_p1: count not divisible by q-1");
        SheafKey E;
        E.lines = {w_.c_multiple(c), w_.c_multiple(d)};
        add_to(acc, E, pre * QScalar(count / (p - 1)));
    }
    return to_terms(acc);
}

mpq_class CohModel::hall_number(const SheafKey& C, const SheafKey& A, const SheafKey& B) const {
    for (auto& [K, c] : mul(A, B))
        if (K == C) {
            QScalar g = c / vpow(euler(A, B));
            if (!g.is_rational()) throw std::logic_error("hall_number: irrational Hall number");
            return g.a();
        }
    return 0;
}

// ---------------------------------------------------------------------------------------------
// coproduct components

std::vector<Cls> CohModel::torsion_sub_classes(const SheafKey& F) const {
    std::set<Cls> out;
    std::vector<std::vector<Cls>> local;
    for (auto& [x, M] : F.torsion) {
        std::vector<Cls> cs;
        for (auto& d : dims_below(tube(x).dimvec(M))) cs.push_back(local_class(x, d));
        local.push_back(std::move(cs));
    }
    std::function<void(size_t, Cls)> rec = [&](size_t i, Cls c) {
        if (i == local.size()) {
            out.insert(c);
            return;
        }
        for (auto& d : local[i]) rec(i + 1, cls_add(c, d));
    };
    rec(0, w_.zero());
    return std::vector<Cls>(out.begin(), out.end());
}

const DeltaTerms& CohModel::delta(const SheafKey& G, const Cls& alpha, const Cls& beta) const {
    auto key = std::make_tuple(G, alpha, beta);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = delta_memo_.find(key);
        if (it != delta_memo_.end()) return it->second;
    }
    DeltaTerms r = compute_delta(G, alpha, beta);
    std::lock_guard<std::mutex> lk(mu_);
    auto [it, ins] = delta_memo_.emplace(std::move(key), std::move(r));
    return it->second;
}

DeltaTerms CohModel::delta_matching(const SheafKey& G, const Cls& alpha, const Cls& beta, const KeyFilter* quot_only,
                                    const KeyFilter* sub_only) const {
    auto keep = [&](const SheafKey& A, const SheafKey& B) {
        return (!quot_only || quot_only->count(A)) && (!sub_only || sub_only->count(B));
    };
    DeltaTerms out;
    bool memo_hit = false;
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = delta_memo_.find(std::make_tuple(G, alpha, beta));
        if (it != delta_memo_.end()) {
            memo_hit = true;
            for (auto& t : it->second)
                if (keep(std::get<0>(t), std::get<1>(t))) out.push_back(t);
        }
    }
    if (memo_hit) return out;
    if (G.rank() == 0) {
        if (cls_add(alpha, beta) != cls(G)) return out;
        return delta_torsion(G.torsion, alpha, beta, quot_only, sub_only);
    }
    for (auto& t : delta(G, alpha, beta))
        if (keep(std::get<0>(t), std::get<1>(t))) out.push_back(t);
    return out;
}

DeltaTerms CohModel::delta_torsion(const TorsionObject& T, const Cls& alpha, const Cls& beta, const KeyFilter* quot_only,
                                   const KeyFilter* sub_only) const {
    DeltaTerms out;
    if (cls_add(alpha, beta) != torsion_class(w_, T)) return out;
    std::vector<ClosedPoint> pts;
    std::vector<std::vector<int>> full;
    for (auto& [x, M] : T) {
        pts.push_back(x);
        full.push_back(tube(x).dimvec(M));
    }
    // pointwise projections of the filters
    auto project = [&](const KeyFilter* f) {
        std::vector<Tube::ModuleFilter> r(pts.size());
        if (!f) return r;
        for (auto& K : *f) {
            if (!K.is_torsion()) continue;
            for (size_t j = 0; j < pts.size(); ++j) {
                auto it = K.torsion.find(pts[j]);
                r[j].insert(it == K.torsion.end() ? TubeModule{} : it->second);
            }
        }
        return r;
    };
    auto qf = project(quot_only), sf = project(sub_only);
    std::vector<std::vector<int>> pick(pts.size());
    std::function<void(size_t, Cls)> rec = [&](size_t i, Cls c) {
        if (i < pts.size()) {
            for (auto& d : dims_below(full[i])) {
                pick[i] = d;
                rec(i + 1, cls_add(c, local_class(pts[i], d)));
            }
            return;
        }
        if (c != beta) return;
        std::vector<std::vector<std::tuple<TubeModule, TubeModule, QScalar>>> local;
        for (size_t j = 0; j < pts.size(); ++j) {
            std::vector<int> a(full[j].size());
            for (size_t s = 0; s < a.size(); ++s) a[s] = full[j][s] - pick[j][s];
            local.push_back(tube(pts[j]).delta(T.at(pts[j]), a, pick[j], quot_only ? &qf[j] : nullptr,
                                               sub_only ? &sf[j] : nullptr));
            if (local.back().empty()) return;
        }
        TorsionObject qa, sb;
        std::function<void(size_t, QScalar)> comb = [&](size_t j, QScalar coef) {
            if (j == local.size()) {
                SheafKey A = torsion(qa), B = torsion(sb);
                if ((!quot_only || quot_only->count(A)) && (!sub_only || sub_only->count(B)))
                    out.push_back({std::move(A), std::move(B), coef});
                return;
            }
            for (auto& [A, B, cc] : local[j]) {
                qa[pts[j]] = A;
                sb[pts[j]] = B;
                comb(j + 1, coef * cc);
            }
            qa.erase(pts[j]);
            sb.erase(pts[j]);
        };
        comb(0, QScalar(1));
    };
    rec(0, w_.zero());
    return out;
}

DeltaTerms CohModel::delta_line(const VecL& L, const Cls& alpha, const Cls& beta) const {
    DeltaTerms out;
    SheafKey LK = line(L);
    Cls cL = cls(LK);
    if (cls_add(alpha, beta) != cL) return out;
    if (cls_is_zero(beta)) return {{LK, SheafKey{}, QScalar(1)}};
    if (cls_is_zero(alpha)) return {{SheafKey{}, LK, QScalar(1)}};
    VecL Lp;
    if (!w_.line_of_class(beta, Lp)) return out;
    const long q = w_.q();
    SheafKey LpK = line(Lp);
    for (auto& [Tq, n] : cokernel_counts(Lp, L)) {
        SheafKey TK = torsion(Tq);
        mpz_class num = aut_order(TK) * n;
        QScalar c = vpow(euler(TK, LpK)) * QScalar::rational(mpq_class(num, q - 1), w_.q());
        out.push_back({TK, LpK, c});
    }
    return out;
}

DeltaTerms CohModel::compute_delta(const SheafKey& G, const Cls& alpha, const Cls& beta) const {
    if (cls_add(alpha, beta) != cls(G)) return {};
    if (G.rank() == 0) return delta_torsion(G.torsion, alpha, beta);
    if (G.rank() > 1) throw UnsupportedStratum("coproduct of the rank-two object " + str(G));
    const VecL& L = G.lines[0];
    if (G.torsion.empty()) return delta_line(L, alpha, beta);
    // Delta(u_{L+T}) = v^{-<L,T>} Delta(u_L) Delta(u_T),
    // (u_a1 K_b1 (x) u_b1)(u_a2 K_b2 (x) u_b2) = v^{(b1,a2)} u_a1 u_a2 K_{b1+b2} (x) u_b1 u_b2
    SheafKey TK = torsion_part(G);
    SheafKey LK = line(L);
    Cls cT = cls(TK), cL = cls(LK);
    QScalar pre = vpow(-euler(LK, TK));
    std::map<std::pair<SheafKey, SheafKey>, QScalar> acc;
    for (auto& b2 : torsion_sub_classes(TK)) {
        Cls a2 = cls_sub(cT, b2);
        Cls b1 = cls_sub(beta, b2);
        Cls a1 = cls_sub(cL, b1);
        const DeltaTerms& DL = delta(LK, a1, b1);
        if (DL.empty()) continue;
        const DeltaTerms& DT = delta(TK, a2, b2);
        if (DT.empty()) continue;
        QScalar tw = pre * vpow(w_.sym(b1, a2));
        for (auto& [A1, B1, c1] : DL)
            for (auto& [A2, B2, c2] : DT) {
                const HallTerms& PA = mul(A1, A2);
                const HallTerms& PB = mul(B1, B2);
                for (auto& [A, ca] : PA)
                    for (auto& [B, cb] : PB) {
                        QScalar c = tw * c1 * c2 * ca * cb;
                        auto k = std::make_pair(A, B);
                        auto it = acc.find(k);
                        if (it == acc.end()) acc.emplace(k, c);
                        else it->second += c;
                    }
            }
    }
    DeltaTerms out;
    for (auto& [k, c] : acc)
        if (!c.is_zero()) out.push_back({k.first, k.second, c});
    return out;
}

// ---------------------------------------------------------------------------------------------
// projective line, rank two

std::vector<int> CohModel::p1_hom_profile(const VecL& quot, const VecL& sub, const std::vector<int>& xi,
                                           const Window& win) const {
    if (!is_p1()) throw UnsupportedStratum("p1_hom_profile: not the projective line");
    const int a = sub.a, b = quot.a, p = w_.q();
    GFPtr F = GF::get(p, 1);
    std::vector<int> prof;
    for (int n = win.lo; n <= win.hi; ++n) {
        int hs = std::max(0, b + n + 1);      // H^0(O(b+n)) basis z^i
        int hr = std::max(0, -a - n - 1);     // H^0(O(-a-n-2)) basis z^j
        Mat M(hs, hr);
        for (int i = 0; i < hs; ++i)
            for (int j = 0; j < hr; ++j) {
                size_t k = static_cast<size_t>(i + j);
                M.at(i, j) = k < xi.size() ? xi[k] : 0;
            }
        int rk = (hs && hr) ? rank(*F, M) : 0;
        prof.push_back(std::max(0, a + n + 1) + hs - rk);
    }
    return prof;
}

SheafKey CohModel::p1_extension_key(const VecL& quot, const VecL& sub, const std::vector<int>& xi,
                                    const Window& win) const {
    auto prof = p1_hom_profile(quot, sub, xi, win);
    const int sum = quot.a + sub.a;
    // h^0(E(n)) > 0 first at n = -d
    int d = 0;
    bool found = false;
    for (int n = win.lo; n <= win.hi; ++n)
        if (prof[n - win.lo] > 0) {
            d = -n;
            found = true;
            break;
        }
    if (!found || prof[0] != 0) throw ResourceError("p1_extension_key: window too small to decode the splitting");
    int c = sum - d;
    for (int n = win.lo; n <= win.hi; ++n) {
        int expect = std::max(0, c + n + 1) + std::max(0, d + n + 1);
        if (prof[n - win.lo] != expect)
            throw std::logic_error("p1_extension_key: profile is not that of a split bundle");
    }
    SheafKey E;
    E.lines = {w_.c_multiple(std::min(c, d)), w_.c_multiple(std::max(c, d))};
    return E;
}

std::map<SheafKey, mpz_class> CohModel::ext_middle_terms_p1(const VecL& quot, const VecL& sub,
                                                            const Window& win) const {
    const int dim = std::max(0, quot.a - sub.a - 1);  // H^1(O(sub - quot)) = H^0(O(quot - sub - 2))^*
    std::map<SheafKey, mpz_class> out;
    for_each_form(dim, w_.q(), [&](const Poly& xi) { out[p1_extension_key(quot, sub, xi, win)] += 1; });
    return out;
}

}  // namespace hallcoh
