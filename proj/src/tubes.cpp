#include "hallcoh/tubes.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <tuple>
#include <sstream>

namespace hallcoh {

TubeModule partition_module(const Partition& mu) {
    TubeModule M;
    for (int p : mu)
        if (p > 0) M.push_back(Segment{0, p});
    std::sort(M.begin(), M.end());
    return M;
}

Partition module_partition(const TubeModule& M) {
    Partition mu;
    for (const auto& s : M) mu.push_back(s.len);
    std::sort(mu.rbegin(), mu.rend());
    return mu;
}

std::vector<Partition> partitions_of(int n) {
    std::vector<Partition> out;
    Partition cur;
    std::function<void(int, int)> rec = [&](int rest, int maxp) {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = std::min(rest, maxp); p >= 1; --p) {
            cur.push_back(p);
            rec(rest - p, p);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

Tube::Tube(int m, int q, int d) : m_(m), q_(q), d_(d) {
    if (m < 1) throw std::invalid_argument("Tube: m >= 1");
    F_ = GF::get(q, d);
}

TubeModule Tube::normalize(std::vector<Segment> segs) const {
    for (auto& s : segs) s.top = res(s.top);
    std::sort(segs.begin(), segs.end());
    return segs;
}

TubeModule Tube::direct_sum(const TubeModule& x, const TubeModule& y) const {
    TubeModule r = x;
    r.insert(r.end(), y.begin(), y.end());
    std::sort(r.begin(), r.end());
    return r;
}

std::vector<int> Tube::dimvec(const TubeModule& M) const {
    std::vector<int> d(m_, 0);
    for (const auto& s : M)
        for (int t = 0; t < s.len; ++t) d[res(s.top - t)]++;
    return d;
}

int Tube::length(const TubeModule& M) const {
    int n = 0;
    for (const auto& s : M) n += s.len;
    return n;
}

std::vector<int> Tube::socle_vertices(const TubeModule& M) const {
    std::vector<int> v;
    for (const auto& s : M) v.push_back(res(s.top - s.len + 1));
    return v;
}

std::string Tube::str(const TubeModule& M) const {
    if (M.empty()) return "0";
    std::ostringstream os;
    for (size_t i = 0; i < M.size(); ++i) {
        if (i) os << "+";
        os << "S" << M[i].top << "(" << M[i].len << ")";
    }
    return os.str();
}

const std::vector<TubeModule>& Tube::modules_of_dim(const std::vector<int>& dim) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = dim_memo_.find(dim);
        if (it != dim_memo_.end()) return it->second;
    }
    std::vector<TubeModule> out;
    int total = std::accumulate(dim.begin(), dim.end(), 0);
    std::vector<Segment> all;
    for (int len = 1; len <= total; ++len)
        for (int top = 0; top < m_; ++top) all.push_back(Segment{top, len});
    std::sort(all.begin(), all.end());
    std::vector<int> rest = dim;
    TubeModule cur;
    std::function<void(size_t)> rec = [&](size_t start) {
        bool done = std::all_of(rest.begin(), rest.end(), [](int x) { return x == 0; });
        if (done) {
            out.push_back(cur);
            return;
        }
        for (size_t i = start; i < all.size(); ++i) {
            const Segment& s = all[i];
            bool ok = true;
            for (int t = 0; t < s.len; ++t)
                if (--rest[res(s.top - t)] < 0) ok = false;
            if (ok) {
                cur.push_back(s);
                rec(i);
                cur.pop_back();
            }
            for (int t = 0; t < s.len; ++t) ++rest[res(s.top - t)];
        }
    };
    rec(0);
    std::lock_guard<std::mutex> lk(mu_);
    return dim_memo_.emplace(dim, std::move(out)).first->second;
}

std::vector<TubeModule> Tube::soc_restricted(int l, const std::vector<int>& alpha) const {
    std::vector<TubeModule> out;
    for (auto& M : modules_of_dim(alpha)) {
        // Soc M must embed in S_1 + ... + S_l: each socle vertex in 1..l, at most once
        bool ok = true;
        std::vector<int> seen(m_ + 1, 0);
        for (int sv : socle_vertices(M)) {
            int idx = sv == 0 ? m_ : sv;  // vertices read as 1..m
            if (idx > l || seen[idx]++) ok = false;
        }
        if (ok) out.push_back(M);
    }
    return out;
}

MatrixRep Tube::realize(const TubeModule& M) const {
    MatrixRep R;
    R.m = m_;
    R.dims.assign(m_, 0);
    std::vector<std::vector<int>> idx(M.size());
    for (size_t i = 0; i < M.size(); ++i)
        for (int t = 0; t < M[i].len; ++t) idx[i].push_back(R.dims[res(M[i].top - t)]++);
    R.arrow.resize(m_);
    for (int s = 0; s < m_; ++s) R.arrow[s] = Mat(R.dims[res(s - 1)], R.dims[s]);
    for (size_t i = 0; i < M.size(); ++i)
        for (int t = 0; t + 1 < M[i].len; ++t) {
            int s = res(M[i].top - t);
            R.arrow[s].at(idx[i][t + 1], idx[i][t]) = 1;
        }
    return R;
}

namespace {

// Segment multiset from the rank function r(t,k) = rank of the k-fold arrow composite on V_t
// (suitably restricted). Returns false when not nilpotent within the bound.
template <class RankFn>
bool segments_from_ranks(int m, int total, RankFn&& r, TubeModule& out) {
    auto mod = [m](int j) { return ((j % m) + m) % m; };
    std::vector<std::vector<int>> R(m, std::vector<int>(total + 2, 0));
    for (int t = 0; t < m; ++t)
        for (int k = 0; k <= total + 1; ++k) R[t][k] = r(t, k);
    for (int t = 0; t < m; ++t)
        if (R[t][total + 1] != 0) return false;
    out.clear();
    for (int t = 0; t < m; ++t)
        for (int l = 1; l <= total; ++l) {
            int ge = R[t][l - 1] - R[mod(t + 1)][l];
            int ge1 = R[t][l] - R[mod(t + 1)][l + 1];
            for (int c = 0; c < ge - ge1; ++c) out.push_back(Segment{t, l});
        }
    std::sort(out.begin(), out.end());
    return true;
}

}  // namespace

TubeModule Tube::classify(const MatrixRep& R) const {
    int total = std::accumulate(R.dims.begin(), R.dims.end(), 0);
    // P[t][k]: composite V_t -> V_{t-k}
    std::vector<std::vector<int>> rk(m_, std::vector<int>(total + 2, 0));
    for (int t = 0; t < m_; ++t) {
        Mat P = identity(R.dims[t]);
        rk[t][0] = R.dims[t];
        for (int k = 1; k <= total + 1; ++k) {
            if (P.cols == 0 || P.rows == 0) break;
            P = mat_mul(*F_, R.arrow[res(t - k + 1)], P);
            rk[t][k] = rank(*F_, P);
            if (rk[t][k] == 0) break;
        }
    }
    TubeModule out;
    if (!segments_from_ranks(m_, total, [&](int t, int k) { return rk[t][k]; }, out))
        throw std::domain_error("classify: representation is not nilpotent");
    return out;
}

TubeModule Tube::classify_sub(const MatrixRep& R, const SubSpace& X) const {
    int total = 0;
    for (const auto& x : X) total += x.cols;
    std::vector<std::vector<int>> rk(m_, std::vector<int>(total + 2, 0));
    for (int t = 0; t < m_; ++t) {
        Mat P = X[t];
        rk[t][0] = P.cols;
        for (int k = 1; k <= total + 1 && P.cols > 0; ++k) {
            P = mat_mul(*F_, R.arrow[res(t - k + 1)], P);
            rk[t][k] = rank(*F_, P);
            if (rk[t][k] == 0) break;
        }
    }
    TubeModule out;
    if (!segments_from_ranks(m_, total, [&](int t, int k) { return rk[t][k]; }, out))
        throw std::domain_error("classify_sub: not nilpotent");
    return out;
}

TubeModule Tube::classify_quot(const MatrixRep& R, const SubSpace& X) const {
    int total = 0;
    for (int t = 0; t < m_; ++t) total += R.dims[t] - X[t].cols;
    std::vector<std::vector<int>> rk(m_, std::vector<int>(total + 2, 0));
    for (int t = 0; t < m_; ++t) {
        Mat P = identity(R.dims[t]);
        rk[t][0] = R.dims[t] - X[t].cols;
        for (int k = 1; k <= total + 1; ++k) {
            P = mat_mul(*F_, R.arrow[res(t - k + 1)], P);
            const Mat& W = X[res(t - k)];
            Mat J(P.rows, P.cols + W.cols);
            for (int i = 0; i < P.rows; ++i) {
                for (int j = 0; j < P.cols; ++j) J.at(i, j) = P.at(i, j);
                for (int j = 0; j < W.cols; ++j) J.at(i, P.cols + j) = W.at(i, j);
            }
            rk[t][k] = rank(*F_, J) - W.cols;
            if (rk[t][k] == 0) break;
        }
    }
    TubeModule out;
    if (!segments_from_ranks(m_, total, [&](int t, int k) { return rk[t][k]; }, out))
        throw std::domain_error("classify_quot: not nilpotent");
    return out;
}

bool Tube::is_stable(const MatrixRep& R, const SubSpace& X) const {
    for (int s = 0; s < m_; ++s) {
        const Mat& tgt = X[res(s - 1)];
        Mat img = mat_mul(*F_, R.arrow[s], X[s]);
        Mat J(tgt.rows, tgt.cols + img.cols);
        for (int i = 0; i < tgt.rows; ++i) {
            for (int j = 0; j < tgt.cols; ++j) J.at(i, j) = tgt.at(i, j);
            for (int j = 0; j < img.cols; ++j) J.at(i, tgt.cols + j) = img.at(i, j);
        }
        if (rank(*F_, J) != tgt.cols) return false;
    }
    return true;
}

int Tube::hom_dim(const TubeModule& M, const TubeModule& N) const {
    int total = 0;
    for (const auto& a : M)
        for (const auto& b : N) {
            int lo = std::max(0, b.len - a.len);
            int want = res(b.top - a.top);
            for (int t = lo; t < b.len; ++t)
                if (res(t) == want) ++total;
        }
    return total;
}

std::vector<std::vector<Mat>> Tube::hom_basis(const MatrixRep& R1, const MatrixRep& R2) const {
    std::vector<int> off(m_ + 1, 0);
    for (int s = 0; s < m_; ++s) off[s + 1] = off[s] + R2.dims[s] * R1.dims[s];
    const int nvar = off[m_];
    int neq = 0;
    for (int s = 0; s < m_; ++s) neq += R2.dims[res(s - 1)] * R1.dims[s];
    Mat E(neq, nvar);
    int row = 0;
    auto var = [&](int s, int i, int j) { return off[s] + i * R1.dims[s] + j; };
    for (int s = 0; s < m_; ++s) {
        int sp = res(s - 1);
        for (int i = 0; i < R2.dims[sp]; ++i)
            for (int j = 0; j < R1.dims[s]; ++j, ++row) {
                // (arrow2[s] f_s)_{ij} - (f_{s-1} arrow1[s])_{ij}
                for (int k = 0; k < R2.dims[s]; ++k) {
                    int c = R2.arrow[s].at(i, k);
                    if (c) E.at(row, var(s, k, j)) = F_->add(E.at(row, var(s, k, j)), c);
                }
                for (int k = 0; k < R1.dims[sp]; ++k) {
                    int c = R1.arrow[s].at(k, j);
                    if (c) E.at(row, var(sp, i, k)) = F_->sub(E.at(row, var(sp, i, k)), c);
                }
            }
    }
    auto ns = nullspace(*F_, E);
    std::vector<std::vector<Mat>> out;
    for (auto& x : ns) {
        std::vector<Mat> f(m_);
        for (int s = 0; s < m_; ++s) {
            f[s] = Mat(R2.dims[s], R1.dims[s]);
            for (int i = 0; i < R2.dims[s]; ++i)
                for (int j = 0; j < R1.dims[s]; ++j) f[s].at(i, j) = x[var(s, i, j)];
        }
        out.push_back(std::move(f));
    }
    return out;
}

int Tube::euler(const std::vector<int>& a, const std::vector<int>& b) const {
    int e = 0;
    for (int s = 0; s < m_; ++s) e += a[s] * b[s] - a[s] * b[res(s - 1)];
    return e;
}

namespace {
mpz_class ipow(long base, long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
    return r;
}
mpz_class gl_order(long Q, int n) {
    mpz_class r = 1;
    for (int i = 0; i < n; ++i) r *= ipow(Q, n) - ipow(Q, i);
    return r;
}
}  // namespace

mpz_class Tube::aut_order(const TubeModule& M) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = aut_memo_.find(M);
        if (it != aut_memo_.end()) return it->second;
    }
    std::map<Segment, int> mult;
    for (const auto& s : M) mult[s]++;
    long sq = 0;
    mpz_class gl = 1;
    for (auto& [s, n] : mult) {
        sq += static_cast<long>(n) * n;
        gl *= gl_order(F_->size(), n);
    }
    mpz_class r = ipow(F_->size(), end_dim(M) - sq) * gl;
    std::lock_guard<std::mutex> lk(mu_);
    aut_memo_[M] = r;
    return r;
}

mpz_class Tube::aut_order_enum(const TubeModule& M) const {
    MatrixRep R = realize(M);
    auto basis = hom_basis(R, R);
    mpz_class total = ipow(F_->size(), static_cast<long>(basis.size()));
    if (total > enum_cap) throw ResourceError("aut_order_enum: endomorphism space too large");
    std::vector<std::vector<int>> flat;
    int n = 0;
    for (int s = 0; s < m_; ++s) n += R.dims[s] * R.dims[s];
    for (auto& f : basis) {
        std::vector<int> v;
        for (int s = 0; s < m_; ++s) v.insert(v.end(), f[s].a.begin(), f[s].a.end());
        flat.push_back(std::move(v));
    }
    mpz_class count = 0;
    for_each_combination(*F_, flat, n, [&](const std::vector<int>& x, const std::vector<int>&) {
        int pos = 0;
        for (int s = 0; s < m_; ++s) {
            Mat b(R.dims[s], R.dims[s]);
            std::copy(x.begin() + pos, x.begin() + pos + R.dims[s] * R.dims[s], b.a.begin());
            pos += R.dims[s] * R.dims[s];
            if (!invertible(*F_, b)) return;
        }
        ++count;
    });
    return count;
}

long Tube::hall_number_brute(const TubeModule& A, const TubeModule& B, const TubeModule& C) const {
    auto dA = dimvec(A), dB = dimvec(B), dC = dimvec(C);
    for (int s = 0; s < m_; ++s)
        if (dA[s] + dB[s] != dC[s]) return 0;
    MatrixRep R = realize(C);
    SubSpace X(m_);
    long count = 0;
    long visited = 0;
    auto contains = [&](const Mat& tgt, const Mat& img) {
        Mat J(tgt.rows, tgt.cols + img.cols);
        for (int i = 0; i < tgt.rows; ++i) {
            for (int j = 0; j < tgt.cols; ++j) J.at(i, j) = tgt.at(i, j);
            for (int j = 0; j < img.cols; ++j) J.at(i, tgt.cols + j) = img.at(i, j);
        }
        return rank(*F_, J) == tgt.cols;
    };
    // order: 0, m-1, m-2, ..., 1; arrow s maps X_s into X_{s-1}
    std::vector<int> order{0};
    for (int s = m_ - 1; s >= 1; --s) order.push_back(s);
    std::function<void(size_t)> rec = [&](size_t pos) {
        if (pos == order.size()) {
            if (!contains(X[0], mat_mul(*F_, R.arrow[res(1)], X[res(1)]))) return;
            if (++visited > enum_cap) throw ResourceError("hall_number_brute: too many subspaces");
            if (classify_sub(R, X) == B && classify_quot(R, X) == A) ++count;
            return;
        }
        int s = order[pos];
        for_each_subspace(*F_, dC[s], dB[s], [&](const Mat& W) {
            if (pos > 0) {
                int prev = order[pos - 1];  // arrow prev maps X_prev into X_s
                if (!contains(W, mat_mul(*F_, R.arrow[prev], X[prev]))) return;
            }
            X[s] = W;
            rec(pos + 1);
        });
    };
    if (m_ == 1) {
        for_each_subspace(*F_, dC[0], dB[0], [&](const Mat& W) {
            X[0] = W;
            if (!contains(W, mat_mul(*F_, R.arrow[0], W))) return;
            if (++visited > enum_cap) throw ResourceError("hall_number_brute: too many subspaces");
            if (classify_sub(R, X) == B && classify_quot(R, X) == A) ++count;
        });
        return count;
    }
    rec(0);
    return count;
}

namespace {

struct ExtSetup {
    MatrixRep RA, RB;
    std::vector<int> zoff;  // offsets of xi_s blocks (dB[s-1] x dA[s])
    int zdim = 0;
    Mat D;  // coboundary image vectors as rows
};

ExtSetup ext_setup(const Tube& T, const TubeModule& A, const TubeModule& B) {
    ExtSetup S;
    const int m = T.m();
    const GF& F = T.field();
    S.RA = T.realize(A);
    S.RB = T.realize(B);
    S.zoff.assign(m + 1, 0);
    for (int s = 0; s < m; ++s) S.zoff[s + 1] = S.zoff[s] + S.RB.dims[T.res(s - 1)] * S.RA.dims[s];
    S.zdim = S.zoff[m];
    std::vector<std::vector<int>> rows;
    for (int s = 0; s < m; ++s)
        for (int i = 0; i < S.RB.dims[s]; ++i)
            for (int j = 0; j < S.RA.dims[s]; ++j) {
                // f = E_{ij} at vertex s; image: arrowB[s] E_ij in block s, -E_ij arrowA[s+1] in block s+1
                std::vector<int> img(S.zdim, 0);
                int sp = T.res(s - 1);
                for (int r = 0; r < S.RB.dims[sp]; ++r) {
                    int c = S.RB.arrow[s].at(r, i);
                    if (c) {
                        int idx = S.zoff[s] + r * S.RA.dims[s] + j;
                        img[idx] = F.add(img[idx], c);
                    }
                }
                int sn = T.res(s + 1);
                // block sn has shape dB[s] x dA[sn]: (f_s arrowA[sn])_{i,k} = arrowA[sn](j,k)
                for (int k = 0; k < S.RA.dims[sn]; ++k) {
                    int c = S.RA.arrow[sn].at(j, k);
                    if (c) {
                        int idx = S.zoff[sn] + i * S.RA.dims[sn] + k;
                        img[idx] = F.sub(img[idx], c);
                    }
                }
                rows.push_back(std::move(img));
            }
    S.D = Mat(static_cast<int>(rows.size()), S.zdim);
    for (size_t r = 0; r < rows.size(); ++r)
        for (int c = 0; c < S.zdim; ++c) S.D.at(static_cast<int>(r), c) = rows[r][c];
    return S;
}

MatrixRep middle_term(const Tube& T, const ExtSetup& S, const std::vector<int>& xi) {
    const int m = T.m();
    MatrixRep C;
    C.m = m;
    C.dims.resize(m);
    for (int s = 0; s < m; ++s) C.dims[s] = S.RB.dims[s] + S.RA.dims[s];
    C.arrow.resize(m);
    for (int s = 0; s < m; ++s) {
        int sp = T.res(s - 1);
        Mat M(C.dims[sp], C.dims[s]);
        const Mat& b = S.RB.arrow[s];
        const Mat& a = S.RA.arrow[s];
        for (int i = 0; i < b.rows; ++i)
            for (int j = 0; j < b.cols; ++j) M.at(i, j) = b.at(i, j);
        for (int i = 0; i < a.rows; ++i)
            for (int j = 0; j < a.cols; ++j) M.at(b.rows + i, b.cols + j) = a.at(i, j);
        for (int i = 0; i < S.RB.dims[sp]; ++i)
            for (int j = 0; j < S.RA.dims[s]; ++j) M.at(i, b.cols + j) = xi[S.zoff[s] + i * S.RA.dims[s] + j];
        C.arrow[s] = std::move(M);
    }
    return C;
}

}  // namespace

namespace {

// Dual module for the opposite orientation, relabelled s -> -s so that arrows again go i -> i-1.
TubeModule dual_module(const Tube& T, const TubeModule& M) {
    std::vector<Segment> segs;
    for (auto& g : M) segs.push_back(Segment{T.res(g.len - 1 - g.top), g.len});
    return T.normalize(segs);
}

mpz_class gauss_binom(long Q, int n, int k) {
    if (k < 0 || k > n) return 0;
    mpz_class num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
        num *= ipow(Q, n - i) - 1;
        den *= ipow(Q, i + 1) - 1;
    }
    return num / den;
}

// Isotypic blocks (segment, multiplicity, index of first copy) of a sorted module.
std::vector<std::tuple<Segment, int, size_t>> isotypic_blocks(const TubeModule& A) {
    std::vector<std::tuple<Segment, int, size_t>> out;
    for (size_t i = 0; i < A.size(); ++i) {
        if (!out.empty() && std::get<0>(out.back()) == A[i]) ++std::get<1>(out.back());
        else out.push_back({A[i], 1, i});
    }
    return out;
}

// Representatives enumerated when GL_n acts on each isotypic block sigma^n of A.
mpz_class orbit_cost(const Tube& T, const TubeModule& A, const TubeModule& B) {
    mpz_class total = 1;
    long Q = T.field_size();
    for (auto& [sg, n, first] : isotypic_blocks(A)) {
        int e = T.ext_dim(TubeModule{sg}, B);
        mpz_class c = 0;
        for (int r = 0; r <= std::min(n, e); ++r) c += gauss_binom(Q, e, r);
        total *= c;
    }
    return total;
}

// |Ext^1(A,B)_C| for all C. The middle term of (xi_1..xi_n) in Ext^1(sigma,B)^n depends only on
// span(xi_1..xi_n), and the number of n-tuples spanning a fixed r-space is prod_{t<r} (Q^n - Q^t).
std::map<TubeModule, mpz_class> ext_classes_reduced(const Tube& T, const TubeModule& A, const TubeModule& B) {
    const int m = T.m();
    const GF& F = T.field();
    const long Q = T.field_size();
    ExtSetup S = ext_setup(T, A, B);
    std::vector<std::vector<int>> off(A.size() + 1, std::vector<int>(m, 0));
    for (size_t i = 0; i < A.size(); ++i) {
        off[i + 1] = off[i];
        for (int t = 0; t < A[i].len; ++t) ++off[i + 1][T.res(A[i].top - t)];
    }
    struct Block {
        size_t first;
        int n;
        ExtSetup local;
        std::vector<int> free_cols;
    };
    std::vector<Block> blocks;
    for (auto& [sg, n, first] : isotypic_blocks(A)) {
        Block b{first, n, ext_setup(T, TubeModule{sg}, B), {}};
        Mat D = b.local.D;
        auto piv = rref(F, D);
        std::vector<char> is_piv(b.local.zdim, 0);
        for (int p : piv) is_piv[p] = 1;
        for (int c = 0; c < b.local.zdim; ++c)
            if (!is_piv[c]) b.free_cols.push_back(c);
        blocks.push_back(std::move(b));
    }
    // local cocycle coordinate of copy `seg` -> global coordinate
    auto global_index = [&](const Block& b, size_t seg, int local) {
        int s = 0;
        while (b.local.zoff[s + 1] <= local) ++s;
        int cols = b.local.RA.dims[s];
        int r = (local - b.local.zoff[s]) / cols, jl = (local - b.local.zoff[s]) % cols;
        return S.zoff[s] + r * S.RA.dims[s] + off[seg][s] + jl;
    };
    std::map<TubeModule, mpz_class> out;
    std::vector<int> xi(S.zdim, 0);
    std::function<void(size_t, const mpz_class&)> rec = [&](size_t k, const mpz_class& weight) {
        if (k == blocks.size()) {
            out[T.classify(middle_term(T, S, xi))] += weight;
            return;
        }
        const Block& b = blocks[k];
        int e = static_cast<int>(b.free_cols.size());
        for (int r = 0; r <= std::min(b.n, e); ++r) {
            mpz_class w = weight;
            for (int t = 0; t < r; ++t) w *= ipow(Q, b.n) - ipow(Q, t);
            for_each_subspace(F, e, r, [&](const Mat& U) {
                std::vector<int> touched;
                for (int c = 0; c < r; ++c)
                    for (int i = 0; i < e; ++i)
                        if (U.at(i, c)) {
                            int g = global_index(b, b.first + c, b.free_cols[i]);
                            xi[g] = U.at(i, c);
                            touched.push_back(g);
                        }
                rec(k + 1, w);
                for (int g : touched) xi[g] = 0;
            });
        }
    };
    rec(0, mpz_class(1));
    return out;
}

}  // namespace

std::map<TubeModule, mpz_class> Tube::ext_classes(const TubeModule& A, const TubeModule& B) const {
    TubeModule Ad = dual_module(*this, A), Bd = dual_module(*this, B);
    mpz_class direct = orbit_cost(*this, A, B), dual = orbit_cost(*this, Bd, Ad);
    if (std::min(direct, dual) > enum_cap)
        throw ResourceError("ext_classes: Ext group too large (" + str(A) + ", " + str(B) + ")");
    if (direct <= dual) return ext_classes_reduced(*this, A, B);
    std::map<TubeModule, mpz_class> out;
    for (auto& [C, n] : ext_classes_reduced(*this, Bd, Ad)) out[dual_module(*this, C)] += n;
    return out;
}

std::map<TubeModule, mpz_class> Tube::cocycle_counts(const TubeModule& A, const TubeModule& B) const {
    ExtSetup S = ext_setup(*this, A, B);
    std::vector<std::vector<int>> all;
    for (int c = 0; c < S.zdim; ++c) {
        std::vector<int> e(S.zdim, 0);
        e[c] = 1;
        all.push_back(std::move(e));
    }
    mpz_class total = ipow(F_->size(), S.zdim);
    if (total > enum_cap) throw ResourceError("cocycle_counts: too many cocycles");
    std::map<TubeModule, mpz_class> out;
    for_each_combination(*F_, all, S.zdim, [&](const std::vector<int>& xi, const std::vector<int>&) {
        out[classify(middle_term(*this, S, xi))] += 1;
    });
    return out;
}

mpz_class Tube::coboundary_count(const TubeModule& A, const TubeModule& B) const {
    ExtSetup S = ext_setup(*this, A, B);
    return ipow(F_->size(), rank(*F_, S.D));
}

const std::vector<std::pair<TubeModule, QScalar>>& Tube::mul(const TubeModule& A, const TubeModule& B) const {
    auto key = std::make_pair(A, B);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = mul_memo_.find(key);
        if (it != mul_memo_.end()) return it->second;
    }
    std::vector<std::pair<TubeModule, QScalar>> res;
    if (A.empty() || B.empty()) {
        res.push_back({direct_sum(A, B), QScalar::rational(1, q_)});
    } else {
        auto cls = ext_classes(A, B);
        QScalar pre = vpow(euler(dimvec(A), dimvec(B)));
        mpz_class den = aut_order(A) * aut_order(B) * ipow(F_->size(), hom_dim(A, B));
        for (auto& [C, n] : cls) {
            mpq_class g(n * aut_order(C), den);
            g.canonicalize();
            if (g.get_den() != 1) throw std::logic_error("Tube::mul: non-integral Hall number");
            res.push_back({C, pre * QScalar::rational(g, q_)});
        }
    }
    std::lock_guard<std::mutex> lk(mu_);
    auto [it, ins] = mul_memo_.emplace(key, std::move(res));
    return it->second;
}

namespace {

int max_len(const TubeModule& M) {
    int r = 0;
    for (auto& g : M) r = std::max(r, g.len);
    return r;
}

// soc B meets im N^{j-1} inside the same for G (vertexwise), dually for the top of A, and the long
// exact Hom/Ext sequences against every indecomposable X.
bool ext_sig_ok(const TubeExtSig& G, const TubeExtSig& A, const TubeExtSig& B) {
    for (size_t i = 0; i < G.soc.size(); ++i)
        if (B.soc[i] > G.soc[i] || A.dsoc[i] > G.dsoc[i]) return false;
    for (size_t i = 0; i < G.hx.size(); ++i) {
        int xg = G.hx[i], xa = A.hx[i], xb = B.hx[i];
        if (xg < xb || xg > xa + xb || xg < xa - (xb - B.ex[i])) return false;
        int gx = G.xh[i], ax = A.xh[i], bx = B.xh[i];
        if (gx < ax || gx > ax + bx || gx < bx - (ax - A.xe[i])) return false;
    }
    return true;
}

}  // namespace

const TubeExtSig& Tube::ext_sig(const TubeModule& M, int L) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto& byL = sig_memo_[L];
        auto it = byL.find(M);
        if (it != byL.end()) return it->second;
    }
    TubeExtSig g;
    g.soc.assign(m_ * L, 0);
    g.dsoc.assign(m_ * L, 0);
    for (auto& x : M)
        for (int j = 1; j <= x.len; ++j) {
            ++g.soc[res(x.top - x.len + 1) * L + j - 1];
            ++g.dsoc[x.top * L + j - 1];
        }
    auto dM = dimvec(M);
    for (int s = 0; s < m_; ++s)
        for (int len = 1; len <= L + m_; ++len) {
            TubeModule X{Segment{s, len}};
            auto dX = dimvec(X);
            g.hx.push_back(hom_dim(X, M));
            g.xh.push_back(hom_dim(M, X));
            g.ex.push_back(euler(dX, dM));
            g.xe.push_back(euler(dM, dX));
        }
    std::lock_guard<std::mutex> lk(mu_);
    return sig_memo_[L].emplace(M, std::move(g)).first->second;
}

bool Tube::extension_possible(const TubeModule& G, const TubeModule& A, const TubeModule& B) const {
    const int L = max_len(G);
    if (max_len(A) > L || max_len(B) > L) return false;
    return ext_sig_ok(ext_sig(G, L), ext_sig(A, L), ext_sig(B, L));
}

std::vector<std::tuple<TubeModule, TubeModule, mpz_class>> Tube::decompositions(
    const TubeModule& G, const std::vector<int>& alpha, const std::vector<int>& beta, const ModuleFilter* quot_only,
    const ModuleFilter* sub_only) const {
    const bool filtered = quot_only || sub_only;
    auto key = std::make_tuple(G, alpha, beta);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = dec_memo_.find(key);
        if (it != dec_memo_.end()) {
            if (!filtered) return it->second;
            std::vector<std::tuple<TubeModule, TubeModule, mpz_class>> out;
            for (auto& t : it->second)
                if ((!quot_only || quot_only->count(std::get<0>(t))) && (!sub_only || sub_only->count(std::get<1>(t))))
                    out.push_back(t);
            return out;
        }
    }
    std::vector<std::tuple<TubeModule, TubeModule, mpz_class>> out;
    auto dG = dimvec(G);
    bool ok = true;
    for (int s = 0; s < m_; ++s)
        if (alpha[s] + beta[s] != dG[s] || alpha[s] < 0 || beta[s] < 0) ok = false;
    bool azero = std::all_of(alpha.begin(), alpha.end(), [](int x) { return x == 0; });
    bool bzero = std::all_of(beta.begin(), beta.end(), [](int x) { return x == 0; });
    if (!ok) {
    } else if (azero) {
        out.push_back({TubeModule{}, G, 1});
    } else if (bzero) {
        out.push_back({G, TubeModule{}, 1});
    } else {
        std::set<std::pair<TubeModule, TubeModule>> feasible;
        std::set<TubeModule> sub_set, quot_set;
        // subquotients of G have Loewy length at most that of G
        const int L = max_len(G);
        auto candidates = [&](const std::vector<int>& dim, const ModuleFilter* only) {
            std::vector<const TubeModule*> r;
            if (only) {
                for (auto& X : *only)
                    if (max_len(X) <= L && dimvec(X) == dim) r.push_back(&X);
            } else {
                for (auto& X : modules_of_dim(dim))
                    if (max_len(X) <= L) r.push_back(&X);
            }
            return r;
        };
        const TubeExtSig& sG = ext_sig(G, L);
        auto cand_subs = candidates(beta, sub_only);
        std::vector<const TubeExtSig*> sB;
        for (auto* B : cand_subs) sB.push_back(&ext_sig(*B, L));
        for (auto* A : candidates(alpha, quot_only)) {
            const TubeExtSig& sA = ext_sig(*A, L);
            for (size_t b = 0; b < cand_subs.size(); ++b)
                if (ext_sig_ok(sG, sA, *sB[b])) {
                    feasible.insert({*A, *cand_subs[b]});
                    quot_set.insert(*A);
                    sub_set.insert(*cand_subs[b]);
                }
        }
        std::vector<TubeModule> subs(sub_set.begin(), sub_set.end()), quots(quot_set.begin(), quot_set.end());
        mpz_class cost_sub = 0, cost_quot = 0;
        for (auto& B : subs) cost_sub += ipow(F_->size(), hom_dim(B, G));
        for (auto& A : quots) cost_quot += ipow(F_->size(), hom_dim(G, A));
        // Alternative: read g^G_{AB} off the memoized products u_A u_B (Riedtmann counts of Ext classes).
        mpz_class cost_pairs = 0;
        for (auto& A : quots)
            for (auto& B : subs) {
                if (!feasible.count({A, B})) continue;
                cost_pairs += 1 + std::min(orbit_cost(*this, A, B),
                                           orbit_cost(*this, dual_module(*this, B), dual_module(*this, A)));
            }
        MatrixRep RG = realize(G);
        std::map<std::pair<TubeModule, TubeModule>, mpz_class> counts;
        if (feasible.empty()) {
        } else if (std::min({cost_sub, cost_quot, cost_pairs}) > enum_cap)
            throw ResourceError("decompositions: Hom spaces too large for " + str(G));
        else if (cost_pairs < std::min(cost_sub, cost_quot)) {
            for (auto& A : quots)
                for (auto& B : subs) {
                    if (!feasible.count({A, B})) continue;
                    QScalar pre = vpow(euler(dimvec(A), dimvec(B)));
                    for (auto& [C, c] : mul(A, B)) {
                        if (!(C == G)) continue;
                        QScalar g = c / pre;
                        if (!g.is_rational() || g.a().get_den() != 1)
                            throw std::logic_error("decompositions: non-integral Hall number");
                        counts[{A, B}] += g.a().get_num();
                    }
                }
        } else if (cost_sub <= cost_quot) {
            for (auto& B : subs) {
                MatrixRep RB = realize(B);
                auto basis = hom_basis(RB, RG);
                std::vector<std::vector<int>> flat;
                int n = 0;
                for (int s = 0; s < m_; ++s) n += RG.dims[s] * RB.dims[s];
                for (auto& f : basis) {
                    std::vector<int> v;
                    for (int s = 0; s < m_; ++s) v.insert(v.end(), f[s].a.begin(), f[s].a.end());
                    flat.push_back(std::move(v));
                }
                std::map<TubeModule, mpz_class> cnt;
                for_each_combination(*F_, flat, n, [&](const std::vector<int>& x, const std::vector<int>&) {
                    SubSpace img(m_);
                    int pos = 0;
                    for (int s = 0; s < m_; ++s) {
                        img[s] = Mat(RG.dims[s], RB.dims[s]);
                        std::copy(x.begin() + pos, x.begin() + pos + RG.dims[s] * RB.dims[s], img[s].a.begin());
                        pos += RG.dims[s] * RB.dims[s];
                        if (rank(*F_, img[s]) != RB.dims[s]) return;
                    }
                    cnt[classify_quot(RG, img)] += 1;
                });
                mpz_class aB = aut_order(B);
                for (auto& [A, c] : cnt) {
                    if (c % aB != 0) throw std::logic_error("decompositions: count not divisible");
                    if (quot_only && !quot_only->count(A)) continue;
                    counts[{A, B}] += c / aB;
                }
            }
        } else {
            for (auto& A : quots) {
                MatrixRep RA = realize(A);
                auto basis = hom_basis(RG, RA);
                std::vector<std::vector<int>> flat;
                int n = 0;
                for (int s = 0; s < m_; ++s) n += RA.dims[s] * RG.dims[s];
                for (auto& f : basis) {
                    std::vector<int> v;
                    for (int s = 0; s < m_; ++s) v.insert(v.end(), f[s].a.begin(), f[s].a.end());
                    flat.push_back(std::move(v));
                }
                std::map<TubeModule, mpz_class> cnt;
                for_each_combination(*F_, flat, n, [&](const std::vector<int>& x, const std::vector<int>&) {
                    SubSpace ker(m_);
                    int pos = 0;
                    for (int s = 0; s < m_; ++s) {
                        Mat f(RA.dims[s], RG.dims[s]);
                        std::copy(x.begin() + pos, x.begin() + pos + RA.dims[s] * RG.dims[s], f.a.begin());
                        pos += RA.dims[s] * RG.dims[s];
                        if (rank(*F_, f) != RA.dims[s]) return;
                        auto ns = nullspace(*F_, f);
                        ker[s] = Mat(RG.dims[s], static_cast<int>(ns.size()));
                        for (size_t c = 0; c < ns.size(); ++c)
                            for (int r = 0; r < RG.dims[s]; ++r) ker[s].at(r, static_cast<int>(c)) = ns[c][r];
                    }
                    cnt[classify_sub(RG, ker)] += 1;
                });
                mpz_class aA = aut_order(A);
                for (auto& [B, c] : cnt) {
                    if (c % aA != 0) throw std::logic_error("decompositions: count not divisible");
                    if (sub_only && !sub_only->count(B)) continue;
                    counts[{A, B}] += c / aA;
                }
            }
        }
        for (auto& [ab, c] : counts) out.push_back({ab.first, ab.second, c});
    }
    if (filtered) {
        std::erase_if(out, [&](const auto& t) {
            return (quot_only && !quot_only->count(std::get<0>(t))) || (sub_only && !sub_only->count(std::get<1>(t)));
        });
        return out;
    }
    std::lock_guard<std::mutex> lk(mu_);
    dec_memo_[key] = out;
    return out;
}

std::vector<std::tuple<TubeModule, TubeModule, QScalar>> Tube::delta(
    const TubeModule& G, const std::vector<int>& alpha, const std::vector<int>& beta, const ModuleFilter* quot_only,
    const ModuleFilter* sub_only) const {
    std::vector<std::tuple<TubeModule, TubeModule, QScalar>> out;
    mpz_class aG = aut_order(G);
    for (auto& [A, B, g] : decompositions(G, alpha, beta, quot_only, sub_only)) {
        mpq_class c(g * aut_order(A) * aut_order(B), aG);
        c.canonicalize();
        out.push_back({A, B, vpow(euler(dimvec(A), dimvec(B))) * QScalar::rational(c, q_)});
    }
    return out;
}

}  // namespace hallcoh
