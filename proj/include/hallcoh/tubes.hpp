#pragma once
// Nilpotent representations of the cyclic quiver C_m (arrows i -> i-1) over F_{q^d},
// their Hall numbers, and the Hall algebra structure constants.

#include "hallcoh/errors.hpp"
#include "hallcoh/ff.hpp"
#include "hallcoh/scalar.hpp"

#include <gmpxx.h>

#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <set>
#include <utility>
#include <vector>

namespace hallcoh {

// S_top(len): top S_top, composition factors S_top, S_{top-1}, ..., S_{top-len+1}.
struct Segment {
    int top = 0;
    int len = 1;
    friend bool operator==(const Segment&, const Segment&) = default;
    friend auto operator<=>(const Segment&, const Segment&) = default;
};

// Canonical (sorted) multiset of segments.
using TubeModule = std::vector<Segment>;

// Representation given by per-vertex dimensions and arrow blocks arrow[s]: V_s -> V_{s-1}.
struct MatrixRep {
    int m = 1;
    std::vector<int> dims;
    std::vector<Mat> arrow;
};

// Vertexwise subspace of a representation, columns are basis vectors.
using SubSpace = std::vector<Mat>;

using Partition = std::vector<int>;  // weakly decreasing

// Invariants of M entering the exact-sequence test, for indecomposables X of length <= L + m; segments of
// M have length <= L, beyond which hom(X, M) and hom(M, X) only depend on len(X) mod m.
struct TubeExtSig {
    std::vector<int> soc, dsoc;  // [s * L + j - 1]: segments with socle (resp. top) s and length >= j
    std::vector<int> hx, xh;     // hom(X, M), hom(M, X)
    std::vector<int> ex, xe;     // euler(X, M), euler(M, X)
};

TubeModule partition_module(const Partition& mu);
Partition module_partition(const TubeModule& M);
std::vector<Partition> partitions_of(int n);

class Tube {
public:
    // C_m over F_{q^d}; the local quantum parameter is v^d.
    Tube(int m, int q, int d = 1);

    int m() const { return m_; }
    int q() const { return q_; }
    int d() const { return d_; }
    int field_size() const { return F_->size(); }
    const GF& field() const { return *F_; }

    int res(int j) const { return ((j % m_) + m_) % m_; }
    TubeModule normalize(std::vector<Segment> segs) const;
    TubeModule simple(int j) const { return {Segment{res(j), 1}}; }
    TubeModule segment(int top, int len) const { return {Segment{res(top), len}}; }
    TubeModule direct_sum(const TubeModule& x, const TubeModule& y) const;
    std::vector<int> dimvec(const TubeModule& M) const;
    int length(const TubeModule& M) const;
    std::vector<int> socle_vertices(const TubeModule& M) const;
    std::string str(const TubeModule& M) const;

    // All iso classes with the given dimension vector.
    const std::vector<TubeModule>& modules_of_dim(const std::vector<int>& dim) const;
    // Iso classes M of dimension alpha with Soc M a subobject of S_1 + ... + S_l (vertex m read as 0).
    std::vector<TubeModule> soc_restricted(int l, const std::vector<int>& alpha) const;

    MatrixRep realize(const TubeModule& M) const;
    TubeModule classify(const MatrixRep& R) const;  // throws on non-nilpotent input
    TubeModule classify_sub(const MatrixRep& R, const SubSpace& X) const;
    TubeModule classify_quot(const MatrixRep& R, const SubSpace& X) const;
    bool is_stable(const MatrixRep& R, const SubSpace& X) const;

    int hom_dim(const TubeModule& M, const TubeModule& N) const;  // closed formula
    int end_dim(const TubeModule& M) const { return hom_dim(M, M); }
    // Basis of Hom(R1, R2); each element is a list of per-vertex blocks.
    std::vector<std::vector<Mat>> hom_basis(const MatrixRep& R1, const MatrixRep& R2) const;
    int euler(const std::vector<int>& a, const std::vector<int>& b) const;  // over F_{q^d}
    int ext_dim(const TubeModule& M, const TubeModule& N) const {
        return hom_dim(M, N) - euler(dimvec(M), dimvec(N));
    }

    mpz_class aut_order(const TubeModule& M) const;       // product formula
    mpz_class aut_order_enum(const TubeModule& M) const;  // enumeration oracle

    // Brute-force submodule count g^C_{A,B}: X <= C with X ~ B and C/X ~ A.
    long hall_number_brute(const TubeModule& A, const TubeModule& B, const TubeModule& C) const;
    // |Ext^1(A,B)_C| for every middle term C, by enumerating extension classes.
    std::map<TubeModule, mpz_class> ext_classes(const TubeModule& A, const TubeModule& B) const;
    // All cocycles grouped by middle term (independent of the class representatives).
    std::map<TubeModule, mpz_class> cocycle_counts(const TubeModule& A, const TubeModule& B) const;
    mpz_class coboundary_count(const TubeModule& A, const TubeModule& B) const;

    // u_A u_B = sum_C v^{d<A,B>} g^C_{AB} u_C (Riedtmann formula, memoized).
    const std::vector<std::pair<TubeModule, QScalar>>& mul(const TubeModule& A, const TubeModule& B) const;
    // Necessary conditions for a short exact sequence 0 -> B -> G -> A -> 0 (false: g^G_{AB} = 0).
    bool extension_possible(const TubeModule& G, const TubeModule& A, const TubeModule& B) const;
    // Hall numbers g^G_{A,B} for all A of dim alpha (quotient) and B of dim beta (sub). Optional filters
    // restrict A (resp. B) to the given iso classes; filtered calls are not memoized.
    using ModuleFilter = std::set<TubeModule>;
    std::vector<std::tuple<TubeModule, TubeModule, mpz_class>> decompositions(
        const TubeModule& G, const std::vector<int>& alpha, const std::vector<int>& beta,
        const ModuleFilter* quot_only = nullptr, const ModuleFilter* sub_only = nullptr) const;
    // Coproduct coefficient v^{d<A,B>} a_A a_B / a_G g^G_{AB}.
    std::vector<std::tuple<TubeModule, TubeModule, QScalar>> delta(
        const TubeModule& G, const std::vector<int>& alpha, const std::vector<int>& beta,
        const ModuleFilter* quot_only = nullptr, const ModuleFilter* sub_only = nullptr) const;

    QScalar vpow(long n) const { return qv_pow(q_, n * d_); }
    long enum_cap = 20000000;  // maximal number of enumerated elements per call

private:
    const TubeExtSig& ext_sig(const TubeModule& M, int L) const;

    int m_, q_, d_;
    GFPtr F_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<TubeModule, TubeModule>, std::vector<std::pair<TubeModule, QScalar>>> mul_memo_;
    mutable std::map<std::tuple<TubeModule, std::vector<int>, std::vector<int>>,
                     std::vector<std::tuple<TubeModule, TubeModule, mpz_class>>>
        dec_memo_;
    mutable std::map<TubeModule, mpz_class> aut_memo_;
    mutable std::map<std::vector<int>, std::vector<TubeModule>> dim_memo_;
    mutable std::map<int, std::map<TubeModule, TubeExtSig>> sig_memo_;  // by L
};

// Enumerate all k-dimensional subspaces of F^n (columns of an n x k matrix in reduced form).
template <class Fn>
void for_each_subspace(const GF& F, int n, int k, Fn&& f);

}  // namespace hallcoh

#include "hallcoh/detail/subspaces.hpp"
