#pragma once
// Objects of Coh(X) on the supported strata: torsion sheaves, line bundles, a line bundle plus torsion,
// and split rank-two bundles on the projective line. Hom/Ext dimensions, automorphism orders,
// cokernels in the jet model, Hall products and coproduct components at prescribed bidegrees.

#include "hallcoh/errors.hpp"
#include "hallcoh/gring.hpp"
#include "hallcoh/lattice.hpp"
#include "hallcoh/scalar.hpp"
#include "hallcoh/tubes.hpp"

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace hallcoh {

// Iso key in Krull-Schmidt normal form: sorted line summands plus torsion per closed point.
struct SheafKey {
    std::vector<VecL> lines;
    TorsionObject torsion;  // no empty modules
    int rank() const { return static_cast<int>(lines.size()); }
    bool is_zero() const { return lines.empty() && torsion.empty(); }
    bool is_torsion() const { return lines.empty(); }
    friend bool operator==(const SheafKey&, const SheafKey&) = default;
    friend auto operator<=>(const SheafKey&, const SheafKey&) = default;
};

// Probing window: Hom(O(a c), -) for lo <= a <= hi, jet truncation depth.
struct Window {
    int lo = -4;
    int hi = 4;
    int jet_depth = 0;  // 0: the minimal sufficient depth
};

struct ModelOptions {
    bool rank2 = false;  // rank-two middle terms; only exact (and only allowed) on the projective line
    long enum_cap = 20000000;
    int section_cap = 7;
};

using HallTerms = std::vector<std::pair<SheafKey, QScalar>>;
using DeltaTerms = std::vector<std::tuple<SheafKey, SheafKey, QScalar>>;

class CohModel {
public:
    CohModel(const WeightData& w, ModelOptions opt = {});
    CohModel(const CohModel&) = delete;
    CohModel& operator=(const CohModel&) = delete;

    const WeightData& weights() const { return w_; }
    const GRing& ring() const { return R_; }
    const ModelOptions& options() const { return opt_; }
    int q() const { return w_.q(); }
    bool is_p1() const;
    const Tube& tube(const ClosedPoint& x) const;
    QScalar vpow(long n) const { return qv_pow(w_.q(), n); }

    SheafKey zero() const { return {}; }
    SheafKey line(const VecL& x) const;
    SheafKey line_c(int k) const { return line(w_.c_multiple(k)); }
    SheafKey torsion(const ClosedPoint& x, const TubeModule& M) const;
    SheafKey torsion(const TorsionObject& T) const;
    // S^i_j(a) at the marked point of branch i
    SheafKey simple(int branch, int j, int len = 1) const;
    SheafKey direct_sum(const SheafKey& a, const SheafKey& b) const;
    SheafKey torsion_part(const SheafKey& a) const;
    std::string str(const SheafKey& a) const;

    Cls local_class(const ClosedPoint& x, const std::vector<int>& dimvec) const;
    Cls cls(const SheafKey& a) const;
    int euler(const SheafKey& a, const SheafKey& b) const { return w_.euler(cls(a), cls(b)); }

    mpz_class aut_order(const SheafKey& a) const;
    int hom_dim(const SheafKey& a, const SheafKey& b) const;
    int ext_dim(const SheafKey& a, const SheafKey& b) const;  // throws std::logic_error if negative
    // dim Hom(O(x), T) for a torsion object T (sum of the vertex spaces b_i(x) mod p_i)
    int hom_line_torsion(const VecL& x, const TorsionObject& T) const;

    // Nonzero s: O(source) -> O(target), grouped by divisor and by cokernel type.
    const std::map<DivisorProfile, long>& section_divisors(const VecL& degree) const;
    std::map<TorsionObject, long> cokernel_counts(const VecL& source, const VecL& target) const;

    // Local jet model at x: J = S_top(depth) + T', w = (e_mult, f) with f in the vertex (top - mult) space of T'.
    TubeModule jet_cokernel(const ClosedPoint& x, int top, int mult, const TubeModule& Tp,
                            const std::vector<int>& f, int depth) const;
    // Number of f with jet cokernel ~ T (memoized; depth 0 = minimal sufficient depth).
    long jet_count(const ClosedPoint& x, int top, int mult, const TubeModule& Tp, const TubeModule& T,
                   int depth = 0) const;
    int minimal_jet_depth(int mult, const TubeModule& Tp) const;
    // cokernel of (s, f): O(source) -> O(source + deg s) + T, f a list of per-point vertex vectors
    SheafKey cokernel(const VecL& source, const Section& s, const TorsionObject& T,
                      const std::map<ClosedPoint, std::vector<int>>& f, const Window& win) const;
    // dim Hom(O(x), T_x) computed in the jet model with the given depth
    int hom_line_torsion_jet(const VecL& x, const TorsionObject& T, int depth) const;

    // u_A u_B = sum_C v^<A,B> g^C_{AB} u_C
    const HallTerms& mul(const SheafKey& A, const SheafKey& B) const;
    // g^C_{A,B}: subobjects B' ~ B of C with C/B' ~ A
    mpq_class hall_number(const SheafKey& C, const SheafKey& A, const SheafKey& B) const;
    // Components of Delta(u_G) with quotient class alpha and subobject class beta:
    // (A, B, v^<A,B> a_A a_B / a_G g^G_{AB}) meaning u_A K_B (x) u_B.
    const DeltaTerms& delta(const SheafKey& G, const Cls& alpha, const Cls& beta) const;
    // The terms of delta(G, alpha, beta) whose quotient (resp. subobject) lies in the given set.
    using KeyFilter = std::set<SheafKey>;
    DeltaTerms delta_matching(const SheafKey& G, const Cls& alpha, const Cls& beta, const KeyFilter* quot_only,
                              const KeyFilter* sub_only) const;
    // Classes of all candidate torsion subobjects of the torsion part (local sub-dimension vectors).
    std::vector<Cls> torsion_sub_classes(const SheafKey& F) const;

    // Projective line: extensions 0 -> O(sub) -> E -> O(quot) -> 0 by the functional datum, keyed by
    // the splitting type decoded from h^0(E(n)) over the window.
    std::map<SheafKey, mpz_class> ext_middle_terms_p1(const VecL& quot, const VecL& sub, const Window& win) const;
    // Splitting type of the extension given by a functional xi on H^0(O(quot - sub - 2c)).
    SheafKey p1_extension_key(const VecL& quot, const VecL& sub, const std::vector<int>& xi, const Window& win) const;
    // h^0(E(n c)) profile for the same extension
    std::vector<int> p1_hom_profile(const VecL& quot, const VecL& sub, const std::vector<int>& xi,
                                    const Window& win) const;

private:
    HallTerms mul_torsion(const TorsionObject& A, const TorsionObject& B) const;
    HallTerms mul_torsion_line(const TorsionObject& T, const VecL& L) const;
    HallTerms mul_line_torsion(const VecL& L, const TorsionObject& TA, const TorsionObject& TB) const;
    HallTerms mul_lines_p1(const VecL& L1, const VecL& L2) const;
    HallTerms compute_mul(const SheafKey& A, const SheafKey& B) const;
    DeltaTerms compute_delta(const SheafKey& G, const Cls& alpha, const Cls& beta) const;
    DeltaTerms delta_torsion(const TorsionObject& T, const Cls& alpha, const Cls& beta,
                             const KeyFilter* quot_only = nullptr, const KeyFilter* sub_only = nullptr) const;
    DeltaTerms delta_line(const VecL& L, const Cls& alpha, const Cls& beta) const;
    int vertex_of(const ClosedPoint& x, const VecL& L) const;
    void require_rank_le1(const SheafKey& a, const char* what) const;

    WeightData w_;
    GRing R_;
    ModelOptions opt_;
    mutable std::mutex mu_;
    mutable std::map<ClosedPoint, std::unique_ptr<Tube>> tubes_;
    mutable std::map<std::pair<SheafKey, SheafKey>, HallTerms> mul_memo_;
    mutable std::map<std::tuple<SheafKey, Cls, Cls>, DeltaTerms> delta_memo_;
    mutable std::map<VecL, std::map<DivisorProfile, long>> div_memo_;
    mutable std::map<std::tuple<ClosedPoint, int, int, TubeModule, TubeModule, int>, long> jet_memo_;
};

}  // namespace hallcoh
