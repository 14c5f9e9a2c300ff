#pragma once
// The L(p)-graded coordinate ring S(p, lambda) over a prime field F_q, sections of line bundles,
// divisors of sections and closed points.

#include "hallcoh/errors.hpp"
#include "hallcoh/lattice.hpp"
#include "hallcoh/tubes.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace hallcoh {

// Polynomials over F_p (p prime), coefficients low to high, no trailing zeros.
using Poly = std::vector<int>;

Poly poly_trim(Poly f);
Poly poly_mul(const Poly& f, const Poly& g, int p);
Poly poly_add(const Poly& f, const Poly& g, int p);
void poly_divmod(const Poly& f, const Poly& g, int p, Poly& quo, Poly& rem);
Poly poly_gcd(Poly f, Poly g, int p);  // monic
Poly poly_monic(const Poly& f, int p);
int poly_deg(const Poly& f);  // -1 for zero
// All monic irreducible polynomials of degree d over F_p (ordered).
const std::vector<Poly>& irreducibles(int p, int d);
// (necklace count) number of monic irreducibles of degree d
long necklace_count(int p, int d);

struct NormalMonomial {
    int e1 = 0, e2 = 0;
    std::vector<int> bs;  // exponents of x_s for s >= 3, each < p_s
    friend bool operator==(const NormalMonomial&, const NormalMonomial&) = default;
    friend auto operator<=>(const NormalMonomial&, const NormalMonomial&) = default;
};

// A closed point: exceptional branch i >= 0 (marked points, including weight-1 padding), or
// ordinary with a monic irreducible minimal polynomial in z = x_2^{p_2}/x_1^{p_1}.
struct ClosedPoint {
    int branch = -1;
    Poly poly;  // empty for marked points
    friend bool operator==(const ClosedPoint&, const ClosedPoint&) = default;
    friend auto operator<=>(const ClosedPoint&, const ClosedPoint&) = default;
    bool exceptional() const { return branch >= 0; }
    int residue_degree() const { return branch >= 0 ? 1 : static_cast<int>(poly.size()) - 1; }
};

using DivisorProfile = std::map<ClosedPoint, int>;
using TorsionObject = std::map<ClosedPoint, TubeModule>;

// A homogeneous element of degree x given by the coefficients of F in
// x_1^{b1} x_2^{b2} prod_s x_s^{b_s} * F(X, Y), X = x_1^{p1}, Y = x_2^{p2}; coeffs[k] multiplies X^{a-k} Y^k.
struct Section {
    VecL degree;
    std::vector<int> coeffs;
    bool is_zero() const;
};

// K0 class of a torsion object: S^i_j composition factors at marked points, deg x * len * delta at ordinary points.
Cls torsion_class(const WeightData& w, const TorsionObject& T);

class GRing {
public:
    explicit GRing(const WeightData& w);
    const WeightData& weights() const { return w_; }
    int q() const { return w_.q(); }

    std::vector<NormalMonomial> component_basis(const VecL& x) const;
    int component_dim(const VecL& x) const { return x.a >= 0 ? x.a + 1 : 0; }
    NormalMonomial monomial(const VecL& x, int k) const;  // k-th basis monomial
    Section monomial_section(const NormalMonomial& m) const;
    Section one() const;
    Section x_section(int i) const;  // the generator x_i (0-based branch)

    Section multiply(const Section& s, const Section& t) const;
    DivisorProfile factor(const Section& s) const;
    // coker(O(source) -> O(source + deg s)) as a torsion object
    TorsionObject cokernel_type(const VecL& source, const Section& s) const;
    // torsion type from a divisor profile on the target degree
    TorsionObject divisor_torsion(const VecL& target, const DivisorProfile& D) const;

    long section_cap = 6;  // maximal component dimension enumerated
    void enumerate_sections(const VecL& x, const std::function<void(const Section&)>& fn) const;

    std::vector<ClosedPoint> closed_points(int max_degree) const;
    std::string point_str(const ClosedPoint& x) const;
    // z-value of the marked point with branch i (kInfinity for i = 0)
    int marked_value(int i) const { return w_.lambda(i); }

private:
    WeightData w_;
    int p_;
};

}  // namespace hallcoh
