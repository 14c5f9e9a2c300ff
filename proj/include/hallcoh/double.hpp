#pragma once
// The reduced Drinfeld double of the Hall algebra of Coh(X): elements in the normal form
// u+_a K_mu u-_b, straightening of u-u+ by the double relations, the skew-Hopf pairing, and the
// loop-algebra generators with their generating series.

#include "hallcoh/hall.hpp"

#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

namespace hallcoh {

struct DKey {
    SheafKey plus;
    Cls torus;
    SheafKey minus;
    friend bool operator==(const DKey&, const DKey&) = default;
    friend auto operator<=>(const DKey&, const DKey&) = default;
};

using DoubleElement = std::map<DKey, QScalar>;

void d_add_term(DoubleElement& x, const DKey& k, const QScalar& c);
DoubleElement d_add(const DoubleElement& x, const DoubleElement& y);
DoubleElement d_sub(const DoubleElement& x, const DoubleElement& y);
DoubleElement d_scale(const DoubleElement& x, const QScalar& c);
bool d_is_zero(const DoubleElement& x);

class DoubleAlgebra {
public:
    explicit DoubleAlgebra(const CohModel& M) : M_(M) {}
    const CohModel& model() const { return M_; }
    const WeightData& weights() const { return M_.weights(); }

    DoubleElement one() const;
    DoubleElement torus(const Cls& mu) const;
    // sum c u+_a K_mu
    DoubleElement plus(const HallElement& x, const Cls& mu) const;
    DoubleElement plus(const HallElement& x) const { return plus(x, M_.weights().zero()); }
    // sum c K_nu u-_b
    DoubleElement minus(const HallElement& x, const Cls& nu) const;
    DoubleElement minus(const HallElement& x) const { return minus(x, M_.weights().zero()); }

    DoubleElement mul(const DoubleElement& x, const DoubleElement& y) const;
    DoubleElement commutator(const DoubleElement& x, const DoubleElement& y) const;
    // u-_a u+_b in normal form
    const DoubleElement& straighten(const SheafKey& a, const SheafKey& b) const;

    // phi(K_mu u+_alpha, K_nu u-_beta) extended bilinearly; x has no minus parts, y no plus parts
    QScalar pairing(const DoubleElement& x, const DoubleElement& y) const;

    // image under K_delta -> 1
    DoubleElement central_reduce(const DoubleElement& x) const;
    std::string str(const DoubleElement& x) const;
    size_t straighten_cache_size() const;
    // memo snapshot in key order, and preloading from a trusted snapshot
    std::vector<std::tuple<SheafKey, SheafKey, DoubleElement>> straighten_table() const;
    void preload_straighten(const SheafKey& a, const SheafKey& b, DoubleElement value) const;

private:
    DoubleElement compute_straighten(const SheafKey& a, const SheafKey& b) const;
    int form(const Cls& x, const Cls& y) const { return M_.weights().sym(x, y); }

    const CohModel& M_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<SheafKey, SheafKey>, DoubleElement> memo_;
};

// A vertex of the star graph: the centre (branch < 0) or [i, j] with 1 <= j <= p_i - 1.
struct Vertex {
    int branch = -1;
    int j = 0;
    bool star() const { return branch < 0; }
    friend bool operator==(const Vertex&, const Vertex&) = default;
    friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

std::string vertex_name(const Vertex& s);

class Generators {
public:
    explicit Generators(const DoubleAlgebra& D) : D_(D) {}
    const DoubleAlgebra& algebra() const { return D_; }

    // star first, then [i, j] for every branch of weight >= 2
    std::vector<Vertex> vertices() const;
    Cls k_class(const Vertex& s) const;
    int cartan(const Vertex& s, const Vertex& t) const;
    DoubleElement K(const Vertex& s, int power = 1) const;

    const DoubleElement& h(const Vertex& s, int r) const;
    const DoubleElement& xplus(const Vertex& s, int t) const;
    const DoubleElement& xminus(const Vertex& s, int t) const;
    // psi_{s,m}, phi_{s,m}, and theta_{*,m} (the series without K)
    const DoubleElement& psi(const Vertex& s, int m) const;
    const DoubleElement& phi(const Vertex& s, int m) const;
    const DoubleElement& theta_star(int m) const;

private:
    DoubleElement compute(char kind, const Vertex& s, int t) const;
    const DoubleElement& get(char kind, const Vertex& s, int t) const;
    DoubleElement exp_coeff(const Vertex& s, int m, int sign) const;

    const DoubleAlgebra& D_;
    mutable std::mutex mu_;
    mutable std::map<std::tuple<char, Vertex, int>, DoubleElement> memo_;
};

}  // namespace hallcoh
