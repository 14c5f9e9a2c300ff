#pragma once
// Grading group L(p), the Grothendieck group in the basis (a_*, a_ij, delta), and the Euler form.

#include <string>
#include <vector>

namespace hallcoh {

// Classes in K0 are integer vectors: [star, a_{1,1..p1-1}, ..., a_{n,1..pn-1}, delta].
using Cls = std::vector<int>;

Cls cls_add(const Cls& x, const Cls& y);
Cls cls_sub(const Cls& x, const Cls& y);
Cls cls_neg(const Cls& x);
Cls cls_scale(const Cls& x, int k);
bool cls_is_zero(const Cls& x);
std::string cls_str(const Cls& x);

constexpr int kInfinity = -1;  // lambda encoding of the point at infinity

struct VecL {
    int a = 0;           // multiple of c
    std::vector<int> b;  // 0 <= b_i < p_i
    friend bool operator==(const VecL&, const VecL&) = default;
    friend auto operator<=>(const VecL&, const VecL&) = default;
};

class WeightData {
public:
    // weights may be empty (ordinary projective line); lambdas of the
    // user-supplied marked points beyond the third are given in F_q.
    WeightData(std::vector<int> weights, int q, std::vector<int> extra_lambdas = {});

    int q() const { return q_; }
    int n() const { return n_; }                     // user-visible number of weights
    int branches() const { return static_cast<int>(pp_.size()); }  // padded, >= 2
    int weight(int i) const { return pp_[i]; }       // 0-based branch
    const std::vector<int>& weights() const { return pp_; }
    int lambda(int i) const { return lam_[i]; }      // kInfinity, 0, 1, ...
    int lcm() const { return lcm_; }
    int rank_k0() const { return dim_; }
    int star_index() const { return 0; }
    int delta_index() const { return dim_ - 1; }
    int alpha_index(int i, int j) const { return off_[i] + j - 1; }  // 1 <= j <= p_i-1
    std::string describe() const;

    VecL normal_form(int a, const std::vector<int>& b) const;
    VecL add(const VecL& x, const VecL& y) const;
    VecL sub(const VecL& x, const VecL& y) const;
    VecL c_multiple(int k) const;
    VecL x_vec(int i) const;  // x_i
    int degree(const VecL& x) const;  // deg x_i = p/p_i, deg c = p

    Cls zero() const { return Cls(dim_, 0); }
    Cls delta() const;
    Cls alpha_star() const;
    Cls simple_class(int i, int j) const;  // S^i_j, j taken mod p_i
    Cls class_of_line(const VecL& x) const;
    // Inverse of class_of_line on rank-one classes; false when not the class of a line bundle.
    bool line_of_class(const Cls& c, VecL& out) const;
    int rank_of(const Cls& c) const { return c[0]; }
    int degree_of(const Cls& c) const;  // additive degree; deg S^i_j = p/p_i, deg O = 0

    int euler(const Cls& x, const Cls& y) const;
    int sym(const Cls& x, const Cls& y) const { return euler(x, y) + euler(y, x); }
    int point_degree(int i) const { return lcm_ / pp_[i]; }

private:
    int q_, n_;
    std::vector<int> pp_, lam_, off_;
    int lcm_ = 1, dim_ = 0;
    std::vector<int> table_;  // Euler form on basis vectors
};

}  // namespace hallcoh
