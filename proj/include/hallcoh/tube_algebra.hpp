#pragma once
// Elements of the Hall algebra of one tube: products, special elements (c, p, pi, h),
// Macdonald's symmetric-function picture on C_1, the embedding Psi and the antipode.

#include "hallcoh/tubes.hpp"

#include <map>
#include <vector>

namespace hallcoh {

using TubeElement = std::map<TubeModule, QScalar>;

void add_term(TubeElement& x, const TubeModule& M, const QScalar& c);
TubeElement tube_one();
TubeElement tube_basis(const TubeModule& M);
TubeElement tube_add(const TubeElement& x, const TubeElement& y);
TubeElement tube_scale(const TubeElement& x, const QScalar& c);
TubeElement tube_mul(const Tube& T, const TubeElement& x, const TubeElement& y);
TubeElement tube_commutator(const Tube& T, const TubeElement& x, const TubeElement& y);
bool tube_is_zero(const TubeElement& x);
std::string tube_str(const Tube& T, const TubeElement& x);

// delta_m = (1,...,1)
std::vector<int> tube_delta(const Tube& T, int r = 1);

TubeElement c_lr(const Tube& T, int l, int r);
TubeElement p_lr(const Tube& T, int l, int r);
TubeElement pi_lr(const Tube& T, int l, int r);
// pi_{j+1,k} - (v^k + v^-k) pi_{j,k} + pi_{j-1,k} with pi_{0,k} = 0
TubeElement h_tube(const Tube& T, int j, int k);
// sum over M in M_{j+1, delta - e_j} of (1 - v^2)^{dim End M - 1} u_M (no torus factor, no prefactor)
TubeElement eta_core(const Tube& T, int j);

// C_1 over F_{q^d}: phi_1(e_r) = v_d^{r(r-1)} u_{(1^r)}
TubeElement phi1_e(const Tube& C1, int r);
// phi_1(p_r) via Newton's identities from the phi_1(e_i)
TubeElement phi1_p_newton(const Tube& C1, int r);
// closed formula [r]/r sum_{|mu|=r} n(l(mu)-1) u_{S(mu)}, all with v_d
TubeElement h_bold(const Tube& C1, int r);
// [r]_d / r * phi_1(p_r)
TubeElement h_bold_newton(const Tube& C1, int r);

// u_{S(mu)} -> u_{sum_t S_0(m mu_t)}
TubeElement psi_embed(const TubeElement& x, const Tube& target);

// Extended elements: terms u_M K_mu (u on the left), mu a dimension vector.
using ExtTubeKey = std::pair<TubeModule, std::vector<int>>;
using ExtTubeElement = std::map<ExtTubeKey, QScalar>;

ExtTubeElement ext_mul(const Tube& T, const ExtTubeElement& x, const ExtTubeElement& y);
ExtTubeElement ext_from(const TubeElement& x, const std::vector<int>& mu);
// Recursive antipode from m(S x id)Delta = eps
ExtTubeElement antipode(const Tube& T, const TubeModule& M);
// m(id x S)Delta(u_M) and m(S x id)Delta(u_M); both must be eps(u_M)
ExtTubeElement antipode_axiom_right(const Tube& T, const TubeModule& M);
ExtTubeElement antipode_axiom_left(const Tube& T, const TubeModule& M);

}  // namespace hallcoh
