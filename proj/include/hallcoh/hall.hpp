#pragma once
// Elements of the Hall algebra of Coh(X) on the supported strata, the tube embeddings Theta_x and the
// composite elements T_r, pi, h and eta built from tube elements.

#include "hallcoh/sheafcat.hpp"
#include "hallcoh/tube_algebra.hpp"

#include <map>
#include <string>

namespace hallcoh {

using HallElement = std::map<SheafKey, QScalar>;

void hall_add_term(HallElement& x, const SheafKey& k, const QScalar& c);
HallElement hall_basis(const SheafKey& k);
HallElement hall_add(const HallElement& x, const HallElement& y);
HallElement hall_sub(const HallElement& x, const HallElement& y);
HallElement hall_scale(const HallElement& x, const QScalar& c);
HallElement hall_mul(const CohModel& M, const HallElement& x, const HallElement& y);
HallElement hall_commutator(const CohModel& M, const HallElement& x, const HallElement& y);
bool hall_is_zero(const HallElement& x);
std::string hall_str(const CohModel& M, const HallElement& x);
// true when every term has class c
bool hall_homogeneous(const CohModel& M, const HallElement& x, const Cls& c);

// Theta_x: the tube algebra at x into the Hall algebra of Coh(X)
HallElement theta(const CohModel& M, const ClosedPoint& x, const TubeElement& t);

// T_r = sum over closed points x of h_{r,x}; marked points contribute Theta(Psi(h_r)), an ordinary
// point of degree d contributes Theta(h_{r/d}) over F_{q^d} when d divides r.
HallElement build_Tr(const CohModel& M, int r);
// Theta_{lambda_i}(pi_{l,r}), Theta_{lambda_i}(h_tube(j, r)), Theta_{lambda_i}(eta_core(j))
HallElement pi_elem(const CohModel& M, int branch, int l, int r);
HallElement h_tube_elem(const CohModel& M, int branch, int j, int r);
HallElement eta_core_elem(const CohModel& M, int branch, int j);

}  // namespace hallcoh
