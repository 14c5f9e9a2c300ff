#include "hallcoh/tube_algebra.hpp"

#include <gtest/gtest.h>

using namespace hallcoh;

namespace {
QScalar R(long n, int q) { return QScalar::rational(n, q); }
QScalar v(int q) { return QScalar(0, 1, q); }
TubeModule sum(const Tube& T, std::initializer_list<TubeModule> xs) {
    TubeModule r;
    for (auto& x : xs) r = T.direct_sum(r, x);
    return r;
}
}  // namespace

TEST(TubeAlgebra, CElements) {
    for (int q : {2, 3}) {
        Tube C2(2, q);
        EXPECT_TRUE(tube_is_zero(c_lr(C2, 0, 1)));
        TubeElement c11 = c_lr(C2, 1, 1);
        EXPECT_EQ(c11, (TubeElement{{C2.segment(2, 2), qv_pow(q, -2) * R(q - 1, q)}}));
        TubeElement want;
        add_term(want, C2.segment(1, 2), R(-(q - 1), q));
        add_term(want, C2.segment(2, 2), R(-(q - 1), q));
        add_term(want, sum(C2, {C2.simple(1), C2.simple(2)}), R((q - 1) * (q - 1), q));
        EXPECT_EQ(c_lr(C2, 2, 1), tube_scale(want, -qv_pow(q, -4)));
    }
}

TEST(TubeAlgebra, PandPi) {
    for (int q : {2, 3}) {
        Tube C2(2, q);
        EXPECT_TRUE(tube_is_zero(p_lr(C2, 0, 2)));
        EXPECT_EQ(p_lr(C2, 1, 1), tube_basis(C2.segment(2, 2)));
        EXPECT_EQ(pi_lr(C2, 1, 1), tube_basis(C2.segment(2, 2)));
        // homogeneity of h
        for (int k = 1; k <= 2; ++k)
            for (auto& [M, c] : h_tube(C2, 1, k)) EXPECT_EQ(C2.dimvec(M), tube_delta(C2, k));
    }
}

TEST(TubeAlgebra, PiMCentral) {
    for (int m : {1, 2, 3})
        for (int r = 1; r <= 2; ++r) {
            Tube T(m, 2);
            TubeElement pm = pi_lr(T, m, r);
            for (int j = 0; j < m; ++j)
                EXPECT_TRUE(tube_is_zero(tube_commutator(T, pm, tube_basis(T.simple(j))))) << m << " " << r << " " << j;
        }
}

TEST(TubeAlgebra, HBoldSmall) {
    for (int q : {2, 3}) {
        for (int d : {1, 2}) {
            Tube C1(1, q, d);
            EXPECT_EQ(h_bold(C1, 1), tube_basis(C1.simple(0)));
            TubeElement want;
            add_term(want, C1.segment(0, 2), R(1, q));
            add_term(want, partition_module({1, 1}), R(1, q) - qv_pow(q, 2 * d));
            EXPECT_EQ(h_bold(C1, 2), tube_scale(want, quantum_integer_d(q, d, 2) / QScalar(2)));
            EXPECT_EQ(phi1_e(C1, 2), (TubeElement{{partition_module({1, 1}), qv_pow(q, 2 * d)}}));
        }
    }
}

TEST(TubeAlgebra, NewtonAgreesWithClosedFormula) {
    for (int q : {2, 3})
        for (int d : {1, 2}) {
            Tube C1(1, q, d);
            for (int r = 1; r <= 3; ++r) EXPECT_EQ(h_bold(C1, r), h_bold_newton(C1, r)) << q << d << r;
        }
}

TEST(TubeAlgebra, PhiIsMultiplicative) {
    // e_1^2 = e_2 + ... : in terms of monomials e_1 e_1 is just the product; compare with the
    // expansion h_2-like identity p_2 = e_1^2 - 2 e_2
    Tube C1(1, 2);
    TubeElement e1 = phi1_e(C1, 1), e2 = phi1_e(C1, 2);
    TubeElement lhs = phi1_p_newton(C1, 2);
    TubeElement rhs = tube_add(tube_mul(C1, e1, e1), tube_scale(e2, QScalar(-2)));
    EXPECT_EQ(lhs, rhs);
    // commutativity of the image
    EXPECT_TRUE(tube_is_zero(tube_commutator(C1, e1, e2)));
}

TEST(TubeAlgebra, PsiEmbedding) {
    Tube C1(1, 2);
    for (int m : {2, 3}) {
        Tube T(m, 2);
        EXPECT_EQ(psi_embed(tube_basis(C1.simple(0)), T), tube_basis(T.segment(0, m)));
        EXPECT_EQ(psi_embed(tube_one(), T), tube_one());
        std::vector<TubeElement> xs{tube_basis(C1.simple(0)), tube_basis(C1.segment(0, 2)),
                                    tube_basis(partition_module({1, 1}))};
        for (auto& x : xs)
            for (auto& y : xs) {
                if (m == 3 && (x.begin()->first.size() + y.begin()->first.size() > 2 ||
                               C1.length(x.begin()->first) + C1.length(y.begin()->first) > 3))
                    continue;
                EXPECT_EQ(psi_embed(tube_mul(C1, x, y), T), tube_mul(T, psi_embed(x, T), psi_embed(y, T)));
            }
    }
}

TEST(TubeAlgebra, EtaCore) {
    Tube C2(2, 2);
    EXPECT_EQ(eta_core(C2, 1), tube_basis(C2.simple(2)));
}

TEST(TubeAlgebra, Antipode) {
    for (int m : {1, 2}) {
        Tube T(m, 2);
        std::vector<int> zero(m, 0);
        TubeModule S = T.simple(0);
        std::vector<int> e = T.dimvec(S);
        std::vector<int> me = e;
        for (auto& x : me) x = -x;
        // S(u_S) = -K_{-S} u_S = -v^{-(S,S)} u_S K_{-S}
        int ss = 2 * T.euler(e, e);
        EXPECT_EQ(antipode(T, S), (ExtTubeElement{{{S, me}, -T.vpow(-ss)}}));
        ExtTubeElement eps_zero;
        for (int tot = 1; tot <= 3; ++tot) {
            std::vector<int> d(m, 0);
            for (int i = 0; i < tot; ++i) d[i % m]++;
            for (auto& M : T.modules_of_dim(d)) {
                EXPECT_TRUE(antipode_axiom_right(T, M).empty()) << T.str(M);
                EXPECT_TRUE(antipode_axiom_left(T, M).empty()) << T.str(M);
            }
        }
        // anti-multiplicativity S(xy) = S(y) S(x) on simples
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                ExtTubeElement lhs;
                for (auto& [C, c] : T.mul(T.simple(i), T.simple(j)))
                    for (auto& [k, a] : antipode(T, C)) {
                        auto it = lhs.find(k);
                        QScalar val = (it == lhs.end() ? QScalar(0) : it->second) + c * a;
                        if (val.is_zero()) lhs.erase(k);
                        else lhs[k] = val;
                    }
                EXPECT_EQ(lhs, ext_mul(T, antipode(T, T.simple(j)), antipode(T, T.simple(i))));
            }
    }
}
