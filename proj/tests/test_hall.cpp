#include "hallcoh/hall.hpp"

#include <gtest/gtest.h>

using namespace hallcoh;

TEST(Hall, T1Summands) {
    {
        CohModel M(WeightData({2, 2, 2}, 2));
        HallElement T = build_Tr(M, 1);
        EXPECT_TRUE(hall_homogeneous(M, T, M.weights().delta()));
        EXPECT_EQ(T.size(), 3u);
        for (auto& [k, c] : T) EXPECT_EQ(c, QScalar(1));
    }
    {
        CohModel M(WeightData({2, 2, 2}, 3));
        HallElement T = build_Tr(M, 1);
        EXPECT_EQ(T.size(), 4u);
    }
}

TEST(Hall, TrActsOnLines) {
    // [T_r, u_{O(kc)}] = [2r]/r u_{O((k+r)c)}
    for (auto weights : {std::vector<int>{2, 2, 2}, std::vector<int>{2, 3}, std::vector<int>{}}) {
        for (int q : {2, 3}) {
            CohModel M(WeightData(weights, q));
            for (int r = 1; r <= 2; ++r) {
                HallElement T = build_Tr(M, r);
                for (int k = -1; k <= 1; ++k) {
                    HallElement lhs = hall_commutator(M, T, hall_basis(M.line_c(k)));
                    QScalar c = quantum_integer(q, 2 * r) / QScalar(r);
                    HallElement rhs = hall_scale(hall_basis(M.line_c(k + r)), c);
                    EXPECT_TRUE(hall_is_zero(hall_sub(lhs, rhs)))
                        << "q=" << q << " r=" << r << " k=" << k << ": " << hall_str(M, lhs);
                }
            }
        }
    }
}

TEST(Hall, TorsionElementsCommute) {
    CohModel M(WeightData({2, 2, 2}, 2));
    HallElement T1 = build_Tr(M, 1), T2 = build_Tr(M, 2);
    EXPECT_TRUE(hall_is_zero(hall_commutator(M, T1, T2)));
    HallElement p = pi_elem(M, 0, 2, 1);
    EXPECT_TRUE(hall_is_zero(hall_commutator(M, p, hall_basis(M.simple(1, 1)))));
    EXPECT_TRUE(hall_is_zero(hall_commutator(M, p, hall_basis(M.simple(0, 1)))));
}

TEST(Hall, TubeElementClasses) {
    CohModel M(WeightData({3, 2}, 3));
    const WeightData& w = M.weights();
    for (int j = 1; j <= 2; ++j)
        for (int r = 1; r <= 2; ++r)
            EXPECT_TRUE(hall_homogeneous(M, h_tube_elem(M, 0, j, r), cls_scale(w.delta(), r)));
    for (int j = 1; j <= 2; ++j) {
        HallElement e = eta_core_elem(M, 0, j);
        EXPECT_FALSE(e.empty());
        EXPECT_TRUE(hall_homogeneous(M, e, cls_sub(w.delta(), w.simple_class(0, j))));
    }
}

TEST(Hall, T3ActsOnLinesWithCubicPoints) {
    for (auto weights : {std::vector<int>{2, 2, 2}, std::vector<int>{}}) {
        CohModel M(WeightData(weights, 2));
        HallElement T = build_Tr(M, 3);
        HallElement lhs = hall_commutator(M, T, hall_basis(M.line_c(0)));
        HallElement rhs = hall_scale(hall_basis(M.line_c(3)), quantum_integer(2, 6) / QScalar(3));
        EXPECT_TRUE(hall_is_zero(hall_sub(lhs, rhs))) << hall_str(M, lhs);
    }
}
