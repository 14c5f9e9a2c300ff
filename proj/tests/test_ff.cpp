#include "hallcoh/ff.hpp"
#include "hallcoh/tubes.hpp"

#include <gtest/gtest.h>

using namespace hallcoh;

TEST(FiniteField, AxiomsSmallFields) {
    for (auto [p, d] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {3, 2}, {2, 3}}) {
        GF F(p, d);
        int Q = F.size();
        for (int x = 0; x < Q; ++x) {
            EXPECT_EQ(F.add(x, F.neg(x)), 0);
            if (x) EXPECT_EQ(F.mul(x, F.inv(x)), 1);
            for (int y = 0; y < Q; ++y)
                for (int z = 0; z < Q; ++z) {
                    EXPECT_EQ(F.mul(F.mul(x, y), z), F.mul(x, F.mul(y, z)));
                    EXPECT_EQ(F.mul(x, F.add(y, z)), F.add(F.mul(x, y), F.mul(x, z)));
                }
        }
    }
}

TEST(FiniteField, SubspaceCountIsGaussianBinomial) {
    // [4 choose 2]_2 = 35, [3 choose 1]_3 = 13
    auto count = [](const GF& F, int n, int k) {
        long c = 0;
        for_each_subspace(F, n, k, [&](const Mat& M) {
            EXPECT_EQ(rank(F, M), k);
            ++c;
        });
        return c;
    };
    EXPECT_EQ(count(GF(2, 1), 4, 2), 35);
    EXPECT_EQ(count(GF(3, 1), 3, 1), 13);
    EXPECT_EQ(count(GF(2, 2), 2, 1), 5);
    EXPECT_EQ(count(GF(2, 1), 3, 0), 1);
}

TEST(FiniteField, Nullspace) {
    GF F(3, 1);
    Mat m(2, 3);
    m.at(0, 0) = 1; m.at(0, 1) = 2;
    m.at(1, 2) = 1;
    auto ns = nullspace(F, m);
    ASSERT_EQ(ns.size(), 1u);
    EXPECT_EQ(F.add(ns[0][0], F.mul(2, ns[0][1])), 0);
    EXPECT_EQ(ns[0][2], 0);
}
