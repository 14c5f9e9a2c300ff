#include "hallcoh/lattice.hpp"

#include <gtest/gtest.h>

using namespace hallcoh;

TEST(Lattice, NormalForm) {
    WeightData w({2, 2, 2}, 3);
    EXPECT_EQ(w.normal_form(0, {2, 0, 0}), (VecL{1, {0, 0, 0}}));
    EXPECT_EQ(w.normal_form(0, {1, 1, 0}), (VecL{0, {1, 1, 0}}));
    WeightData w23({2, 3}, 2);
    EXPECT_EQ(w23.normal_form(0, {0, 4}), (VecL{1, {0, 1}}));
    EXPECT_EQ(w23.normal_form(0, {0, -1}), (VecL{-1, {0, 2}}));
}

TEST(Lattice, LineClasses) {
    WeightData w({2, 2, 2}, 3);
    Cls star = w.alpha_star();
    EXPECT_EQ(w.class_of_line(w.c_multiple(0)), star);
    EXPECT_EQ(w.class_of_line(w.c_multiple(1)), cls_add(star, w.delta()));
    Cls e = star;
    e[w.alpha_index(0, 1)] += 1;
    EXPECT_EQ(w.class_of_line(w.x_vec(0)), e);
    for (int k = -2; k <= 2; ++k)
        for (int i = 0; i < 3; ++i) {
            VecL x = w.add(w.c_multiple(k), w.x_vec(i));
            EXPECT_EQ(w.class_of_line(w.add(x, w.c_multiple(1))), cls_add(w.class_of_line(x), w.delta()));
            VecL back;
            ASSERT_TRUE(w.line_of_class(w.class_of_line(x), back));
            EXPECT_EQ(back, x);
        }
}

TEST(Lattice, SimplesSumToDelta) {
    for (auto p : std::vector<std::vector<int>>{{2, 2, 2}, {2, 3}, {}, {3, 4}}) {
        WeightData w(p, 5);
        for (int i = 0; i < w.branches(); ++i) {
            Cls s = w.zero();
            for (int j = 0; j < w.weight(i); ++j) s = cls_add(s, w.simple_class(i, j));
            EXPECT_EQ(s, w.delta());
        }
    }
}

TEST(Lattice, EulerTable) {
    WeightData w({2, 3}, 2);
    Cls O = w.alpha_star(), d = w.delta();
    EXPECT_EQ(w.euler(O, O), 1);
    EXPECT_EQ(w.euler(d, O), -1);
    EXPECT_EQ(w.euler(O, d), 1);
    for (int i = 0; i < w.branches(); ++i) {
        int p = w.weight(i);
        for (int j = 0; j < p; ++j)
            for (int jj = 0; jj < p; ++jj) {
                int expect = (p == 1 ? 0 : (j == jj)) - (((jj + 1) % p) == j % p ? 1 : 0);
                if (p == 1) expect = 0;
                EXPECT_EQ(w.euler(w.simple_class(i, j), w.simple_class(i, jj)), expect) << i << j << jj;
            }
    }
    // delta orthogonal to everything under the symmetric form
    for (int k = 0; k < w.rank_k0(); ++k) {
        Cls e = w.zero();
        e[k] = 1;
        EXPECT_EQ(w.sym(d, e), 0);
    }
    for (int k = -2; k <= 2; ++k) {
        Cls L = w.class_of_line(w.c_multiple(k));
        EXPECT_EQ(w.sym(L, L), 2);
    }
    EXPECT_EQ(w.sym(w.simple_class(0, 1), O), -1);
}

TEST(Lattice, StarGraphCartan) {
    WeightData w({2, 3, 4}, 5);
    // index set: star, then (i,j) chains
    auto cartan = [&](int x, int y) -> int {
        if (x == y) return 2;
        auto where = [&](int k, int& i, int& j) {
            for (int a = 0; a < w.branches(); ++a)
                for (int b = 1; b < w.weight(a); ++b)
                    if (w.alpha_index(a, b) == k) { i = a; j = b; }
        };
        int i1 = -1, j1 = 0, i2 = -1, j2 = 0;
        if (x) where(x, i1, j1);
        if (y) where(y, i2, j2);
        if (!x) return j2 == 1 ? -1 : 0;
        if (!y) return j1 == 1 ? -1 : 0;
        return (i1 == i2 && std::abs(j1 - j2) == 1) ? -1 : 0;
    };
    for (int x = 0; x + 1 < w.rank_k0(); ++x)
        for (int y = 0; y + 1 < w.rank_k0(); ++y) {
            Cls a = w.zero(), b = w.zero();
            a[x] = 1;
            b[y] = 1;
            EXPECT_EQ(w.sym(a, b), cartan(x, y)) << x << "," << y;
        }
}

TEST(Lattice, Degrees) {
    WeightData w({2, 2, 2}, 3);
    EXPECT_EQ(w.point_degree(0), 1);
    WeightData w23({2, 3}, 2);
    EXPECT_EQ(w23.point_degree(1), 2);
    EXPECT_EQ(w23.degree(w23.c_multiple(1)), 6);
    EXPECT_EQ(w23.degree_of(w23.delta()), 6);
}

TEST(Lattice, ProjectiveLine) {
    WeightData w({}, 2);
    EXPECT_EQ(w.branches(), 2);
    EXPECT_EQ(w.rank_k0(), 2);
    EXPECT_EQ(w.lcm(), 1);
    EXPECT_THROW(WeightData({2, 2, 2, 2}, 2), std::invalid_argument);
}
