#include "hallcoh/gring.hpp"

#include <gtest/gtest.h>

using namespace hallcoh;

namespace {

Section sec(const VecL& x, std::vector<int> c) { return Section{x, std::move(c)}; }

std::vector<VecL> window(const WeightData& w, int amin, int amax) {
    std::vector<VecL> out;
    std::vector<int> b(w.branches(), 0);
    std::function<void(int)> rec = [&](int i) {
        if (i == w.branches()) {
            for (int a = amin; a <= amax; ++a) out.push_back(w.normal_form(a, b));
            return;
        }
        for (int k = 0; k < w.weight(i); ++k) {
            b[i] = k;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

}  // namespace

TEST(GRing, ComponentDims) {
    WeightData w({2, 2, 2}, 2);
    GRing R(w);
    EXPECT_EQ(R.component_dim(w.c_multiple(0)), 1);
    EXPECT_EQ(R.component_basis(w.x_vec(0)).size(), 1u);
    EXPECT_EQ(R.component_basis(w.x_vec(0))[0].e1, 1);
    auto c = R.component_basis(w.c_multiple(1));
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0].e1, 2);
    EXPECT_EQ(c[1].e2, 2);
    EXPECT_EQ(R.component_dim(w.sub(w.c_multiple(0), w.x_vec(2))), 0);
}

TEST(GRing, DimMatchesEulerForNonnegativeDegree) {
    // Ext^1(O, O(x)) = 0 once a >= -1 on a weighted line, so dim equals the Euler form there.
    for (auto weights : {std::vector<int>{2, 2, 2}, std::vector<int>{2, 3}, std::vector<int>{}}) {
        WeightData w(weights, 3);
        GRing R(w);
        for (auto& x : window(w, 0, 3))
            EXPECT_EQ(R.component_dim(x), w.euler(w.class_of_line(w.c_multiple(0)), w.class_of_line(x)));
    }
}

TEST(GRing, RewriteX3Squared) {
    WeightData w({2, 2, 2}, 2);
    GRing R(w);
    Section x3 = R.x_section(2);
    EXPECT_EQ(x3.degree, w.x_vec(2));
    Section s = R.multiply(x3, x3);
    EXPECT_EQ(s.degree, w.c_multiple(1));
    EXPECT_EQ(s.coeffs, (std::vector<int>{1, 1}));  // x_1^2 + x_2^2
    Section t = R.multiply(R.x_section(0), R.x_section(1));
    EXPECT_EQ(t.degree, w.add(w.x_vec(0), w.x_vec(1)));
    EXPECT_EQ(t.coeffs, (std::vector<int>{1}));
    Section one = R.one();
    Section u = R.multiply(one, s);
    EXPECT_EQ(u.degree, s.degree);
    EXPECT_EQ(u.coeffs, s.coeffs);
}

TEST(GRing, Factor) {
    WeightData w({2, 2, 2}, 2);
    GRing R(w);
    auto D = R.factor(R.x_section(0));
    ASSERT_EQ(D.size(), 1u);
    EXPECT_EQ((D[ClosedPoint{0, {}}]), 1);
    D = R.factor(R.multiply(R.x_section(0), R.x_section(0)));
    EXPECT_EQ((D[ClosedPoint{0, {}}]), 2);
    D = R.factor(sec(w.c_multiple(1), {1, 1}));
    ASSERT_EQ(D.size(), 1u);
    EXPECT_EQ((D[ClosedPoint{2, {}}]), 2);
    EXPECT_THROW(R.factor(sec(w.c_multiple(1), {0, 0})), std::domain_error);
    // z^2 + z + 1 is the ordinary point of degree 2
    D = R.factor(sec(w.c_multiple(2), {1, 1, 1}));
    ASSERT_EQ(D.size(), 1u);
    EXPECT_EQ((D[ClosedPoint{-1, {1, 1, 1}}]), 1);
}

TEST(GRing, Cokernels) {
    WeightData w({2, 2, 2}, 2);
    GRing R(w);
    VecL zero = w.c_multiple(0);
    auto T = R.cokernel_type(zero, R.x_section(0));
    ASSERT_EQ(T.size(), 1u);
    EXPECT_EQ((T[ClosedPoint{0, {}}]), (TubeModule{Segment{1, 1}}));
    EXPECT_EQ(torsion_class(w, T), w.simple_class(0, 1));
    T = R.cokernel_type(zero, R.multiply(R.x_section(0), R.x_section(0)));
    EXPECT_EQ((T[ClosedPoint{0, {}}]), (TubeModule{Segment{0, 2}}));
    T = R.cokernel_type(zero, sec(w.c_multiple(2), {1, 1, 1}));
    EXPECT_EQ((T[ClosedPoint{-1, {1, 1, 1}}]), (TubeModule{Segment{0, 1}}));
    EXPECT_EQ(torsion_class(w, T), cls_scale(w.delta(), 2));
}

TEST(GRing, CokernelClassesMatchLineClasses) {
    for (auto weights : {std::vector<int>{2, 2, 2}, std::vector<int>{2, 3}, std::vector<int>{3}}) {
        for (int q : {2, 3}) {
            WeightData w(weights, q);
            GRing R(w);
            VecL zero = w.c_multiple(0);
            Cls base = w.class_of_line(zero);
            for (auto& x : window(w, 0, 2)) {
                if (R.component_dim(x) > 3) continue;
                R.enumerate_sections(x, [&](const Section& s) {
                    if (s.is_zero()) return;
                    EXPECT_EQ(torsion_class(w, R.cokernel_type(zero, s)), cls_sub(w.class_of_line(x), base));
                });
            }
        }
    }
}

TEST(GRing, FactorsRemultiply) {
    WeightData w({2, 3}, 3);
    GRing R(w);
    for (auto& x : window(w, 0, 2)) {
        R.enumerate_sections(x, [&](const Section& s) {
            if (s.is_zero()) return;
            auto D = R.factor(s);
            Section prod = R.one();
            for (auto& [pt, m] : D) {
                for (int k = 0; k < m; ++k) {
                    if (pt.exceptional()) {
                        prod = R.multiply(prod, R.x_section(pt.branch));
                    } else {
                        VecL dx = w.c_multiple(pt.residue_degree());
                        std::vector<int> c(pt.poly.begin(), pt.poly.end());
                        prod = R.multiply(prod, sec(dx, c));
                    }
                }
            }
            ASSERT_EQ(prod.degree, s.degree);
            // equal up to a unit
            int lead_s = 0, lead_p = 0;
            for (size_t k = 0; k < s.coeffs.size(); ++k)
                if (s.coeffs[k]) {
                    lead_s = s.coeffs[k];
                    lead_p = prod.coeffs[k];
                    break;
                }
            ASSERT_NE(lead_p, 0);
            int u = 0;
            for (int t = 1; t < 3; ++t)
                if ((lead_p * t) % 3 == lead_s) u = t;
            for (size_t k = 0; k < s.coeffs.size(); ++k) EXPECT_EQ(s.coeffs[k], (prod.coeffs[k] * u) % 3);
        });
    }
}

TEST(GRing, EnumerateSections) {
    WeightData w({2, 2, 2}, 2);
    GRing R(w);
    int n = 0;
    R.enumerate_sections(w.sub(w.c_multiple(0), w.x_vec(0)), [&](const Section& s) {
        EXPECT_TRUE(s.is_zero());
        ++n;
    });
    EXPECT_EQ(n, 1);
    n = 0;
    R.enumerate_sections(w.c_multiple(1), [&](const Section&) { ++n; });
    EXPECT_EQ(n, 4);
    WeightData w3({2, 2, 2}, 3);
    GRing R3(w3);
    n = 0;
    R3.enumerate_sections(w3.x_vec(1), [&](const Section&) { ++n; });
    EXPECT_EQ(n, 3);
    R.section_cap = 2;
    EXPECT_THROW(R.enumerate_sections(w.c_multiple(2), [](const Section&) {}), ResourceError);
}

TEST(GRing, ClosedPoints) {
    {
        GRing R(WeightData({2, 2, 2}, 2));
        auto pts = R.closed_points(1);
        EXPECT_EQ(pts.size(), 3u);
        pts = R.closed_points(2);
        ASSERT_EQ(pts.size(), 4u);
        EXPECT_EQ(pts.back().poly, (Poly{1, 1, 1}));
    }
    {
        GRing R(WeightData({2, 2, 2}, 3));
        auto pts = R.closed_points(1);
        ASSERT_EQ(pts.size(), 4u);
        EXPECT_EQ(pts.back().poly, (Poly{1, 1}));  // z + 1 = z - 2
    }
}

TEST(GRing, NecklaceCounts) {
    for (int p : {2, 3, 5}) {
        for (int d = 1; d <= 3; ++d) {
            EXPECT_EQ(static_cast<long>(irreducibles(p, d).size()), necklace_count(p, d));
            GRing R(WeightData({2, 2, 2}, p));
            long ord = 0;
            for (auto& x : R.closed_points(d))
                if (!x.exceptional() && x.residue_degree() == d) ++ord;
            // three marked points are rational and removed at d = 1
            EXPECT_EQ(ord, necklace_count(p, d) - (d == 1 ? 2 : 0));
        }
    }
    EXPECT_EQ(necklace_count(2, 3), 2);
    EXPECT_EQ(necklace_count(3, 2), 3);
}

TEST(Poly, Arithmetic) {
    Poly f{1, 0, 1}, g{1, 1};
    EXPECT_EQ(poly_mul(g, g, 2), f);
    Poly q, r;
    poly_divmod(f, g, 2, q, r);
    EXPECT_EQ(q, g);
    EXPECT_TRUE(r.empty());
    EXPECT_EQ(poly_gcd(f, poly_mul(g, Poly{0, 1}, 2), 2), g);
    EXPECT_EQ(poly_deg(Poly{0, 0}), -1);
    EXPECT_EQ(poly_add(Poly{1, 2}, Poly{2, 1}, 3), Poly{});
}
