#include "hallcoh/scalar.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hallcoh;

namespace {
QScalar R(long n, long d, int q) { return QScalar::rational(mpq_class(n, d), q); }
QScalar V(int q) { return QScalar(0, 1, q); }
}  // namespace

TEST(Scalar, VSquaredIsQ) {
    for (int q : {2, 3, 5, 7}) EXPECT_EQ(V(q) * V(q), R(q, 1, q));
}

TEST(Scalar, Powers) {
    EXPECT_EQ(qv_pow(2, 0), R(1, 1, 2));
    EXPECT_EQ(qv_pow(2, 2), R(2, 1, 2));
    EXPECT_EQ(qv_pow(2, -1), QScalar(0, mpq_class(1, 2), 2));
    EXPECT_EQ(qv_pow(3, 5) * qv_pow(3, -7), qv_pow(3, -2));
    EXPECT_EQ(qv_pow(2, 3).a(), 0);
}

TEST(Scalar, QuantumIntegers) {
    EXPECT_EQ(quantum_integer(2, 1), R(1, 1, 2));
    EXPECT_EQ(quantum_integer(3, 2), V(3) + V(3).inverse());
    EXPECT_EQ(quantum_integer(2, 3), R(7, 2, 2));
    EXPECT_EQ(quantum_integer(2, 0), R(0, 1, 2));
    EXPECT_EQ(quantum_integer(5, -3), -quantum_integer(5, 3));
    for (int q : {2, 3})
        for (int n = -10; n <= 10; ++n)
            EXPECT_EQ(quantum_integer(q, n) * (V(q) - V(q).inverse()), qv_pow(q, n) - qv_pow(q, -n));
}

TEST(Scalar, Binomials) {
    EXPECT_EQ(quantum_binomial(2, 5, 0), R(1, 1, 2));
    EXPECT_EQ(quantum_binomial(2, 2, 1), V(2) + V(2).inverse());
    EXPECT_EQ(quantum_binomial(2, 3, 1), R(7, 2, 2));
    EXPECT_THROW(quantum_binomial(2, 2, 3), std::domain_error);
    for (int q : {2, 3})
        for (int n = 1; n <= 8; ++n)
            for (int t = 1; t < n; ++t)
                EXPECT_EQ(quantum_binomial(q, n, t),
                          qv_pow(q, t) * quantum_binomial(q, n - 1, t) +
                              qv_pow(q, t - n) * quantum_binomial(q, n - 1, t - 1));
}

TEST(Scalar, NFactor) {
    EXPECT_EQ(n_factor(2, 0), R(1, 1, 2));
    EXPECT_EQ(n_factor(3, 1), R(1, 1, 3) - V(3) * V(3));
    EXPECT_EQ(n_factor(2, 2), R(3, 1, 2));
}

TEST(Scalar, FieldAxiomsRandom) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(-9, 9);
    for (int q : {2, 3, 5, 7}) {
        auto rnd = [&] { return QScalar(mpq_class(d(rng), 1 + std::abs(d(rng))), mpq_class(d(rng), 1 + std::abs(d(rng))), q); };
        for (int it = 0; it < 200; ++it) {
            QScalar x = rnd(), y = rnd(), z = rnd();
            EXPECT_EQ((x * y) * z, x * (y * z));
            EXPECT_EQ(x * (y + z), x * y + x * z);
            if (!x.is_zero()) EXPECT_EQ(x * x.inverse(), R(1, 1, q));
        }
    }
}

TEST(Scalar, Rendering) {
    EXPECT_EQ(R(7, 2, 2).str(), "7/2");
    EXPECT_EQ(qv_pow(2, -1).str(), "1/2*v");
    EXPECT_EQ((R(1, 1, 3) - V(3)).str(), "1-v");
}
