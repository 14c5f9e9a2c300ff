#pragma once
// Exact arithmetic in Q(v), v = sqrt(q), q a non-square.

#include <gmpxx.h>

#include <ostream>
#include <stdexcept>
#include <string>

namespace hallcoh {

class QScalar {
public:
    QScalar() = default;
    QScalar(long n) : a_(n) {}  // q-free rational literal
    QScalar(const mpq_class& a, const mpq_class& b, int q);
    static QScalar rational(const mpq_class& a, int q = 0);

    const mpq_class& a() const { return a_; }
    const mpq_class& b() const { return b_; }
    int q() const { return q_; }

    bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
    bool is_rational() const { return sgn(b_) == 0; }

    QScalar operator-() const;
    QScalar& operator+=(const QScalar& o);
    QScalar& operator-=(const QScalar& o);
    QScalar& operator*=(const QScalar& o);
    QScalar& operator/=(const QScalar& o);
    QScalar inverse() const;

    friend QScalar operator+(QScalar x, const QScalar& y) { return x += y; }
    friend QScalar operator-(QScalar x, const QScalar& y) { return x -= y; }
    friend QScalar operator*(QScalar x, const QScalar& y) { return x *= y; }
    friend QScalar operator/(QScalar x, const QScalar& y) { return x /= y; }
    friend bool operator==(const QScalar& x, const QScalar& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const QScalar& x, const QScalar& y) { return !(x == y); }

    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const QScalar& x) { return os << x.str(); }

private:
    int join(const QScalar& o) const;
    mpq_class a_{0}, b_{0};
    int q_ = 0;
};

// A q value is admissible when it lies in {2,3,5,7}.
bool admissible_q(int q);

QScalar qv_pow(int q, long n);
QScalar quantum_integer(int q, long n);
// Same bracket with v replaced by v^d.
QScalar quantum_integer_d(int q, int d, long n);
QScalar quantum_factorial(int q, long n);
QScalar quantum_binomial(int q, long n, long t);
QScalar n_factor(int q, long l);
QScalar n_factor_d(int q, int d, long l);

}  // namespace hallcoh
