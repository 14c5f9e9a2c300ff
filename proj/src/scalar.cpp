#include "hallcoh/scalar.hpp"

#include <sstream>

namespace hallcoh {

QScalar::QScalar(const mpq_class& a, const mpq_class& b, int q) : a_(a), b_(b), q_(q) {
    a_.canonicalize();
    b_.canonicalize();
    if (sgn(b_) != 0 && q_ == 0) throw std::invalid_argument("QScalar: irrational part needs q");
}

QScalar QScalar::rational(const mpq_class& a, int q) { return QScalar(a, 0, q); }

int QScalar::join(const QScalar& o) const {
    if (q_ == 0) return o.q_;
    if (o.q_ == 0 || o.q_ == q_) return q_;
    throw std::invalid_argument("QScalar: mixing different q");
}

QScalar QScalar::operator-() const {
    QScalar r = *this;
    r.a_ = -a_;
    r.b_ = -b_;
    return r;
}

QScalar& QScalar::operator+=(const QScalar& o) {
    q_ = join(o);
    a_ += o.a_;
    b_ += o.b_;
    return *this;
}

QScalar& QScalar::operator-=(const QScalar& o) {
    q_ = join(o);
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
}

QScalar& QScalar::operator*=(const QScalar& o) {
    q_ = join(o);
    if (sgn(b_) == 0 && sgn(o.b_) == 0) {
        a_ *= o.a_;
        return *this;
    }
    mpq_class na = a_ * o.a_ + b_ * o.b_ * q_;
    mpq_class nb = a_ * o.b_ + b_ * o.a_;
    a_ = na;
    b_ = nb;
    return *this;
}

QScalar QScalar::inverse() const {
    if (is_zero()) throw std::domain_error("QScalar: division by zero");
    if (sgn(b_) == 0) return QScalar(1 / a_, 0, q_);
    mpq_class n = a_ * a_ - b_ * b_ * q_;
    // n == 0 would mean q is a square; ruled out at configuration time.
    if (sgn(n) == 0) throw std::domain_error("QScalar: zero norm (square q?)");
    return QScalar(a_ / n, -b_ / n, q_);
}

QScalar& QScalar::operator/=(const QScalar& o) { return *this *= o.inverse(); }

std::string QScalar::str() const {
    std::ostringstream os;
    if (sgn(b_) == 0) {
        os << a_.get_str();
        return os.str();
    }
    if (sgn(a_) != 0) os << a_.get_str() << (sgn(b_) > 0 ? "+" : "-");
    else if (sgn(b_) < 0) os << "-";
    mpq_class ab = abs(b_);
    if (ab != 1) os << ab.get_str() << "*";
    os << "v";
    return os.str();
}

bool admissible_q(int q) { return q == 2 || q == 3 || q == 5 || q == 7; }

QScalar qv_pow(int q, long n) {
    long h = n >= 0 ? n / 2 : -((-n + 1) / 2);  // floor(n/2)
    mpq_class p = 1;
    mpz_class qz = q;
    mpz_class e;
    mpz_pow_ui(e.get_mpz_t(), qz.get_mpz_t(), static_cast<unsigned long>(h >= 0 ? h : -h));
    p = h >= 0 ? mpq_class(e) : mpq_class(1) / mpq_class(e);
    if (n - 2 * h == 0) return QScalar(p, 0, q);
    return QScalar(0, p, q);
}

QScalar quantum_integer_d(int q, int d, long n) {
    if (n == 0) return QScalar::rational(0, q);
    if (n < 0) return -quantum_integer_d(q, d, -n);
    // [n]_w = w^{n-1} + w^{n-3} + ... + w^{1-n}, w = v^d
    QScalar s = QScalar::rational(0, q);
    for (long k = n - 1; k >= 1 - n; k -= 2) s += qv_pow(q, k * d);
    return s;
}

QScalar quantum_integer(int q, long n) { return quantum_integer_d(q, 1, n); }

QScalar quantum_factorial(int q, long n) {
    QScalar r = QScalar::rational(1, q);
    for (long k = 2; k <= n; ++k) r *= quantum_integer(q, k);
    return r;
}

QScalar quantum_binomial(int q, long n, long t) {
    if (n < 0 || t < 0 || t > n) throw std::domain_error("quantum_binomial: need 0 <= t <= n");
    return quantum_factorial(q, n) / (quantum_factorial(q, t) * quantum_factorial(q, n - t));
}

QScalar n_factor_d(int q, int d, long l) {
    QScalar r = QScalar::rational(1, q);
    for (long i = 1; i <= l; ++i) r *= QScalar::rational(1, q) - qv_pow(q, 2 * i * d);
    return r;
}

QScalar n_factor(int q, long l) { return n_factor_d(q, 1, l); }

}  // namespace hallcoh
