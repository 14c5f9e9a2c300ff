#include "hallcoh/ff.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace hallcoh {

namespace {

std::vector<int> to_digits(int x, int p, int d) {
    std::vector<int> r(d);
    for (int i = 0; i < d; ++i) {
        r[i] = x % p;
        x /= p;
    }
    return r;
}

int from_digits(const std::vector<int>& r, int p) {
    int x = 0;
    for (int i = static_cast<int>(r.size()) - 1; i >= 0; --i) x = x * p + r[i];
    return x;
}

// Product of two polynomials of degree < d reduced modulo monic f (f has d+1 coefficients).
std::vector<int> polymulmod(const std::vector<int>& x, const std::vector<int>& y,
                            const std::vector<int>& f, int p) {
    const int d = static_cast<int>(f.size()) - 1;
    std::vector<int> r(2 * d, 0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) r[i + j] = (r[i + j] + x[i] * y[j]) % p;
    for (int k = 2 * d - 1; k >= d; --k) {
        int c = r[k];
        if (!c) continue;
        r[k] = 0;
        for (int t = 0; t < d; ++t) r[k - d + t] = ((r[k - d + t] - c * f[t]) % p + p) % p;
    }
    r.resize(d);
    return r;
}

}  // namespace

GF::GF(int p, int d) : p_(p), d_(d) {
    if (p < 2 || d < 1) throw std::invalid_argument("GF: bad parameters");
    Q_ = 1;
    for (int i = 0; i < d; ++i) Q_ *= p;
    add_.assign(Q_ * Q_, 0);
    mul_.assign(Q_ * Q_, 0);
    neg_.assign(Q_, 0);
    inv_.assign(Q_, 0);
    std::vector<std::vector<int>> dig(Q_);
    for (int x = 0; x < Q_; ++x) dig[x] = to_digits(x, p, d);
    for (int x = 0; x < Q_; ++x) {
        std::vector<int> n(d);
        for (int i = 0; i < d; ++i) n[i] = (p - dig[x][i]) % p;
        neg_[x] = from_digits(n, p);
        for (int y = 0; y < Q_; ++y) {
            std::vector<int> s(d);
            for (int i = 0; i < d; ++i) s[i] = (dig[x][i] + dig[y][i]) % p;
            add_[x * Q_ + y] = from_digits(s, p);
        }
    }
    // search a monic modulus without zero divisors
    std::vector<int> f(d + 1, 0);
    f[d] = 1;
    bool found = false;
    for (int code = 0; code < Q_ && !found; ++code) {
        auto low = to_digits(code, p, d);
        for (int i = 0; i < d; ++i) f[i] = low[i];
        bool ok = true;
        for (int x = 1; x < Q_ && ok; ++x)
            for (int y = 1; y < Q_ && ok; ++y) {
                int z = from_digits(polymulmod(dig[x], dig[y], f, p), p);
                if (z == 0) ok = false;
                mul_[x * Q_ + y] = z;
            }
        found = ok;
    }
    if (!found) throw std::logic_error("GF: no irreducible modulus");
    for (int x = 1; x < Q_; ++x)
        for (int y = 1; y < Q_; ++y)
            if (mul_[x * Q_ + y] == 1) inv_[x] = y;
}

GFPtr GF::get(int p, int d) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, GFPtr> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto& slot = cache[{p, d}];
    if (!slot) slot = std::make_shared<GF>(p, d);
    return slot;
}

int GF::from_int(long n) const { return static_cast<int>(((n % p_) + p_) % p_); }

std::vector<int> GF::coords(int x) const { return to_digits(x, p_, d_); }

Mat mat_mul(const GF& F, const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("mat_mul: shape");
    Mat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            int c = x.at(i, k);
            if (!c) continue;
            for (int j = 0; j < y.cols; ++j)
                if (y.at(k, j)) r.at(i, j) = F.add(r.at(i, j), F.mul(c, y.at(k, j)));
        }
    return r;
}

Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

std::vector<int> rref(const GF& F, Mat& m) {
    std::vector<int> piv;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int s = -1;
        for (int i = r; i < m.rows; ++i)
            if (m.at(i, c)) {
                s = i;
                break;
            }
        if (s < 0) continue;
        if (s != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(s, j), m.at(r, j));
        int iv = F.inv(m.at(r, c));
        for (int j = c; j < m.cols; ++j) m.at(r, j) = F.mul(m.at(r, j), iv);
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || !m.at(i, c)) continue;
            int f = m.at(i, c);
            for (int j = c; j < m.cols; ++j)
                if (m.at(r, j)) m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(r, j)));
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

int rank(const GF& F, Mat m) { return static_cast<int>(rref(F, m).size()); }

std::vector<std::vector<int>> nullspace(const GF& F, Mat m) {
    auto piv = rref(F, m);
    std::vector<char> is_piv(m.cols, 0);
    for (int c : piv) is_piv[c] = 1;
    std::vector<std::vector<int>> basis;
    for (int fc = 0; fc < m.cols; ++fc) {
        if (is_piv[fc]) continue;
        std::vector<int> x(m.cols, 0);
        x[fc] = 1;
        for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = F.neg(m.at(static_cast<int>(r), fc));
        basis.push_back(std::move(x));
    }
    return basis;
}

int span_rank(const GF& F, const std::vector<std::vector<int>>& vs, int n) {
    Mat m(static_cast<int>(vs.size()), n);
    for (size_t i = 0; i < vs.size(); ++i)
        for (int j = 0; j < n; ++j) m.at(static_cast<int>(i), j) = vs[i][j];
    return rank(F, m);
}

bool invertible(const GF& F, const Mat& m) { return m.rows == m.cols && rank(F, m) == m.rows; }

}  // namespace hallcoh
