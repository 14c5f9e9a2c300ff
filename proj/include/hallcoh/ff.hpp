#pragma once
// Small finite fields GF(p^d) by lookup tables, and dense linear algebra over them.

#include <cstdint>
#include <memory>
#include <vector>

namespace hallcoh {

class GF {
public:
    GF(int p, int d);
    static std::shared_ptr<const GF> get(int p, int d);  // cached instances

    int p() const { return p_; }
    int d() const { return d_; }
    int size() const { return Q_; }

    int add(int x, int y) const { return add_[x * Q_ + y]; }
    int sub(int x, int y) const { return add_[x * Q_ + neg_[y]]; }
    int mul(int x, int y) const { return mul_[x * Q_ + y]; }
    int neg(int x) const { return neg_[x]; }
    int inv(int x) const { return inv_[x]; }
    // Embedding of the prime field: integer n mod p.
    int from_int(long n) const;
    // Coefficient vector (length d) of an element over the prime field.
    std::vector<int> coords(int x) const;

private:
    int p_, d_, Q_;
    std::vector<int> add_, mul_, neg_, inv_;
};

using GFPtr = std::shared_ptr<const GF>;

struct Mat {
    int rows = 0, cols = 0;
    std::vector<int> a;
    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}
    int& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    int at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

Mat mat_mul(const GF& F, const Mat& x, const Mat& y);
Mat identity(int n);
// Row-reduces in place; returns pivot columns.
std::vector<int> rref(const GF& F, Mat& m);
int rank(const GF& F, Mat m);
// Basis of {x : m x = 0}, each vector of length m.cols.
std::vector<std::vector<int>> nullspace(const GF& F, Mat m);
// Rank of the span of a list of vectors (all of length n).
int span_rank(const GF& F, const std::vector<std::vector<int>>& vs, int n);
bool invertible(const GF& F, const Mat& m);

// Enumerate all F-linear combinations of a basis; calls f(vector) for each.
template <class Fn>
void for_each_combination(const GF& F, const std::vector<std::vector<int>>& basis, int n, Fn&& f) {
    const int k = static_cast<int>(basis.size());
    std::vector<int> c(k, 0);
    std::vector<int> cur(n, 0);
    while (true) {
        f(static_cast<const std::vector<int>&>(cur), static_cast<const std::vector<int>&>(c));
        int i = 0;
        while (i < k) {
            // increment digit i, updating cur incrementally
            int old = c[i];
            int nw = (old + 1) % F.size();
            for (int t = 0; t < n; ++t) {
                int delta = F.mul(F.sub(nw, old), basis[i][t]);
                cur[t] = F.add(cur[t], delta);
            }
            c[i] = nw;
            if (nw != 0) break;
            ++i;
        }
        if (i == k) return;
    }
}

}  // namespace hallcoh
