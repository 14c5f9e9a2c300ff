#include "hallcoh/lattice.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hallcoh {

Cls cls_add(const Cls& x, const Cls& y) {
    Cls r = x;
    for (size_t i = 0; i < r.size(); ++i) r[i] += y[i];
    return r;
}
Cls cls_sub(const Cls& x, const Cls& y) {
    Cls r = x;
    for (size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
    return r;
}
Cls cls_neg(const Cls& x) {
    Cls r = x;
    for (auto& t : r) t = -t;
    return r;
}
Cls cls_scale(const Cls& x, int k) {
    Cls r = x;
    for (auto& t : r) t *= k;
    return r;
}
bool cls_is_zero(const Cls& x) {
    for (int t : x)
        if (t) return false;
    return true;
}
std::string cls_str(const Cls& x) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
    os << ")";
    return os.str();
}

WeightData::WeightData(std::vector<int> weights, int q, std::vector<int> extra) : q_(q) {
    n_ = static_cast<int>(weights.size());
    for (int w : weights)
        if (w < 1) throw std::invalid_argument("weights must be >= 1");
    if (n_ > q + 1) throw std::invalid_argument("more weights than rational points");
    pp_ = weights;
    while (pp_.size() < 2) pp_.push_back(1);
    lam_ = {kInfinity, 0};
    if (pp_.size() >= 3) lam_.push_back(1);
    for (size_t s = 3; s < pp_.size(); ++s) {
        if (s - 3 >= extra.size()) {
            // default: next unused element of F_q
            int v = 2;
            while (true) {
                bool used = false;
                for (int l : lam_)
                    if (l == v) used = true;
                if (!used) break;
                ++v;
            }
            if (v >= q) throw std::invalid_argument("not enough rational points");
            lam_.push_back(v);
        } else {
            int v = extra[s - 3];
            if (v <= 1 || v >= q) throw std::invalid_argument("lambda must lie in F_q minus {0,1}");
            for (int l : lam_)
                if (l == v) throw std::invalid_argument("lambdas must be distinct");
            lam_.push_back(v);
        }
    }
    lcm_ = 1;
    for (int w : pp_) lcm_ = std::lcm(lcm_, w);
    off_.resize(pp_.size());
    int k = 1;
    for (size_t i = 0; i < pp_.size(); ++i) {
        off_[i] = k;
        k += pp_[i] - 1;
    }
    dim_ = k + 1;
    // basis: 0 = [O], alpha_ij, delta
    table_.assign(dim_ * dim_, 0);
    auto T = [&](int x, int y) -> int& { return table_[x * dim_ + y]; };
    const int D = dim_ - 1;
    T(0, 0) = 1;
    T(0, D) = 1;
    T(D, 0) = -1;
    for (size_t i = 0; i < pp_.size(); ++i) {
        int p = pp_[i];
        for (int j = 1; j < p; ++j) {
            if (j == 1) T(off_[i], 0) = -1;
            for (int jj = 1; jj < p; ++jj) {
                int v = (j == jj) ? 1 : 0;
                if (((jj + 1) % p) == j % p) v -= 1;
                T(off_[i] + j - 1, off_[i] + jj - 1) = v;
            }
        }
    }
}

std::string WeightData::describe() const {
    std::ostringstream os;
    os << "p=(";
    for (int i = 0; i < n_; ++i) os << (i ? "," : "") << pp_[i];
    os << ") q=" << q_;
    return os.str();
}

VecL WeightData::normal_form(int a, const std::vector<int>& b) const {
    VecL r;
    r.a = a;
    r.b.assign(pp_.size(), 0);
    for (size_t i = 0; i < pp_.size(); ++i) {
        int bi = i < b.size() ? b[i] : 0;
        int p = pp_[i];
        int qd = bi >= 0 ? bi / p : -((-bi + p - 1) / p);
        r.a += qd;
        r.b[i] = bi - qd * p;
    }
    return r;
}

VecL WeightData::add(const VecL& x, const VecL& y) const {
    std::vector<int> b(pp_.size());
    for (size_t i = 0; i < b.size(); ++i) b[i] = x.b[i] + y.b[i];
    return normal_form(x.a + y.a, b);
}

VecL WeightData::sub(const VecL& x, const VecL& y) const {
    std::vector<int> b(pp_.size());
    for (size_t i = 0; i < b.size(); ++i) b[i] = x.b[i] - y.b[i];
    return normal_form(x.a - y.a, b);
}

VecL WeightData::c_multiple(int k) const { return normal_form(k, {}); }

VecL WeightData::x_vec(int i) const {
    std::vector<int> b(pp_.size(), 0);
    b[i] = 1;
    return normal_form(0, b);
}

int WeightData::degree(const VecL& x) const {
    int d = x.a * lcm_;
    for (size_t i = 0; i < pp_.size(); ++i) d += x.b[i] * (lcm_ / pp_[i]);
    return d;
}

Cls WeightData::delta() const {
    Cls c = zero();
    c[dim_ - 1] = 1;
    return c;
}

Cls WeightData::alpha_star() const {
    Cls c = zero();
    c[0] = 1;
    return c;
}

Cls WeightData::simple_class(int i, int j) const {
    int p = pp_[i];
    j = ((j % p) + p) % p;
    Cls c = zero();
    if (j != 0) {
        c[alpha_index(i, j)] = 1;
        return c;
    }
    c[dim_ - 1] = 1;
    for (int t = 1; t < p; ++t) c[alpha_index(i, t)] = -1;
    return c;
}

Cls WeightData::class_of_line(const VecL& x) const {
    Cls c = zero();
    c[0] = 1;
    c[dim_ - 1] = x.a;
    for (size_t i = 0; i < pp_.size(); ++i)
        for (int j = 1; j <= x.b[i]; ++j) c[alpha_index(static_cast<int>(i), j)] += 1;
    return c;
}

bool WeightData::line_of_class(const Cls& c, VecL& out) const {
    if (c[0] != 1) return false;
    out.a = c[dim_ - 1];
    out.b.assign(pp_.size(), 0);
    for (size_t i = 0; i < pp_.size(); ++i) {
        int p = pp_[i];
        int b = 0;
        bool tail = false;
        for (int j = 1; j < p; ++j) {
            int v = c[alpha_index(static_cast<int>(i), j)];
            if (v == 1 && !tail) ++b;
            else if (v == 0) tail = true;
            else return false;
        }
        out.b[i] = b;
    }
    return true;
}

int WeightData::degree_of(const Cls& c) const {
    // deg alpha_ij = p/p_i, deg delta = p, deg [O] = 0
    int d = c[dim_ - 1] * lcm_;
    for (size_t i = 0; i < pp_.size(); ++i)
        for (int j = 1; j < pp_[i]; ++j) d += c[alpha_index(static_cast<int>(i), j)] * (lcm_ / pp_[i]);
    return d;
}

int WeightData::euler(const Cls& x, const Cls& y) const {
    long s = 0;
    for (int i = 0; i < dim_; ++i) {
        if (!x[i]) continue;
        for (int j = 0; j < dim_; ++j)
            if (y[j]) s += static_cast<long>(x[i]) * table_[i * dim_ + j] * y[j];
    }
    return static_cast<int>(s);
}

}  // namespace hallcoh
