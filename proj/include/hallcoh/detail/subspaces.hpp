#pragma once

#include "hallcoh/ff.hpp"

#include <vector>

namespace hallcoh {

template <class Fn>
void for_each_subspace(const GF& F, int n, int k, Fn&& f) {
    if (k < 0 || k > n) return;
    std::vector<int> piv(k);
    for (int i = 0; i < k; ++i) piv[i] = i;
    while (true) {
        std::vector<char> is_piv(n, 0);
        for (int p : piv) is_piv[p] = 1;
        // free slots: (column c, row r) with r > piv[c] and r not a pivot row
        std::vector<std::pair<int, int>> slots;
        for (int c = 0; c < k; ++c)
            for (int r = piv[c] + 1; r < n; ++r)
                if (!is_piv[r]) slots.push_back({c, r});
        Mat M(n, k);
        for (int c = 0; c < k; ++c) M.at(piv[c], c) = 1;
        std::vector<int> dig(slots.size(), 0);
        while (true) {
            f(static_cast<const Mat&>(M));
            size_t i = 0;
            for (; i < dig.size(); ++i) {
                dig[i] = (dig[i] + 1) % F.size();
                M.at(slots[i].second, slots[i].first) = dig[i];
                if (dig[i] != 0) break;
            }
            if (i == dig.size()) break;
        }
        // next pivot combination
        int i = k - 1;
        while (i >= 0 && piv[i] == n - k + i) --i;
        if (i < 0) return;
        ++piv[i];
        for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
    }
}

}  // namespace hallcoh
