#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace cubical {

/// Strictly increasing multi-index over 1..n; the empty index is the
/// degree-0 basis element.
using MultiIndex = std::vector<int>;

namespace exterior {

/// All strictly increasing p-subsets of 1..n, lexicographically ordered.
/// Empty for p < 0 or p > n.
inline std::vector<MultiIndex> basis(int n, int p)
{
    std::vector<MultiIndex> out;
    if (p < 0 || p > n || n < 0)
        return out;
    MultiIndex cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == p) {
            out.push_back(cur);
            return;
        }
        int need = p - static_cast<int>(cur.size());
        for (int i = start; i + need - 1 <= n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 1);
    return out;
}

/// Signed merge of two strictly increasing multi-indices.
/// Returns sign 0 when an index repeats, otherwise the parity of the merge
/// permutation together with the sorted union.
inline std::pair<int, MultiIndex> wedge_basis(const MultiIndex& a, const MultiIndex& b)
{
    MultiIndex merged;
    merged.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    long swaps = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j])
            return {0, {}};
        if (a[i] < b[j]) {
            merged.push_back(a[i++]);
        } else {
            // b[j] moves past the remaining entries of a
            swaps += static_cast<long>(a.size() - i);
            merged.push_back(b[j++]);
        }
    }
    while (i < a.size())
        merged.push_back(a[i++]);
    while (j < b.size())
        merged.push_back(b[j++]);
    return {(swaps % 2 == 0) ? 1 : -1, merged};
}

inline bool valid_multi_index(const MultiIndex& idx, int n)
{
    int prev = 0;
    for (int v : idx) {
        if (v <= prev || v > n)
            return false;
        prev = v;
    }
    return true;
}

}  // namespace exterior

}  // namespace cubical
