#pragma once

// Brute-force oracles used to pin expected values in tests.  Everything here
// is enumeration-based and independent of the library's formula paths.

#include <vector>

#include "spinmf/combinatorics.hpp"
#include "spinmf/partitions.hpp"

namespace oracles {

using spinmf::CycleType;
using spinmf::Partition;

// content as a literal sum of (column - row) over boxes
inline long long content_by_boxes(const Partition& lam) {
    long long ct = 0;
    for (int i = 0; i < lam.length(); ++i)
        for (int j = 0; j < lam.part(i); ++j) ct += j - i;
    return ct;
}

// number of semistandard tableaux of shape lam, entries in {1..r}
inline long long count_ssyt(const Partition& lam, int r) {
    const int rows = lam.length();
    if (rows == 0) return 1;
    std::vector<std::vector<int>> fill(rows);
    for (int i = 0; i < rows; ++i) fill[i].assign(lam.part(i), 0);
    long long count = 0;
    auto rec = [&](auto&& self, int i, int j) -> void {
        if (i == rows) {
            ++count;
            return;
        }
        if (j == lam.part(i)) {
            self(self, i + 1, 0);
            return;
        }
        int lo = 1, hi = r;
        if (j > 0) lo = std::max(lo, fill[i][j - 1]);
        if (i > 0 && j < lam.part(i - 1)) lo = std::max(lo, fill[i - 1][j] + 1);
        for (int v = lo; v <= hi; ++v) {
            fill[i][j] = v;
            self(self, i, j + 1);
        }
        fill[i][j] = 0;
    };
    rec(rec, 0, 0);
    return count;
}

// number of standard Young tableaux of shape lam (growth-sequence count)
inline long long count_syt(const Partition& lam) {
    auto rec = [](auto&& self, std::vector<int> shape) -> long long {
        int total = 0;
        for (int p : shape) total += p;
        if (total == 0) return 1;
        long long count = 0;
        for (std::size_t i = 0; i < shape.size(); ++i) {
            if (shape[i] == 0) continue;
            if (i + 1 < shape.size() && shape[i + 1] == shape[i]) continue;
            auto next = shape;
            next[i]--;
            count += self(self, next);
        }
        return count;
    };
    std::vector<int> shape(lam.parts());
    return rec(rec, shape);
}

// all cycle types of S_n: partitions with parts >= 2 of every k <= n
inline std::vector<Partition> cycle_types(int n) {
    std::vector<Partition> out;
    for (int k = 0; k <= n; ++k)
        for (const auto& p : spinmf::partitions_of(k, -1, 2)) out.push_back(p);
    return out;
}

// LR coefficient via the induction/restriction character inner product:
//   c^lam_{mu,nu} = (1/(m!(n-m)!)) sum_{al,be} |C_al||C_be| chi_mu(al) chi_nu(be) chi_lam(al+be)
inline long long lr_via_characters(const Partition& lam, const Partition& mu, const Partition& nu) {
    using spinmf::conjugacy_class_size;
    using spinmf::mn_character;
    const int m = mu.size(), l = nu.size();
    if (m + l != lam.size()) return 0;
    spinmf::BigInt acc = 0;
    for (const auto& al : cycle_types(m)) {
        for (const auto& be : cycle_types(l)) {
            std::vector<int> joined(al.parts());
            joined.insert(joined.end(), be.parts().begin(), be.parts().end());
            std::sort(joined.rbegin(), joined.rend());
            CycleType ca(al), cb(be), cj{Partition(joined)};
            acc += conjugacy_class_size(ca, m) * conjugacy_class_size(cb, l) *
                   mn_character(mu, ca) * mn_character(nu, cb) * mn_character(lam, cj);
        }
    }
    spinmf::BigInt denom = 1;
    for (int i = 2; i <= m; ++i) denom *= i;
    for (int i = 2; i <= l; ++i) denom *= i;
    return (acc / denom).convert_to<long long>();
}

}  // namespace oracles
