#pragma once

#include <cstdint>
#include <vector>

#include "sprank/field.hpp"

namespace sprank {

/// Total number of coordinate vectors in K^n (finite K); guards overflow.
inline uint64_t vector_count(const FieldCtx& F, size_t n, uint64_t cap = UINT64_MAX / 2) {
    uint64_t q = F.size();
    uint64_t total = 1;
    for (size_t i = 0; i < n; ++i) {
        if (total > cap / q) return cap;
        total *= q;
    }
    return total;
}

/// k-th vector of K^n in the fixed order: base-q digits of k, coordinate 0
/// least significant.
inline std::vector<FieldElement> vector_at(const FieldCtx& F, size_t n, uint64_t k) {
    uint64_t q = F.size();
    std::vector<FieldElement> v(n);
    for (size_t i = 0; i < n; ++i) {
        v[i] = F.element_at(k % q);
        k /= q;
    }
    return v;
}

/// Representatives of projective classes of K^n \ {0}: vectors whose first
/// nonzero coordinate is 1, in the fixed vector order. Count (q^n-1)/(q-1).
inline std::vector<std::vector<FieldElement>> projective_points(const FieldCtx& F, size_t n,
                                                                uint64_t cap = UINT64_MAX / 2) {
    std::vector<std::vector<FieldElement>> out;
    uint64_t total = vector_count(F, n, cap);
    for (uint64_t k = 1; k < total; ++k) {
        auto v = vector_at(F, n, k);
        size_t lead = 0;
        while (lead < n && F.is_zero(v[lead])) ++lead;
        if (lead < n && F.is_one(v[lead])) out.push_back(std::move(v));
    }
    return out;
}

/// All subsets of {1..d} of the given size, as sorted 1-based index lists, in
/// lexicographic order.
inline std::vector<std::vector<int>> subsets_of_size(int d, int size) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int next) -> void {
        if (static_cast<int>(cur.size()) == size) {
            out.push_back(cur);
            return;
        }
        for (int v = next; v <= d; ++v) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 1);
    return out;
}

inline std::vector<int> complement_subset(const std::vector<int>& I, int d) {
    std::vector<int> out;
    size_t pos = 0;
    for (int v = 1; v <= d; ++v) {
        if (pos < I.size() && I[pos] == v)
            ++pos;
        else
            out.push_back(v);
    }
    return out;
}

/// RREF representatives of all k-dimensional subspaces of K^n, returned as
/// k x n basis matrices (row lists). Deterministic order: pivot column sets in
/// lexicographic order, free entries enumerated in the fixed vector order.
inline std::vector<std::vector<std::vector<FieldElement>>> subspaces(const FieldCtx& F, size_t n,
                                                                     size_t k) {
    std::vector<std::vector<std::vector<FieldElement>>> out;
    if (k == 0 || k > n) return out;
    auto pivot_sets = subsets_of_size(static_cast<int>(n), static_cast<int>(k));
    uint64_t q = F.size();
    for (const auto& ps : pivot_sets) {
        // free positions: (row i, col c) with c > pivot[i] and c not a pivot column
        std::vector<std::pair<size_t, size_t>> free_pos;
        std::vector<bool> is_pivot(n + 1, false);
        for (int c : ps) is_pivot[c] = true;
        for (size_t i = 0; i < k; ++i)
            for (size_t c = ps[i] + 1; c <= n; ++c)
                if (!is_pivot[c]) free_pos.emplace_back(i, c - 1);
        uint64_t total = 1;
        for (size_t i = 0; i < free_pos.size(); ++i) total *= q;
        for (uint64_t idx = 0; idx < total; ++idx) {
            std::vector<std::vector<FieldElement>> rows(k, std::vector<FieldElement>(n, F.zero()));
            for (size_t i = 0; i < k; ++i) rows[i][ps[i] - 1] = F.one();
            uint64_t v = idx;
            for (auto [r, c] : free_pos) {
                rows[r][c] = F.element_at(v % q);
                v /= q;
            }
            out.push_back(std::move(rows));
        }
    }
    return out;
}

} // namespace sprank
