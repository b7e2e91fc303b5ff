#pragma once

// Enumeration of sparse column combinations. The cursors walk index
// subsets (lexicographic) and coefficient tuples (odometer over
// {1, ..., q-1}), and CombinationStream fuses them with incremental
// updates of the running combination vector: an advance only touches the
// positions the cursors actually changed, which is O(1) amortized.

#include "krank/core.hpp"
#include "krank/gf.hpp"

#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace krank {

// Size-i subsets of {0, ..., n-1} in lexicographic order. i = 0 yields the
// single empty subset, i > n yields nothing.
class SubsetCursor {
public:
    SubsetCursor(std::uint32_t n, std::uint32_t i) : n_(n), done_(i > n) {
        cur_.resize(i);
        std::iota(cur_.begin(), cur_.end(), 0u);
        lowest_changed_ = i;
    }

    bool done() const { return done_; }
    std::span<const std::uint32_t> current() const { return cur_; }

    // Index of the first position the last advance changed; cur_.size() for
    // a fresh cursor.
    std::uint32_t lowest_changed() const { return lowest_changed_; }

    bool advance() {
        if (done_) return false;
        const std::uint32_t i = static_cast<std::uint32_t>(cur_.size());
        // Rightmost position that can still move up.
        std::uint32_t t = i;
        while (t > 0) {
            --t;
            if (cur_[t] < n_ - (i - t)) {
                ++cur_[t];
                for (std::uint32_t u = t + 1; u < i; ++u) cur_[u] = cur_[u - 1] + 1;
                lowest_changed_ = t;
                return true;
            }
        }
        done_ = true;
        return false;
    }

private:
    std::uint32_t n_;
    bool done_;
    std::vector<std::uint32_t> cur_;
    std::uint32_t lowest_changed_;
};

// Tuples in {1, ..., q-1}^i, odometer order (last position fastest). For
// q = 2 there is exactly one tuple, all ones.
class CoefficientCursor {
public:
    CoefficientCursor(std::uint64_t q, std::uint32_t i) : q_(q), done_(false) {
        if (q < 2) throw std::invalid_argument("CoefficientCursor: q must be at least 2");
        cur_.assign(i, 1);
        lowest_changed_ = i;
    }

    bool done() const { return done_; }
    std::span<const std::uint32_t> current() const { return cur_; }
    std::uint32_t lowest_changed() const { return lowest_changed_; }

    bool advance() {
        if (done_) return false;
        std::uint32_t t = static_cast<std::uint32_t>(cur_.size());
        while (t > 0) {
            --t;
            if (cur_[t] + 1 < q_) {
                ++cur_[t];
                for (std::uint32_t u = t + 1; u < cur_.size(); ++u) cur_[u] = 1;
                lowest_changed_ = t;
                return true;
            }
        }
        done_ = true;
        return false;
    }

    // Reset to the all-ones tuple (used when the subset above it moves on).
    void rewind() {
        cur_.assign(cur_.size(), 1);
        done_ = false;
        lowest_changed_ = static_cast<std::uint32_t>(cur_.size());
    }

private:
    std::uint64_t q_;
    bool done_;
    std::vector<std::uint32_t> cur_;
    std::uint32_t lowest_changed_;
};

// Materialized enumerations, mostly for tests and small callers.
inline std::vector<std::vector<std::uint32_t>> subsets(std::uint32_t n, std::uint32_t i) {
    std::vector<std::vector<std::uint32_t>> out;
    for (SubsetCursor c(n, i); !c.done();) {
        out.emplace_back(c.current().begin(), c.current().end());
        if (!c.advance()) break;
    }
    return out;
}

inline std::vector<std::vector<std::uint32_t>> coefficient_vectors(std::uint64_t q,
                                                                   std::uint32_t i) {
    std::vector<std::vector<std::uint32_t>> out;
    for (CoefficientCursor c(q, i); !c.done();) {
        out.emplace_back(c.current().begin(), c.current().end());
        if (!c.advance()) break;
    }
    return out;
}

// sum_t coeffs[t] * (column cols[t] of a). In field modes the result is in
// canonical residues; in integer mode it is exact.
inline std::vector<BigInt> combination_vector(const Matrix& a,
                                              std::span<const std::uint32_t> cols,
                                              std::span<const BigInt> coeffs,
                                              const ArithmeticMode& mode) {
    if (cols.size() != coeffs.size())
        throw std::invalid_argument("combination_vector: column/coefficient length mismatch");
    std::vector<BigInt> v(a.rows(), BigInt(0));
    for (std::size_t t = 0; t < cols.size(); ++t) {
        if (cols[t] >= a.cols())
            throw std::out_of_range("combination_vector: column index out of range");
        for (std::size_t r = 0; r < a.rows(); ++r) v[r] += coeffs[t] * a(r, cols[t]);
    }
    if (mode.is_field()) {
        const BigInt q = mode.modulus;
        for (BigInt& x : v) {
            x %= q;
            if (x < 0) x += q;
        }
    }
    return v;
}

// Streams every (subset, coefficient tuple) pair of one sparsity level over
// a residue matrix, keeping vec() = sum_t coeffs[t] * column(cols[t]) up to
// date through cursor deltas instead of recomputation.
class CombinationStream {
public:
    // columns: per-column residue vectors, all of equal length, entries
    // already reduced mod the field modulus.
    CombinationStream(const std::vector<std::vector<std::uint64_t>>& columns, const GfOps& field,
                      std::uint32_t i)
        : cols_(columns),
          f_(field),
          subset_(static_cast<std::uint32_t>(columns.size()), i),
          coeff_(field.modulus(), i) {
        dim_ = columns.empty() ? 0 : columns[0].size();
        vec_.assign(dim_, 0);
        if (!subset_.done()) rebuild();
    }

    bool done() const { return subset_.done(); }
    std::span<const std::uint32_t> cols() const { return subset_.current(); }
    std::span<const std::uint32_t> coeffs() const { return coeff_.current(); }
    std::span<const std::uint64_t> vec() const { return vec_; }

    void advance() {
        if (subset_.done()) return;

        if (coeff_.advance()) {
            // Position t stepped c -> c+1 (delta +1); everything to its
            // right wrapped q-1 -> 1 (delta 2-q). Columns are unchanged.
            const auto sub = subset_.current();
            const std::uint32_t i = static_cast<std::uint32_t>(sub.size());
            const std::uint32_t t = coeff_.lowest_changed();
            add_column(sub[t], 1);
            if (f_.modulus() > 2) {
                const std::uint64_t wrap = f_.sub(1, f_.modulus() - 1);
                for (std::uint32_t u = t + 1; u < i; ++u) add_column(sub[u], wrap);
            }
            return;
        }

        // Coefficient tuples exhausted (all sitting at q-1); move the
        // subset. Copy the outgoing columns first, the cursor mutates its
        // state in place.
        old_.assign(subset_.current().begin(), subset_.current().end());
        if (!subset_.advance()) return;
        const auto sub = subset_.current();
        const std::uint32_t i = static_cast<std::uint32_t>(sub.size());
        const std::uint32_t t = subset_.lowest_changed();
        const std::uint64_t qm1 = f_.modulus() - 1;
        // Columns below t keep their place but drop from q-1 back to 1.
        if (f_.modulus() > 2) {
            const std::uint64_t wrap = f_.sub(1, qm1);
            for (std::uint32_t u = 0; u < t; ++u) add_column(sub[u], wrap);
        }
        // Positions >= t swap columns: remove (q-1) * old, add 1 * new.
        for (std::uint32_t u = t; u < i; ++u) {
            remove_column(old_[u], qm1);
            add_column(sub[u], 1);
        }
        coeff_.rewind();
    }

private:
    void rebuild() {
        std::fill(vec_.begin(), vec_.end(), 0);
        const auto sub = subset_.current();
        const auto cf = coeff_.current();
        for (std::uint32_t t = 0; t < sub.size(); ++t) add_column(sub[t], cf[t]);
    }

    void add_column(std::uint32_t col, std::uint64_t scale) {
        if (scale == 0) return;
        const auto& c = cols_[col];
        if (scale == 1) {
            for (std::size_t r = 0; r < dim_; ++r) vec_[r] = f_.add(vec_[r], c[r]);
        } else {
            for (std::size_t r = 0; r < dim_; ++r)
                vec_[r] = f_.add(vec_[r], f_.mul(scale, c[r]));
        }
    }

    void remove_column(std::uint32_t col, std::uint64_t scale) {
        const auto& c = cols_[col];
        for (std::size_t r = 0; r < dim_; ++r)
            vec_[r] = f_.sub(vec_[r], f_.mul(scale, c[r]));
    }

    const std::vector<std::vector<std::uint64_t>>& cols_;
    GfOps f_;
    SubsetCursor subset_;
    CoefficientCursor coeff_;
    std::size_t dim_;
    std::vector<std::uint64_t> vec_;
    std::vector<std::uint32_t> old_;  // scratch for subset deltas
};

}  // namespace krank
