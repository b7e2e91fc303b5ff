#pragma once

// Exact reference answers: kernel vectors of column submatrices and a
// brute-force Kruskal rank. Slow on purpose, used as ground truth by the
// randomized verifiers' tests and reachable from the CLI for small inputs.

#include "krank/bigint.hpp"
#include "krank/core.hpp"
#include "krank/enumeration.hpp"
#include "krank/gf.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace krank {

inline constexpr std::uint64_t kOracleWorkCap = 5'000'000;

namespace detail {

// Kernel vector over GF(q) via reduced row echelon form. Returns a
// full-length vector aligned with cols, leading nonzero scaled to 1.
inline std::optional<std::vector<BigInt>> nullspace_field(const Matrix& a,
                                                          std::span<const std::uint32_t> cols,
                                                          const GfOps& f) {
    const std::size_t d = a.rows(), s = cols.size();
    std::vector<std::vector<std::uint64_t>> m(d, std::vector<std::uint64_t>(s));
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < s; ++c) m[r][c] = f.reduce(a(r, cols[c]));

    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t c = 0; c < s && row < d; ++c) {
        std::size_t pr = row;
        while (pr < d && m[pr][c] == 0) ++pr;
        if (pr == d) continue;
        std::swap(m[row], m[pr]);
        const std::uint64_t inv = f.inv(m[row][c]);
        for (std::size_t cc = c; cc < s; ++cc) m[row][cc] = f.mul(m[row][cc], inv);
        for (std::size_t rr = 0; rr < d; ++rr) {
            if (rr == row || m[rr][c] == 0) continue;
            const std::uint64_t factor = m[rr][c];
            for (std::size_t cc = c; cc < s; ++cc)
                m[rr][cc] = f.sub(m[rr][cc], f.mul(factor, m[row][cc]));
        }
        pivot_col.push_back(c);
        ++row;
    }

    if (pivot_col.size() == s) return std::nullopt;
    // First free column; in RREF the kernel vector reads off directly.
    std::size_t free_col = 0;
    {
        std::size_t t = 0;
        while (t < pivot_col.size() && pivot_col[t] == free_col) ++t, ++free_col;
    }
    std::vector<std::uint64_t> x(s, 0);
    x[free_col] = 1;
    for (std::size_t t = 0; t < pivot_col.size(); ++t) {
        if (pivot_col[t] < free_col) x[pivot_col[t]] = f.neg(m[t][free_col]);
    }
    // Scale the leading nonzero to 1.
    std::uint64_t lead = 0;
    for (std::size_t c = 0; c < s; ++c)
        if (x[c] != 0) { lead = x[c]; break; }
    const std::uint64_t inv = f.inv(lead);
    std::vector<BigInt> out(s);
    for (std::size_t c = 0; c < s; ++c) out[c] = BigInt(f.mul(x[c], inv));
    return out;
}

// Kernel vector over the rationals via Bareiss (fraction-free) elimination
// and an exact back-solve. Result is an integer vector with content 1 and
// positive leading coefficient.
inline std::optional<std::vector<BigInt>> nullspace_integer(const Matrix& a,
                                                            std::span<const std::uint32_t> cols) {
    const std::size_t d = a.rows(), s = cols.size();
    std::vector<std::vector<BigInt>> m(d, std::vector<BigInt>(s));
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < s; ++c) m[r][c] = a(r, cols[c]);

    std::vector<std::size_t> pivot_col;
    BigInt prev = 1;
    std::size_t row = 0;
    for (std::size_t c = 0; c < s && row < d; ++c) {
        std::size_t pr = row;
        while (pr < d && m[pr][c] == 0) ++pr;
        if (pr == d) continue;
        std::swap(m[row], m[pr]);
        for (std::size_t rr = row + 1; rr < d; ++rr) {
            for (std::size_t cc = c + 1; cc < s; ++cc)
                m[rr][cc] = (m[rr][cc] * m[row][c] - m[rr][c] * m[row][cc]) / prev;
            m[rr][c] = 0;
        }
        prev = m[row][c];
        pivot_col.push_back(c);
        ++row;
    }

    if (pivot_col.size() == s) return std::nullopt;
    std::size_t free_col = 0;
    {
        std::size_t t = 0;
        while (t < pivot_col.size() && pivot_col[t] == free_col) ++t, ++free_col;
    }
    // Since free_col is the first gap, pivots t < free_col sit at (row t,
    // col t) and every pivot to its right carries x = 0. Back-substitute.
    std::vector<BigRat> x(s, BigRat(0));
    x[free_col] = 1;
    for (std::size_t t = free_col; t-- > 0;) {
        BigRat acc = BigRat(m[t][free_col]);
        for (std::size_t u = t + 1; u < free_col; ++u) acc += BigRat(m[t][u]) * x[u];
        x[t] = -acc / BigRat(m[t][t]);
    }
    BigInt scale = 1;
    for (std::size_t c = 0; c < s; ++c)
        scale = boost::multiprecision::lcm(scale, denominator(x[c]));
    std::vector<BigInt> out(s);
    for (std::size_t c = 0; c < s; ++c) {
        const BigRat scaled = x[c] * BigRat(scale);
        out[c] = numerator(scaled);
    }
    BigInt g = 0;
    for (const BigInt& v : out) g = boost::multiprecision::gcd(g, v);
    for (BigInt& v : out) v /= g;
    for (const BigInt& v : out) {
        if (v == 0) continue;
        if (v < 0)
            for (BigInt& w : out) w = -w;
        break;
    }
    return out;
}

}  // namespace detail

// Exact kernel vector of the submatrix formed by `cols`, or nullopt when
// those columns are independent in the given mode. The vector is aligned
// with cols (zeros allowed) and canonically normalized.
inline std::optional<std::vector<BigInt>> exact_nullspace_vector(
    const Matrix& a, std::span<const std::uint32_t> cols, const ArithmeticMode& mode) {
    if (cols.empty()) throw std::invalid_argument("exact_nullspace_vector: empty column set");
    for (std::uint32_t c : cols)
        if (c >= a.cols()) throw std::out_of_range("exact_nullspace_vector: column out of range");
    if (mode.is_field()) return detail::nullspace_field(a, cols, GfOps(mode.modulus));
    return detail::nullspace_integer(a, cols);
}

struct OracleResult {
    std::uint32_t kruskal_rank = 0;
    bool exact = true;  // false means "rank is at least this", search was capped
    std::optional<Witness> minimal_dependency;
};

// Brute force: test every column subset of size 1, 2, ... until a dependent
// one appears or everything up to min(k_max + 1, n) checks out. The first
// dependent subset has full support in its kernel vector (anything smaller
// would have been found earlier), so it is a minimal dependency.
inline OracleResult oracle_kruskal_rank(const Matrix& a, const ArithmeticMode& mode,
                                        std::uint32_t k_max,
                                        std::uint64_t work_cap = kOracleWorkCap) {
    const std::size_t n = a.cols();
    const std::uint32_t smax =
        static_cast<std::uint32_t>(std::min<std::size_t>(std::size_t(k_max) + 1, n));

    BigInt planned = 0;
    {
        BigInt binom = 1;
        for (std::uint32_t s = 1; s <= smax; ++s) {
            binom = binom * (n - s + 1) / s;
            planned += binom;
        }
        if (planned > work_cap)
            throw ResourceError("oracle_kruskal_rank: subset count exceeds work cap");
    }

    for (std::uint32_t s = 1; s <= smax; ++s) {
        for (SubsetCursor cur(static_cast<std::uint32_t>(n), s); !cur.done();) {
            auto kernel = exact_nullspace_vector(a, cur.current(), mode);
            if (kernel) {
                Witness w;
                for (std::size_t t = 0; t < s; ++t) {
                    if ((*kernel)[t] == 0) continue;
                    w.support.push_back(cur.current()[t]);
                    w.coefficients.push_back((*kernel)[t]);
                }
                if (!verify_witness(a, mode, w))
                    throw std::logic_error("oracle_kruskal_rank: witness failed recheck");
                return {s - 1, true, std::move(w)};
            }
            if (!cur.advance()) break;
        }
    }
    return {smax, smax == n, std::nullopt};
}

// Is every set of k columns independent? Exact, via the brute-force search.
inline bool oracle_at_least(const Matrix& a, const ArithmeticMode& mode, std::uint32_t k,
                            std::uint64_t work_cap = kOracleWorkCap) {
    if (k < 1) throw std::invalid_argument("oracle_at_least: k must be >= 1");
    if (k > a.cols()) return false;
    return !oracle_kruskal_rank(a, mode, k - 1, work_cap).minimal_dependency.has_value();
}

}  // namespace krank
