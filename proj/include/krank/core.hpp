#pragma once

// Core vocabulary shared by every verifier: the integer matrix, the
// arithmetic mode it is interpreted in, sparse dependency witnesses, and
// the verdict/config records the verifiers exchange.

#include "krank/bigint.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace krank {

// Thrown when a run would exceed an explicit work or memory budget.
// Distinct from invalid_argument so callers can map it to its own exit code.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultSeed = 1729;

namespace detail {

// Deterministic trial division, fine for the word-sized moduli we accept.
inline bool is_prime_u64(std::uint64_t x) {
    if (x < 2) return false;
    if (x % 2 == 0) return x == 2;
    if (x % 3 == 0) return x == 3;
    for (std::uint64_t f = 5; f <= x / f; f += 6) {
        if (x % f == 0 || x % (f + 2) == 0) return false;
    }
    return true;
}

}  // namespace detail

// Dense row-major integer matrix. Entries are kept as int64; inputs with
// rational entries are scaled to integers before they get here.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (rows_ == 0 || cols_ == 0)
            throw std::invalid_argument("Matrix: dimensions must be positive");
        if (entries_.size() != rows_ * cols_)
            throw std::invalid_argument("Matrix: entry count does not match dimensions");
        bound_ = 0;
        for (std::int64_t e : entries_) {
            const std::uint64_t mag =
                e < 0 ? ~static_cast<std::uint64_t>(e) + 1 : static_cast<std::uint64_t>(e);
            bound_ = std::max(bound_, mag);
        }
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
        std::vector<std::int64_t> flat;
        std::size_t d = rows.size(), n = 0;
        for (const auto& r : rows) {
            if (n == 0) n = r.size();
            if (r.size() != n)
                throw std::invalid_argument("Matrix: ragged row list");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return Matrix(d, n, std::move(flat));
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::int64_t operator()(std::size_t r, std::size_t c) const {
        return entries_[r * cols_ + c];
    }

    // Largest |entry|, cached at construction.
    std::uint64_t entry_bound() const { return bound_; }

    const std::vector<std::int64_t>& entries() const { return entries_; }

    Matrix transposed() const {
        std::vector<std::int64_t> t(entries_.size());
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                t[c * rows_ + r] = entries_[r * cols_ + c];
        return Matrix(cols_, rows_, std::move(t));
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }

private:
    std::size_t rows_, cols_;
    std::vector<std::int64_t> entries_;
    std::uint64_t bound_;
};

// Which ring the matrix entries live in. GF(q) requires an odd prime q;
// q = 2 is split out because the verifier takes real shortcuts there.
struct ArithmeticMode {
    enum class Kind { GF2, GFq, Integer };

    Kind kind = Kind::Integer;
    std::uint64_t modulus = 0;  // 2 for GF2, q for GFq, 0 for Integer

    static ArithmeticMode gf2() { return {Kind::GF2, 2}; }

    static ArithmeticMode gfq(std::uint64_t q) {
        if (q < 3 || !detail::is_prime_u64(q))
            throw std::invalid_argument("ArithmeticMode: GF(q) needs a prime q >= 3");
        return {Kind::GFq, q};
    }

    // Convenience that routes q = 2 to the dedicated mode.
    static ArithmeticMode field(std::uint64_t q) {
        return q == 2 ? gf2() : gfq(q);
    }

    static ArithmeticMode integers() { return {Kind::Integer, 0}; }

    bool is_field() const { return kind != Kind::Integer; }

    std::string name() const {
        switch (kind) {
            case Kind::GF2: return "gf2";
            case Kind::GFq: return "gfq:" + std::to_string(modulus);
            default: return "int";
        }
    }

    friend bool operator==(const ArithmeticMode&, const ArithmeticMode&) = default;
};

// A sparse nonzero vector x with A*x = 0: column indices (strictly
// increasing) and the matching coefficients. Coefficients are canonical
// residues in field modes and plain integers otherwise.
struct Witness {
    std::vector<std::uint32_t> support;
    std::vector<BigInt> coefficients;

    friend bool operator==(const Witness&, const Witness&) = default;
};

enum class Outcome { AtLeastK, LessThanK };

// Result of one verification run. A LessThanK verdict carries a witness
// whenever one exists (the single exception is k > n, where every sparse
// vector qualifies trivially and there may be no dependency at all).
struct Verdict {
    Outcome outcome = Outcome::AtLeastK;
    std::uint32_t k = 0;
    std::string algorithm;  // "hash", "dp", "oracle" or "screen"
    std::uint64_t seed = 0;
    double elapsed_ms = 0.0;
    std::uint64_t combinations = 0;  // enumeration work actually performed
    std::optional<Witness> witness;
    std::optional<std::uint64_t> confirming_prime;  // integer verifier only
};

struct VerifyConfig {
    std::uint32_t k = 1;
    std::uint64_t seed = kDefaultSeed;
    std::uint32_t fingerprint_width = 128;  // 64 or 128
    std::optional<std::size_t> prime_count_override;
    std::optional<std::uint64_t> prime_bound_override;

    void validate() const {
        if (k < 1) throw std::invalid_argument("VerifyConfig: k must be >= 1");
        if (fingerprint_width != 64 && fingerprint_width != 128)
            throw std::invalid_argument("VerifyConfig: fingerprint width must be 64 or 128");
        if (prime_count_override && *prime_count_override == 0)
            throw std::invalid_argument("VerifyConfig: prime count override must be positive");
    }
};

// Exact check that (support, coefficients) names a nonzero kernel vector of
// A in the given mode. Malformed witnesses throw; a well-formed witness that
// simply fails the algebra returns false.
inline bool verify_witness(const Matrix& a, const ArithmeticMode& mode, const Witness& w) {
    const std::size_t s = w.support.size();
    if (s == 0) throw std::invalid_argument("verify_witness: empty support");
    if (w.coefficients.size() != s)
        throw std::invalid_argument("verify_witness: support/coefficient length mismatch");
    for (std::size_t t = 0; t < s; ++t) {
        if (w.support[t] >= a.cols())
            throw std::out_of_range("verify_witness: column index out of range");
        if (t > 0 && w.support[t] <= w.support[t - 1])
            throw std::invalid_argument("verify_witness: support must be strictly increasing");
    }

    if (mode.is_field()) {
        const BigInt q = mode.modulus;
        bool nonzero = false;
        std::vector<BigInt> res(s);
        for (std::size_t t = 0; t < s; ++t) {
            res[t] = w.coefficients[t] % q;
            if (res[t] < 0) res[t] += q;
            nonzero = nonzero || res[t] != 0;
        }
        if (!nonzero) return false;
        for (std::size_t r = 0; r < a.rows(); ++r) {
            BigInt acc = 0;
            for (std::size_t t = 0; t < s; ++t)
                acc += res[t] * a(r, w.support[t]);
            if (acc % q != 0) return false;
        }
        return true;
    }

    bool nonzero = false;
    for (const BigInt& c : w.coefficients) nonzero = nonzero || c != 0;
    if (!nonzero) return false;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        BigInt acc = 0;
        for (std::size_t t = 0; t < s; ++t)
            acc += w.coefficients[t] * a(r, w.support[t]);
        if (acc != 0) return false;
    }
    return true;
}

// O(d*n) screens that settle a query before any enumeration starts:
// k > n makes "every k columns independent" unsatisfiable, and an all-zero
// column is a dependency of size 1. Returns nullopt when neither applies.
inline std::optional<Verdict> trivial_screen(const Matrix& a, std::uint32_t k) {
    Verdict v;
    v.k = k;
    v.algorithm = "screen";
    if (k > a.cols()) {
        v.outcome = Outcome::LessThanK;  // vacuously; no witness exists in general
        return v;
    }
    for (std::size_t c = 0; c < a.cols(); ++c) {
        bool zero = true;
        for (std::size_t r = 0; r < a.rows() && zero; ++r) zero = a(r, c) == 0;
        if (zero) {
            v.outcome = Outcome::LessThanK;
            v.witness = Witness{{static_cast<std::uint32_t>(c)}, {BigInt(1)}};
            return v;
        }
    }
    return std::nullopt;
}

namespace detail {

// Canonical form for field witnesses: leading coefficient scaled to 1.
// Assumes coefficients are already reduced mod q with a nonzero leader.
inline void normalize_field_witness(std::vector<BigInt>& coeffs, std::uint64_t q) {
    if (coeffs.empty() || coeffs.front() == 0)
        throw std::invalid_argument("normalize_field_witness: leading coefficient must be nonzero");
    const BigInt lead = coeffs.front();
    // Fermat inverse; q is prime and lead is nonzero mod q.
    const BigInt inv = boost::multiprecision::powm(lead, BigInt(q - 2), BigInt(q));
    for (BigInt& c : coeffs) c = (c * inv) % q;
}

// Canonical form for integer witnesses: content 1, leading coefficient
// positive.
inline void normalize_integer_witness(std::vector<BigInt>& coeffs) {
    BigInt g = 0;
    for (const BigInt& c : coeffs) g = boost::multiprecision::gcd(g, c);
    if (g == 0)
        throw std::invalid_argument("normalize_integer_witness: zero vector");
    for (BigInt& c : coeffs) c /= g;
    if (coeffs.front() < 0)
        for (BigInt& c : coeffs) c = -c;
}

}  // namespace detail

}  // namespace krank
