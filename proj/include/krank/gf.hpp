#pragma once

// Prime-field arithmetic and the seeded prime selection used by the
// integer verifier.

#include "krank/core.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace krank {

// Arithmetic in Z/qZ on canonical residues {0, ..., q-1}. q must be a
// prime below 2^31 so products fit comfortably in 64 bits.
class GfOps {
public:
    explicit GfOps(std::uint64_t q) : q_(q) {
        if (q >= (1ull << 31))
            throw std::invalid_argument("GfOps: modulus must be below 2^31");
        if (!detail::is_prime_u64(q))
            throw std::invalid_argument("GfOps: modulus must be prime");
    }

    std::uint64_t modulus() const { return q_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        return s >= q_ ? s - q_ : s;
    }

    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
        return a >= b ? a - b : a + q_ - b;
    }

    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : q_ - a; }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return a * b % q_; }

    // a^(q-2) by square and multiply; a must be nonzero.
    std::uint64_t inv(std::uint64_t a) const {
        if (a == 0) throw std::invalid_argument("GfOps: zero has no inverse");
        std::uint64_t base = a, acc = 1, e = q_ - 2;
        while (e) {
            if (e & 1) acc = mul(acc, base);
            base = mul(base, base);
            e >>= 1;
        }
        return acc;
    }

    // Canonical residue of a signed value.
    std::uint64_t reduce(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(q_);
        if (r < 0) r += static_cast<std::int64_t>(q_);
        return static_cast<std::uint64_t>(r);
    }

private:
    std::uint64_t q_;
};

// Entrywise reduction into {0, ..., p-1}.
inline Matrix mod_reduce_matrix(const Matrix& a, std::uint64_t p) {
    GfOps f(p);
    std::vector<std::int64_t> out;
    out.reserve(a.rows() * a.cols());
    for (std::int64_t e : a.entries())
        out.push_back(static_cast<std::int64_t>(f.reduce(e)));
    return Matrix(a.rows(), a.cols(), std::move(out));
}

// All primes <= bound, ascending. Plain sieve of Eratosthenes; the bounds
// we see stay in the low millions.
inline std::vector<std::uint64_t> sieve_primes(std::uint64_t bound) {
    std::vector<std::uint64_t> out;
    if (bound < 2) return out;
    std::vector<bool> composite(bound + 1, false);
    for (std::uint64_t i = 2; i * i <= bound; ++i)
        if (!composite[i])
            for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
    for (std::uint64_t i = 2; i <= bound; ++i)
        if (!composite[i]) out.push_back(i);
    return out;
}

struct PrimeSet {
    std::vector<std::uint64_t> primes;  // distinct, ascending
    std::uint64_t source_bound = 0;     // the pool was all primes <= this
    std::size_t requested_count = 0;
};

// Sample `count` distinct primes from the primes <= bound, uniformly
// without replacement, deterministically in `seed`. When the pool is not
// larger than the request the whole pool is returned.
inline PrimeSet select_primes(std::size_t count, std::uint64_t bound, std::uint64_t seed) {
    if (count == 0) throw std::invalid_argument("select_primes: count must be positive");
    if (bound < 2) throw std::invalid_argument("select_primes: bound must be at least 2");
    std::vector<std::uint64_t> pool = sieve_primes(bound);
    PrimeSet ps;
    ps.source_bound = bound;
    ps.requested_count = count;
    if (pool.size() <= count) {
        ps.primes = std::move(pool);
        return ps;
    }
    // Partial Fisher-Yates: after i swaps the prefix is a uniform i-subset.
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    ps.primes = std::move(pool);
    return ps;
}

// Smallest bound whose prime pool has at least 2*count members (that is,
// the (2*count)-th prime), floored at n so tiny matrices still draw from a
// spread-out pool.
inline std::uint64_t prime_bound(std::size_t count, std::uint64_t n) {
    const std::size_t want = 2 * count;
    // Start from a safe overestimate of the want-th prime and extend if the
    // sieve still comes up short.
    double m = static_cast<double>(std::max<std::size_t>(want, 6));
    std::uint64_t guess =
        static_cast<std::uint64_t>(m * (std::log(m) + std::log(std::log(m)))) + 16;
    std::vector<std::uint64_t> pool = sieve_primes(guess);
    while (pool.size() < want) {
        guess *= 2;
        pool = sieve_primes(guess);
    }
    return std::max<std::uint64_t>(n, pool[want - 1]);
}

// How many primes the integer verifier draws by default. An adversarial
// dependency can fool at most k*log2(magnitude) primes, so a linear
// multiple of that leaves the honest majority overwhelming.
inline std::size_t default_prime_count(std::uint32_t k, double log2_magnitude) {
    const double raw = 4.0 * (static_cast<double>(k) * log2_magnitude + 7.0);
    return static_cast<std::size_t>(std::ceil(raw));
}

}  // namespace krank
