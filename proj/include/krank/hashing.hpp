#pragma once

// Randomized fingerprints for residue vectors, plus the hash index the
// meet-in-the-middle verifiers collide combinations in.
//
// A fingerprint is a seeded polynomial evaluation over a Mersenne prime:
// h(v) = c * r^d + v_0 * r^(d-1) + ... + v_{d-1}  (mod p), with r and c
// drawn from the seed. Two distinct vectors collide only if r is a root of
// their nonzero difference polynomial, so the collision probability per
// pair is at most d/(p-2). Width 64 works mod p = 2^61 - 1, width 128 mod
// p = 2^127 - 1. Collisions are always re-checked exactly downstream, so a
// fingerprint collision costs time, never correctness.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace krank {

namespace detail {

using u128 = unsigned __int128;

inline constexpr std::uint64_t kM61 = (1ull << 61) - 1;
inline constexpr u128 kM127 = (u128(1) << 127) - 1;

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// x folded into [0, 2^61 - 2]; accepts any x < 2^62.
inline std::uint64_t fold61(std::uint64_t x) {
    x = (x & kM61) + (x >> 61);
    return x >= kM61 ? x - kM61 : x;
}

// a * b mod 2^61 - 1 for canonical a, b.
inline std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) {
    const u128 z = u128(a) * b;
    return fold61(static_cast<std::uint64_t>(z & kM61) + static_cast<std::uint64_t>(z >> 61));
}

// x folded into [0, 2^127 - 2]; accepts any 128-bit x.
inline u128 fold127(u128 x) {
    x = (x & kM127) + (x >> 127);
    return x >= kM127 ? x - kM127 : x;
}

inline u128 addmod127(u128 a, u128 b) { return fold127(a + b); }

// a * b mod 2^127 - 1 for canonical a, b. Schoolbook split into 64-bit
// halves; 2^128 == 2 (mod p) folds the high partial products back in.
inline u128 mulmod127(u128 a, u128 b) {
    const std::uint64_t aH = static_cast<std::uint64_t>(a >> 64);
    const std::uint64_t aL = static_cast<std::uint64_t>(a);
    const std::uint64_t bH = static_cast<std::uint64_t>(b >> 64);
    const std::uint64_t bL = static_cast<std::uint64_t>(b);
    const u128 p0 = u128(aL) * bL;
    const u128 p3 = u128(aH) * bH;          // < 2^126
    const u128 mid = u128(aL) * bH + u128(aH) * bL;  // < 2^128, no overflow
    const u128 mH = mid >> 64;
    const u128 mL = mid & ~std::uint64_t(0);
    // a*b = p3*2^128 + mid*2^64 + p0 == 2*p3 + 2*mH + (mL << 64) + p0
    u128 r = fold127(p0);
    r = addmod127(r, fold127(p3 << 1));
    r = addmod127(r, mH << 1);
    r = addmod127(r, fold127(mL << 64));
    return r;
}

}  // namespace detail

// Stable mix of a master seed and a salt, so independent subsystems can
// peel their own streams off one user-facing seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
    std::uint64_t s = master;
    const std::uint64_t a = detail::splitmix64(s);
    s ^= salt + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2);
    return detail::splitmix64(s);
}

struct Fingerprint {
    std::uint64_t hi = 0;  // always 0 at width 64
    std::uint64_t lo = 0;

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

struct FingerprintHash {
    std::size_t operator()(const Fingerprint& f) const {
        std::uint64_t s = f.hi ^ (f.lo * 0x9e3779b97f4a7c15ull);
        return static_cast<std::size_t>(detail::splitmix64(s));
    }
};

namespace detail {

// The (r, c) pair a seed expands to, at either width.
struct FpParams {
    std::uint32_t width = 128;
    std::uint64_t r61 = 1, c61 = 0;
    u128 r127 = 1, c127 = 0;

    static FpParams derive(std::uint64_t seed, std::uint32_t width) {
        if (width != 64 && width != 128)
            throw std::invalid_argument("fingerprint: width must be 64 or 128");
        FpParams p;
        p.width = width;
        std::uint64_t s = seed;
        if (width == 64) {
            p.r61 = splitmix64(s) % (kM61 - 1) + 1;  // in [1, p-2]
            p.c61 = splitmix64(s) % kM61;
        } else {
            const u128 rw = (u128(splitmix64(s)) << 64) | splitmix64(s);
            const u128 cw = (u128(splitmix64(s)) << 64) | splitmix64(s);
            p.r127 = rw % (kM127 - 1) + 1;
            p.c127 = cw % kM127;
        }
        return p;
    }

    Fingerprint eval(std::span<const std::uint64_t> v) const {
        if (width == 64) {
            std::uint64_t h = c61;
            for (std::uint64_t x : v) {
                if (x >= kM61) x %= kM61;
                h = fold61(mulmod61(h, r61) + x);
            }
            return {0, h};
        }
        u128 h = c127;
        for (std::uint64_t x : v) h = fold127(mulmod127(h, r127) + x);
        return {static_cast<std::uint64_t>(h >> 64), static_cast<std::uint64_t>(h)};
    }
};

}  // namespace detail

inline Fingerprint fingerprint(std::span<const std::uint64_t> v, std::uint64_t seed,
                               std::uint32_t width = 128) {
    return detail::FpParams::derive(seed, width).eval(v);
}

// One stored combination: which columns with which field coefficients.
struct IndexEntry {
    std::vector<std::uint32_t> cols;
    std::vector<std::uint32_t> coeffs;

    friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

// Fingerprint-keyed multimap of combinations. The verifier probes before it
// inserts, so a combination never collides with itself and each colliding
// pair is reported exactly once.
class CollisionIndex {
public:
    CollisionIndex(std::uint64_t seed, std::uint32_t width, std::size_t dim)
        : params_(detail::FpParams::derive(seed, width)), dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::uint64_t insertions() const { return insertions_; }

    Fingerprint fingerprint_of(std::span<const std::uint64_t> v) const {
        if (v.size() != dim_)
            throw std::invalid_argument("CollisionIndex: vector length does not match index dimension");
        return params_.eval(v);
    }

    // Everything stored under fp before this call; `entry` is added
    // afterwards when do_insert is set.
    std::vector<IndexEntry> probe_then_insert(const Fingerprint& fp, IndexEntry entry,
                                              bool do_insert) {
        std::vector<IndexEntry> prior;
        auto it = buckets_.find(fp);
        if (it != buckets_.end()) prior = it->second;
        if (do_insert) {
            if (it == buckets_.end())
                buckets_.emplace(fp, std::vector<IndexEntry>{std::move(entry)});
            else
                it->second.push_back(std::move(entry));
            ++insertions_;
        }
        return prior;
    }

private:
    detail::FpParams params_;
    std::size_t dim_;
    std::uint64_t insertions_ = 0;
    std::unordered_map<Fingerprint, std::vector<IndexEntry>, FingerprintHash> buckets_;
};

}  // namespace krank
