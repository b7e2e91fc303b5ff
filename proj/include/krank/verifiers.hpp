#pragma once

// The randomized verifiers. All three share one meet-in-the-middle engine:
// enumerate sparse column combinations, fingerprint them, and look for two
// combinations with the same value. y and z colliding means A(y - z) = 0,
// and y - z has at most k nonzero coordinates by construction, so every
// collision that survives an exact recheck is a genuine dependency.
//
// Randomness only ever affects which fingerprints collide spuriously, and
// those are discarded by the recheck. Verdicts and witnesses do not depend
// on luck.

#include "krank/core.hpp"
#include "krank/enumeration.hpp"
#include "krank/gf.hpp"
#include "krank/hashing.hpp"
#include "krank/oracle.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <utility>
#include <vector>

namespace krank {

// Magnitude cap for the coefficients of a minimal integer dependency among
// r columns with entries bounded by m: ((r-1)! * m^(r-1))^2, floored at 1.
// Hadamard bounds on the cofactor solution of the pivot system give the
// two factors; squaring covers the cleared denominator.
struct CoefficientBound {
    std::uint32_t r = 1;
    std::uint64_t m = 0;
    BigInt value = 1;
    double log2_value = 0.0;
};

inline CoefficientBound coefficient_bound(std::uint32_t r, std::uint64_t m) {
    if (r < 1) throw std::invalid_argument("coefficient_bound: r must be >= 1");
    BigInt fact = 1;
    for (std::uint32_t t = 2; t < r; ++t) fact *= t;
    const BigInt base = fact * boost::multiprecision::pow(BigInt(m), r - 1);
    BigInt value = base * base;
    if (value < 1) value = 1;
    CoefficientBound out;
    out.r = r;
    out.m = m;
    out.value = value;
    out.log2_value = log2_big(value);
    return out;
}

// Exactly how many (subset, coefficient tuple) pairs a full engine run
// enumerates: sum over i = 0..ceil(k/2) of C(n, i) * (q-1)^i.
inline BigInt expected_combinations(std::size_t n, std::uint32_t k, std::uint64_t q) {
    const std::uint32_t imax = (k + 1) / 2;
    BigInt total = 0, binom = 1, qpow = 1;
    for (std::uint32_t i = 0; i <= imax; ++i) {
        total += binom * qpow;
        binom = binom * (BigInt(n) - i) / (i + 1);
        if (binom < 0) binom = 0;
        qpow *= q - 1;
    }
    return total;
}

namespace detail {

struct EngineResult {
    std::optional<Witness> witness;
    bool collided = false;           // some exactly-confirmed collision was seen
    std::uint64_t combinations = 0;  // pairs enumerated before returning
};

struct NeverCancel {
    bool operator()() const { return false; }
};

// Merge y - z over GF(q) into a sparse witness. Both inputs are sorted by
// column; entries that cancel are dropped.
inline Witness diff_witness(const GfOps& f, std::span<const std::uint32_t> ycols,
                            std::span<const std::uint32_t> ycoeffs,
                            const std::vector<std::uint32_t>& zcols,
                            const std::vector<std::uint32_t>& zcoeffs) {
    Witness w;
    std::size_t iy = 0, iz = 0;
    while (iy < ycols.size() || iz < zcols.size()) {
        std::uint32_t col;
        std::uint64_t coef;
        if (iz == zcols.size() || (iy < ycols.size() && ycols[iy] < zcols[iz])) {
            col = ycols[iy];
            coef = ycoeffs[iy];
            ++iy;
        } else if (iy == ycols.size() || zcols[iz] < ycols[iy]) {
            col = zcols[iz];
            coef = f.neg(zcoeffs[iz]);
            ++iz;
        } else {
            col = ycols[iy];
            coef = f.sub(ycoeffs[iy], zcoeffs[iz]);
            ++iy, ++iz;
        }
        if (coef != 0) {
            w.support.push_back(col);
            w.coefficients.emplace_back(coef);
        }
    }
    return w;
}

// Meet-in-the-middle search for a dependency of sparsity <= k over GF(q).
//
// Combinations of sparsity i <= ceil(k/2) are enumerated phase by phase; a
// combination is also stored when 2i <= k. Splitting any k-sparse kernel
// vector into halves of size ceil(s/2) and floor(s/2) shows the stored side
// is always present by the time the probing side arrives, so no dependency
// is missed. Probing strictly before inserting visits each unordered pair
// of combinations at most once, and phase i = 0 contributes the zero
// combination so single-column dependencies collide too.
//
// on_dependency(w) sees every confirmed witness in enumeration order and
// returns true to stop the run; cancel() is polled between combinations so
// a caller that already has a global answer can abandon the run.
template <typename Cb, typename CancelFn = NeverCancel>
EngineResult hash_engine(const Matrix& a, const GfOps& f, std::uint32_t k, std::uint64_t seed,
                         std::uint32_t width, Cb&& on_dependency, CancelFn&& cancel = {}) {
    const std::size_t d = a.rows(), n = a.cols();
    std::vector<std::vector<std::uint64_t>> columns(n, std::vector<std::uint64_t>(d));
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < d; ++r) columns[c][r] = f.reduce(a(r, c));

    EngineResult res;
    CollisionIndex index(seed, width, d);
    std::vector<std::uint64_t> hit_vec(d);
    const std::uint32_t imax = (k + 1) / 2;

    for (std::uint32_t i = 0; i <= imax; ++i) {
        const bool store = 2 * i <= k;
        for (CombinationStream st(columns, f, i); !st.done(); st.advance()) {
            ++res.combinations;
            if ((res.combinations & 1023) == 0 && cancel()) return res;

            const Fingerprint fp = index.fingerprint_of(st.vec());
            IndexEntry entry{{st.cols().begin(), st.cols().end()},
                             {st.coeffs().begin(), st.coeffs().end()}};
            const auto prior = index.probe_then_insert(fp, std::move(entry), store);

            for (const IndexEntry& hit : prior) {
                // Exact recheck; a fingerprint match alone proves nothing.
                std::fill(hit_vec.begin(), hit_vec.end(), 0);
                for (std::size_t t = 0; t < hit.cols.size(); ++t) {
                    const auto& col = columns[hit.cols[t]];
                    for (std::size_t r = 0; r < d; ++r)
                        hit_vec[r] = f.add(hit_vec[r], f.mul(hit.coeffs[t], col[r]));
                }
                if (!std::equal(hit_vec.begin(), hit_vec.end(), st.vec().begin())) continue;

                Witness w = diff_witness(f, st.cols(), st.coeffs(), hit.cols, hit.coeffs);
                if (w.support.empty() || w.support.size() > k)
                    throw std::logic_error("hash_engine: malformed collision");
                normalize_field_witness(w.coefficients, f.modulus());
                if (!verify_witness(a, ArithmeticMode::field(f.modulus()), w))
                    throw std::logic_error("hash_engine: confirmed collision failed recheck");
                res.collided = true;
                if (on_dependency(w)) {
                    res.witness = std::move(w);
                    return res;
                }
            }
        }
    }
    return res;
}

inline double elapsed_ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

inline Verdict verify_field(const Matrix& a, const GfOps& f, const VerifyConfig& cfg) {
    cfg.validate();
    for (std::int64_t e : a.entries())
        if (e < 0 || static_cast<std::uint64_t>(e) >= f.modulus())
            throw std::invalid_argument(
                "verify: matrix entries must be canonical residues for the field mode");

    const auto t0 = std::chrono::steady_clock::now();
    if (auto screened = trivial_screen(a, cfg.k)) {
        screened->seed = cfg.seed;
        screened->elapsed_ms = elapsed_ms_since(t0);
        return *screened;
    }

    auto res = hash_engine(a, f, cfg.k, derive_seed(cfg.seed, 0x656e67 /* engine */),
                           cfg.fingerprint_width, [](const Witness&) { return true; });

    Verdict v;
    v.outcome = res.witness ? Outcome::LessThanK : Outcome::AtLeastK;
    v.k = cfg.k;
    v.algorithm = "hash";
    v.seed = cfg.seed;
    v.combinations = res.combinations;
    v.witness = std::move(res.witness);
    v.elapsed_ms = elapsed_ms_since(t0);
    return v;
}

}  // namespace detail

inline Verdict verify_gf2(const Matrix& a, const VerifyConfig& cfg) {
    return detail::verify_field(a, GfOps(2), cfg);
}

inline Verdict verify_gfq(const Matrix& a, std::uint64_t q, const VerifyConfig& cfg) {
    return detail::verify_field(a, GfOps(q), cfg);  // GfOps rejects non-primes
}

// Integer-mode verification by running the field engine modulo a random
// set of primes.
//
// Soundness is unconditional in both directions. A prime whose run ends
// with no confirmed collision at all proves there is no integer dependency
// of sparsity <= k (one would survive reduction mod any prime once its
// content is 1), so the verdict is AtLeastK. A collision support whose
// rational kernel is nonempty yields an exact integer witness, so the
// verdict is LessThanK. Supports that are dependent mod p but independent
// over Q are "aliasing" artifacts of that prime; they are remembered and
// skipped, and the run simply moves on. A minimal dependency has
// coefficients bounded by coefficient_bound, so it can alias away on at
// most k*log2(bound) primes; the default draw is four times deeper than
// that, which makes the scan terminate with the right answer on every
// input, not just with high probability.
inline Verdict verify_integer(const Matrix& a, const VerifyConfig& cfg, unsigned threads = 1) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    if (auto screened = trivial_screen(a, cfg.k)) {
        screened->seed = cfg.seed;
        screened->elapsed_ms = detail::elapsed_ms_since(t0);
        return *screened;
    }

    const std::uint64_t m = a.entry_bound();
    const CoefficientBound bound = coefficient_bound(cfg.k, m);
    const double log2_mag =
        log2_big(BigInt(cfg.k) * BigInt(m) * bound.value * BigInt(a.cols()) + 2);
    const std::size_t count =
        cfg.prime_count_override.value_or(default_prime_count(cfg.k, log2_mag));
    const std::uint64_t pbound =
        cfg.prime_bound_override.value_or(prime_bound(count, a.cols()));
    const PrimeSet primes = select_primes(count, pbound, derive_seed(cfg.seed, 0x70726d73));
    const std::uint64_t engine_master = derive_seed(cfg.seed, 0x656e67);

    // Shared scan state. Supports already rejected over Q are skipped at
    // later primes; a run at rank r aborts once a lower rank has confirmed
    // or any rank came up collision-free.
    std::mutex mu;
    std::set<std::vector<std::uint32_t>> rejected;
    std::atomic<bool> clean_found{false};
    std::atomic<std::uint32_t> min_confirmed{UINT32_MAX};
    std::atomic<std::uint32_t> next_rank{0};
    std::atomic<std::uint64_t> combinations{0};
    std::optional<Witness> best_witness;
    std::uint64_t best_prime = 0;

    auto worker = [&]() {
        while (true) {
            const std::uint32_t rank = next_rank.fetch_add(1);
            if (rank >= primes.primes.size()) return;
            if (clean_found.load() || min_confirmed.load() < rank) return;

            const std::uint64_t p = primes.primes[rank];
            const Matrix ap = mod_reduce_matrix(a, p);
            const GfOps f(p);
            std::optional<Witness> found;

            auto on_dep = [&](const Witness& wq) {
                {
                    std::lock_guard<std::mutex> lk(mu);
                    if (rejected.count(wq.support)) return false;
                }
                auto kernel = exact_nullspace_vector(a, wq.support, ArithmeticMode::integers());
                if (!kernel) {
                    std::lock_guard<std::mutex> lk(mu);
                    rejected.insert(wq.support);
                    return false;
                }
                Witness wi;
                for (std::size_t t = 0; t < wq.support.size(); ++t) {
                    if ((*kernel)[t] == 0) continue;
                    wi.support.push_back(wq.support[t]);
                    wi.coefficients.push_back((*kernel)[t]);
                }
                if (!verify_witness(a, ArithmeticMode::integers(), wi))
                    throw std::logic_error("verify_integer: rational witness failed recheck");
                found = std::move(wi);
                return true;
            };
            auto cancel = [&]() {
                return clean_found.load(std::memory_order_relaxed) ||
                       min_confirmed.load(std::memory_order_relaxed) < rank;
            };

            auto res = detail::hash_engine(ap, f, cfg.k, derive_seed(engine_master, rank),
                                           cfg.fingerprint_width, on_dep, cancel);
            combinations.fetch_add(res.combinations);
            if (cancel()) continue;  // result of an aborted run is meaningless

            if (found) {
                std::lock_guard<std::mutex> lk(mu);
                std::uint32_t cur = min_confirmed.load();
                while (rank < cur && !min_confirmed.compare_exchange_weak(cur, rank)) {
                }
                if (min_confirmed.load() == rank) {
                    best_witness = std::move(found);
                    best_prime = p;
                }
            } else if (!res.collided) {
                clean_found.store(true);
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    Verdict v;
    v.k = cfg.k;
    v.algorithm = "hash";
    v.seed = cfg.seed;
    v.combinations = combinations.load();
    if (!clean_found.load() && best_witness) {
        v.outcome = Outcome::LessThanK;
        v.witness = std::move(best_witness);
        v.confirming_prime = best_prime;
    } else {
        v.outcome = Outcome::AtLeastK;
    }
    v.elapsed_ms = detail::elapsed_ms_since(t0);
    return v;
}

}  // namespace krank
