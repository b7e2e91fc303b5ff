#pragma once

// Glue between the CLI and the library: dispatching a verify request to
// the right verifier, the binary-search rank finder, and the benchmark
// harness. Kept in the library so tests can drive exactly what the tool
// runs.

#include "krank/core.hpp"
#include "krank/dp.hpp"
#include "krank/gf.hpp"
#include "krank/matrix_io.hpp"
#include "krank/oracle.hpp"
#include "krank/verifiers.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace krank {

enum class Algo { Hash, Dp, Oracle };

inline std::string algo_name(Algo a) {
    switch (a) {
        case Algo::Hash: return "hash";
        case Algo::Dp: return "dp";
        default: return "oracle";
    }
}

struct VerifyRequest {
    ArithmeticMode mode = ArithmeticMode::gf2();
    Algo algo = Algo::Hash;
    VerifyConfig cfg;
    std::optional<BigInt> dp_bound;  // default: coefficient_bound(k, entry bound)
    bool find_rank = false;          // binary-search the rank instead of testing one k
    unsigned threads = 1;
    bool transpose = false;
};

struct RunResult {
    int exit_code = 0;  // 0 = at least k, 1 = less than k (0 for find_rank)
    nlohmann::json report;
};

namespace detail {

// Field modes accept any integer input; reduce once up front.
inline Matrix prepare(const Matrix& parsed, const VerifyRequest& req) {
    Matrix a = req.transpose ? parsed.transposed() : parsed;
    if (req.mode.is_field()) return mod_reduce_matrix(a, req.mode.modulus);
    return a;
}

inline BigInt dp_bound_for(const Matrix& a, const VerifyRequest& req, std::uint32_t k) {
    return req.dp_bound ? *req.dp_bound : coefficient_bound(k, a.entry_bound()).value;
}

inline Verdict dispatch(const Matrix& a, const VerifyRequest& req, std::uint32_t k) {
    VerifyConfig cfg = req.cfg;
    cfg.k = k;
    switch (req.algo) {
        case Algo::Hash:
            if (req.mode.kind == ArithmeticMode::Kind::GF2) return verify_gf2(a, cfg);
            if (req.mode.kind == ArithmeticMode::Kind::GFq)
                return verify_gfq(a, req.mode.modulus, cfg);
            return verify_integer(a, cfg, req.threads);
        case Algo::Dp: {
            if (req.mode.is_field())
                throw std::invalid_argument("the dp algorithm only supports integer mode");
            return verify_dp(a, dp_bound_for(a, req, k), cfg);
        }
        default: {
            const auto t0 = std::chrono::steady_clock::now();
            Verdict v;
            v.k = k;
            v.algorithm = "oracle";
            v.seed = cfg.seed;
            if (k > a.cols()) {
                v.outcome = Outcome::LessThanK;
            } else {
                auto res = oracle_kruskal_rank(a, req.mode, k - 1);
                if (res.minimal_dependency) {
                    v.outcome = Outcome::LessThanK;
                    v.witness = std::move(res.minimal_dependency);
                } else {
                    v.outcome = Outcome::AtLeastK;
                }
            }
            v.elapsed_ms = detail::elapsed_ms_since(t0);
            return v;
        }
    }
}

}  // namespace detail

// Run one verification (or a rank search) and shape the result the way the
// tool prints it. Throws ParseError/invalid_argument for bad requests and
// ResourceError when a budget is exceeded; the CLI maps those to exit
// codes 2 and 3.
inline RunResult run_verify(const Matrix& parsed, const VerifyRequest& req) {
    const Matrix a = detail::prepare(parsed, req);

    if (req.find_rank) {
        // Largest k with "at least k" is the Kruskal rank; the predicate is
        // monotone, so binary search over [1, n].
        std::uint32_t lo = 0, hi = static_cast<std::uint32_t>(a.cols());
        std::uint32_t calls = 0;
        std::uint64_t combos = 0;
        while (lo < hi) {
            const std::uint32_t mid = lo + (hi - lo + 1) / 2;
            const Verdict v = detail::dispatch(a, req, mid);
            ++calls;
            combos += v.combinations;
            if (v.outcome == Outcome::AtLeastK)
                lo = mid;
            else
                hi = mid - 1;
        }
        RunResult out;
        out.exit_code = 0;
        out.report = nlohmann::json{{"kruskal_rank", lo},
                                    {"mode", req.mode.name()},
                                    {"algorithm", algo_name(req.algo)},
                                    {"seed", req.cfg.seed},
                                    {"verifier_calls", calls},
                                    {"combinations", combos},
                                    {"matrix_digest", matrix_digest(a)}};
        return out;
    }

    const Verdict v = detail::dispatch(a, req, req.cfg.k);
    RunResult out;
    out.exit_code = v.outcome == Outcome::AtLeastK ? 0 : 1;
    out.report = to_json(make_report(v, req.mode, a));
    return out;
}

// Deterministic test matrices.
inline Matrix random_field_matrix(std::size_t d, std::size_t n, std::uint64_t q,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> dist(0, static_cast<std::int64_t>(q) - 1);
    std::vector<std::int64_t> e(d * n);
    for (auto& x : e) x = dist(rng);
    return Matrix(d, n, std::move(e));
}

inline Matrix random_int_matrix(std::size_t d, std::size_t n, std::int64_t lo, std::int64_t hi,
                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> dist(lo, hi);
    std::vector<std::int64_t> e(d * n);
    for (auto& x : e) x = dist(rng);
    return Matrix(d, n, std::move(e));
}

struct BenchRequest {
    std::uint64_t q = 2;  // field modes only
    std::vector<std::uint32_t> n_values;
    std::vector<std::uint32_t> k_values;
    std::uint32_t trials = 5;
    std::uint64_t seed = kDefaultSeed;
    std::size_t rows = 0;  // 0 = pick a height that keeps instances full rank
};

struct BenchCell {
    std::uint64_t q = 2;
    std::uint32_t n = 0, k = 0, trials = 0;
    double mean_combinations = 0.0;
    double mean_ms = 0.0;
};

// Mean cost of full AtLeastK runs over random matrices; instances that turn
// out dependent are redrawn so every timed run walks the whole enumeration,
// whose size has a closed form the tests pin down. Rows default to a height
// d = 48 where random instances are essentially always AtLeastK for the
// small k we sweep.
inline std::vector<BenchCell> run_bench_cells(const BenchRequest& req) {
    if (req.k_values.empty() || req.n_values.empty())
        throw std::invalid_argument("bench: need at least one n and one k");
    GfOps f(req.q);  // validates the modulus
    std::vector<BenchCell> cells;
    if (req.trials == 0) return cells;  // nothing to measure, empty table
    for (std::uint32_t k : req.k_values) {
        for (std::uint32_t n : req.n_values) {
            if (k > n) throw std::invalid_argument("bench: k must be <= n");
            const std::size_t d = req.rows ? req.rows : 48;
            BenchCell cell;
            cell.q = req.q;
            cell.n = n;
            cell.k = k;
            cell.trials = req.trials;
            const BigInt expect = expected_combinations(n, k, req.q);
            for (std::uint32_t t = 0; t < req.trials; ++t) {
                Verdict v;
                bool ok = false;
                for (std::uint32_t attempt = 0; attempt < 64; ++attempt) {
                    const std::uint64_t mseed =
                        derive_seed(req.seed, (std::uint64_t(k) << 40) ^ (std::uint64_t(n) << 20) ^
                                                  (std::uint64_t(t) << 8) ^ attempt);
                    const Matrix a = random_field_matrix(d, n, req.q, mseed);
                    VerifyConfig cfg;
                    cfg.k = k;
                    cfg.seed = derive_seed(req.seed, 0xb3a5 ^ mseed);
                    v = req.q == 2 ? verify_gf2(a, cfg) : verify_gfq(a, req.q, cfg);
                    if (v.outcome == Outcome::AtLeastK) {
                        ok = true;
                        break;
                    }
                }
                if (!ok)
                    throw ResourceError("bench: could not draw an AtLeastK instance in 64 tries");
                if (BigInt(v.combinations) != expect)
                    throw std::logic_error("bench: combination counter disagrees with closed form");
                cell.mean_combinations += static_cast<double>(v.combinations);
                cell.mean_ms += v.elapsed_ms;
            }
            if (req.trials) {
                cell.mean_combinations /= req.trials;
                cell.mean_ms /= req.trials;
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

inline std::string run_bench(const BenchRequest& req) {
    std::ostringstream csv;
    csv << "field,n,k,trials,mean_combinations,mean_ms\n";
    for (const BenchCell& c : run_bench_cells(req)) {
        csv << (c.q == 2 ? std::string("gf2") : "gfq:" + std::to_string(c.q)) << ',' << c.n << ','
            << c.k << ',' << c.trials << ',' << c.mean_combinations << ',' << c.mean_ms << '\n';
    }
    return csv.str();
}

}  // namespace krank
