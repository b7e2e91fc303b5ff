#pragma once

// Deterministic verifier that grows reachability sets instead of hashing.
//
// Level j holds every vector expressible as a combination of exactly j
// already-absorbed columns with nonzero integer coefficients in [-M, M].
// When the next column is already present at some level j <= k-1, that
// equality is a dependency of sparsity j+1 <= k.
//
// Detection therefore requires the dependency to be solvable for its
// highest-indexed column with the remaining coefficients in the box.
// [2 1] is singular, but col1 = (1/2)*col0 has no integer form, so the
// scan truthfully reports AtLeastK for k = 2; the hashing verifiers find
// the witness (1, -2) instead. LessThanK answers are always sound (the
// witness is rechecked exactly); AtLeastK answers are complete only over
// this unit-pivot class.

#include "krank/bigint.hpp"
#include "krank/core.hpp"
#include "krank/hashing.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace krank {

struct DpLimits {
    std::size_t max_entries = 10'000'000;  // stored vectors across all levels
    std::uint64_t max_work = 160'000'000;  // extension candidates examined
};

namespace detail {

struct I64VecHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const {
        std::uint64_t h = 0x243f6a8885a308d3ull ^ (v.size() * 0x9e3779b97f4a7c15ull);
        for (std::int64_t x : v) {
            std::uint64_t s = h ^ static_cast<std::uint64_t>(x);
            h = splitmix64(s);
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace detail

class DpEngine {
public:
    DpEngine(const Matrix& a, const BigInt& coeff_bound, std::uint32_t k, DpLimits limits = {})
        : a_(a), k_(k), limits_(limits) {
        if (k < 1) throw std::invalid_argument("DpEngine: k must be >= 1");
        if (coeff_bound < 1) throw std::invalid_argument("DpEngine: coefficient bound must be >= 1");
        // Reach vectors sum at most k-1 terms of magnitude <= M * m each;
        // insist the whole computation stays inside int64.
        const BigInt extreme = BigInt(k) * coeff_bound * a.entry_bound();
        if (!to_i64(coeff_bound) || extreme > (BigInt(1) << 62))
            throw ResourceError("DpEngine: coefficient bound too large for the table");
        m_ = to_i64(coeff_bound).value();

        levels_.resize(k_);
        maps_.resize(k_);
        levels_[0].push_back(Entry{std::vector<std::int64_t>(a_.rows(), 0), kNone, 0, 0});
        maps_[0].emplace(levels_[0][0].vec, 0);
        total_entries_ = 1;
    }

    std::uint32_t absorbed() const { return absorbed_; }
    bool finished() const { return witness_.has_value() || absorbed_ == a_.cols(); }
    const std::optional<Witness>& witness() const { return witness_; }
    std::uint64_t work() const { return work_; }
    std::size_t entries() const { return total_entries_; }

    // Vectors reachable at level j from the columns absorbed so far,
    // lexicographically sorted. Test hook.
    std::vector<std::vector<std::int64_t>> level_vectors(std::uint32_t j) const {
        if (j >= k_) throw std::out_of_range("DpEngine: level out of range");
        std::vector<std::vector<std::int64_t>> out;
        out.reserve(levels_[j].size());
        for (const Entry& e : levels_[j]) out.push_back(e.vec);
        std::sort(out.begin(), out.end());
        return out;
    }

    // Absorb the next column: detect first, then extend. Returns true when
    // the detection fired (a witness is now available).
    bool absorb_next() {
        if (finished()) return false;
        const std::uint32_t i = absorbed_;
        std::vector<std::int64_t> ai(a_.rows());
        for (std::size_t r = 0; r < a_.rows(); ++r) ai[r] = a_(r, i);

        for (std::uint32_t j = 0; j < k_; ++j) {
            auto it = maps_[j].find(ai);
            if (it != maps_[j].end()) {
                build_witness(j, it->second, i);
                return true;
            }
        }

        // Extend levels top-down so this column is used at most once per
        // combination: level j reads level j-1 as it was before column i.
        std::vector<std::size_t> size_before(k_);
        for (std::uint32_t j = 0; j < k_; ++j) size_before[j] = levels_[j].size();
        for (std::uint32_t j = k_ - 1; j >= 1; --j) {
            for (std::size_t idx = 0; idx < size_before[j - 1]; ++idx) {
                const std::vector<std::int64_t> u = levels_[j - 1][idx].vec;  // copy; arena grows
                std::vector<std::int64_t> w(u.size());
                for (std::int64_t alpha = -m_; alpha <= m_; ++alpha) {
                    if (alpha == 0) continue;
                    if (++work_ > limits_.max_work)
                        throw ResourceError("DpEngine: work limit exceeded");
                    for (std::size_t r = 0; r < w.size(); ++r) w[r] = u[r] + alpha * ai[r];
                    if (maps_[j].count(w)) continue;
                    if (++total_entries_ > limits_.max_entries)
                        throw ResourceError("DpEngine: table size limit exceeded");
                    levels_[j].push_back(
                        Entry{w, static_cast<std::uint32_t>(idx), i, alpha});
                    maps_[j].emplace(w, static_cast<std::uint32_t>(levels_[j].size() - 1));
                }
            }
        }
        ++absorbed_;
        return false;
    }

    std::optional<Witness> run() {
        while (!finished()) absorb_next();
        return witness_;
    }

private:
    static constexpr std::uint32_t kNone = UINT32_MAX;

    struct Entry {
        std::vector<std::int64_t> vec;
        std::uint32_t parent;  // index into the level below, kNone at level 0
        std::uint32_t col;     // column that extended the parent
        std::int64_t alpha;    // its coefficient
    };

    // A_pivot equals the level-j entry e: walk the parent chain for the
    // combination and subtract the pivot column.
    void build_witness(std::uint32_t j, std::uint32_t e, std::uint32_t pivot) {
        std::vector<std::pair<std::uint32_t, std::int64_t>> terms;
        std::uint32_t level = j, idx = e;
        while (level > 0) {
            const Entry& ent = levels_[level][idx];
            terms.emplace_back(ent.col, ent.alpha);
            idx = ent.parent;
            --level;
        }
        // Chain columns strictly decrease toward the root.
        Witness w;
        for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
            w.support.push_back(it->first);
            w.coefficients.emplace_back(it->second);
        }
        w.support.push_back(pivot);
        w.coefficients.emplace_back(-1);
        detail::normalize_integer_witness(w.coefficients);
        if (!verify_witness(a_, ArithmeticMode::integers(), w))
            throw std::logic_error("DpEngine: witness failed recheck");
        witness_ = std::move(w);
    }

    const Matrix& a_;
    std::uint32_t k_;
    DpLimits limits_;
    std::int64_t m_ = 1;
    std::uint32_t absorbed_ = 0;
    std::uint64_t work_ = 0;
    std::size_t total_entries_ = 0;
    std::optional<Witness> witness_;
    std::vector<std::vector<Entry>> levels_;
    std::vector<std::unordered_map<std::vector<std::int64_t>, std::uint32_t, detail::I64VecHash>>
        maps_;
};

// Integer-mode verification with the reachability table. Deterministic;
// complete over the unit-pivot class described at the top of this file.
// The combinations counter reports extension candidates.
inline Verdict verify_dp(const Matrix& a, const BigInt& coeff_bound, const VerifyConfig& cfg,
                         DpLimits limits = {}) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    if (auto screened = trivial_screen(a, cfg.k)) {
        screened->seed = cfg.seed;
        screened->elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        return *screened;
    }

    DpEngine engine(a, coeff_bound, cfg.k, limits);
    auto w = engine.run();

    Verdict v;
    v.outcome = w ? Outcome::LessThanK : Outcome::AtLeastK;
    v.k = cfg.k;
    v.algorithm = "dp";
    v.seed = cfg.seed;
    v.combinations = engine.work();
    v.witness = std::move(w);
    v.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

}  // namespace krank
