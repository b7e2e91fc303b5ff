#include <krank/dp.hpp>
#include <krank/enumeration.hpp>
#include <krank/oracle.hpp>
#include <krank/runner.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace krank;

namespace {

VerifyConfig cfg_k(std::uint32_t k) {
    VerifyConfig cfg;
    cfg.k = k;
    return cfg;
}

// Reference reach set: every combination of exactly j distinct columns
// among the first `absorbed`, coefficients in [-M, M] minus zero.
std::set<std::vector<std::int64_t>> brute_reach(const Matrix& a, std::uint32_t absorbed,
                                                std::uint32_t j, std::int64_t M) {
    std::set<std::vector<std::int64_t>> out;
    for (const auto& sub : subsets(absorbed, j)) {
        std::vector<std::int64_t> alpha(j, -M);
        while (true) {
            bool ok = true;
            for (auto x : alpha) ok = ok && x != 0;
            if (ok) {
                std::vector<std::int64_t> v(a.rows(), 0);
                for (std::uint32_t t = 0; t < j; ++t)
                    for (std::size_t r = 0; r < a.rows(); ++r)
                        v[r] += alpha[t] * a(r, sub[t]);
                out.insert(v);
            }
            std::uint32_t t = j;
            while (t > 0 && alpha[t - 1] == M) alpha[--t] = -M;
            if (t == 0) break;
            ++alpha[t - 1];
        }
        if (j == 0) break;
    }
    return out;
}

}  // namespace

TEST_CASE("dp verifier on fixed examples") {
    Matrix ones = Matrix::from_rows({{1, 1}});
    Verdict v = verify_dp(ones, BigInt(1), cfg_k(2));
    CHECK(v.outcome == Outcome::LessThanK);
    CHECK(v.algorithm == "dp");
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->support == std::vector<std::uint32_t>{0, 1});
    CHECK(v.witness->coefficients == std::vector<BigInt>{BigInt(1), BigInt(-1)});

    Matrix id2 = Matrix::from_rows({{1, 0}, {0, 1}});
    CHECK(verify_dp(id2, BigInt(1), cfg_k(2)).outcome == Outcome::AtLeastK);
    CHECK(verify_dp(id2, BigInt(5), cfg_k(3)).outcome == Outcome::LessThanK);  // k > n screen
}

TEST_CASE("dp reach sets match brute force level by level") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t d = 1 + rng() % 2;
        const std::size_t n = 2 + rng() % 3;
        const std::uint32_t k = 2 + rng() % 2;
        const std::int64_t M = 1 + static_cast<std::int64_t>(rng() % 2);
        const Matrix a = random_int_matrix(d, n, -2, 2, derive_seed(900, trial));

        DpEngine eng(a, BigInt(M), k);
        bool hit = false;
        while (!eng.finished() && !hit) {
            hit = eng.absorb_next();
            if (hit) break;
            for (std::uint32_t j = 0; j < k; ++j) {
                const auto want = brute_reach(a, eng.absorbed(), j, M);
                const auto got = eng.level_vectors(j);
                INFO("trial=" << trial << " absorbed=" << eng.absorbed() << " j=" << j);
                REQUIRE(got.size() == want.size());
                CHECK(std::equal(got.begin(), got.end(), want.begin()));
            }
        }
        if (hit) {
            REQUIRE(eng.witness().has_value());
            CHECK(verify_witness(a, ArithmeticMode::integers(), *eng.witness()));
            CHECK(eng.witness()->support.size() <= k);
        }
    }
}

TEST_CASE("dp agrees with enumeration over the bounded class") {
    // Ground truth by brute force over the same coefficient box: dependency
    // iff some next column lies in some reach level. The dp must match it
    // exactly, witness included in spirit (support size and validity).
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t d = 1 + rng() % 3;
        const std::size_t n = 2 + rng() % 4;
        const std::uint32_t k = 1 + rng() % 3;
        const std::int64_t M = 1 + static_cast<std::int64_t>(rng() % 2);
        const Matrix a = random_int_matrix(d, n, -2, 2, derive_seed(901, trial));
        if (trivial_screen(a, k)) continue;

        bool want = false;
        for (std::uint32_t i = 0; i < n && !want; ++i) {
            std::vector<std::int64_t> ai(d);
            for (std::size_t r = 0; r < d; ++r) ai[r] = a(r, i);
            for (std::uint32_t j = 0; j < k && !want; ++j)
                want = brute_reach(a, i, j, M).count(ai) > 0;
        }

        const Verdict v = verify_dp(a, BigInt(M), cfg_k(k));
        INFO("trial=" << trial << " d=" << d << " n=" << n << " k=" << k << " M=" << M);
        REQUIRE((v.outcome == Outcome::LessThanK) == want);
        if (want) {
            REQUIRE(v.witness.has_value());
            CHECK(v.witness->support.size() <= k);
            CHECK(verify_witness(a, ArithmeticMode::integers(), *v.witness));
            for (const BigInt& c : v.witness->coefficients) {
                CHECK(c != 0);
                CHECK(abs(c) <= M);
            }
        }
    }
}

TEST_CASE("dp LessThanK always implies the hash verifier agrees") {
    // dp rechecks its witness exactly, so LessThanK is sound without
    // qualification. The converse fails: dp only sees dependencies where
    // the highest-indexed column carries a unit coefficient.
    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = 1 + rng() % 3;
        const std::size_t n = 2 + rng() % 4;
        const std::uint32_t k = 1 + rng() % 2;
        const Matrix a = random_int_matrix(d, n, -2, 2, derive_seed(902, trial));

        const BigInt M = coefficient_bound(k, a.entry_bound()).value;
        const Verdict dp = verify_dp(a, M, cfg_k(k));
        const Verdict hash = verify_integer(a, cfg_k(k));
        INFO("trial=" << trial << " d=" << d << " n=" << n << " k=" << k);
        if (dp.outcome == Outcome::LessThanK) CHECK(hash.outcome == Outcome::LessThanK);
        if (hash.outcome == Outcome::AtLeastK) CHECK(dp.outcome == Outcome::AtLeastK);
    }
}

TEST_CASE("dp detection needs a unit pivot on the last support column") {
    // [2 1] is singular via 1*col0 - 2*col1 = 0, but col1 = (1/2)*col0 has
    // no integer coefficient, so dp reports AtLeastK where hashing proves
    // LessThanK. Swapping the columns restores col1 = 2*col0 and dp catches
    // it. This pins the exact boundary of the dp completeness class.
    const BigInt M = coefficient_bound(2, 2).value;

    const Matrix hard = Matrix::from_rows({{2, 1}});
    CHECK(verify_dp(hard, M, cfg_k(2)).outcome == Outcome::AtLeastK);
    CHECK(verify_integer(hard, cfg_k(2)).outcome == Outcome::LessThanK);

    const Matrix easy = Matrix::from_rows({{1, 2}});
    const Verdict v = verify_dp(easy, M, cfg_k(2));
    REQUIRE(v.outcome == Outcome::LessThanK);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->support == std::vector<std::uint32_t>{0, 1});
    CHECK(v.witness->coefficients == std::vector<BigInt>{2, -1});
}

TEST_CASE("dp budgets") {
    Matrix a = random_int_matrix(2, 6, -2, 2, 77);
    DpLimits tiny;
    tiny.max_entries = 10;
    CHECK_THROWS_AS(verify_dp(a, BigInt(2), cfg_k(3), tiny), ResourceError);

    DpLimits nowork;
    nowork.max_work = 5;
    CHECK_THROWS_AS(verify_dp(a, BigInt(2), cfg_k(3), nowork), ResourceError);

    // A coefficient bound that cannot fit the table is rejected up front.
    CHECK_THROWS_AS(verify_dp(a, BigInt(1) << 70, cfg_k(3)), ResourceError);
    CHECK_THROWS_AS(verify_dp(a, BigInt(0), cfg_k(2)), std::invalid_argument);
}

TEST_CASE("dp witnesses chain through multiple levels") {
    // col2 = col0 + col1, catchable only at level 2.
    Matrix a = Matrix::from_rows({{1, 0, 1}, {0, 1, 1}});
    Verdict v = verify_dp(a, BigInt(1), cfg_k(3));
    REQUIRE(v.outcome == Outcome::LessThanK);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->support == std::vector<std::uint32_t>{0, 1, 2});
    CHECK(verify_witness(a, ArithmeticMode::integers(), *v.witness));
}
