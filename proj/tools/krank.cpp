// krank: verify Kruskal rank claims about a matrix from the command line.
//
// Exit codes: 0 verdict "at least k" (or a successful rank search / bench),
// 1 verdict "less than k", 2 usage or input errors, 3 a work or memory
// budget was exceeded.

#include <krank/krank.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

namespace {

krank::ArithmeticMode parse_field(const std::string& s) {
    if (s == "gf2") return krank::ArithmeticMode::gf2();
    if (s == "int") return krank::ArithmeticMode::integers();
    if (s.rfind("gfq:", 0) == 0) {
        const std::string num = s.substr(4);
        if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("--field gfq:<q> needs a numeric modulus");
        return krank::ArithmeticMode::field(std::stoull(num));
    }
    throw std::invalid_argument("--field must be gf2, gfq:<q> or int");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kruskal rank verification toolkit"};
    app.require_subcommand(1);

    // verify -----------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "verify one matrix");
    std::string field_str, algo_str = "hash", input_path, dp_bound_str;
    std::uint32_t k = 0;
    std::uint64_t seed = krank::kDefaultSeed;
    std::uint32_t width = 128;
    unsigned threads = 1;
    bool find_rank = false, transpose = false;
    std::uint64_t prime_count = 0, prime_bound = 0;

    verify->add_option("input", input_path, "matrix file")->required();
    verify->add_option("--field", field_str, "gf2 | gfq:<q> | int")->required();
    verify->add_option("--k", k, "sparsity threshold to verify");
    verify->add_flag("--find-rank", find_rank, "search for the exact Kruskal rank instead");
    verify->add_option("--algo", algo_str, "hash | dp | oracle")
        ->check(CLI::IsMember({"hash", "dp", "oracle"}));
    verify->add_option("--seed", seed, "master seed (default 1729)");
    verify->add_option("--fingerprint-width", width, "64 or 128")
        ->check(CLI::IsMember({64, 128}));
    verify->add_option("--dp-bound", dp_bound_str, "coefficient box for --algo dp");
    verify->add_option("--threads", threads, "worker threads for integer mode");
    verify->add_flag("--transpose", transpose, "verify the transpose");
    verify->add_option("--prime-count", prime_count, "override the prime draw size");
    verify->add_option("--prime-bound", prime_bound, "override the prime pool bound");

    // bench ------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "time full enumerations on random matrices");
    std::string bench_field = "gf2";
    std::vector<std::uint32_t> bench_n, bench_k;
    std::uint32_t trials = 5;
    std::uint64_t bench_seed = krank::kDefaultSeed;
    std::size_t bench_rows = 0;
    bench->add_option("--field", bench_field, "gf2 | gfq:<q>");
    bench->add_option("--n", bench_n, "column counts")->required()->delimiter(',');
    bench->add_option("--k", bench_k, "thresholds")->required()->delimiter(',');
    bench->add_option("--trials", trials, "matrices per cell (default 5)");
    bench->add_option("--seed", bench_seed, "master seed");
    bench->add_option("--rows", bench_rows, "matrix height (default 48)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed()) {
            if (find_rank == (k != 0))
                throw std::invalid_argument("pass exactly one of --k or --find-rank");

            krank::VerifyRequest req;
            req.mode = parse_field(field_str);
            req.algo = algo_str == "dp"       ? krank::Algo::Dp
                       : algo_str == "oracle" ? krank::Algo::Oracle
                                              : krank::Algo::Hash;
            req.cfg.k = find_rank ? 1 : k;
            req.cfg.seed = seed;
            req.cfg.fingerprint_width = width;
            if (prime_count) req.cfg.prime_count_override = prime_count;
            if (prime_bound) req.cfg.prime_bound_override = prime_bound;
            if (!dp_bound_str.empty()) req.dp_bound = krank::BigInt(dp_bound_str);
            req.find_rank = find_rank;
            req.threads = threads;
            req.transpose = transpose;

            const auto parsed = krank::parse_matrix_file(input_path);
            const auto result = krank::run_verify(parsed.matrix, req);
            std::cout << result.report.dump(2) << "\n";
            return result.exit_code;
        }

        krank::BenchRequest breq;
        const auto mode = parse_field(bench_field);
        if (!mode.is_field())
            throw std::invalid_argument("bench supports field modes only");
        breq.q = mode.modulus;
        breq.n_values = bench_n;
        breq.k_values = bench_k;
        breq.trials = trials;
        breq.seed = bench_seed;
        breq.rows = bench_rows;
        std::cout << krank::run_bench(breq);
        return 0;
    } catch (const krank::ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const krank::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
