#pragma once

// Text format for matrices and the JSON run report.
//
// A matrix file is a header line "d n" followed by d rows of n entries.
// Entries are integers or rationals like -3/4; the parser clears
// denominators exactly (multiplying the whole matrix by the lcm) since
// every verdict this toolkit produces is invariant under global scaling.

#include "krank/bigint.hpp"
#include "krank/core.hpp"
#include "krank/hashing.hpp"

#include <json.hpp>

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace krank {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + msg),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

struct ParsedMatrix {
    Matrix matrix;
    BigInt scale = 1;  // the parsed text equals matrix / scale
};

namespace detail {

struct Token {
    std::string text;
    std::size_t line;    // 1-based
    std::size_t column;  // 1-based character offset of the first char
};

inline std::vector<std::vector<Token>> tokenize_lines(std::string_view text) {
    std::vector<std::vector<Token>> lines;
    std::size_t lineno = 1;
    std::size_t i = 0;
    while (i <= text.size()) {
        std::size_t end = text.find('\n', i);
        if (end == std::string_view::npos) end = text.size();
        std::vector<Token> toks;
        std::size_t j = i;
        while (j < end) {
            if (std::isspace(static_cast<unsigned char>(text[j]))) {
                ++j;
                continue;
            }
            std::size_t start = j;
            while (j < end && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
            toks.push_back(Token{std::string(text.substr(start, j - start)), lineno, start - i + 1});
        }
        lines.push_back(std::move(toks));
        ++lineno;
        if (end == text.size()) break;
        i = end + 1;
    }
    return lines;
}

// num/den with den > 0 and gcd 1. Accepts [+-]?digits([/][+-]?digits)?.
inline std::pair<BigInt, BigInt> parse_rational(const Token& t) {
    const std::string& s = t.text;
    const std::size_t slash = s.find('/');
    auto parse_int = [&](std::string_view part, const char* what) {
        std::size_t p = 0;
        bool neg = false;
        if (p < part.size() && (part[p] == '+' || part[p] == '-')) neg = part[p++] == '-';
        if (p == part.size())
            throw ParseError(std::string("expected ") + what + " in '" + s + "'", t.line, t.column);
        for (std::size_t u = p; u < part.size(); ++u)
            if (!std::isdigit(static_cast<unsigned char>(part[u])))
                throw ParseError(std::string("bad character in ") + what + " '" + s + "'", t.line,
                                 t.column);
        BigInt v(std::string(part.substr(p)));
        return neg ? BigInt(-v) : v;
    };
    BigInt num = parse_int(slash == std::string::npos ? std::string_view(s)
                                                      : std::string_view(s).substr(0, slash),
                           "numerator");
    BigInt den = 1;
    if (slash != std::string::npos) {
        den = parse_int(std::string_view(s).substr(slash + 1), "denominator");
        if (den == 0) throw ParseError("zero denominator in '" + s + "'", t.line, t.column);
        if (den < 0) {
            den = -den;
            num = -num;
        }
    }
    const BigInt g = boost::multiprecision::gcd(num < 0 ? BigInt(-num) : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return {num, den};
}

}  // namespace detail

inline ParsedMatrix parse_matrix_text(std::string_view text) {
    const auto lines = detail::tokenize_lines(text);

    std::size_t li = 0;
    while (li < lines.size() && lines[li].empty()) ++li;
    if (li == lines.size()) throw ParseError("empty input", 1, 1);
    const auto& header = lines[li];
    if (header.size() != 2)
        throw ParseError("header must be exactly 'rows cols'", header[0].line, header[0].column);
    auto parse_dim = [](const detail::Token& t) {
        for (char c : t.text)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ParseError("dimension must be a positive integer '" + t.text + "'", t.line,
                                 t.column);
        BigInt v(t.text);
        if (v < 1 || v > 1'000'000)
            throw ParseError("dimension out of range '" + t.text + "'", t.line, t.column);
        return v.convert_to<std::size_t>();
    };
    const std::size_t d = parse_dim(header[0]);
    const std::size_t n = parse_dim(header[1]);
    if (d * n > 50'000'000)
        throw ParseError("matrix too large", header[0].line, header[0].column);

    std::vector<BigInt> nums;
    std::vector<BigInt> dens;
    std::vector<detail::Token> where;
    nums.reserve(d * n);
    BigInt scale = 1;

    std::size_t row = 0;
    for (std::size_t l = li + 1; l < lines.size(); ++l) {
        if (lines[l].empty()) continue;  // blank lines between rows are fine
        if (row == d)
            throw ParseError("unexpected content after the last row", lines[l][0].line,
                             lines[l][0].column);
        if (lines[l].size() != n)
            throw ParseError("row " + std::to_string(row + 1) + " has " +
                                 std::to_string(lines[l].size()) + " entries, expected " +
                                 std::to_string(n),
                             lines[l][0].line, lines[l][0].column);
        for (const auto& tok : lines[l]) {
            auto [num, den] = detail::parse_rational(tok);
            nums.push_back(num);
            dens.push_back(den);
            where.push_back(tok);
            scale = boost::multiprecision::lcm(scale, den);
        }
        ++row;
    }
    if (row != d)
        throw ParseError("expected " + std::to_string(d) + " rows, found " + std::to_string(row),
                         lines.size(), 1);

    std::vector<std::int64_t> entries(nums.size());
    for (std::size_t t = 0; t < nums.size(); ++t) {
        const BigInt scaled = nums[t] * (scale / dens[t]);
        const auto narrow = to_i64(scaled);
        if (!narrow)
            throw ParseError("entry does not fit in 64 bits after clearing denominators",
                             where[t].line, where[t].column);
        entries[t] = *narrow;
    }
    return ParsedMatrix{Matrix(d, n, std::move(entries)), scale};
}

inline ParsedMatrix parse_matrix_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_matrix_text(buf.str());
}

inline std::string matrix_to_text(const Matrix& a) {
    std::ostringstream out;
    out << a.rows() << ' ' << a.cols() << '\n';
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (c) out << ' ';
            out << a(r, c);
        }
        out << '\n';
    }
    return out.str();
}

// Stable 128-bit content digest (dimensions + entries), for run reports.
inline std::string matrix_digest(const Matrix& a) {
    std::vector<std::uint64_t> flat;
    flat.reserve(a.entries().size() + 2);
    flat.push_back(a.rows());
    flat.push_back(a.cols());
    for (std::int64_t e : a.entries()) flat.push_back(static_cast<std::uint64_t>(e));
    const Fingerprint fp = fingerprint(flat, 0xD16E57, 128);
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(fp.hi),
                  static_cast<unsigned long long>(fp.lo));
    return std::string(buf);
}

// Flat, JSON-friendly view of a verdict. Coefficients travel as decimal
// strings so arbitrarily large values survive the trip.
struct ReportRecord {
    std::string mode;
    std::string algorithm;
    std::string outcome;  // "at_least_k" or "less_than_k"
    std::uint32_t k = 0;
    std::uint64_t seed = 0;
    std::uint64_t combinations = 0;
    double elapsed_ms = 0.0;
    std::string digest;
    std::optional<std::uint64_t> confirming_prime;
    std::optional<Witness> witness;

    friend bool operator==(const ReportRecord&, const ReportRecord&) = default;
};

inline ReportRecord make_report(const Verdict& v, const ArithmeticMode& mode,
                                const Matrix& matrix) {
    ReportRecord r;
    r.mode = mode.name();
    r.algorithm = v.algorithm;
    r.outcome = v.outcome == Outcome::AtLeastK ? "at_least_k" : "less_than_k";
    r.k = v.k;
    r.seed = v.seed;
    r.combinations = v.combinations;
    r.elapsed_ms = v.elapsed_ms;
    r.digest = matrix_digest(matrix);
    r.confirming_prime = v.confirming_prime;
    r.witness = v.witness;
    return r;
}

inline nlohmann::json to_json(const ReportRecord& r) {
    nlohmann::json j{{"mode", r.mode},
                     {"algorithm", r.algorithm},
                     {"outcome", r.outcome},
                     {"k", r.k},
                     {"seed", r.seed},
                     {"combinations", r.combinations},
                     {"elapsed_ms", r.elapsed_ms},
                     {"matrix_digest", r.digest}};
    if (r.confirming_prime) j["confirming_prime"] = *r.confirming_prime;
    if (r.witness) {
        nlohmann::json w{{"support", r.witness->support}};
        std::vector<std::string> coeffs;
        for (const BigInt& c : r.witness->coefficients) coeffs.push_back(c.str());
        w["coefficients"] = coeffs;
        j["witness"] = w;
    }
    return j;
}

inline ReportRecord report_from_json(const nlohmann::json& j) {
    ReportRecord r;
    r.mode = j.at("mode").get<std::string>();
    r.algorithm = j.at("algorithm").get<std::string>();
    r.outcome = j.at("outcome").get<std::string>();
    r.k = j.at("k").get<std::uint32_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.combinations = j.at("combinations").get<std::uint64_t>();
    r.elapsed_ms = j.at("elapsed_ms").get<double>();
    r.digest = j.at("matrix_digest").get<std::string>();
    if (j.contains("confirming_prime"))
        r.confirming_prime = j.at("confirming_prime").get<std::uint64_t>();
    if (j.contains("witness")) {
        Witness w;
        w.support = j.at("witness").at("support").get<std::vector<std::uint32_t>>();
        for (const auto& s : j.at("witness").at("coefficients"))
            w.coefficients.emplace_back(BigInt(s.get<std::string>()));
        r.witness = std::move(w);
    }
    return r;
}

}  // namespace krank
