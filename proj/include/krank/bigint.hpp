#pragma once

// Thin aliases over Boost.Multiprecision plus the couple of helpers we
// need everywhere (exact log2, checked narrowing). Nothing clever here.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>

namespace krank {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// log2 of a positive integer. Uses the top 53 bits so the result is
// accurate to a few ulp even for huge values.
inline double log2_big(const BigInt& x) {
    if (x <= 0) throw std::invalid_argument("log2_big: argument must be positive");
    const unsigned b = boost::multiprecision::msb(x);  // floor(log2 x)
    if (b < 63) return std::log2(static_cast<double>(x.convert_to<std::uint64_t>()));
    const unsigned shift = b - 52;
    const auto top = (x >> shift).convert_to<std::uint64_t>();
    return std::log2(static_cast<double>(top)) + static_cast<double>(shift);
}

// Narrow to int64 if representable.
inline std::optional<std::int64_t> to_i64(const BigInt& x) {
    static const BigInt lo = std::numeric_limits<std::int64_t>::min();
    static const BigInt hi = std::numeric_limits<std::int64_t>::max();
    if (x < lo || x > hi) return std::nullopt;
    return x.convert_to<std::int64_t>();
}

}  // namespace krank
