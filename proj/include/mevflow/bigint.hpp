#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mevflow {

/// Exact signed integer. Token amounts are unsigned 256-bit on chain; profit
/// arithmetic needs the full signed 257-bit range, so everything runs on an
/// arbitrary-precision signed type and stays exact.
using BigInt = boost::multiprecision::cpp_int;

/// Token base units; invariant amount >= 0 is enforced where values enter.
using TokenAmount = BigInt;

/// Big-endian unsigned parse (ABI words, topic values).
inline BigInt bigint_from_be(std::span<const std::uint8_t> bytes) {
    BigInt out = 0;
    for (auto b : bytes) {
        out <<= 8;
        out |= b;
    }
    return out;
}

inline std::string to_decimal(const BigInt& v) { return v.str(); }

/// Parses an optionally-signed decimal string. Throws std::invalid_argument.
inline BigInt bigint_from_decimal(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty decimal integer");
    std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (i == text.size()) throw std::invalid_argument("bare sign is not an integer");
    for (; i < text.size(); ++i)
        if (text[i] < '0' || text[i] > '9')
            throw std::invalid_argument("non-digit in decimal integer \"" + std::string(text) + "\"");
    return BigInt(std::string(text));
}

}  // namespace mevflow
