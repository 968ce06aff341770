#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mevflow {

namespace detail {

inline int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

inline constexpr char kHexDigits[] = "0123456789abcdef";

}  // namespace detail

/// Fixed-width byte value, canonically rendered as 0x-prefixed lowercase hex.
template <std::size_t N>
struct Bytes {
    std::array<std::uint8_t, N> value{};

    auto operator<=>(const Bytes&) const = default;

    bool is_zero() const {
        for (auto b : value)
            if (b != 0) return false;
        return true;
    }

    std::string hex() const {
        std::string out;
        out.reserve(2 + 2 * N);
        out += "0x";
        for (auto b : value) {
            out += detail::kHexDigits[b >> 4];
            out += detail::kHexDigits[b & 0x0f];
        }
        return out;
    }

    /// Parses "0x" + exactly 2N hex digits (any case). Throws std::invalid_argument.
    static Bytes from_hex(std::string_view text) {
        if (text.size() != 2 + 2 * N || text[0] != '0' || (text[1] != 'x' && text[1] != 'X'))
            throw std::invalid_argument("expected 0x-prefixed hex of " + std::to_string(2 * N) +
                                        " digits, got \"" + std::string(text) + "\"");
        Bytes out;
        for (std::size_t i = 0; i < N; ++i) {
            const int hi = detail::hex_nibble(text[2 + 2 * i]);
            const int lo = detail::hex_nibble(text[3 + 2 * i]);
            if (hi < 0 || lo < 0)
                throw std::invalid_argument("non-hex digit in \"" + std::string(text) + "\"");
            out.value[i] = static_cast<std::uint8_t>((hi << 4) | lo);
        }
        return out;
    }
};

using Address = Bytes<20>;
using Hash32 = Bytes<32>;
using Selector = Bytes<4>;

/// The all-zero burn/mint address.
inline const Address& null_address() {
    static const Address addr{};
    return addr;
}

/// Canonicalizes a 0x-prefixed 40-digit hex address (any case).
inline Address normalize_address(std::string_view text) {
    return Address::from_hex(text);
}

/// Low 20 bytes of a 32-byte topic word (ABI address encoding).
inline Address address_from_topic(const Hash32& topic) {
    Address out;
    for (std::size_t i = 0; i < 20; ++i) out.value[i] = topic.value[12 + i];
    return out;
}

}  // namespace mevflow
