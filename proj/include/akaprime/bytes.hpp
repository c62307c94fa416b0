#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace akaprime {

using Byte = std::uint8_t;
using Bytes = std::vector<Byte>;
using ByteView = std::span<const Byte>;

template <std::size_t N>
using Octets = std::array<Byte, N>;

std::string to_hex(ByteView data);

/// Parses lowercase or uppercase hex; throws Error(InvalidHex) on odd length or bad digits.
Bytes from_hex(std::string_view hex);

Bytes concat(std::initializer_list<ByteView> parts);

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const Byte*>(s.data()), s.size()};
}

inline Bytes to_bytes(ByteView v) { return {v.begin(), v.end()}; }

/// First N bytes of `v`; `v` must hold at least N bytes.
template <std::size_t N>
Octets<N> take(ByteView v) {
  Octets<N> out{};
  std::copy_n(v.begin(), N, out.begin());
  return out;
}

template <std::size_t N>
Octets<N> octets_from_hex(std::string_view hex);

/// Big-endian encoding of the low `width` bytes of `value`.
Bytes be_encode(std::uint64_t value, std::size_t width);
std::uint64_t be_decode(ByteView v);

/// Timing-independent equality.
bool equal_ct(ByteView a, ByteView b);

}  // namespace akaprime
