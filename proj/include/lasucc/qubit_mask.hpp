#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace lasucc {

/// Fixed-width bit set over up to 128 qubits. Resource counting on long
/// chains needs more than 64 qubits; state simulation only ever uses the low
/// word.
class QubitMask {
 public:
  static constexpr int kMaxQubits = 128;

  constexpr QubitMask() = default;
  constexpr explicit QubitMask(std::uint64_t low) : w_{low, 0} {}

  static constexpr QubitMask bit(int q) {
    QubitMask m;
    m.w_[q >> 6] = std::uint64_t{1} << (q & 63);
    return m;
  }
  /// Bits [0, q).
  static constexpr QubitMask below(int q) {
    QubitMask m;
    if (q >= 64) {
      m.w_[0] = ~std::uint64_t{0};
      m.w_[1] = q >= 128 ? ~std::uint64_t{0} : (std::uint64_t{1} << (q - 64)) - 1;
    } else {
      m.w_[0] = (std::uint64_t{1} << q) - 1;
    }
    return m;
  }

  constexpr bool test(int q) const { return (w_[q >> 6] >> (q & 63)) & 1u; }
  constexpr void set(int q) { w_[q >> 6] |= std::uint64_t{1} << (q & 63); }
  constexpr void flip(int q) { w_[q >> 6] ^= std::uint64_t{1} << (q & 63); }
  constexpr int popcount() const {
    return std::popcount(w_[0]) + std::popcount(w_[1]);
  }
  constexpr bool any() const { return (w_[0] | w_[1]) != 0; }
  constexpr bool none() const { return !any(); }
  /// Index of the highest set bit, or -1.
  constexpr int highest() const {
    if (w_[1]) return 127 - std::countl_zero(w_[1]);
    if (w_[0]) return 63 - std::countl_zero(w_[0]);
    return -1;
  }
  constexpr bool fits_low_word() const { return w_[1] == 0; }
  constexpr std::uint64_t low() const { return w_[0]; }
  constexpr std::uint64_t high() const { return w_[1]; }

  constexpr QubitMask operator&(const QubitMask &o) const {
    return from(w_[0] & o.w_[0], w_[1] & o.w_[1]);
  }
  constexpr QubitMask operator|(const QubitMask &o) const {
    return from(w_[0] | o.w_[0], w_[1] | o.w_[1]);
  }
  constexpr QubitMask operator^(const QubitMask &o) const {
    return from(w_[0] ^ o.w_[0], w_[1] ^ o.w_[1]);
  }
  constexpr QubitMask &operator^=(const QubitMask &o) {
    w_[0] ^= o.w_[0];
    w_[1] ^= o.w_[1];
    return *this;
  }
  constexpr QubitMask &operator|=(const QubitMask &o) {
    w_[0] |= o.w_[0];
    w_[1] |= o.w_[1];
    return *this;
  }

  constexpr bool operator==(const QubitMask &) const = default;
  constexpr std::strong_ordering operator<=>(const QubitMask &o) const {
    if (auto c = w_[1] <=> o.w_[1]; c != 0) return c;
    return w_[0] <=> o.w_[0];
  }

  std::size_t hash() const {
    return std::hash<std::uint64_t>{}(w_[0] * 0x9E3779B97F4A7C15ull ^ w_[1]);
  }

 private:
  static constexpr QubitMask from(std::uint64_t lo, std::uint64_t hi) {
    QubitMask m;
    m.w_[0] = lo;
    m.w_[1] = hi;
    return m;
  }
  std::array<std::uint64_t, 2> w_{0, 0};
};

}  // namespace lasucc
