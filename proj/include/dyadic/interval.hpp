#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dyadic {

inline double pow2(int e) { return std::ldexp(1.0, e); }

inline std::int64_t ipow2(int e) {
  if (e < 0 || e > 62) throw std::invalid_argument("ipow2: exponent out of range");
  return std::int64_t{1} << e;
}

/// A standard dyadic interval [offset*2^-scale, (offset+1)*2^-scale).
/// scale may be negative (length > 1). Intervals of the standard grid
/// never straddle 0: an interval is contained in (-inf,0) or [0,inf).
struct DyadicInterval {
  int scale = 0;             // length = 2^-scale
  std::int64_t offset = 0;   // left endpoint = offset * 2^-scale

  double length() const { return pow2(-scale); }
  double left() const { return static_cast<double>(offset) * pow2(-scale); }
  double right() const { return static_cast<double>(offset + 1) * pow2(-scale); }

  /// The unique dyadic interval of twice the length containing this one.
  DyadicInterval parent() const { return {scale - 1, offset >> 1}; }
  DyadicInterval left_half() const { return {scale + 1, 2 * offset}; }
  DyadicInterval right_half() const { return {scale + 1, 2 * offset + 1}; }

  /// True when this interval is the right half of its parent.
  bool is_right_half() const { return (offset & 1) != 0; }

  bool negative_side() const { return offset < 0; }

  /// Set containment J <= this (works for any pair of grid intervals).
  bool contains(const DyadicInterval& other) const {
    if (other.scale < scale) return false;
    const int shift = other.scale - scale;
    if (shift > 62) return false;
    return (other.offset >> shift) == offset;  // arithmetic shift = floor
  }

  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
  friend auto operator<=>(const DyadicInterval&, const DyadicInterval&) = default;

  std::string str() const {
    return "[" + std::to_string(left()) + ", " + std::to_string(right()) +
           ") (k=" + std::to_string(scale) + ", m=" + std::to_string(offset) + ")";
  }
};

}  // namespace dyadic
