#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dyadic/interval.hpp"

namespace dyadic {

/// Finite dyadic window [-2^K, 2^K) resolved into cells of length 2^-N,
/// together with A one-sided ancestor intervals per side:
/// [0, 2^{K+a}) and [-2^{K+a}, 0) for a = 1..A.
///
/// The in-window intervals are exactly the grid intervals contained in
/// [-2^K, 0) or [0, 2^K) with length between 2^-N and 2^K, i.e. scales
/// -K..N. Functions are step functions on the cells and are treated as
/// identically zero outside the window.
class Window {
 public:
  Window() = default;
  Window(int half_extent_log, int resolution_log, int ancestor_depth)
      : K_(half_extent_log), N_(resolution_log), A_(ancestor_depth) {
    if (K_ < 0) throw std::invalid_argument("Window: K must be >= 0");
    if (N_ < 0) throw std::invalid_argument("Window: N must be >= 0");
    if (A_ < 0) throw std::invalid_argument("Window: A must be >= 0");
    if (K_ + N_ > 24) throw std::invalid_argument("Window: K+N too large (cell count cap 2^25)");
    if (K_ + A_ > 50) throw std::invalid_argument("Window: K+A too large");
  }

  int half_extent_log() const { return K_; }
  int resolution_log() const { return N_; }
  int ancestor_depth() const { return A_; }

  std::int64_t cell_count() const { return ipow2(K_ + N_ + 1); }

  /// Number of in-window intervals: sum over scales -K..N of 2^{K+k+1}.
  std::int64_t in_window_count() const { return ipow2(K_ + N_ + 2) - 2; }
  std::int64_t interval_count() const { return in_window_count() + 2 * A_; }

  int coarsest_scale() const { return -K_; }
  int finest_scale() const { return N_; }

  bool is_in_window(const DyadicInterval& I) const {
    if (I.scale < -K_ || I.scale > N_) return false;
    const std::int64_t half = ipow2(K_ + I.scale);
    return I.offset >= -half && I.offset < half;
  }

  /// Depth a in 1..A when I is an ancestor interval, 0 otherwise.
  int ancestor_depth_of(const DyadicInterval& I) const {
    if (I.offset != 0 && I.offset != -1) return 0;
    const int a = -I.scale - K_;
    return (a >= 1 && a <= A_) ? a : 0;
  }

  bool is_enumerated(const DyadicInterval& I) const {
    return is_in_window(I) || ancestor_depth_of(I) != 0;
  }

  // --- deterministic interval ids -------------------------------------
  // In-window intervals first, coarse to fine and left to right within a
  // scale; then ancestors by depth a = 1..A, negative side first.

  std::int64_t id_of(const DyadicInterval& I) const {
    if (is_in_window(I)) {
      return scale_base(I.scale) + I.offset + ipow2(K_ + I.scale);
    }
    const int a = ancestor_depth_of(I);
    if (a == 0) throw std::invalid_argument("id_of: interval not enumerated: " + I.str());
    return in_window_count() + 2 * (a - 1) + (I.offset == 0 ? 1 : 0);
  }

  DyadicInterval interval_at(std::int64_t id) const {
    if (id < 0 || id >= interval_count())
      throw std::invalid_argument("interval_at: id out of range");
    if (id < in_window_count()) {
      // id + 2 lies in [2^{K+k+1}, 2^{K+k+2}) for the scale k of this id
      const int bits = std::bit_width(static_cast<std::uint64_t>(id + 2)) - 1;
      const int k = bits - K_ - 1;
      return {k, id - scale_base(k) - ipow2(K_ + k)};
    }
    const std::int64_t r = id - in_window_count();
    const int a = static_cast<int>(r / 2) + 1;
    return {-(K_ + a), (r % 2 == 0) ? std::int64_t{-1} : std::int64_t{0}};
  }

  /// Ids of all intervals, in enumeration order.
  std::vector<DyadicInterval> enumerate() const {
    std::vector<DyadicInterval> out;
    out.reserve(static_cast<std::size_t>(interval_count()));
    for (std::int64_t id = 0; id < interval_count(); ++id) out.push_back(interval_at(id));
    return out;
  }

  // --- cells -----------------------------------------------------------

  DyadicInterval cell(std::int64_t index) const {
    if (index < 0 || index >= cell_count())
      throw std::invalid_argument("cell: index out of range");
    return {N_, index - ipow2(K_ + N_)};
  }

  std::int64_t cell_index(const DyadicInterval& c) const {
    if (c.scale != N_) throw std::invalid_argument("cell_index: not a cell");
    return c.offset + ipow2(K_ + N_);
  }

  double cell_left(std::int64_t index) const {
    return static_cast<double>(index - ipow2(K_ + N_)) * pow2(-N_);
  }

  std::int64_t cell_id(std::int64_t index) const { return scale_base(N_) + index; }

  /// Half-open cell-index range [first, first+count) covered by I's
  /// window part. For ancestors this is the whole window half.
  struct CellRange {
    std::int64_t first = 0;
    std::int64_t count = 0;
  };

  CellRange cell_range(const DyadicInterval& I) const {
    if (is_in_window(I)) {
      const std::int64_t count = ipow2(N_ - I.scale);
      return {I.offset * count + ipow2(K_ + N_), count};
    }
    if (ancestor_depth_of(I) == 0)
      throw std::invalid_argument("cell_range: interval not enumerated: " + I.str());
    const std::int64_t half = ipow2(K_ + N_);
    return I.offset == 0 ? CellRange{half, half} : CellRange{0, half};
  }

  /// Parent id in the enumeration, or -1 above the top ancestor (or above
  /// the window halves when A = 0).
  std::int64_t parent_id(std::int64_t id) const {
    const DyadicInterval I = interval_at(id);
    if (is_in_window(I)) {
      if (I.scale > -K_) return id_of(I.parent());
      if (A_ == 0) return -1;
      return in_window_count() + (I.offset == 0 ? 1 : 0);  // depth-1 ancestor
    }
    const int a = ancestor_depth_of(I);
    if (a == A_) return -1;
    return id + 2;
  }

  friend bool operator==(const Window&, const Window&) = default;

 private:
  // first id of scale k: sum over scales -K..k-1 of the per-scale counts
  std::int64_t scale_base(int k) const { return ipow2(K_ + k + 1) - 2; }

  int K_ = 0;
  int N_ = 0;
  int A_ = 0;
};

}  // namespace dyadic
