#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dyadic/haar.hpp"
#include "dyadic/weights.hpp"

namespace dyadic {

/// ||b||_{BMO^d} = sup over in-window I of <|b - <b>_I|>_I.
inline CharacteristicResult bmo_norm_detail(const StepFunction& b) {
  const Window& w = b.window();
  const std::vector<double> avg = detail::average_table(b);
  return detail::max_over_in_window(w, [&](std::int64_t id) {
    const DyadicInterval I = w.interval_at(id);
    const auto r = w.cell_range(I);
    double s = 0.0;
    for (std::int64_t c = r.first; c < r.first + r.count; ++c) s += std::fabs(b[c] - avg[id]);
    return s / static_cast<double>(r.count);
  });
}

inline double bmo_norm(const StepFunction& b) { return bmo_norm_detail(b).value; }

/// ||b||_{BMO_r} = (sup_I <|b - <b>_I|^r>_I)^{1/r}, r > 0.
inline CharacteristicResult bmo_r_norm_detail(const StepFunction& b, double r) {
  if (!(r > 0)) throw std::invalid_argument("bmo_r_norm: r must be positive");
  const Window& w = b.window();
  const std::vector<double> avg = detail::average_table(b);
  CharacteristicResult best = detail::max_over_in_window(w, [&](std::int64_t id) {
    const DyadicInterval I = w.interval_at(id);
    const auto range = w.cell_range(I);
    double s = 0.0;
    for (std::int64_t c = range.first; c < range.first + range.count; ++c)
      s += std::pow(std::fabs(b[c] - avg[id]), r);
    return s / static_cast<double>(range.count);
  });
  best.value = std::pow(best.value, 1.0 / r);
  return best;
}

inline double bmo_r_norm(const StepFunction& b, double r) { return bmo_r_norm_detail(b, r).value; }

/// ||b||_{BMO_2^d} via Haar coefficients:
///   (sup_I (1/|I|) sum_{J subset I, in-window} <b,h_J>^2)^{1/2}.
/// Equals bmo_r_norm(b, 2) exactly on step functions.
inline CharacteristicResult bmo2_haar_detail(const StepFunction& b) {
  const Window& w = b.window();
  const int K = w.half_extent_log(), N = w.resolution_log();
  const std::vector<double> coef = detail::coefficient_table(b);
  std::vector<double> subtree_sq(static_cast<std::size_t>(w.in_window_count()), 0.0);
  for (int k = N; k >= -K; --k) {
    const std::int64_t half = ipow2(K + k);
    for (std::int64_t m = -half; m < half; ++m) {
      const std::int64_t id = w.id_of({k, m});
      double s = coef[id] * coef[id];
      if (k < N) {
        const std::int64_t lc = w.id_of({k + 1, 2 * m});
        s += subtree_sq[lc] + subtree_sq[lc + 1];
      }
      subtree_sq[id] = s;
    }
  }
  CharacteristicResult best = detail::max_over_in_window(w, [&](std::int64_t id) {
    return std::ldexp(subtree_sq[id], w.interval_at(id).scale);  // (1/|I|) * sum
  });
  best.value = std::sqrt(best.value);
  return best;
}

inline double bmo2_haar(const StepFunction& b) { return bmo2_haar_detail(b).value; }

/// Cellwise clamp of b to [-j, j]; the truncation b_j used to reach
/// unbounded symbols by a limiting argument.
inline StepFunction truncate_bmo(const StepFunction& b, double j) {
  if (!(j > 0)) throw std::invalid_argument("truncate_bmo: level must be positive");
  return b.clamped(-j, j);
}

}  // namespace dyadic
