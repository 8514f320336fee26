#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dyadic/step_function.hpp"

namespace dyadic {

namespace detail {

/// Sum of f's cell values over the window part of every enumerated
/// interval, indexed by interval id. Built bottom-up: cells, then merged
/// pairs, then the ancestor chains (whose window part is a full half).
/// Integrals follow by scaling with the cell length.
inline std::vector<double> cell_sum_table(const StepFunction& f) {
  const Window& w = f.window();
  const int K = w.half_extent_log(), N = w.resolution_log(), A = w.ancestor_depth();
  std::vector<double> sum(static_cast<std::size_t>(w.interval_count()), 0.0);

  for (std::int64_t c = 0; c < w.cell_count(); ++c) sum[w.cell_id(c)] = f[c];
  for (int k = N - 1; k >= -K; --k) {
    const std::int64_t half = ipow2(K + k);
    for (std::int64_t m = -half; m < half; ++m) {
      const std::int64_t id = w.id_of({k, m});
      const std::int64_t lc = w.id_of({k + 1, 2 * m});
      sum[id] = sum[lc] + sum[lc + 1];
    }
  }
  if (A > 0) {
    const double neg = sum[w.id_of({-K, -1})];
    const double pos = sum[w.id_of({-K, 0})];
    for (int a = 1; a <= A; ++a) {
      sum[w.id_of({-(K + a), -1})] = neg;
      sum[w.id_of({-(K + a), 0})] = pos;
    }
  }
  return sum;
}

inline double average_from_cell_sum(const Window& w, const DyadicInterval& I, double cell_sum) {
  // (1/|I|) * integral = cell_sum * 2^-N / 2^-scale; exact power-of-two scaling
  return std::ldexp(cell_sum, I.scale - w.resolution_log());
}

/// Averages over the window part of every enumerated interval.
inline std::vector<double> average_table(const StepFunction& f) {
  const Window& w = f.window();
  std::vector<double> avg = cell_sum_table(f);
  for (std::int64_t id = 0; id < w.interval_count(); ++id)
    avg[id] = average_from_cell_sum(w, w.interval_at(id), avg[id]);
  return avg;
}

/// Haar coefficients <f, h_I> for every enumerated interval.
///
/// At the finest scale the coefficient is exactly 0 (f is constant on the
/// cell). For ancestors the window part lies in one half of I, so the
/// coefficient reduces to -+ |I|^{-1/2} times the integral over that half.
inline std::vector<double> coefficient_table(const StepFunction& f) {
  const Window& w = f.window();
  const int K = w.half_extent_log(), N = w.resolution_log(), A = w.ancestor_depth();
  const std::vector<double> sum = cell_sum_table(f);
  std::vector<double> coef(sum.size(), 0.0);

  for (int k = N - 1; k >= -K; --k) {
    const std::int64_t half = ipow2(K + k);
    const double inv_sqrt_len = std::sqrt(pow2(k));  // |I|^{-1/2}
    const double cell_len = pow2(-N);
    for (std::int64_t m = -half; m < half; ++m) {
      const std::int64_t id = w.id_of({k, m});
      const std::int64_t lc = w.id_of({k + 1, 2 * m});
      coef[id] = inv_sqrt_len * cell_len * (sum[lc + 1] - sum[lc]);
    }
  }
  if (A > 0) {
    const double cell_len = pow2(-N);
    const double neg = sum[w.id_of({-K, -1})];
    const double pos = sum[w.id_of({-K, 0})];
    for (int a = 1; a <= A; ++a) {
      const double inv_sqrt_len = std::sqrt(pow2(-(K + a)));
      // [-2^{K+a}, 0): window part [-2^K, 0) is inside the right half.
      coef[w.id_of({-(K + a), -1})] = inv_sqrt_len * cell_len * neg;
      // [0, 2^{K+a}): window part [0, 2^K) is inside the left half.
      coef[w.id_of({-(K + a), 0})] = -inv_sqrt_len * cell_len * pos;
    }
  }
  return coef;
}

/// Minimum of f over the window part of every enumerated interval.
inline std::vector<double> min_table(const StepFunction& f) {
  const Window& w = f.window();
  const int K = w.half_extent_log(), N = w.resolution_log(), A = w.ancestor_depth();
  std::vector<double> mn(static_cast<std::size_t>(w.interval_count()), 0.0);
  for (std::int64_t c = 0; c < w.cell_count(); ++c) mn[w.cell_id(c)] = f[c];
  for (int k = N - 1; k >= -K; --k) {
    const std::int64_t half = ipow2(K + k);
    for (std::int64_t m = -half; m < half; ++m) {
      const std::int64_t id = w.id_of({k, m});
      const std::int64_t lc = w.id_of({k + 1, 2 * m});
      mn[id] = std::min(mn[lc], mn[lc + 1]);
    }
  }
  for (int a = 1; a <= A; ++a) {
    mn[w.id_of({-(K + a), -1})] = mn[w.id_of({-K, -1})];
    mn[w.id_of({-(K + a), 0})] = mn[w.id_of({-K, 0})];
  }
  return mn;
}

/// Sign of h_I on the window part of an ancestor: the positive-side
/// ancestor has its window part in the left half (h = -|I|^{-1/2}), the
/// negative-side one in the right half (h = +|I|^{-1/2}).
inline double ancestor_side_sign(const DyadicInterval& I) { return I.offset == 0 ? -1.0 : 1.0; }

/// out(x) = sum over enumerated I of coef_by_id[I] * h_I(x)^power, with
/// h_I^0 read as the indicator 1_I. Top-down over the interval tree, so
/// the additions along each root-to-leaf path run coarse to fine.
/// Finest-scale entries must vanish (their halves are unresolvable); for
/// every operator built here they do, exactly.
inline StepFunction accumulate_haar_sum(const Window& w, const std::vector<double>& coef_by_id,
                                        int power) {
  if (static_cast<std::int64_t>(coef_by_id.size()) != w.interval_count())
    throw std::invalid_argument("accumulate_haar_sum: table size mismatch");
  if (power < 0) throw std::invalid_argument("accumulate_haar_sum: negative power");
  const int K = w.half_extent_log(), N = w.resolution_log(), A = w.ancestor_depth();

  const auto h_pow = [power](double mag, bool right) {
    if (power == 0) return 1.0;
    double v = std::pow(mag, power);
    return (!right && (power & 1)) ? -v : v;
  };

  // carry the ancestor contributions down to the two window halves
  double down_neg = 0.0, down_pos = 0.0;
  for (int a = A; a >= 1; --a) {
    const double mag = std::sqrt(pow2(-(K + a)));
    const double cneg = coef_by_id[w.id_of({-(K + a), -1})];
    const double cpos = coef_by_id[w.id_of({-(K + a), 0})];
    down_neg += cneg * h_pow(mag, /*right=*/true);
    down_pos += cpos * h_pow(mag, /*right=*/false);
  }

  std::vector<double> down(static_cast<std::size_t>(w.in_window_count()), 0.0);
  down[w.id_of({-K, -1})] = down_neg;
  down[w.id_of({-K, 0})] = down_pos;

  for (int k = -K; k < N; ++k) {
    const std::int64_t half = ipow2(K + k);
    const double mag = std::sqrt(pow2(k));
    for (std::int64_t m = -half; m < half; ++m) {
      const std::int64_t id = w.id_of({k, m});
      const std::int64_t lc = w.id_of({k + 1, 2 * m});
      const double c = coef_by_id[id];
      down[lc] = down[id] + c * h_pow(mag, false);
      down[lc + 1] = down[id] + c * h_pow(mag, true);
    }
  }

  StepFunction out = StepFunction::zero(w);
  for (std::int64_t cidx = 0; cidx < w.cell_count(); ++cidx) out[cidx] = down[w.cell_id(cidx)];
  return out;
}

}  // namespace detail

inline void require_resolvable(const Window& w, const DyadicInterval& I) {
  if (I.scale > w.resolution_log()) {
    const std::int64_t half = ipow2(w.half_extent_log() + I.scale);
    if (I.offset >= -half && I.offset < half)
      throw std::invalid_argument("below resolution: " + I.str());
  }
  if (!w.is_enumerated(I))
    throw std::invalid_argument("interval is neither in-window nor an ancestor: " + I.str());
}

/// Integral of f over I's window part (f is zero outside the window).
inline double integral(const StepFunction& f, const DyadicInterval& I) {
  require_resolvable(f.window(), I);
  const auto r = f.window().cell_range(I);
  double s = 0.0;
  for (std::int64_t c = r.first; c < r.first + r.count; ++c) s += f[c];
  return std::ldexp(s, -f.window().resolution_log());
}

/// (1/|I|) * integral of f over I. For ancestors the integral runs over
/// the window part only.
inline double average(const StepFunction& f, const DyadicInterval& I) {
  require_resolvable(f.window(), I);
  const auto r = f.window().cell_range(I);
  double s = 0.0;
  for (std::int64_t c = r.first; c < r.first + r.count; ++c) s += f[c];
  return detail::average_from_cell_sum(f.window(), I, s);
}

/// <f, h_I> = |I|^{-1/2} (int_{I+} f - int_{I-} f), exactly.
inline double haar_coefficient(const StepFunction& f, const DyadicInterval& I) {
  const Window& w = f.window();
  require_resolvable(w, I);
  if (I.scale == w.resolution_log()) return 0.0;  // f constant on I
  if (w.is_in_window(I))
    return std::sqrt(pow2(I.scale)) *
           (integral(f, I.right_half()) - integral(f, I.left_half()));
  // ancestor: one half holds the whole window part, the other is outside
  const double side = detail::ancestor_side_sign(I);
  return side * std::sqrt(pow2(I.scale)) * integral(f, {-w.half_extent_log(), I.offset});
}

/// The Haar function h_I = |I|^{-1/2} (1_{I+} - 1_{I-}) as a step
/// function, clipped to the window for ancestors.
inline StepFunction haar_function(const DyadicInterval& I, const Window& w) {
  if (!w.is_enumerated(I))
    throw std::invalid_argument("haar_function: interval not enumerated: " + I.str());
  if (I.scale >= w.resolution_log())
    throw std::invalid_argument("haar_function: halves of " + I.str() +
                                " are below resolution");
  StepFunction out = StepFunction::zero(w);
  const double v = std::sqrt(pow2(I.scale));  // |I|^{-1/2}
  if (w.is_in_window(I)) {
    const auto lo = w.cell_range(I.left_half());
    const auto hi = w.cell_range(I.right_half());
    for (std::int64_t c = lo.first; c < lo.first + lo.count; ++c) out[c] = -v;
    for (std::int64_t c = hi.first; c < hi.first + hi.count; ++c) out[c] = v;
    return out;
  }
  const auto r = w.cell_range(I);
  const double s = detail::ancestor_side_sign(I) * v;
  for (std::int64_t c = r.first; c < r.first + r.count; ++c) out[c] = s;
  return out;
}

/// h_I(x)^p as a step function, with h_I^0 = 1_I.
inline StepFunction haar_power(const DyadicInterval& I, const Window& w, int p) {
  if (p == 0) return StepFunction::indicator(w, I);
  StepFunction h = haar_function(I, w);
  if (p == 1) return h;
  for (double& v : h.cells()) v = std::pow(v, p);
  return h;
}

/// Full Haar data of a step function: the two window-half averages plus
/// the coefficients of all in-window intervals with resolvable halves.
struct HaarExpansion {
  double average_negative = 0.0;  // <f>_{[-2^K, 0)}
  double average_positive = 0.0;  // <f>_{[0, 2^K)}
  std::map<DyadicInterval, double> coefficients;
};

inline HaarExpansion analyze(const StepFunction& f) {
  const Window& w = f.window();
  HaarExpansion e;
  e.average_negative = average(f, {-w.half_extent_log(), -1});
  e.average_positive = average(f, {-w.half_extent_log(), 0});
  const auto coef = detail::coefficient_table(f);
  for (std::int64_t id = 0; id < w.in_window_count(); ++id) {
    const DyadicInterval I = w.interval_at(id);
    if (I.scale < w.resolution_log()) e.coefficients.emplace(I, coef[id]);
  }
  return e;
}

/// <f>_{S''} 1_{S''} + <f>_{S'} 1_{S'} + sum_I coeffs(I) h_I; the inverse
/// of analyze on the window.
inline StepFunction reconstruct(const std::map<DyadicInterval, double>& coeffs,
                                std::pair<double, double> window_averages, const Window& w) {
  std::vector<double> by_id(static_cast<std::size_t>(w.interval_count()), 0.0);
  for (const auto& [I, c] : coeffs) {
    if (!w.is_in_window(I) || I.scale >= w.resolution_log())
      throw std::invalid_argument(
          "reconstruct: coefficients must be indexed by in-window intervals of scale < N, got " +
          I.str());
    by_id[w.id_of(I)] = c;
  }
  StepFunction out = detail::accumulate_haar_sum(w, by_id, 1);
  const std::int64_t half = w.cell_count() / 2;
  for (std::int64_t c = 0; c < half; ++c) out[c] += window_averages.first;
  for (std::int64_t c = half; c < w.cell_count(); ++c) out[c] += window_averages.second;
  return out;
}

inline StepFunction reconstruct(const HaarExpansion& e, const Window& w) {
  return reconstruct(e.coefficients, {e.average_negative, e.average_positive}, w);
}

}  // namespace dyadic
