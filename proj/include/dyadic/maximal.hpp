#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "dyadic/haar.hpp"

namespace dyadic {

namespace detail {

/// Per-cell max of score_by_id over the enumerated intervals containing
/// the cell. Top-down: each node carries the best score seen on the path
/// from the top ancestor.
inline StepFunction max_over_containing(const Window& w, const std::vector<double>& score) {
  const int K = w.half_extent_log(), N = w.resolution_log(), A = w.ancestor_depth();
  double top_neg = -HUGE_VAL, top_pos = -HUGE_VAL;
  for (int a = A; a >= 1; --a) {
    top_neg = std::max(top_neg, score[w.id_of({-(K + a), -1})]);
    top_pos = std::max(top_pos, score[w.id_of({-(K + a), 0})]);
  }
  std::vector<double> best(static_cast<std::size_t>(w.in_window_count()), 0.0);
  best[w.id_of({-K, -1})] = std::max(top_neg, score[w.id_of({-K, -1})]);
  best[w.id_of({-K, 0})] = std::max(top_pos, score[w.id_of({-K, 0})]);
  for (int k = -K; k < N; ++k) {
    const std::int64_t half = ipow2(K + k);
    for (std::int64_t m = -half; m < half; ++m) {
      const std::int64_t id = w.id_of({k, m});
      const std::int64_t lc = w.id_of({k + 1, 2 * m});
      best[lc] = std::max(best[id], score[lc]);
      best[lc + 1] = std::max(best[id], score[lc + 1]);
    }
  }
  StepFunction out = StepFunction::zero(w);
  for (std::int64_t c = 0; c < w.cell_count(); ++c) out[c] = best[w.cell_id(c)];
  return out;
}

/// Mean absolute deviation about the median of a sorted sample; the
/// minimiser of c -> mean |v_i - c|.
inline double mean_abs_dev_about_median(const std::vector<double>& sorted) {
  const std::size_t n = sorted.size();
  if (n <= 1) return 0.0;
  const std::size_t m = n / 2;
  double below = 0.0, at_or_above = 0.0;
  for (std::size_t i = 0; i < m; ++i) below += sorted[i];
  for (std::size_t i = m; i < n; ++i) at_or_above += sorted[i];
  double total = at_or_above - below;           // sum_{i>=m} v - sum_{i<m} v
  if (n % 2 == 1) total -= sorted[m];           // odd n: c = v[m] contributes once
  return total / static_cast<double>(n);
}

/// inf_c <|f - c|>_I for every enumerated interval. In-window intervals
/// use exact medians over their (equal-length) cells, built by merging
/// children bottom-up. Over an ancestor at least half the cells lie
/// outside the window where f = 0, so c = 0 is a median and the infimum
/// is (1/|I|) int |f| over the window part.
inline std::vector<double> oscillation_table(const StepFunction& f) {
  const Window& w = f.window();
  const int K = w.half_extent_log(), N = w.resolution_log(), A = w.ancestor_depth();
  std::vector<double> osc(static_cast<std::size_t>(w.interval_count()), 0.0);
  std::vector<std::vector<double>> sorted(static_cast<std::size_t>(w.in_window_count()));

  for (std::int64_t c = 0; c < w.cell_count(); ++c) sorted[w.cell_id(c)] = {f[c]};
  for (int k = N - 1; k >= -K; --k) {
    const std::int64_t half = ipow2(K + k);
    for (std::int64_t m = -half; m < half; ++m) {
      const std::int64_t id = w.id_of({k, m});
      const std::int64_t lc = w.id_of({k + 1, 2 * m});
      auto& dst = sorted[id];
      dst.resize(sorted[lc].size() + sorted[lc + 1].size());
      std::merge(sorted[lc].begin(), sorted[lc].end(), sorted[lc + 1].begin(),
                 sorted[lc + 1].end(), dst.begin());
      osc[id] = mean_abs_dev_about_median(dst);
    }
  }
  if (A > 0) {
    double abs_neg = 0.0, abs_pos = 0.0;
    const std::int64_t half = w.cell_count() / 2;
    for (std::int64_t c = 0; c < half; ++c) abs_neg += std::fabs(f[c]);
    for (std::int64_t c = half; c < w.cell_count(); ++c) abs_pos += std::fabs(f[c]);
    for (int a = 1; a <= A; ++a) {
      osc[w.id_of({-(K + a), -1})] = std::ldexp(abs_neg, -(N + K + a));
      osc[w.id_of({-(K + a), 0})] = std::ldexp(abs_pos, -(N + K + a));
    }
  }
  return osc;
}

}  // namespace detail

/// Mf(x) = max over enumerated I containing x of <|f|>_I.
inline StepFunction maximal(const StepFunction& f) {
  return detail::max_over_containing(f.window(), detail::average_table(f.abs()));
}

/// M_delta f = M(|f|^delta)^{1/delta}.
inline StepFunction maximal_delta(const StepFunction& f, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("maximal_delta: delta must be positive");
  StepFunction m = maximal(f.abs_pow(delta));
  for (double& v : m.cells()) v = std::pow(v, 1.0 / delta);
  return m;
}

/// M#f(x) = max over enumerated I containing x of inf_c <|f - c|>_I.
inline StepFunction sharp_maximal(const StepFunction& f) {
  return detail::max_over_containing(f.window(), detail::oscillation_table(f));
}

/// M_delta# f = (M#(|f|^delta))^{1/delta}, 0 < delta < 1.
inline StepFunction sharp_maximal_delta(const StepFunction& f, double delta) {
  if (!(delta > 0 && delta < 1))
    throw std::invalid_argument("sharp_maximal_delta: delta must lie in (0,1)");
  StepFunction m = sharp_maximal(f.abs_pow(delta));
  for (double& v : m.cells()) v = std::pow(v, 1.0 / delta);
  return m;
}

/// M(f_1,...,f_m)(x) = max over I containing x of prod_j <|f_j|>_I.
inline StepFunction multilinear_maximal(std::span<const StepFunction> fs) {
  if (fs.empty()) throw std::invalid_argument("multilinear_maximal: empty input");
  for (const auto& f : fs) fs[0].check_same_window(f);
  const Window& w = fs[0].window();
  std::vector<double> prod(static_cast<std::size_t>(w.interval_count()), 1.0);
  for (const auto& f : fs) {
    const std::vector<double> t = detail::average_table(f.abs());
    for (std::size_t id = 0; id < prod.size(); ++id) prod[id] *= t[id];
  }
  return detail::max_over_containing(w, prod);
}

/// M_r(f_1,...,f_m)(x) = max over I containing x of
/// prod_j <|f_j|^r>_I^{1/r}, r > 0.
inline StepFunction multilinear_maximal_r(std::span<const StepFunction> fs, double r) {
  if (!(r > 0)) throw std::invalid_argument("multilinear_maximal_r: r must be positive");
  if (fs.empty()) throw std::invalid_argument("multilinear_maximal_r: empty input");
  for (const auto& f : fs) fs[0].check_same_window(f);
  const Window& w = fs[0].window();
  std::vector<double> prod(static_cast<std::size_t>(w.interval_count()), 1.0);
  for (const auto& f : fs) {
    const std::vector<double> t = detail::average_table(f.abs_pow(r));
    for (std::size_t id = 0; id < prod.size(); ++id) prod[id] *= t[id];
  }
  StepFunction m = detail::max_over_containing(w, prod);
  for (double& v : m.cells()) v = std::pow(v, 1.0 / r);
  return m;
}

}  // namespace dyadic
