// Brute-force reference implementations used only by tests. These follow
// the definitions cell by cell and interval by interval, sharing none of
// the table machinery of the library paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dyadic/harness.hpp"

namespace oracle {

using dyadic::DyadicInterval;
using dyadic::MultiIndex;
using dyadic::StepFunction;
using dyadic::SymbolSequence;
using dyadic::Window;

inline double pw2(int e) { return std::ldexp(1.0, e); }

// integral of f over I's window part by a plain cell loop
inline double integral(const StepFunction& f, const DyadicInterval& I) {
  const Window& w = f.window();
  const auto r = w.cell_range(I);
  double s = 0.0;
  for (std::int64_t c = r.first; c < r.first + r.count; ++c)
    s += f[c] * pw2(-w.resolution_log());
  return s;
}

inline double average(const StepFunction& f, const DyadicInterval& I) {
  return oracle::integral(f, I) / pw2(-I.scale);
}

inline double haar_coefficient(const StepFunction& f, const DyadicInterval& I) {
  const Window& w = f.window();
  if (I.scale == w.resolution_log()) return 0.0;  // constant on a cell
  if (w.is_in_window(I))
    return (oracle::integral(f, I.right_half()) - oracle::integral(f, I.left_half())) /
         std::sqrt(pw2(-I.scale));
  // one-sided ancestor: the window part sits in a single half
  const double sign = I.offset == 0 ? -1.0 : 1.0;
  return sign * oracle::integral(f, {-w.half_extent_log(), I.offset}) /
         std::sqrt(pw2(-I.scale));
}

// h_I at the midpoint of cell c (0 off I; +-|I|^{-1/2} on the halves)
inline double haar_value_at_cell(const Window& w, const DyadicInterval& I, std::int64_t cell) {
  const auto r = w.cell_range(I);
  if (cell < r.first || cell >= r.first + r.count) return 0.0;
  const double v = std::sqrt(pw2(I.scale));
  if (!w.is_in_window(I)) return (I.offset == 0 ? -1.0 : 1.0) * v;
  const auto left = w.cell_range(I.left_half());
  return (cell < left.first + left.count) ? -v : v;
}

inline double h_power_at_cell(const Window& w, const DyadicInterval& I, std::int64_t cell,
                              int power) {
  const auto r = w.cell_range(I);
  if (cell < r.first || cell >= r.first + r.count) return 0.0;
  if (power == 0) return 1.0;
  return std::pow(haar_value_at_cell(w, I, cell), power);
}

enum class Kind { paraproduct, pi_b, haar_multiplier };

// direct per-cell sum over every enumerated interval
inline StepFunction apply_direct(Kind kind, const MultiIndex& alpha,
                                 const std::vector<StepFunction>& fs,
                                 const StepFunction* b, const SymbolSequence* eps) {
  const Window& w = fs.front().window();
  const int power = static_cast<int>(alpha.zero_count()) + (kind == Kind::pi_b ? 1 : 0);
  StepFunction out = StepFunction::zero(w);
  for (const DyadicInterval& I : w.enumerate()) {
    double coef = 1.0;
    switch (kind) {
      case Kind::paraproduct: break;
      case Kind::pi_b: coef = oracle::haar_coefficient(*b, I); break;
      case Kind::haar_multiplier: coef = eps->value_at(I); break;
    }
    for (std::size_t j = 0; j < fs.size(); ++j)
      coef *= alpha.bits[j] ? oracle::average(fs[j], I) : oracle::haar_coefficient(fs[j], I);
    if (coef == 0.0) continue;
    for (std::int64_t c = 0; c < w.cell_count(); ++c)
      out[c] += coef * h_power_at_cell(w, I, c, power);
  }
  return out;
}

inline std::vector<DyadicInterval> intervals_containing_cell(const Window& w, std::int64_t cell) {
  std::vector<DyadicInterval> out;
  DyadicInterval I = w.cell(cell);
  out.push_back(I);
  while (I.scale > -w.half_extent_log()) {
    I = I.parent();
    out.push_back(I);
  }
  for (int a = 1; a <= w.ancestor_depth(); ++a)
    out.push_back({-(w.half_extent_log() + a), I.offset < 0 ? std::int64_t{-1} : std::int64_t{0}});
  return out;
}

// Mf by the definition: per cell, max of <|f|>_I over containing intervals
inline StepFunction maximal(const StepFunction& f) {
  const Window& w = f.window();
  const StepFunction af = f.abs();
  StepFunction out = StepFunction::zero(w);
  for (std::int64_t c = 0; c < w.cell_count(); ++c) {
    double best = 0.0;
    for (const auto& I : intervals_containing_cell(w, c)) best = std::max(best, oracle::average(af, I));
    out[c] = best;
  }
  return out;
}

inline StepFunction multilinear_maximal(const std::vector<StepFunction>& fs) {
  const Window& w = fs.front().window();
  StepFunction out = StepFunction::zero(w);
  for (std::int64_t c = 0; c < w.cell_count(); ++c) {
    double best = 0.0;
    for (const auto& I : intervals_containing_cell(w, c)) {
      double prod = 1.0;
      for (const auto& f : fs) prod *= oracle::average(f.abs(), I);
      best = std::max(best, prod);
    }
    out[c] = best;
  }
  return out;
}

// inf_c <|f-c|>_I with the candidate set {cell values of I} ∪ {0}; the
// infimum over all c is attained at a cell value (or 0 for ancestors)
inline double best_oscillation(const StepFunction& f, const DyadicInterval& I) {
  const Window& w = f.window();
  const auto r = w.cell_range(I);
  std::vector<double> candidates = {0.0};
  for (std::int64_t c = r.first; c < r.first + r.count; ++c) candidates.push_back(f[c]);
  const double len = pw2(-I.scale);
  const double outside = len - static_cast<double>(r.count) * pw2(-w.resolution_log());
  double best = HUGE_VAL;
  for (double cand : candidates) {
    double s = 0.0;
    for (std::int64_t c = r.first; c < r.first + r.count; ++c)
      s += std::fabs(f[c] - cand) * pw2(-w.resolution_log());
    s += outside * std::fabs(cand);  // f = 0 beyond the window
    best = std::min(best, s / len);
  }
  return best;
}

inline StepFunction sharp_maximal(const StepFunction& f) {
  const Window& w = f.window();
  StepFunction out = StepFunction::zero(w);
  for (std::int64_t c = 0; c < w.cell_count(); ++c) {
    double best = 0.0;
    for (const auto& I : intervals_containing_cell(w, c))
      best = std::max(best, best_oscillation(f, I));
    out[c] = best;
  }
  return out;
}

// [w]_{A_p} by looping in-window intervals with single-interval averages
inline double ap_characteristic(const StepFunction& w, double p) {
  const Window& win = w.window();
  double best = 0.0;
  for (std::int64_t id = 0; id < win.in_window_count(); ++id) {
    const DyadicInterval I = win.interval_at(id);
    best = std::max(best, oracle::average(w, I) *
                          std::pow(oracle::average(w.pow(-1.0 / (p - 1.0)), I), p - 1.0));
  }
  return best;
}

inline double multilinear_ap(const std::vector<StepFunction>& ws, const std::vector<double>& ps) {
  const Window& win = ws.front().window();
  double inv_p = 0.0;
  for (double p : ps) inv_p += 1.0 / p;
  StepFunction nu = StepFunction::constant(win, 1.0);
  for (std::size_t j = 0; j < ws.size(); ++j) nu = nu * ws[j].pow((1.0 / inv_p) / ps[j]);
  double best = 0.0;
  for (std::int64_t id = 0; id < win.in_window_count(); ++id) {
    const DyadicInterval I = win.interval_at(id);
    double t = std::pow(oracle::average(nu, I), inv_p);
    for (std::size_t j = 0; j < ws.size(); ++j) {
      if (ps[j] == 1.0) {
        const auto r = win.cell_range(I);
        double mn = HUGE_VAL;
        for (std::int64_t c = r.first; c < r.first + r.count; ++c) mn = std::min(mn, ws[j][c]);
        t *= 1.0 / mn;
      } else {
        const double conj = ps[j] / (ps[j] - 1.0);
        t *= std::pow(oracle::average(ws[j].pow(1.0 - conj), I), 1.0 / conj);
      }
    }
    best = std::max(best, t);
  }
  return best;
}

// sup over in-window I of mean oscillation, direct loops
inline double bmo_norm(const StepFunction& b) {
  const Window& w = b.window();
  double best = 0.0;
  for (std::int64_t id = 0; id < w.in_window_count(); ++id) {
    const DyadicInterval I = w.interval_at(id);
    const double avg = oracle::average(b, I);
    const auto r = w.cell_range(I);
    double s = 0.0;
    for (std::int64_t c = r.first; c < r.first + r.count; ++c) s += std::fabs(b[c] - avg);
    best = std::max(best, s / static_cast<double>(r.count));
  }
  return best;
}

}  // namespace oracle
