#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dyadic/haar.hpp"
#include "dyadic/norms.hpp"

namespace dyadic {

/// A weight: a step function with every cell value strictly positive and
/// finite. Weight suprema (A_p and friends) run over in-window intervals;
/// the zero extension outside the window is no weight, so ancestors are
/// excluded from those suprema.
class Weight {
 public:
  explicit Weight(StepFunction f) : f_(std::move(f)) {
    for (double v : f_.cells())
      if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument("Weight: cell values must be strictly positive and finite");
  }

  static Weight ones(const Window& w) { return Weight(StepFunction::constant(w, 1.0)); }

  const StepFunction& fn() const { return f_; }
  const Window& window() const { return f_.window(); }

 private:
  StepFunction f_;
};

/// w(E) for E a union of cells, given as a mask.
inline double weight_measure(const Weight& w, const std::vector<bool>& cell_mask) {
  const StepFunction& f = w.fn();
  if (static_cast<std::int64_t>(cell_mask.size()) != f.size())
    throw std::invalid_argument("weight_measure: mask length must equal cell count");
  double s = 0.0;
  for (std::int64_t c = 0; c < f.size(); ++c)
    if (cell_mask[static_cast<std::size_t>(c)]) s += f[c];
  return std::ldexp(s, -f.window().resolution_log());
}

inline double weight_measure(const Weight& w, const DyadicInterval& I) {
  return integral(w.fn(), I);
}

struct CharacteristicResult {
  double value = 0.0;
  DyadicInterval witness;
};

namespace detail {

template <class Score>
CharacteristicResult max_over_in_window(const Window& w, Score&& score) {
  CharacteristicResult best{-std::numeric_limits<double>::infinity(), {}};
  for (std::int64_t id = 0; id < w.in_window_count(); ++id) {
    const double s = score(id);
    if (s > best.value) best = {s, w.interval_at(id)};
  }
  return best;
}

}  // namespace detail

/// [w]_{A_p} = sup_I <w>_I <w^{-1/(p-1)}>_I^{p-1}, p > 1, over in-window
/// dyadic intervals.
inline CharacteristicResult ap_characteristic_detail(const Weight& w, double p) {
  if (!(p > 1))
    throw std::invalid_argument("ap_characteristic: p must exceed 1 (use a1_characteristic)");
  const std::vector<double> aw = detail::average_table(w.fn());
  const std::vector<double> ad = detail::average_table(w.fn().pow(-1.0 / (p - 1)));
  return detail::max_over_in_window(w.window(), [&](std::int64_t id) {
    return aw[id] * std::pow(ad[id], p - 1);
  });
}

inline double ap_characteristic(const Weight& w, double p) {
  return ap_characteristic_detail(w, p).value;
}

/// [w]_{A_1} = sup_I <w>_I ||w^{-1}||_{L^inf(I)}; the essential sup is the
/// max of 1/w over the cells of I, exact for step functions.
inline CharacteristicResult a1_characteristic_detail(const Weight& w) {
  const std::vector<double> aw = detail::average_table(w.fn());
  const std::vector<double> mn = detail::min_table(w.fn());
  return detail::max_over_in_window(w.window(),
                                    [&](std::int64_t id) { return aw[id] / mn[id]; });
}

inline double a1_characteristic(const Weight& w) { return a1_characteristic_detail(w).value; }

struct AinfEstimate {
  double value = 0.0;
  double minimizing_p = 0.0;
};

inline std::vector<double> default_ainf_grid() {
  std::vector<double> g;
  for (int t = 8; t >= -4; --t) g.push_back(1.0 + pow2(-t));
  for (double p : {4.0, 8.0, 16.0}) g.push_back(p);
  return g;  // 1 + 2^-8 .. 1 + 2^4, then 4, 8, 16 (2 appears as 1 + 2^0)
}

/// Grid upper bound for [w]_{A_inf} = inf_p [w]_{A_p}; the true infimum
/// over the continuum is out of reach, so this is an estimate from above.
inline AinfEstimate ainf_estimate_detail(const Weight& w, const std::vector<double>& p_grid) {
  if (p_grid.empty()) throw std::invalid_argument("ainf_estimate: empty p grid");
  AinfEstimate best{std::numeric_limits<double>::infinity(), 0.0};
  for (double p : p_grid) {
    const double c = ap_characteristic(w, p);
    if (c < best.value) best = {c, p};
  }
  return best;
}

inline double ainf_estimate(const Weight& w, const std::vector<double>& p_grid) {
  return ainf_estimate_detail(w, p_grid).value;
}

inline double ainf_estimate(const Weight& w) {
  return ainf_estimate_detail(w, default_ainf_grid()).value;
}

/// P = (p_1,...,p_m) with the Hoelder aggregate 1/p = sum 1/p_j.
struct ExponentVector {
  std::vector<double> p_list;

  explicit ExponentVector(std::vector<double> ps) : p_list(std::move(ps)) {
    if (p_list.empty()) throw std::invalid_argument("ExponentVector: empty exponent list");
    for (double p : p_list)
      if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("ExponentVector: exponents must lie in [1, inf)");
  }

  std::size_t arity() const { return p_list.size(); }

  double aggregate_p() const {
    double inv = 0.0;
    for (double p : p_list) inv += 1.0 / p;
    return 1.0 / inv;
  }

  bool all_above_one() const {
    for (double p : p_list)
      if (p == 1.0) return false;
    return true;
  }

  /// Conjugate p_j' = p_j/(p_j - 1); infinite for p_j = 1.
  double conjugate(std::size_t j) const {
    const double p = p_list[j];
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    return p / (p - 1.0);
  }

  ExponentVector scaled_down(double r) const {
    std::vector<double> ps = p_list;
    for (double& p : ps) p /= r;
    return ExponentVector(std::move(ps));  // throws when some p_j/r < 1
  }
};

/// (w_1,...,w_m) with its exponent vector.
struct WeightVector {
  std::vector<Weight> weights;
  ExponentVector exponents;

  WeightVector(std::vector<Weight> ws, ExponentVector ps)
      : weights(std::move(ws)), exponents(std::move(ps)) {
    if (weights.empty()) throw std::invalid_argument("WeightVector: empty weight list");
    if (weights.size() != exponents.arity())
      throw std::invalid_argument("WeightVector: weight and exponent counts differ");
    for (const Weight& w : weights) w.fn().check_same_window(weights[0].fn());
  }

  const Window& window() const { return weights[0].window(); }
};

/// nu_w = prod_j w_j^{p/p_j}, itself a weight.
inline Weight nu_weight(const WeightVector& wv) {
  const double p = wv.exponents.aggregate_p();
  StepFunction nu = StepFunction::constant(wv.window(), 1.0);
  for (std::size_t j = 0; j < wv.weights.size(); ++j)
    nu = nu * wv.weights[j].fn().pow(p / wv.exponents.p_list[j]);
  return Weight(nu);
}

/// Multilinear A_P characteristic
///   sup_I <nu_w>_I^{1/p} prod_j <w_j^{1-p_j'}>_I^{1/p_j'},
/// with the p_j = 1 factor read as ||w_j^{-1}||_{L^inf(I)}.
inline CharacteristicResult multilinear_ap_characteristic_detail(const WeightVector& wv) {
  const Window& win = wv.window();
  const double p = wv.exponents.aggregate_p();
  const std::vector<double> anu = detail::average_table(nu_weight(wv).fn());

  std::vector<std::vector<double>> factor;  // per slot, per interval id
  for (std::size_t j = 0; j < wv.weights.size(); ++j) {
    const double pj = wv.exponents.p_list[j];
    if (pj == 1.0) {
      std::vector<double> mn = detail::min_table(wv.weights[j].fn());
      for (double& v : mn) v = 1.0 / v;
      factor.push_back(std::move(mn));
    } else {
      const double conj = wv.exponents.conjugate(j);
      std::vector<double> av = detail::average_table(wv.weights[j].fn().pow(1.0 - conj));
      for (double& v : av) v = std::pow(v, 1.0 / conj);
      factor.push_back(std::move(av));
    }
  }
  return detail::max_over_in_window(win, [&](std::int64_t id) {
    double t = std::pow(anu[id], 1.0 / p);
    for (const auto& fj : factor) t *= fj[id];
    return t;
  });
}

inline double multilinear_ap_characteristic(const WeightVector& wv) {
  return multilinear_ap_characteristic_detail(wv).value;
}

}  // namespace dyadic
