#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dyadic/haar.hpp"

namespace dyadic {

/// alpha in {0,1}^m. Slot j of an operator reads the Haar coefficient of
/// f_j when alpha_j = 0 and the average when alpha_j = 1. sigma(alpha) is
/// the number of zero slots; U_m excludes the all-ones index.
struct MultiIndex {
  std::vector<std::uint8_t> bits;

  std::size_t arity() const { return bits.size(); }

  std::size_t zero_count() const {
    std::size_t z = 0;
    for (auto b : bits) z += (b == 0);
    return z;
  }

  bool all_ones() const { return zero_count() == 0; }

  static MultiIndex parse(std::string_view s) {
    MultiIndex a;
    for (char c : s) {
      if (c != '0' && c != '1')
        throw std::invalid_argument("alpha must be a string over {0,1}, got '" + std::string(s) +
                                    "'");
      a.bits.push_back(c == '1');
    }
    if (a.bits.empty()) throw std::invalid_argument("alpha must be nonempty");
    return a;
  }

  std::string str() const {
    std::string s;
    for (auto b : bits) s += b ? '1' : '0';
    return s;
  }
};

/// Bounded symbol eps: listed intervals carry their own value, every
/// other interval carries the default. ||eps||_inf accounts for both.
struct SymbolSequence {
  double default_value = 0.0;
  std::map<DyadicInterval, double> entries;

  static SymbolSequence constant(double v) { return {v, {}}; }

  double value_at(const DyadicInterval& I) const {
    auto it = entries.find(I);
    return it == entries.end() ? default_value : it->second;
  }

  double sup_norm() const {
    double m = std::fabs(default_value);
    for (const auto& [I, v] : entries) m = std::max(m, std::fabs(v));
    return m;
  }
};

/// f(I,0) = <f, h_I>, f(I,1) = <f>_I.
inline double slot_value(const StepFunction& f, const DyadicInterval& I, int bit) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("slot_value: bit must be 0 or 1");
  return bit ? average(f, I) : haar_coefficient(f, I);
}

namespace detail {

inline void check_operator_inputs(const MultiIndex& alpha, std::span<const StepFunction> fs) {
  if (alpha.arity() != fs.size())
    throw std::invalid_argument("alpha length (" + std::to_string(alpha.arity()) +
                                ") must match the number of input functions (" +
                                std::to_string(fs.size()) + ")");
  if (fs.empty()) throw std::invalid_argument("operator needs at least one input function");
  for (const auto& f : fs) fs[0].check_same_window(f);
}

/// Per-interval product of slot values, one table per slot.
inline std::vector<double> slot_product_table(const MultiIndex& alpha,
                                              std::span<const StepFunction> fs) {
  const Window& w = fs[0].window();
  std::vector<double> prod(static_cast<std::size_t>(w.interval_count()), 1.0);
  for (std::size_t j = 0; j < fs.size(); ++j) {
    const std::vector<double> t =
        alpha.bits[j] ? average_table(fs[j]) : coefficient_table(fs[j]);
    for (std::size_t id = 0; id < prod.size(); ++id) prod[id] *= t[id];
  }
  return prod;
}

}  // namespace detail

/// P^alpha(f_1,...,f_m) = sum_I prod_j f_j(I,alpha_j) h_I^{sigma(alpha)}
/// over the window+ancestor enumeration.
inline StepFunction paraproduct(const MultiIndex& alpha, std::span<const StepFunction> fs) {
  if (alpha.all_ones()) throw std::invalid_argument("alpha must lie in U_m (not all ones)");
  detail::check_operator_inputs(alpha, fs);
  const Window& w = fs[0].window();
  return detail::accumulate_haar_sum(w, detail::slot_product_table(alpha, fs),
                                     static_cast<int>(alpha.zero_count()));
}

/// pi_b^alpha(f) = P^{(0,alpha)}(b, f_1, ..., f_m); any alpha in {0,1}^m.
inline StepFunction pi_b(const StepFunction& b, const MultiIndex& alpha,
                         std::span<const StepFunction> fs) {
  detail::check_operator_inputs(alpha, fs);
  b.check_same_window(fs[0]);
  const Window& w = fs[0].window();
  std::vector<double> coef = detail::slot_product_table(alpha, fs);
  const std::vector<double> bc = detail::coefficient_table(b);
  for (std::size_t id = 0; id < coef.size(); ++id) coef[id] *= bc[id];
  return detail::accumulate_haar_sum(w, coef, static_cast<int>(alpha.zero_count()) + 1);
}

/// T_eps^alpha(f) = sum_I eps_I prod_j f_j(I,alpha_j) h_I^{sigma(alpha)}.
inline StepFunction haar_multiplier(const SymbolSequence& eps, const MultiIndex& alpha,
                                    std::span<const StepFunction> fs) {
  if (alpha.all_ones()) throw std::invalid_argument("alpha must lie in U_m (not all ones)");
  detail::check_operator_inputs(alpha, fs);
  const Window& w = fs[0].window();
  std::vector<double> coef = detail::slot_product_table(alpha, fs);
  for (std::int64_t id = 0; id < w.interval_count(); ++id)
    coef[static_cast<std::size_t>(id)] *= eps.value_at(w.interval_at(id));
  return detail::accumulate_haar_sum(w, coef, static_cast<int>(alpha.zero_count()));
}

/// M_g^i: replace slot i (0-based) by the cellwise product g * f_i.
inline std::vector<StepFunction> multiply_slot(const StepFunction& g, std::size_t i,
                                               std::span<const StepFunction> fs) {
  if (i >= fs.size())
    throw std::invalid_argument("slot index " + std::to_string(i + 1) + " out of range 1.." +
                                std::to_string(fs.size()));
  g.check_same_window(fs[0]);
  std::vector<StepFunction> out(fs.begin(), fs.end());
  out[i] = g * fs[i];
  return out;
}

/// [b, T_eps^alpha]_i = M_b . T_eps^alpha - T_eps^alpha . M_b^i, computed
/// by composing the two public operations.
inline StepFunction commutator(const StepFunction& b, const SymbolSequence& eps,
                               const MultiIndex& alpha, std::size_t i,
                               std::span<const StepFunction> fs) {
  StepFunction lhs = b * haar_multiplier(eps, alpha, fs);
  const std::vector<StepFunction> shifted = multiply_slot(b, i, fs);
  return lhs - haar_multiplier(eps, alpha, shifted);
}

}  // namespace dyadic
