#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dyadic/bmo.hpp"
#include "dyadic/operators.hpp"
#include "dyadic/rng.hpp"
#include "dyadic/weights.hpp"

namespace dyadic {

enum class Profile { haar_series, indicator_sum, two_level };

inline const char* to_string(Profile p) {
  switch (p) {
    case Profile::haar_series: return "haar_series";
    case Profile::indicator_sum: return "indicator_sum";
    case Profile::two_level: return "two_level";
  }
  return "?";
}

inline Profile parse_profile(const std::string& s) {
  if (s == "haar_series") return Profile::haar_series;
  if (s == "indicator_sum") return Profile::indicator_sum;
  if (s == "two_level") return Profile::two_level;
  throw std::invalid_argument("unknown profile '" + s + "'");
}

/// Bound used to clip generated functions; the haar_series profile stays
/// well inside it by construction (|f| <= number of in-window scales).
inline constexpr double kGenBound = 64.0;

/// Deterministic random step function. Profiles:
///  - haar_series: coefficients a_I drawn with |a_I| <= sqrt(|I|) for all
///    in-window I with resolvable halves; window-half averages zero, so
///    the result has mean zero on each half.
///  - indicator_sum: a short sum of small-integer multiples of interval
///    indicators; values land in a finite set.
///  - two_level: one value on a random in-window interval, another off it.
inline StepFunction gen_step_function(std::uint64_t seed, std::uint64_t stream, const Window& w,
                                      Profile profile) {
  TrialRng rng(seed, stream, static_cast<std::uint64_t>(profile) + 101);
  switch (profile) {
    case Profile::haar_series: {
      std::vector<double> by_id(static_cast<std::size_t>(w.interval_count()), 0.0);
      for (std::int64_t id = 0; id < w.in_window_count(); ++id) {
        const DyadicInterval I = w.interval_at(id);
        if (I.scale < w.resolution_log())
          by_id[id] = rng.symmetric(1.0) * std::sqrt(pow2(-I.scale));
      }
      return detail::accumulate_haar_sum(w, by_id, 1).clamped(-kGenBound, kGenBound);
    }
    case Profile::indicator_sum: {
      StepFunction f = StepFunction::zero(w);
      const std::int64_t terms = rng.uniform_int(1, 8);
      for (std::int64_t t = 0; t < terms; ++t) {
        const DyadicInterval I = w.interval_at(rng.uniform_int(0, w.in_window_count() - 1));
        double c = static_cast<double>(rng.uniform_int(1, 2));
        if (rng.bernoulli(0.5)) c = -c;
        f += c * StepFunction::indicator(w, I);
      }
      return f.clamped(-kGenBound, kGenBound);
    }
    case Profile::two_level: {
      const DyadicInterval I = w.interval_at(rng.uniform_int(0, w.in_window_count() - 1));
      const double v_on = rng.symmetric(4.0), v_off = rng.symmetric(4.0);
      StepFunction f = StepFunction::constant(w, v_off);
      const auto r = w.cell_range(I);
      for (std::int64_t c = r.first; c < r.first + r.count; ++c) f[c] = v_on;
      return f;
    }
  }
  throw std::logic_error("unreachable");
}

/// Cycle the three profiles by stream index (used when a check wants
/// varied inputs across trials).
inline Profile cycled_profile(std::uint64_t stream) {
  switch (stream % 3) {
    case 0: return Profile::haar_series;
    case 1: return Profile::indicator_sum;
    default: return Profile::two_level;
  }
}

/// Random bounded symbol: one value per enumerated interval plus a
/// default, all uniform in [-bound, bound].
inline SymbolSequence gen_symbol(std::uint64_t seed, std::uint64_t stream, const Window& w,
                                 double bound = 1.0) {
  TrialRng rng(seed, stream, 707);
  SymbolSequence eps;
  eps.default_value = rng.symmetric(bound);
  for (std::int64_t id = 0; id < w.interval_count(); ++id)
    eps.entries.emplace(w.interval_at(id), rng.symmetric(bound));
  return eps;
}

struct GeneratedWeight {
  Weight weight;
  double characteristic = 1.0;  // exact A_p characteristic of the result
  double lambda = 0.0;          // scale used in w = exp(lambda g)
};

namespace detail {

inline Weight exp_weight(const StepFunction& g, double lambda) {
  StepFunction w = g;
  for (double& v : w.cells()) v = std::exp(lambda * v);
  return Weight(std::move(w));
}

}  // namespace detail

/// w = exp(lambda g) for a haar_series draw g, with lambda bisected until
/// [w]_{A_p} <= budget (and pushed toward the budget from below, so the
/// returned weight is as rough as the budget allows).
inline GeneratedWeight gen_ap_weight(std::uint64_t seed, std::uint64_t stream, const Window& w,
                                     double p, double budget) {
  if (!(p > 1)) throw std::invalid_argument("gen_ap_weight: p must exceed 1");
  if (budget < 1.0)
    throw std::invalid_argument("gen_ap_weight: budget infeasible ([w]_{A_p} >= 1 always)");
  if (budget == 1.0) return {Weight::ones(w), 1.0, 0.0};  // only constants reach 1
  const StepFunction g = gen_step_function(seed, stream, w, Profile::haar_series);
  const auto char_at = [&](double lambda) {
    return ap_characteristic(detail::exp_weight(g, lambda), p);
  };

  double hi = 3.0;
  bool feasible = false;
  for (int steps = 0; steps < 64 && hi >= 1e-9; ++steps) {
    if (char_at(hi) <= budget) {
      feasible = true;
      break;
    }
    hi /= 2;
  }
  if (!feasible) {
    // only the constant weight fits ([w]_{A_p} >= 1 always)
    if (budget >= 1.0) return {Weight::ones(w), 1.0, 0.0};
    throw std::invalid_argument("gen_ap_weight: budget infeasible after 64 steps");
  }
  // refine upward toward the budget, keeping feasibility
  double lo = hi, top = hi * 2;
  for (int i = 0; i < 32; ++i) {
    const double mid = 0.5 * (lo + top);
    if (char_at(mid) <= budget) lo = mid; else top = mid;
  }
  return {detail::exp_weight(g, lo), char_at(lo), lo};
}

struct GeneratedWeightVector {
  WeightVector vector;
  double characteristic = 1.0;  // exact multilinear A_P characteristic
  double lambda = 0.0;          // joint scale applied to all slots
};

/// Weight vector with multilinear A_P characteristic <= budget: one
/// haar_series draw per slot, a joint exponent scale bisected against the
/// budget.
inline GeneratedWeightVector gen_weight_vector(std::uint64_t seed, std::uint64_t stream,
                                               const Window& w, const ExponentVector& P,
                                               double budget) {
  if (budget < 1.0)
    throw std::invalid_argument("gen_weight_vector: budget infeasible (characteristic >= 1)");
  if (budget == 1.0) {
    std::vector<Weight> ws(P.arity(), Weight::ones(w));
    return {WeightVector(std::move(ws), P), 1.0, 0.0};
  }
  std::vector<StepFunction> gs;
  for (std::size_t j = 0; j < P.arity(); ++j)
    gs.push_back(gen_step_function(seed, stream + 1000003 * j, w, Profile::haar_series));

  const auto vector_at = [&](double lambda) {
    std::vector<Weight> ws;
    for (const auto& g : gs) ws.push_back(detail::exp_weight(g, lambda));
    return WeightVector(std::move(ws), P);
  };
  const auto char_at = [&](double lambda) {
    return multilinear_ap_characteristic(vector_at(lambda));
  };

  double hi = 2.0;
  bool feasible = false;
  for (int steps = 0; steps < 64 && hi >= 1e-9; ++steps) {
    if (char_at(hi) <= budget) {
      feasible = true;
      break;
    }
    hi /= 2;
  }
  if (!feasible) {
    if (budget >= 1.0) {
      std::vector<Weight> ws(P.arity(), Weight::ones(w));
      return {WeightVector(std::move(ws), P), 1.0, 0.0};
    }
    throw std::invalid_argument("gen_weight_vector: budget infeasible after 64 steps");
  }
  double lo = hi, top = hi * 2;
  for (int i = 0; i < 32; ++i) {
    const double mid = 0.5 * (lo + top);
    if (char_at(mid) <= budget) lo = mid; else top = mid;
  }
  return {vector_at(lo), char_at(lo), lo};
}

}  // namespace dyadic
