#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dyadic/generate.hpp"
#include "dyadic/operators.hpp"
#include "dyadic/serialize.hpp"
#include "dyadic/weights.hpp"

namespace dyadic {

enum class OperatorKind { paraproduct, pi_b, haar_multiplier, commutator };

inline const char* to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::paraproduct: return "paraproduct";
    case OperatorKind::pi_b: return "pi_b";
    case OperatorKind::haar_multiplier: return "haar_multiplier";
    case OperatorKind::commutator: return "commutator";
  }
  return "?";
}

inline OperatorKind parse_operator_kind(const std::string& s) {
  if (s == "paraproduct") return OperatorKind::paraproduct;
  if (s == "pi_b") return OperatorKind::pi_b;
  if (s == "haar_multiplier") return OperatorKind::haar_multiplier;
  if (s == "commutator") return OperatorKind::commutator;
  throw std::invalid_argument("operator_kind: unknown value '" + s + "'");
}

inline const std::set<std::string>& known_checks() {
  static const std::set<std::string> names = {
      "haar_exactness",  "localization",     "outside_support",  "kolmogorov",
      "bmo_identity",    "truncation",       "ap_monotonicity",  "weak_vs_strong",
      "sharp_domination", "fefferman_stein", "maximal_weighted", "weighted_theorem",
      "commutator_theorem", "ratio_supremum"};
  return names;
}

/// Hard-constant checks are pass/fail against explicit constants; the
/// others measure envelopes and assert only stability across resolution.
inline bool is_hard_check(const std::string& name) {
  static const std::set<std::string> hard = {"haar_exactness", "localization",
                                             "outside_support", "kolmogorov",
                                             "bmo_identity",    "truncation",
                                             "ap_monotonicity", "weak_vs_strong"};
  return hard.count(name) > 0;
}

inline bool is_envelope_check(const std::string& name) {
  static const std::set<std::string> env = {"sharp_domination", "fefferman_stein",
                                            "maximal_weighted", "weighted_theorem",
                                            "commutator_theorem"};
  return env.count(name) > 0;
}

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::int64_t trials = 100;
  int m = 2;
  MultiIndex alpha = MultiIndex::parse("01");
  OperatorKind operator_kind = OperatorKind::paraproduct;
  Window window{1, 6, 16};  // ancestor depth 16: geometric tails below 2^-16
  std::vector<double> exponents = {2.0, 2.0};
  double delta = 0.25;   // in (0, 1/m)
  double gamma = 0.375;  // > delta
  double r = 2.0;        // > 1 where the commutator theorem needs it
  double weight_budget = 4.0;
  double tolerance = 1e-10;
  int slot = 1;  // 1-based commutator slot
  std::string profile = "mixed";
  std::string symbol_mode = "random";  // "unit" forces eps == 1
  int support_shrink = 1;              // outside_support: S = [-2^{K-s}, 2^{K-s})
  std::vector<std::string> checks;
  std::string objective = "weighted_strong";  // ratio_supremum target
  int ascent_steps = 128;
  bool corrupt = false;
  int threads = 1;

  ExponentVector exponent_vector() const { return ExponentVector(exponents); }

  bool has_check(const std::string& name) const {
    for (const auto& c : checks)
      if (c == name) return true;
    return false;
  }

  void set_default_rates() {
    delta = 1.0 / (2.0 * m);
    gamma = std::min(2.0 * delta, 0.5 * (delta + 1.0 / m));
  }

  void validate() const {
    if (trials < 0) throw std::invalid_argument("trials: must be >= 0");
    if (m < 1 || m > 4) throw std::invalid_argument("m: must lie in 1..4");
    if (static_cast<int>(alpha.arity()) != m)
      throw std::invalid_argument("alpha: length must equal m");
    if (operator_kind != OperatorKind::pi_b && alpha.all_ones())
      throw std::invalid_argument("alpha: must lie in U_m (not all ones) for this operator");
    if (static_cast<int>(exponents.size()) != m)
      throw std::invalid_argument("exponents: need one exponent per slot (m of them)");
    ExponentVector P(exponents);  // range-checks the entries
    if (!(delta > 0.0 && delta < 1.0 / m))
      throw std::invalid_argument("delta: must lie in (0, 1/m)");
    if (!(gamma > delta)) throw std::invalid_argument("gamma: must exceed delta");
    if (!(r > 0.0)) throw std::invalid_argument("r: must be positive");
    if (!(weight_budget >= 1.0)) throw std::invalid_argument("weight_budget: must be >= 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance: must be positive");
    if (slot < 1 || slot > m) throw std::invalid_argument("slot: must lie in 1..m");
    if (profile != "mixed") parse_profile(profile);  // throws on unknown names
    if (symbol_mode != "random" && symbol_mode != "unit")
      throw std::invalid_argument("symbol_mode: must be 'random' or 'unit'");
    if (support_shrink < 1 || support_shrink > window.half_extent_log())
      throw std::invalid_argument("support_shrink: must lie in 1..K");
    if (threads < 1) throw std::invalid_argument("threads: must be >= 1");
    if (ascent_steps < 1) throw std::invalid_argument("ascent_steps: must be >= 1");
    for (const auto& c : checks)
      if (!known_checks().count(c))
        throw std::invalid_argument("checks: unknown check '" + c + "'");
    if (operator_kind == OperatorKind::commutator &&
        (has_check("localization") || has_check("sharp_domination") ||
         has_check("weighted_theorem")))
      throw std::invalid_argument(
          "operator_kind: commutator has its own check (commutator_theorem)");
    if (has_check("commutator_theorem") || has_check("outside_support")) {
      if (!(r > 1.0))
        throw std::invalid_argument("r: must exceed 1 for the commutator checks");
    }
    if (has_check("commutator_theorem") && !P.all_above_one())
      throw std::invalid_argument(
          "exponents: the commutator theorem needs every exponent above 1");
    if (has_check("fefferman_stein") && m != 1)
      throw std::invalid_argument("m: fefferman_stein runs on single functions (m = 1)");
    for (const auto& c : checks) {
      if (is_envelope_check(c) &&
          window.half_extent_log() + window.resolution_log() + 4 > 24)
        throw std::invalid_argument("window: envelope checks refine N twice by 2; K+N+4 <= 24");
    }
    if (has_check("ratio_supremum")) {
      if (objective != "weighted_strong" && objective != "weighted_weak" &&
          objective != "commutator_strong")
        throw std::invalid_argument("objective: unknown value '" + objective + "'");
    }
    if (corrupt && window.half_extent_log() + window.resolution_log() < 1)
      throw std::invalid_argument("window: the corrupt fixture needs K+N >= 1");
  }
};

inline nlohmann::json to_json(const ExperimentConfig& c) {
  return {{"seed", c.seed},
          {"trials", c.trials},
          {"m", c.m},
          {"alpha", c.alpha.str()},
          {"operator_kind", to_string(c.operator_kind)},
          {"window", to_json(c.window)},
          {"exponents", c.exponents},
          {"delta", c.delta},
          {"gamma", c.gamma},
          {"r", c.r},
          {"weight_budget", c.weight_budget},
          {"tolerance", c.tolerance},
          {"slot", c.slot},
          {"profile", c.profile},
          {"symbol_mode", c.symbol_mode},
          {"support_shrink", c.support_shrink},
          {"checks", c.checks},
          {"objective", c.objective},
          {"ascent_steps", c.ascent_steps},
          {"corrupt", c.corrupt},
          {"threads", c.threads}};
}


inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "seed", "trials", "m", "alpha", "operator_kind", "window", "exponents",
      "delta", "gamma", "r", "weight_budget", "tolerance", "slot", "profile",
      "symbol_mode", "support_shrink", "checks", "objective", "ascent_steps",
      "corrupt", "threads"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw std::invalid_argument("unknown config field '" + it.key() + "'");

  ExperimentConfig c;
  if (j.contains("m")) c.m = j.at("m").get<int>();
  c.alpha = MultiIndex::parse(j.value("alpha", std::string(1, '0') + std::string(c.m - 1, '1')));
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("trials")) c.trials = j.at("trials").get<std::int64_t>();
  if (j.contains("operator_kind"))
    c.operator_kind = parse_operator_kind(j.at("operator_kind").get<std::string>());
  if (j.contains("window")) c.window = window_from_json(j.at("window"));
  if (j.contains("exponents"))
    c.exponents = j.at("exponents").get<std::vector<double>>();
  else
    c.exponents.assign(static_cast<std::size_t>(c.m), 2.0);
  c.set_default_rates();
  if (j.contains("delta")) c.delta = j.at("delta").get<double>();
  if (j.contains("gamma")) c.gamma = j.at("gamma").get<double>();
  if (j.contains("r")) c.r = j.at("r").get<double>();
  if (j.contains("weight_budget")) c.weight_budget = j.at("weight_budget").get<double>();
  if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
  if (j.contains("slot")) c.slot = j.at("slot").get<int>();
  if (j.contains("profile")) c.profile = j.at("profile").get<std::string>();
  if (j.contains("symbol_mode")) c.symbol_mode = j.at("symbol_mode").get<std::string>();
  if (j.contains("support_shrink")) c.support_shrink = j.at("support_shrink").get<int>();
  if (j.contains("checks")) c.checks = j.at("checks").get<std::vector<std::string>>();
  if (j.contains("objective")) c.objective = j.at("objective").get<std::string>();
  if (j.contains("ascent_steps")) c.ascent_steps = j.at("ascent_steps").get<int>();
  if (j.contains("corrupt")) c.corrupt = j.at("corrupt").get<bool>();
  if (j.contains("threads")) c.threads = j.at("threads").get<int>();
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const std::exception& e) {
    throw std::invalid_argument(path.string() + ": invalid JSON: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace dyadic
