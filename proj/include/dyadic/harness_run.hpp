#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "dyadic/harness_checks.hpp"

namespace dyadic {

struct CheckOutcome {
  CheckSummary summary;
  std::vector<TrialReport> reports;
  std::optional<TrialInputs> witness_inputs;
  std::int64_t witness_trial = -1;
};

/// Every report names the truncation conventions this artifact adds on
/// top of the underlying theory (which works on the full line).
inline nlohmann::json conventions_json(const ExperimentConfig& c) {
  return {{"domain", "operator sums run over the window plus " +
                         std::to_string(c.window.ancestor_depth()) +
                         " one-sided ancestors per side; functions are zero outside the window"},
          {"weight_suprema", "A_p, A_P and BMO suprema run over in-window intervals"},
          {"h_power_zero", "h_I^0 is read as the indicator 1_I"},
          {"ainf", "A_inf values are grid upper bounds for the infimum over p"},
          {"r_search", "the r > 1 with w in A_{P/r} is searched on {1.01,1.05,1.1,1.25,1.5}"}};
}

namespace detail {

inline bool series_stable(const std::vector<double>& s, double rel_tol) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!std::isfinite(s[i])) return false;
    if (s[i - 1] == 0.0) {
      if (std::fabs(s[i]) > 1e-12) return false;
    } else if (std::fabs(s[i] - s[i - 1]) > rel_tol * std::fabs(s[i - 1])) {
      return false;
    }
  }
  return !s.empty() && std::isfinite(s[0]);
}

inline TrialInputs mutate_inputs(const ExperimentConfig& c, const TrialInputs& in,
                                 TrialRng& rng) {
  TrialInputs out = in;
  const double u = rng.unit();
  const bool mutate_b = out.b && c.objective == "commutator_strong" && rng.bernoulli(0.3);
  if (u < 0.7) {
    StepFunction& f = mutate_b ? *out.b
                               : out.fs[static_cast<std::size_t>(
                                     rng.uniform_int(0, static_cast<std::int64_t>(out.fs.size()) - 1))];
    const std::int64_t cell = rng.uniform_int(0, f.size() - 1);
    f[cell] += 0.25 * (1.0 + std::fabs(f[cell])) * rng.symmetric(1.0);
  } else if (u < 0.85 || out.weights.empty()) {
    StepFunction& f = mutate_b ? *out.b
                               : out.fs[static_cast<std::size_t>(
                                     rng.uniform_int(0, static_cast<std::int64_t>(out.fs.size()) - 1))];
    f *= (1.0 + 0.2 * rng.symmetric(1.0));
  } else {
    // reshape one weight by a power tweak; reject if the vector leaves
    // the configured A_P budget
    const std::size_t j =
        static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(out.weights.size()) - 1));
    std::vector<Weight> ws = out.weights;
    ws[j] = Weight(ws[j].fn().pow(1.0 + 0.1 * rng.symmetric(1.0)));
    const WeightVector wv(ws, c.exponent_vector());
    if (multilinear_ap_characteristic(wv) <= c.weight_budget) out.weights = std::move(ws);
  }
  return out;
}

inline CheckOutcome run_ratio_supremum(const ExperimentConfig& c) {
  CheckOutcome out;
  out.summary.check = "ratio_supremum";
  out.summary.hard = false;
  out.summary.trials = c.trials;

  std::vector<TrialReport> reports(static_cast<std::size_t>(c.trials));
  std::vector<TrialInputs> finals(static_cast<std::size_t>(c.trials));
  std::vector<double> initials(static_cast<std::size_t>(c.trials), 0.0);

  parallel_for(c.trials, c.threads, [&](std::int64_t t) {
    TrialInputs cur = make_trial_inputs(c, "ratio_supremum", t);
    double best = objective_ratio(c, cur);
    initials[t] = best;
    TrialRng rng(c.seed, static_cast<std::uint64_t>(t), 991);
    for (int step = 0; step < c.ascent_steps; ++step) {
      TrialInputs cand = mutate_inputs(c, cur, rng);
      const double r = objective_ratio(c, cand);
      if (std::isfinite(r) && r > best) {
        best = r;
        cur = std::move(cand);
      }
    }
    finals[t] = std::move(cur);
    reports[t] = TrialReport{t,    digest_inputs(finals[t]), best, 1.0, best, -1,
                             true, false};
  });

  out.reports = std::move(reports);
  std::int64_t best_t = -1;
  double best = -1.0;
  for (const auto& r : out.reports)
    if (r.ratio > best) {
      best = r.ratio;
      best_t = r.trial_id;
    }
  out.summary.max_ratio = best;
  out.summary.pass = std::isfinite(best);
  out.summary.extra["objective"] = c.objective;
  out.summary.extra["initial_ratios_max"] =
      *std::max_element(initials.begin(), initials.end());
  if (best_t >= 0) {
    out.witness_trial = best_t;
    out.witness_inputs = finals[static_cast<std::size_t>(best_t)];
  }
  return out;
}

}  // namespace detail

/// Envelope stability gate: < 5% drift between successive resolutions.
inline constexpr double kEnvelopeDriftTolerance = 0.05;

inline CheckOutcome run_check(const ExperimentConfig& c, const std::string& check) {
  if (!known_checks().count(check)) throw std::invalid_argument("unknown check '" + check + "'");
  if (check == "ratio_supremum") return detail::run_ratio_supremum(c);

  CheckOutcome out;
  out.summary.check = check;
  out.summary.hard = is_hard_check(check);
  out.summary.trials = c.trials;

  std::vector<TrialReport> reports(static_cast<std::size_t>(c.trials));
  std::vector<TrialEval> evals(static_cast<std::size_t>(c.trials));
  parallel_for(c.trials, c.threads, [&](std::int64_t t) {
    const TrialInputs in = make_trial_inputs(c, check, t);
    TrialEval e = evaluate_trial(c, check, in);
    reports[t] = TrialReport{t,          digest_inputs(in), e.lhs,    e.rhs,
                             e.ratio,    e.witness_cell,    e.pass,   e.skipped};
    evals[t] = std::move(e);
  });
  out.reports = std::move(reports);

  std::int64_t witness = -1;
  double max_ratio = 0.0;
  for (const auto& r : out.reports) {
    if (r.skipped) {
      ++out.summary.skipped;
      continue;
    }
    if (!r.pass) {
      ++out.summary.failures;
      if (out.summary.hard && witness < 0) witness = r.trial_id;  // first failure
    }
    max_ratio = std::max(max_ratio, r.ratio);
  }
  // witness: first hard failure, otherwise the max-ratio trial
  if (witness < 0) {
    for (const auto& r : out.reports)
      if (!r.skipped && r.ratio == max_ratio) {
        witness = r.trial_id;
        break;
      }
  }
  out.summary.max_ratio = max_ratio;

  bool pass = out.summary.failures == 0;
  if (is_envelope_check(check)) {
    const std::vector<int> res = envelope_resolutions(c);
    nlohmann::json series_json, stable_json;
    // collect union of series names (all non-skipped trials share them)
    std::vector<std::string> names;
    for (const auto& e : evals)
      if (!e.skipped) {
        for (const auto& [name, s] : e.series)
          if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
      }
    for (const auto& name : names) {
      if (name == "truncation") continue;  // per-trial sequence, not an envelope
      std::vector<double> per_n(res.size(), 0.0);
      for (const auto& e : evals) {
        if (e.skipped) continue;
        auto it = e.series.find(name);
        if (it == e.series.end()) continue;
        for (std::size_t i = 0; i < per_n.size() && i < it->second.size(); ++i)
          per_n[i] = std::max(per_n[i], it->second[i]);
      }
      const bool stable = detail::series_stable(per_n, kEnvelopeDriftTolerance);
      series_json[name] = per_n;
      stable_json[name] = stable;
      pass = pass && stable;
    }
    out.summary.extra["resolutions"] = res;
    out.summary.extra["max_ratio_per_resolution"] = series_json;
    out.summary.extra["stable"] = stable_json;

    // empirical constants per [w]_{A_inf} bucket, when trials report one
    nlohmann::json buckets = nlohmann::json::object();
    for (std::size_t t = 0; t < evals.size(); ++t) {
      const auto& e = evals[t];
      if (e.skipped) continue;
      const auto it = e.stats.find("ainf_estimate");
      if (it == e.stats.end()) continue;
      const std::string key = format_double(std::round(it->second));
      if (!buckets.contains(key) || buckets[key].get<double>() < e.ratio) buckets[key] = e.ratio;
    }
    if (!buckets.empty()) out.summary.extra["max_ratio_per_ainf_bucket"] = buckets;
  }
  out.summary.pass = pass;

  if (witness >= 0 && c.trials > 0) {
    out.witness_trial = witness;
    out.witness_inputs = make_trial_inputs(c, check, witness);
    const auto& we = evals[static_cast<std::size_t>(witness)];
    nlohmann::json stats;
    for (const auto& [k, v] : we.stats) stats[k] = v;
    if (!we.series.empty()) {
      nlohmann::json sj;
      for (const auto& [k, v] : we.series) sj[k] = v;
      out.summary.extra["witness_series"] = sj;
    }
    if (!we.stats.empty()) out.summary.extra["witness_stats"] = stats;
  }
  return out;
}

// =====================================================================
// Witness files and reports
// =====================================================================

inline nlohmann::json witness_manifest(const ExperimentConfig& c, const std::string& check,
                                       const CheckOutcome& outcome,
                                       const std::filesystem::path& dir) {
  const TrialInputs& in = *outcome.witness_inputs;
  nlohmann::json files = nlohmann::json::object();

  auto save_fn = [&](const std::string& name, const StepFunction& f) {
    save_step_function(dir / (name + ".csv"), f);
    files[name] = name + ".csv";
  };
  for (std::size_t j = 0; j < in.fs.size(); ++j) save_fn("f" + std::to_string(j + 1), in.fs[j]);
  if (in.b) save_fn("b", *in.b);
  if (in.g) save_fn("g", *in.g);
  for (std::size_t j = 0; j < in.weights.size(); ++j)
    save_fn("w" + std::to_string(j + 1), in.weights[j].fn());
  if (in.eps) {
    save_symbol(dir / "eps.json", *in.eps);
    files["eps"] = "eps.json";
  }

  const TrialReport& r = outcome.reports[static_cast<std::size_t>(outcome.witness_trial)];
  nlohmann::json j = {{"check", check},
                      {"trial_id", outcome.witness_trial},
                      {"slot", in.slot},
                      {"params", in.params},
                      {"lhs", r.lhs},
                      {"rhs", r.rhs},
                      {"ratio", r.ratio},
                      {"files", files},
                      {"config", to_json(c)}};
  if (in.J) j["J"] = {{"k", in.J->scale}, {"m", in.J->offset}};
  return j;
}

struct LoadedWitness {
  ExperimentConfig config;
  std::string check;
  TrialInputs inputs;
  double reported_ratio = 0.0;
};

inline LoadedWitness load_witness(const std::filesystem::path& manifest_path) {
  std::ifstream is(manifest_path);
  if (!is) throw std::runtime_error("cannot open " + manifest_path.string());
  const nlohmann::json j = nlohmann::json::parse(is);
  LoadedWitness out;
  out.config = config_from_json(j.at("config"));
  out.check = j.at("check").get<std::string>();
  out.reported_ratio = j.at("ratio").get<double>();
  out.inputs.slot = j.at("slot").get<int>();
  out.inputs.params = j.at("params").get<std::vector<double>>();
  if (j.contains("J"))
    out.inputs.J = DyadicInterval{j.at("J").at("k").get<int>(),
                                  j.at("J").at("m").get<std::int64_t>()};
  const auto dir = manifest_path.parent_path();
  const auto& files = j.at("files");
  for (int i = 1; files.contains("f" + std::to_string(i)); ++i)
    out.inputs.fs.push_back(
        load_step_function(dir / files.at("f" + std::to_string(i)).get<std::string>()));
  if (files.contains("b"))
    out.inputs.b = load_step_function(dir / files.at("b").get<std::string>());
  if (files.contains("g"))
    out.inputs.g = load_step_function(dir / files.at("g").get<std::string>());
  for (int i = 1; files.contains("w" + std::to_string(i)); ++i)
    out.inputs.weights.emplace_back(
        load_step_function(dir / files.at("w" + std::to_string(i)).get<std::string>()));
  if (files.contains("eps"))
    out.inputs.eps = load_symbol(dir / files.at("eps").get<std::string>());
  return out;
}

/// Re-evaluates a saved witness; the result must reproduce the reported
/// ratio (the round-trip invariant).
inline double reevaluate_witness(const std::filesystem::path& manifest_path) {
  const LoadedWitness w = load_witness(manifest_path);
  if (w.check == "ratio_supremum") return objective_ratio(w.config, w.inputs);
  return evaluate_trial(w.config, w.check, w.inputs).ratio;
}

// =====================================================================
// run_experiment
// =====================================================================

struct ExperimentResult {
  std::vector<CheckOutcome> outcomes;
  nlohmann::json summary_json;

  /// 0 when every hard-constant check passed; envelope instability is
  /// reported but does not flip the exit status.
  int exit_code() const {
    for (const auto& o : outcomes)
      if (o.summary.hard && !o.summary.pass) return 1;
    return 0;
  }
};

inline void write_trial_csv(const std::filesystem::path& path,
                            const std::vector<TrialReport>& reports) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << "trial_id,lhs,rhs,ratio,pass\n";
  for (const auto& r : reports) {
    if (r.skipped) continue;
    os << r.trial_id << "," << format_double(r.lhs) << "," << format_double(r.rhs) << ","
       << format_double(r.ratio) << "," << (r.pass ? 1 : 0) << "\n";
  }
}

inline ExperimentResult run_experiment(const ExperimentConfig& config,
                                       const std::optional<std::filesystem::path>& out_dir) {
  config.validate();
  ExperimentResult result;
  nlohmann::json summaries = nlohmann::json::array();

  for (const auto& check : config.checks) {
    CheckOutcome outcome = run_check(config, check);

    if (out_dir) {
      std::filesystem::create_directories(*out_dir);
      write_trial_csv(*out_dir / (check + "_trials.csv"), outcome.reports);
      if (outcome.witness_inputs) {
        const auto wdir = *out_dir / ("witness_" + check);
        std::filesystem::create_directories(wdir);
        const nlohmann::json manifest =
            witness_manifest(config, check, outcome, wdir);
        std::ofstream os(wdir / "manifest.json");
        os << manifest.dump(2) << "\n";
        outcome.summary.witness_paths.push_back((wdir / "manifest.json").string());
      }
    }

    nlohmann::json s = {{"check", outcome.summary.check},
                        {"hard", outcome.summary.hard},
                        {"trials", outcome.summary.trials},
                        {"skipped", outcome.summary.skipped},
                        {"failures", outcome.summary.failures},
                        {"max_ratio", outcome.summary.max_ratio},
                        {"pass", outcome.summary.pass},
                        {"witness_paths", outcome.summary.witness_paths}};
    if (!outcome.summary.extra.is_null()) s["extra"] = outcome.summary.extra;
    summaries.push_back(s);
    result.outcomes.push_back(std::move(outcome));
  }

  result.summary_json = {{"config", to_json(config)},
                         {"conventions", conventions_json(config)},
                         {"checks", summaries}};
  if (out_dir) {
    std::ofstream os(*out_dir / "summary.json");
    if (!os) throw std::runtime_error("cannot write summary.json");
    os << result.summary_json.dump(2) << "\n";
  }
  return result;
}

}  // namespace dyadic
