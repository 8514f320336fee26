// Command-line front end: Haar coefficients, operator application, weight
// and BMO characteristics, and the verification harness.
//
// Exit codes: 0 success, 1 check failure, 2 usage/config error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dyadic/harness.hpp"
#include "dyadic/serialize.hpp"

namespace {

using namespace dyadic;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

void write_output(const std::string& out_path, const StepFunction& f) {
  if (out_path.empty() || out_path == "-")
    write_step_function(std::cout, f);
  else
    save_step_function(out_path, f);
}

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int cmd_haar_coeffs(const std::string& input, bool json_mode) {
  const StepFunction f = load_step_function(input);
  const HaarExpansion e = analyze(f);
  if (json_mode) {
    std::cout << to_json(e, f.window()).dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "window " << to_json(f.window()).dump() << "\n";
  std::cout << "average_negative " << format_double(e.average_negative) << "\n";
  std::cout << "average_positive " << format_double(e.average_positive) << "\n";
  std::cout << "k,m,coefficient\n";
  for (const auto& [I, v] : e.coefficients)
    std::cout << I.scale << "," << I.offset << "," << format_double(v) << "\n";
  return kExitOk;
}

int cmd_haar_reconstruct(const std::string& input, const std::string& out_path) {
  std::ifstream is(input);
  if (!is) throw std::runtime_error("cannot open " + input);
  const ExpansionFile e = expansion_from_json(nlohmann::json::parse(is));
  write_output(out_path, reconstruct(e.expansion, e.window));
  return kExitOk;
}

int cmd_apply(const std::string& op, const std::string& alpha_str, const std::string& inputs,
              const std::string& b_path, const std::string& eps_path, int slot,
              const std::string& out_path) {
  OperatorKind kind;
  if (op == "P") kind = OperatorKind::paraproduct;
  else if (op == "pi") kind = OperatorKind::pi_b;
  else if (op == "T") kind = OperatorKind::haar_multiplier;
  else if (op == "comm") kind = OperatorKind::commutator;
  else throw CLI::ValidationError("--op", "must be one of P, pi, T, comm");

  const MultiIndex alpha = MultiIndex::parse(alpha_str);
  std::vector<StepFunction> fs;
  for (const auto& p : split_csv_list(inputs)) fs.push_back(load_step_function(p));
  if (alpha.arity() != fs.size())
    throw CLI::ValidationError("--alpha", "length must match the number of inputs");
  if (kind != OperatorKind::pi_b && alpha.all_ones())
    throw CLI::ValidationError("--alpha", "must lie in U_m (not all ones) for this operator");
  if ((kind == OperatorKind::pi_b || kind == OperatorKind::commutator) && b_path.empty())
    throw CLI::ValidationError("--b", "required for --op pi and --op comm");
  if (kind == OperatorKind::commutator && (slot < 1 || slot > static_cast<int>(fs.size())))
    throw CLI::ValidationError("--slot", "must lie in 1..m");

  std::optional<StepFunction> b;
  if (!b_path.empty()) b = load_step_function(b_path);
  SymbolSequence eps = SymbolSequence::constant(1.0);
  if (!eps_path.empty()) eps = load_symbol(eps_path);

  const StepFunction out = apply_operator(kind, alpha, fs, b ? &*b : nullptr, &eps, slot,
                                          /*corrupt=*/false);
  write_output(out_path, out);
  return kExitOk;
}

void print_characteristic(const std::string& name, const CharacteristicResult& r,
                          bool json_mode) {
  if (json_mode) {
    nlohmann::json j = {{"name", name},
                        {"value", r.value},
                        {"witness", {{"k", r.witness.scale}, {"m", r.witness.offset}}}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << name << " = " << format_double(r.value) << " attained at " << r.witness.str()
              << "\n";
  }
}

int cmd_weights(const std::string& sub, const std::string& file, double p, double r,
                bool json_mode) {
  if (sub == "multi-ap") {
    const WeightVector wv = load_weight_vector(file);
    print_characteristic("multilinear_ap", multilinear_ap_characteristic_detail(wv), json_mode);
    return kExitOk;
  }
  const StepFunction f = load_step_function(file);
  if (sub == "bmo") {
    print_characteristic(r == 1.0 ? "bmo" : "bmo_r", bmo_r_norm_detail(f, r), json_mode);
    return kExitOk;
  }
  if (sub == "bmo2") {
    print_characteristic("bmo2_haar", bmo2_haar_detail(f), json_mode);
    return kExitOk;
  }
  const Weight w(f);  // rejects nonpositive cells with a diagnostic
  if (sub == "ap") {
    if (!(p > 1)) throw CLI::ValidationError("--p", "must exceed 1 for the A_p characteristic");
    print_characteristic("ap", ap_characteristic_detail(w, p), json_mode);
  } else if (sub == "a1") {
    print_characteristic("a1", a1_characteristic_detail(w), json_mode);
  } else if (sub == "ainf") {
    const AinfEstimate est = ainf_estimate_detail(w, default_ainf_grid());
    if (json_mode) {
      nlohmann::json j = {{"name", "ainf"}, {"value", est.value}, {"minimizing_p", est.minimizing_p}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "ainf <= " << format_double(est.value) << " (grid minimum at p = "
                << format_double(est.minimizing_p) << ")\n";
    }
  }
  return kExitOk;
}

int cmd_verify(const std::string& config_path, const std::string& out_dir, int threads,
               bool corrupt) {
  ExperimentConfig config = load_config(config_path);
  if (threads > 0) config.threads = threads;
  if (corrupt) config.corrupt = true;
  config.validate();

  std::optional<std::filesystem::path> out;
  if (!out_dir.empty()) out = std::filesystem::path(out_dir);
  const ExperimentResult result = run_experiment(config, out);

  for (const auto& o : result.outcomes) {
    std::cout << (o.summary.pass ? "[PASS] " : "[FAIL] ") << o.summary.check
              << "  trials=" << o.summary.trials << " skipped=" << o.summary.skipped
              << " failures=" << o.summary.failures
              << " max_ratio=" << format_double(o.summary.max_ratio) << "\n";
  }
  if (result.outcomes.empty()) std::cout << "no checks requested; empty report\n";
  return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dyadic: multilinear dyadic paraproducts, Haar multipliers, maximal operators,"
               " weights and the inequality verification harness"};
  app.require_subcommand(1);

  // haar
  auto* haar = app.add_subcommand("haar", "Haar coefficients and reconstruction");
  haar->require_subcommand(1);
  std::string haar_input, haar_out;
  bool haar_json = false;
  auto* coeffs = haar->add_subcommand("coeffs", "print all in-window Haar coefficients");
  coeffs->add_option("input", haar_input, "StepFunction CSV")->required();
  coeffs->add_flag("--json", haar_json, "machine-readable output");
  auto* rec = haar->add_subcommand("reconstruct", "rebuild a StepFunction from coefficients");
  rec->add_option("input", haar_input, "expansion JSON (output of `haar coeffs --json`)")
      ->required();
  rec->add_option("-o,--out", haar_out, "output CSV (default stdout)");

  // apply
  auto* apply = app.add_subcommand("apply", "apply an operator to CSV functions");
  std::string op, alpha_str, inputs, b_path, eps_path, apply_out;
  int slot = 1;
  apply->add_option("--op", op, "P | pi | T | comm")->required();
  apply->add_option("--alpha", alpha_str, "0/1 string, one slot per input")->required();
  apply->add_option("--inputs", inputs, "comma-separated StepFunction CSVs")->required();
  apply->add_option("--b", b_path, "symbol function b (pi, comm)");
  apply->add_option("--eps", eps_path, "symbol sequence JSON (T, comm); default eps == 1");
  apply->add_option("--slot", slot, "commutator slot, 1-based");
  apply->add_option("-o,--out", apply_out, "output CSV (default stdout)");

  // weights
  auto* weights = app.add_subcommand("weights", "weight and BMO characteristics");
  weights->require_subcommand(1);
  std::string w_file;
  double w_p = 2.0, w_r = 1.0;
  bool w_json = false;
  for (const char* name : {"ap", "a1", "ainf", "multi-ap", "bmo", "bmo2"}) {
    auto* sc = weights->add_subcommand(name);
    sc->add_option("input", w_file, name == std::string("multi-ap")
                                        ? "WeightVector JSON"
                                        : "StepFunction CSV")
        ->required();
    if (name == std::string("ap")) sc->add_option("--p", w_p, "exponent p > 1");
    if (name == std::string("bmo")) sc->add_option("--r", w_r, "oscillation exponent r > 0");
    sc->add_flag("--json", w_json, "machine-readable output");
  }

  // verify
  auto* verify = app.add_subcommand("verify", "run harness checks from a config");
  std::string config_path, out_dir;
  int threads = 0;
  bool corrupt = false;
  verify->add_option("--config", config_path, "experiment config JSON")->required();
  verify->add_option("--out", out_dir, "report directory (created if absent)");
  verify->add_option("--threads", threads, "worker cap (default: config value)");
  verify->add_flag("--corrupt", corrupt, "negative control: perturb one operator coefficient");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (coeffs->parsed()) return cmd_haar_coeffs(haar_input, haar_json);
    if (rec->parsed()) return cmd_haar_reconstruct(haar_input, haar_out);
    if (apply->parsed())
      return cmd_apply(op, alpha_str, inputs, b_path, eps_path, slot, apply_out);
    if (weights->parsed()) {
      for (auto* sc : weights->get_subcommands())
        return cmd_weights(sc->get_name(), w_file, w_p, w_r, w_json);
    }
    if (verify->parsed()) return cmd_verify(config_path, out_dir, threads, corrupt);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
