#pragma once

#include <atomic>
#include <bit>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dyadic/bmo.hpp"
#include "dyadic/harness_config.hpp"
#include "dyadic/maximal.hpp"
#include "dyadic/operators.hpp"

namespace dyadic {

struct TrialReport {
  std::int64_t trial_id = 0;
  std::string input_digest;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::int64_t witness_cell = -1;
  bool pass = true;
  bool skipped = false;
};

/// Everything a single trial consumes; checks fill the fields they use.
/// Witness files serialize exactly this, so a reloaded witness re-runs
/// through the same evaluation path.
struct TrialInputs {
  std::vector<StepFunction> fs;
  std::optional<StepFunction> b;
  std::optional<StepFunction> g;
  std::optional<SymbolSequence> eps;
  std::vector<Weight> weights;
  std::optional<DyadicInterval> J;
  int slot = 1;                 // 1-based
  std::vector<double> params;   // check-specific scalars
};

struct TrialEval {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::int64_t witness_cell = -1;
  bool pass = true;
  bool skipped = false;
  std::map<std::string, std::vector<double>> series;  // envelope: per-resolution ratios
  std::map<std::string, double> stats;
};

struct CheckSummary {
  std::string check;
  bool hard = false;
  std::int64_t trials = 0;
  std::int64_t skipped = 0;
  std::int64_t failures = 0;
  double max_ratio = 0.0;
  bool pass = true;
  std::vector<std::string> witness_paths;
  nlohmann::json extra;
};

// ---------------------------------------------------------------------

class Digest {
 public:
  void add_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h_ ^= (v >> (8 * i)) & 0xff;
      h_ *= 1099511628211ULL;
    }
  }
  void add_i64(std::int64_t v) { add_u64(static_cast<std::uint64_t>(v)); }
  void add(double v) { add_u64(std::bit_cast<std::uint64_t>(v)); }
  void add(const StepFunction& f) {
    add_i64(f.window().half_extent_log());
    add_i64(f.window().resolution_log());
    add_i64(f.window().ancestor_depth());
    for (double v : f.cells()) add(v);
  }
  std::string hex() const {
    static const char* d = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 0; i < 16; ++i) s[15 - i] = d[(h_ >> (4 * i)) & 0xf];
    return s;
  }

 private:
  std::uint64_t h_ = 1469598103934665603ULL;  // FNV-1a
};

inline std::string digest_inputs(const TrialInputs& in) {
  Digest d;
  for (const auto& f : in.fs) d.add(f);
  if (in.b) d.add(*in.b);
  if (in.g) d.add(*in.g);
  if (in.eps) {
    d.add(in.eps->default_value);
    for (const auto& [I, v] : in.eps->entries) {
      d.add_i64(I.scale);
      d.add_i64(I.offset);
      d.add(v);
    }
  }
  for (const auto& w : in.weights) d.add(w.fn());
  if (in.J) {
    d.add_i64(in.J->scale);
    d.add_i64(in.J->offset);
  }
  d.add_i64(in.slot);
  for (double p : in.params) d.add(p);
  return d.hex();
}

/// Runs fn(0..n-1) on up to `threads` workers. Trials own their inputs
/// and results land in per-index slots, so scheduling cannot change any
/// reported number.
template <class Fn>
void parallel_for(std::int64_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int count = static_cast<int>(std::min<std::int64_t>(threads, n));
  pool.reserve(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------

/// Mean of f over the whole window (not an interval average; both halves).
inline double whole_window_mean(const StepFunction& f) {
  double s = 0.0;
  for (double v : f.cells()) s += v;
  return s / static_cast<double>(f.size());
}

/// The negative-control fixture: adds xi * <f_1>_window to the
/// coefficient of one fixed interval. The shift depends on the whole
/// input, which is exactly what the harness's cancellation-based checks
/// must catch.
inline constexpr double kCorruptionScale = 1e-3;

inline StepFunction corruption_term(std::span<const StepFunction> fs, int h_power) {
  const Window& w = fs[0].window();
  const DyadicInterval target{w.resolution_log() - 1, 0};
  return (kCorruptionScale * whole_window_mean(fs[0])) * haar_power(target, w, h_power);
}

/// Uniform operator dispatch used by every check.
inline StepFunction apply_operator(OperatorKind kind, const MultiIndex& alpha,
                                   std::span<const StepFunction> fs, const StepFunction* b,
                                   const SymbolSequence* eps, int slot_1based, bool corrupt) {
  StepFunction out = [&] {
    switch (kind) {
      case OperatorKind::paraproduct: return paraproduct(alpha, fs);
      case OperatorKind::pi_b:
        if (!b) throw std::invalid_argument("pi_b needs a symbol function b");
        return pi_b(*b, alpha, fs);
      case OperatorKind::haar_multiplier:
        if (!eps) throw std::invalid_argument("haar_multiplier needs a symbol sequence");
        return haar_multiplier(*eps, alpha, fs);
      case OperatorKind::commutator:
        if (!b) throw std::invalid_argument("commutator needs a symbol function b");
        if (!eps) throw std::invalid_argument("commutator needs a symbol sequence");
        return commutator(*b, *eps, alpha, static_cast<std::size_t>(slot_1based - 1), fs);
    }
    throw std::logic_error("unreachable");
  }();
  if (corrupt) {
    const int power = static_cast<int>(alpha.zero_count()) +
                      (kind == OperatorKind::pi_b ? 1 : 0);
    out += corruption_term(fs, power);
  }
  return out;
}

/// Refine every function-valued field to a finer resolution; symbols and
/// interval choices carry over unchanged (new finer intervals only ever
/// meet vanishing coefficients of refined inputs).
inline TrialInputs refine_inputs(const TrialInputs& in, int finer_N) {
  TrialInputs out = in;
  for (auto& f : out.fs) f = f.refined(finer_N);
  if (out.b) out.b = out.b->refined(finer_N);
  if (out.g) out.g = out.g->refined(finer_N);
  std::vector<Weight> ws;
  ws.reserve(out.weights.size());
  for (const auto& w : out.weights) ws.emplace_back(w.fn().refined(finer_N));
  out.weights = std::move(ws);
  return out;
}

/// Envelope checks evaluate at the base resolution and two refinements.
inline std::vector<int> envelope_resolutions(const ExperimentConfig& c) {
  const int N = c.window.resolution_log();
  return {N, N + 2, N + 4};
}

}  // namespace dyadic
