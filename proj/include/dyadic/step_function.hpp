#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dyadic/window.hpp"

namespace dyadic {

/// A real-valued function constant on the cells of a window, identically
/// zero outside the window. All integrals and Haar coefficients of a
/// StepFunction are finite sums of dyadic rationals times cell values.
class StepFunction {
 public:
  StepFunction() = default;

  StepFunction(Window w, std::vector<double> cells) : window_(w), cells_(std::move(cells)) {
    if (static_cast<std::int64_t>(cells_.size()) != window_.cell_count())
      throw std::invalid_argument("StepFunction: cell vector length must equal cell count");
  }

  static StepFunction zero(const Window& w) {
    return StepFunction(w, std::vector<double>(static_cast<std::size_t>(w.cell_count()), 0.0));
  }

  static StepFunction constant(const Window& w, double c) {
    return StepFunction(w, std::vector<double>(static_cast<std::size_t>(w.cell_count()), c));
  }

  /// Indicator of I's window part.
  static StepFunction indicator(const Window& w, const DyadicInterval& I) {
    StepFunction f = zero(w);
    const auto r = w.cell_range(I);
    for (std::int64_t c = r.first; c < r.first + r.count; ++c) f.cells_[c] = 1.0;
    return f;
  }

  const Window& window() const { return window_; }
  std::int64_t size() const { return static_cast<std::int64_t>(cells_.size()); }
  const std::vector<double>& cells() const { return cells_; }
  std::vector<double>& cells() { return cells_; }
  double operator[](std::int64_t i) const { return cells_[static_cast<std::size_t>(i)]; }
  double& operator[](std::int64_t i) { return cells_[static_cast<std::size_t>(i)]; }

  StepFunction& operator+=(const StepFunction& o) {
    check_same_window(o);
    for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] += o.cells_[i];
    return *this;
  }
  StepFunction& operator-=(const StepFunction& o) {
    check_same_window(o);
    for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] -= o.cells_[i];
    return *this;
  }
  StepFunction& operator*=(double c) {
    for (double& v : cells_) v *= c;
    return *this;
  }

  friend StepFunction operator+(StepFunction a, const StepFunction& b) { return a += b; }
  friend StepFunction operator-(StepFunction a, const StepFunction& b) { return a -= b; }
  friend StepFunction operator*(double c, StepFunction f) { return f *= c; }
  friend StepFunction operator*(StepFunction f, double c) { return f *= c; }

  /// Cellwise product.
  friend StepFunction operator*(const StepFunction& a, const StepFunction& b) {
    a.check_same_window(b);
    StepFunction out = a;
    for (std::size_t i = 0; i < out.cells_.size(); ++i) out.cells_[i] *= b.cells_[i];
    return out;
  }

  StepFunction abs() const {
    StepFunction out = *this;
    for (double& v : out.cells_) v = std::fabs(v);
    return out;
  }

  /// Cellwise |f|^p.
  StepFunction abs_pow(double p) const {
    StepFunction out = *this;
    for (double& v : out.cells_) v = std::pow(std::fabs(v), p);
    return out;
  }

  StepFunction pow(double p) const {
    StepFunction out = *this;
    for (double& v : out.cells_) v = std::pow(v, p);
    return out;
  }

  StepFunction clamped(double lo, double hi) const {
    StepFunction out = *this;
    for (double& v : out.cells_) v = std::clamp(v, lo, hi);
    return out;
  }

  /// Restriction f * 1_I (cellwise mask on I's window part).
  StepFunction restricted(const DyadicInterval& I) const {
    StepFunction out = zero(window_);
    const auto r = window_.cell_range(I);
    for (std::int64_t c = r.first; c < r.first + r.count; ++c) out.cells_[c] = cells_[c];
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : cells_) m = std::max(m, std::fabs(v));
    return m;
  }

  double min_value() const {
    double m = cells_.empty() ? 0.0 : cells_[0];
    for (double v : cells_) m = std::min(m, v);
    return m;
  }

  /// The same function represented on a finer grid (each cell split into
  /// 2^(finer_N - N) equal-valued children). Window extent and ancestor
  /// depth are preserved, so refinement changes no integral or average.
  StepFunction refined(int finer_resolution_log) const {
    const int d = finer_resolution_log - window_.resolution_log();
    if (d < 0) throw std::invalid_argument("refined: target resolution is coarser");
    Window w(window_.half_extent_log(), finer_resolution_log, window_.ancestor_depth());
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(w.cell_count()));
    const std::int64_t rep = ipow2(d);
    for (double v : cells_)
      for (std::int64_t r = 0; r < rep; ++r) out.push_back(v);
    return StepFunction(w, std::move(out));
  }

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

  void check_same_window(const StepFunction& o) const {
    if (!(window_ == o.window_))
      throw std::invalid_argument("StepFunction: operands live on different windows");
  }

 private:
  Window window_;
  std::vector<double> cells_;
};

}  // namespace dyadic
