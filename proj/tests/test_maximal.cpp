#include <catch2/catch_amalgamated.hpp>

#include "dyadic/harness.hpp"
#include "oracles.hpp"

using namespace dyadic;

TEST_CASE("maximal function of an indicator: shell values") {
  Window w(2, 4, 0);
  const StepFunction f = StepFunction::indicator(w, {0, 0});  // 1_{[0,1)}
  const StepFunction M = maximal(f);
  for (std::int64_t c = 0; c < w.cell_count(); ++c) {
    const double x = w.cell_left(c);
    double want = 0.0;
    if (x >= 0.0 && x < 1.0) want = 1.0;
    else if (x >= 1.0 && x < 2.0) want = 0.5;
    else if (x >= 2.0) want = 0.25;
    // negative side: no dyadic interval reaches across zero
    REQUIRE_THAT(M[c], Catch::Matchers::WithinAbs(want, 1e-14));
  }
}

TEST_CASE("maximal of a constant is the constant (no ancestors)") {
  Window w(1, 3, 0);
  const StepFunction f = StepFunction::constant(w, 2.5);
  REQUIRE((maximal(f) - f).max_abs() == 0.0);
}

TEST_CASE("pointwise bound |f| <= M_delta f and monotonicity in delta") {
  Window w(1, 4, 2);
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const StepFunction f = gen_step_function(seed, 0, w, cycled_profile(seed));
    const StepFunction M1 = maximal_delta(f, 0.5);
    const StepFunction M2 = maximal_delta(f, 1.0);
    const StepFunction M3 = maximal_delta(f, 2.0);
    for (std::int64_t c = 0; c < w.cell_count(); ++c) {
      REQUIRE(std::fabs(f[c]) <= M1[c] + 1e-12);
      REQUIRE(M1[c] <= M2[c] + 1e-12 * (1 + M2[c]));
      REQUIRE(M2[c] <= M3[c] + 1e-12 * (1 + M3[c]));
    }
    REQUIRE((maximal_delta(f, 1.0) - maximal(f)).max_abs() <= 1e-12);
  }
  REQUIRE_THROWS(maximal_delta(StepFunction::zero(w), 0.0));

  // indicators: |f|^delta = f, so M_delta f = (M f)^{1/delta}
  const StepFunction ind = StepFunction::indicator(w, {0, 0});
  const double delta = 0.5;
  StepFunction expect = maximal(ind);
  for (double& v : expect.cells()) v = std::pow(v, 1.0 / delta);
  REQUIRE((maximal_delta(ind, delta) - expect).max_abs() <= 1e-12);
}

TEST_CASE("maximal operators are homogeneous and monotone") {
  Window w(1, 4, 1);
  const StepFunction f = gen_step_function(3, 1, w, Profile::haar_series);
  const double c = -3.5;
  REQUIRE((maximal(c * f) - std::fabs(c) * maximal(f)).max_abs() <= 1e-11);
  REQUIRE((sharp_maximal(c * f) - std::fabs(c) * sharp_maximal(f)).max_abs() <= 1e-11);
  const StepFunction Md1 = maximal_delta(c * f, 0.5);
  const StepFunction Md2 = std::fabs(c) * maximal_delta(f, 0.5);
  REQUIRE((Md1 - Md2).max_abs() <= 1e-10 * (1 + Md2.max_abs()));

  // |f| <= |g| cellwise implies Mf <= Mg cellwise
  StepFunction g = f;
  for (double& v : g.cells()) v = std::fabs(v) + 0.25;
  const StepFunction Mf = maximal(f), Mg = maximal(g);
  for (std::int64_t i = 0; i < w.cell_count(); ++i) REQUIRE(Mf[i] <= Mg[i] + 1e-12);
}

TEST_CASE("sharp maximal of a constant vanishes without ancestors") {
  Window w(1, 3, 0);
  REQUIRE(sharp_maximal(StepFunction::constant(w, 4.0)).max_abs() == 0.0);
}

TEST_CASE("sharp maximal of a Haar function") {
  Window w(0, 3, 0);
  const StepFunction h = haar_function({0, 0}, w);
  const StepFunction S = sharp_maximal(h);
  for (std::int64_t c = 0; c < w.cell_count(); ++c) {
    // on [0,1) the only oscillating interval is [0,1) itself: value 1
    const double want = w.cell_left(c) >= 0.0 ? 1.0 : 0.0;
    REQUIRE_THAT(S[c], Catch::Matchers::WithinAbs(want, 1e-14));
  }
}

TEST_CASE("sharp maximal agrees with the exhaustive c-search oracle") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    Window w(1, 3, seed % 2 ? 2 : 0);
    const StepFunction f = gen_step_function(seed, 4, w, cycled_profile(seed));
    const StepFunction S = sharp_maximal(f);
    const StepFunction So = oracle::sharp_maximal(f);
    REQUIRE((S - So).max_abs() <= 1e-11 * (1 + So.max_abs()));
  }
}

TEST_CASE("maximal agrees with the brute-force oracle (with ancestors)") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    Window w(seed % 2 ? 1 : 2, 3, seed % 3 == 0 ? 0 : 4);
    const StepFunction f = gen_step_function(seed, 5, w, cycled_profile(seed + 1));
    REQUIRE((maximal(f) - oracle::maximal(f)).max_abs() <= 1e-12);
  }
}

TEST_CASE("sharp_maximal <= 2 maximal and the oscillation comparison") {
  Window w(1, 4, 2);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const StepFunction f = gen_step_function(seed, 6, w, cycled_profile(seed));
    const StepFunction S = sharp_maximal(f);
    const StepFunction M = maximal(f);
    for (std::int64_t c = 0; c < w.cell_count(); ++c) REQUIRE(S[c] <= 2.0 * M[c] + 1e-12);

    // best-constant oscillation vs the <f>_I form: within a factor of 2
    const auto avg = detail::average_table(f);
    const auto osc = detail::oscillation_table(f);
    for (std::int64_t id = 0; id < w.in_window_count(); ++id) {
      const DyadicInterval I = w.interval_at(id);
      const auto r = w.cell_range(I);
      double mean_osc = 0.0;
      for (std::int64_t cc = r.first; cc < r.first + r.count; ++cc)
        mean_osc += std::fabs(f[cc] - avg[id]);
      mean_osc /= static_cast<double>(r.count);
      REQUIRE(osc[id] <= mean_osc + 1e-12);
      REQUIRE(mean_osc <= 2.0 * osc[id] + 1e-12);
    }
  }
}

TEST_CASE("sharp_maximal_delta of an indicator is a power of the sharp maximal") {
  Window w(1, 3, 1);
  const StepFunction f = StepFunction::indicator(w, {1, 1});
  const double delta = 0.5;
  const StepFunction a = sharp_maximal_delta(f, delta);
  StepFunction b = sharp_maximal(f);  // |f|^delta = f for an indicator
  for (double& v : b.cells()) v = std::pow(v, 1.0 / delta);
  REQUIRE((a - b).max_abs() <= 1e-12);
  REQUIRE(sharp_maximal_delta(StepFunction::constant(w, 3.0), 0.5).max_abs() <=
          1.5);  // finite, ancestor oscillation only
  REQUIRE_THROWS(sharp_maximal_delta(f, 1.0));
  REQUIRE_THROWS(sharp_maximal_delta(f, 0.0));
}

TEST_CASE("multilinear maximal: examples and bounds") {
  Window w(2, 4, 0);
  const StepFunction f = StepFunction::indicator(w, {0, 0});
  const std::vector<StepFunction> ff = {f, f};
  const StepFunction M2 = multilinear_maximal(ff);
  // on [1,2): (1/2)^2
  for (std::int64_t c = 0; c < w.cell_count(); ++c) {
    const double x = w.cell_left(c);
    if (x >= 1.0 && x < 2.0) REQUIRE_THAT(M2[c], Catch::Matchers::WithinAbs(0.25, 1e-14));
  }

  // m = 1 reduces to the maximal function
  const std::vector<StepFunction> f1 = {f};
  REQUIRE((multilinear_maximal(f1) - maximal(f)).max_abs() == 0.0);

  // M(f1,f2) <= Mf1 * Mf2 cellwise
  const StepFunction g = gen_step_function(5, 7, w, Profile::haar_series);
  const std::vector<StepFunction> fg = {f, g};
  const StepFunction Mfg = multilinear_maximal(fg);
  const StepFunction Mf = maximal(f), Mg = maximal(g);
  for (std::int64_t c = 0; c < w.cell_count(); ++c)
    REQUIRE(Mfg[c] <= Mf[c] * Mg[c] + 1e-12);

  REQUIRE((multilinear_maximal(ff) - oracle::multilinear_maximal(ff)).max_abs() <= 1e-12);
}

TEST_CASE("multilinear maximal with r-th power means") {
  Window w(2, 4, 0);
  const StepFunction f = StepFunction::indicator(w, {0, 0});
  const std::vector<StepFunction> ff = {f, f};
  const StepFunction Mr = multilinear_maximal_r(ff, 2.0);
  for (std::int64_t c = 0; c < w.cell_count(); ++c) {
    const double x = w.cell_left(c);
    if (x >= 1.0 && x < 2.0) REQUIRE_THAT(Mr[c], Catch::Matchers::WithinAbs(0.5, 1e-14));
  }

  REQUIRE((multilinear_maximal_r(ff, 1.0) - multilinear_maximal(ff)).max_abs() <= 1e-13);

  const StepFunction g = gen_step_function(9, 8, w, Profile::two_level);
  const std::vector<StepFunction> fg = {f, g};
  const StepFunction M = multilinear_maximal(fg);
  const StepFunction M15 = multilinear_maximal_r(fg, 1.5);
  for (std::int64_t c = 0; c < w.cell_count(); ++c)
    REQUIRE(M[c] <= M15[c] + 1e-11 * (1 + M15[c]));  // power-mean inequality

  REQUIRE_THROWS(multilinear_maximal_r(ff, 0.0));
}
