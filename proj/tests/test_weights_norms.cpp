#include <catch2/catch_amalgamated.hpp>

#include "dyadic/harness.hpp"
#include "oracles.hpp"

using namespace dyadic;

namespace {

// 2 on [0,1/2), 1 elsewhere: the two-valued fixture
Weight two_valued(const Window& w) {
  StepFunction f = StepFunction::constant(w, 1.0);
  const auto r = w.cell_range({1, 0});
  for (std::int64_t c = r.first; c < r.first + r.count; ++c) f[c] = 2.0;
  return Weight(std::move(f));
}

}  // namespace

TEST_CASE("weight construction rejects nonpositive cells") {
  Window w(0, 1, 0);
  REQUIRE_THROWS_WITH(Weight(StepFunction::zero(w)),
                      Catch::Matchers::ContainsSubstring("strictly positive"));
  REQUIRE_NOTHROW(Weight(StepFunction::constant(w, 0.25)));
}

TEST_CASE("weight measure of cell unions") {
  Window w(1, 2, 0);
  const Weight one = Weight::ones(w);
  REQUIRE(weight_measure(one, DyadicInterval{0, 0}) == 1.0);
  const Weight two = Weight(StepFunction::constant(w, 2.0));
  REQUIRE(weight_measure(two, DyadicInterval{1, 0}) == 1.0);

  const Weight tv = two_valued(w);
  REQUIRE(weight_measure(tv, DyadicInterval{0, 0}) == 1.5);
  std::vector<bool> mask(static_cast<std::size_t>(w.cell_count()), false);
  const auto r = w.cell_range({0, 0});
  for (std::int64_t c = r.first; c < r.first + r.count; ++c) mask[c] = true;
  REQUIRE(weight_measure(tv, mask) == 1.5);
}

TEST_CASE("A_p characteristic: unit weight, fixture value, witness") {
  Window w(2, 4, 0);
  REQUIRE(ap_characteristic(Weight::ones(w), 2.0) == 1.0);
  REQUIRE(ap_characteristic(Weight::ones(w), 1.5) == 1.0);

  const auto res = ap_characteristic_detail(two_valued(w), 2.0);
  REQUIRE_THAT(res.value, Catch::Matchers::WithinAbs(1.125, 1e-14));
  REQUIRE(res.witness == DyadicInterval{0, 0});  // attained at [0,1)
  REQUIRE_THAT(oracle::ap_characteristic(two_valued(w).fn(), 2.0),
               Catch::Matchers::WithinAbs(res.value, 1e-14));

  REQUIRE_THROWS(ap_characteristic(two_valued(w), 1.0));
}

TEST_CASE("A_p characteristics are at least 1, equal to 1 only for constants") {
  Window w(1, 4, 0);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Weight wt = gen_ap_weight(seed, 0, w, 2.0, 16.0).weight;
    for (double p : {1.25, 2.0, 4.0}) REQUIRE(ap_characteristic(wt, p) >= 1.0 - 1e-12);
  }
  // strictly above 1 for a nonconstant weight
  REQUIRE(ap_characteristic(two_valued(w), 2.0) > 1.0 + 1e-6);
}

TEST_CASE("A_p monotonicity in p and the A_1 majorant") {
  Window w(1, 4, 0);
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Weight wt = gen_ap_weight(seed, 1, w, 2.0, 12.0).weight;
    const double a1 = a1_characteristic(wt);
    double prev = a1;
    for (double p : {1.25, 1.5, 2.0, 4.0, 8.0}) {
      const double c = ap_characteristic(wt, p);
      REQUIRE(c <= prev * (1.0 + 1e-12));
      prev = c;
    }
  }
}

TEST_CASE("A_1 characteristic of the fixture") {
  Window w(2, 4, 0);
  REQUIRE(a1_characteristic(Weight::ones(w)) == 1.0);
  REQUIRE(a1_characteristic(Weight(StepFunction::constant(w, 7.0))) == 1.0);
  REQUIRE_THAT(a1_characteristic(two_valued(w)), Catch::Matchers::WithinAbs(1.5, 1e-14));
}

TEST_CASE("A_inf estimate: grid minimum, refinement monotonicity") {
  Window w(1, 3, 0);
  REQUIRE(ainf_estimate(Weight::ones(w)) == 1.0);
  const Weight tv = two_valued(w);
  const double coarse = ainf_estimate(tv, {1.5, 2.0});
  const double fine = ainf_estimate(tv, {1.5, 2.0, 4.0, 8.0});
  REQUIRE(fine <= coarse);
  const auto est = ainf_estimate_detail(tv, {1.5, 2.0, 4.0, 8.0});
  REQUIRE(est.value == ap_characteristic(tv, est.minimizing_p));
  REQUIRE_THROWS(ainf_estimate(tv, std::vector<double>{}));
}

TEST_CASE("exponent vectors aggregate by the Hoelder relation") {
  const ExponentVector P({2.0, 2.0});
  REQUIRE(P.aggregate_p() == 1.0);
  REQUIRE(ExponentVector({3.0, 3.0}).aggregate_p() == 1.5);
  REQUIRE_THAT(ExponentVector({2.0, 4.0}).aggregate_p(),
               Catch::Matchers::WithinRel(4.0 / 3.0, 1e-15));
  REQUIRE(P.all_above_one());
  REQUIRE_FALSE(ExponentVector({1.0, 2.0}).all_above_one());
  REQUIRE_THROWS(ExponentVector({0.5, 2.0}));
}

TEST_CASE("nu weight: constants and exponent arithmetic") {
  Window w(1, 2, 0);
  const ExponentVector P({2.0, 2.0});
  {
    const WeightVector wv({Weight::ones(w), Weight::ones(w)}, P);
    REQUIRE((nu_weight(wv).fn() - StepFunction::constant(w, 1.0)).max_abs() == 0.0);
  }
  {
    const WeightVector wv({Weight(StepFunction::constant(w, 4.0)), Weight::ones(w)}, P);
    REQUIRE((nu_weight(wv).fn() - StepFunction::constant(w, 2.0)).max_abs() <= 1e-15);
  }
  {
    // p1 = p2 = 2 gives p = 1: nu = sqrt(w1 w2)
    const Weight a = two_valued(w);
    const WeightVector wv({a, a}, P);
    REQUIRE((nu_weight(wv).fn() - a.fn()).max_abs() <= 1e-15);
  }
}

TEST_CASE("multilinear A_P characteristic") {
  Window w(2, 3, 0);
  const ExponentVector P({2.0, 2.0});
  REQUIRE(multilinear_ap_characteristic(WeightVector({Weight::ones(w), Weight::ones(w)}, P)) ==
          1.0);

  // m = 1 carries the 1/p power of the linear characteristic
  const Weight tv = two_valued(w);
  const double m1 = multilinear_ap_characteristic(WeightVector({tv}, ExponentVector({2.0})));
  REQUIRE_THAT(m1, Catch::Matchers::WithinRel(std::sqrt(ap_characteristic(tv, 2.0)), 1e-12));

  const WeightVector pair({tv, Weight::ones(w)}, P);
  const double c2 = multilinear_ap_characteristic(pair);
  REQUIRE(std::isfinite(c2));
  REQUIRE(c2 >= 1.0 - 1e-12);
  REQUIRE_THAT(c2, Catch::Matchers::WithinRel(
                       oracle::multilinear_ap({tv.fn(), Weight::ones(w).fn()}, {2.0, 2.0}),
                       1e-12));

  // p_j = 1 slot uses the essential sup convention
  const double c_p1 =
      multilinear_ap_characteristic(WeightVector({tv, tv}, ExponentVector({1.0, 2.0})));
  REQUIRE(std::isfinite(c_p1));
  REQUIRE_THAT(c_p1, Catch::Matchers::WithinRel(
                         oracle::multilinear_ap({tv.fn(), tv.fn()}, {1.0, 2.0}), 1e-12));
}

TEST_CASE("products of A_p weights give finite A_P vectors, nu stays in A_inf") {
  Window w(1, 4, 0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Weight w1 = gen_ap_weight(seed, 2, w, 2.0, 6.0).weight;
    const Weight w2 = gen_ap_weight(seed, 3, w, 2.0, 6.0).weight;
    const WeightVector wv({w1, w2}, ExponentVector({2.0, 2.0}));
    const double c = multilinear_ap_characteristic(wv);
    REQUIRE(std::isfinite(c));
    REQUIRE(c >= 1.0 - 1e-12);
    // nu in A_{mp}: finite grid estimate
    REQUIRE(std::isfinite(ainf_estimate(nu_weight(wv))));
  }
}

// --- BMO ---------------------------------------------------------------

TEST_CASE("BMO norm: constants, the two-step shape, the half indicator") {
  Window w(1, 4, 0);
  REQUIRE(bmo_norm(StepFunction::constant(w, 5.0)) == 0.0);

  // +1 on [1/2,1), -1 on [0,1/2), 0 elsewhere: oscillation peaks at [0,1)
  StepFunction b = StepFunction::zero(w);
  {
    const auto lo = w.cell_range({1, 0});
    for (std::int64_t c = lo.first; c < lo.first + lo.count; ++c) b[c] = -1.0;
    const auto hi = w.cell_range({1, 1});
    for (std::int64_t c = hi.first; c < hi.first + hi.count; ++c) b[c] = 1.0;
  }
  const auto res = bmo_norm_detail(b);
  REQUIRE_THAT(res.value, Catch::Matchers::WithinAbs(1.0, 1e-14));
  REQUIRE(res.witness == DyadicInterval{0, 0});
  REQUIRE_THAT(oracle::bmo_norm(b), Catch::Matchers::WithinAbs(1.0, 1e-14));

  const StepFunction half = StepFunction::indicator(w, {1, 0});
  REQUIRE_THAT(bmo_norm(half), Catch::Matchers::WithinAbs(0.5, 1e-14));
}

TEST_CASE("BMO_r norms: r = 1 equality and equivalence statistics") {
  Window w(1, 4, 0);
  REQUIRE(bmo_r_norm(StepFunction::constant(w, 2.0), 0.5) == 0.0);
  double ratio_min = HUGE_VAL, ratio_max = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const StepFunction b = gen_step_function(seed, 9, w, Profile::haar_series);
    REQUIRE_THAT(bmo_r_norm(b, 1.0), Catch::Matchers::WithinRel(bmo_norm(b), 1e-12));
    const double r2 = bmo_r_norm(b, 2.0), r1 = bmo_norm(b);
    if (r1 > 0) {
      ratio_min = std::min(ratio_min, r2 / r1);
      ratio_max = std::max(ratio_max, r2 / r1);
    }
  }
  // the two norms are equivalent: the observed ratios live in a fixed band
  REQUIRE(ratio_min >= 1.0 - 1e-12);  // Jensen: L1 mean <= L2 mean
  REQUIRE(ratio_max <= 4.0);
  REQUIRE_THROWS(bmo_r_norm(StepFunction::constant(w, 1.0), 0.0));
}

TEST_CASE("BMO_2 Haar identity holds exactly on step functions") {
  Window w(1, 5, 3);
  REQUIRE(bmo2_haar(StepFunction::constant(w, 3.0)) == 0.0);
  REQUIRE_THAT(bmo2_haar(haar_function({0, 0}, w)), Catch::Matchers::WithinAbs(1.0, 1e-13));

  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    StepFunction b = gen_step_function(seed, 10, w, cycled_profile(seed));
    const double vh = bmo2_haar(b);
    const double v2 = bmo_r_norm(b, 2.0);
    REQUIRE(std::fabs(vh - v2) <= 1e-10 * (1.0 + vh));
    // coefficient bound |b^(I)| / sqrt|I| <= ||b||_{BMO_2}
    const auto coef = detail::coefficient_table(b);
    for (std::int64_t id = 0; id < w.in_window_count(); ++id) {
      const DyadicInterval I = w.interval_at(id);
      REQUIRE(std::fabs(coef[id]) / std::sqrt(pow2(-I.scale)) <= vh * (1 + 1e-12) + 1e-15);
    }
  }
}

TEST_CASE("truncation: clamp identities and the 9/4 bound") {
  Window w(1, 4, 0);
  const StepFunction b = 3.0 * haar_function({0, 0}, w);
  const StepFunction t1 = truncate_bmo(b, 1.0);
  REQUIRE(t1.max_abs() == 1.0);
  REQUIRE((truncate_bmo(b, 5.0) - b).max_abs() == 0.0);  // j >= max|b|
  REQUIRE_THROWS(truncate_bmo(b, 0.0));

  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    StepFunction bb = gen_step_function(seed, 11, w, Profile::haar_series);
    TrialRng rng(seed, 12, 0);
    const double j = rng.uniform(0.05, 1.2) * std::max(bb.max_abs(), 1e-9);
    REQUIRE(bmo_norm(truncate_bmo(bb, j)) <= 2.25 * bmo_norm(bb) + 1e-12);
  }
}

// --- Norms ---------------------------------------------------------------

TEST_CASE("weighted Lp norms on simple functions") {
  Window w(1, 3, 0);
  const StepFunction f = StepFunction::indicator(w, {0, 0});
  for (double p : {0.5, 1.0, 2.0, 3.0}) REQUIRE_THAT(lp_norm(f, p), Catch::Matchers::WithinAbs(1.0, 1e-13));
  REQUIRE_THAT(lp_norm(haar_function({0, 0}, w), 2.0), Catch::Matchers::WithinAbs(1.0, 1e-13));

  const Weight tv = two_valued(w);
  REQUIRE_THAT(lp_norm(f, 1.0, tv.fn()), Catch::Matchers::WithinAbs(1.5, 1e-13));
  REQUIRE_THROWS(lp_norm(f, 0.0));
}

TEST_CASE("weak Lp norm: level sets and the Chebyshev bound") {
  Window w(1, 3, 0);
  const StepFunction f = StepFunction::indicator(w, {0, 0});
  for (double p : {0.5, 1.0, 2.0}) REQUIRE_THAT(weak_lp_norm(f, p), Catch::Matchers::WithinAbs(1.0, 1e-13));

  // two levels: |f| = 2 on [0,1/2), 1 on [1/2,1): max(2 (1/2), 1 1) = 1
  StepFunction g = StepFunction::indicator(w, {0, 0});
  {
    const auto r = w.cell_range({1, 0});
    for (std::int64_t c = r.first; c < r.first + r.count; ++c) g[c] = 2.0;
  }
  REQUIRE_THAT(weak_lp_norm(g, 1.0), Catch::Matchers::WithinAbs(1.0, 1e-13));

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const StepFunction h = gen_step_function(seed, 13, w, cycled_profile(seed));
    const Weight wt = gen_ap_weight(seed, 14, w, 2.0, 4.0).weight;
    for (double p : {0.5, 1.0, 2.0})
      REQUIRE(weak_lp_norm(h, p, wt.fn()) <= lp_norm(h, p, wt.fn()) * (1 + 1e-12));
  }
}

TEST_CASE("localized norms on intervals") {
  Window w(0, 4, 0);
  const DyadicInterval I{0, 0};
  REQUIRE_THAT(localized_lp_norm(StepFunction::constant(w, -2.5), I, 3.0),
               Catch::Matchers::WithinAbs(2.5, 1e-13));
  REQUIRE_THAT(localized_lp_norm(haar_function(I, w), I, 2.0),
               Catch::Matchers::WithinAbs(1.0, 1e-13));
  REQUIRE_THAT(localized_lp_norm(StepFunction::indicator(w, {1, 0}), I, 1.0),
               Catch::Matchers::WithinAbs(0.5, 1e-13));

  REQUIRE_THAT(localized_weak_norm(StepFunction::indicator(w, I), I, 0.7),
               Catch::Matchers::WithinAbs(1.0, 1e-13));
  REQUIRE_THAT(localized_weak_norm(StepFunction::indicator(w, {1, 1}), I, 2.0),
               Catch::Matchers::WithinAbs(std::sqrt(0.5), 1e-13));
  REQUIRE_THAT(localized_weak_norm(haar_function(I, w), I, 0.5),
               Catch::Matchers::WithinAbs(1.0, 1e-13));

  // normalized-measure nesting: p1 < p2 implies smaller localized norm
  const StepFunction f = gen_step_function(3, 15, w, Profile::haar_series);
  REQUIRE(localized_lp_norm(f, I, 0.5) <= localized_lp_norm(f, I, 1.0) * (1 + 1e-12));
  REQUIRE(localized_lp_norm(f, I, 1.0) <= localized_lp_norm(f, I, 2.0) * (1 + 1e-12));
}

TEST_CASE("Kolmogorov ratios stay under the standard constant") {
  Window w(0, 4, 0);
  const DyadicInterval I{0, 0};
  REQUIRE_THAT(kolmogorov_ratio(StepFunction::indicator(w, I), I, 0.25, 0.5),
               Catch::Matchers::WithinAbs(1.0, 1e-13));
  REQUIRE_THAT(kolmogorov_ratio(haar_function(I, w), I, 0.25, 0.5),
               Catch::Matchers::WithinAbs(1.0, 1e-13));
  REQUIRE_THROWS(kolmogorov_ratio(haar_function(I, w), I, 0.5, 0.5));

  Window w2(1, 5, 0);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const StepFunction f = gen_step_function(seed, 16, w2, Profile::two_level);
    for (auto [p, q] : std::vector<std::pair<double, double>>{{0.25, 0.5}, {0.5, 1.0}}) {
      for (std::int64_t id = 0; id < w2.in_window_count(); id += 7) {
        const DyadicInterval J = w2.interval_at(id);
        REQUIRE(kolmogorov_ratio(f, J, p, q) <= kolmogorov_constant(p, q) * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("norm homogeneity") {
  Window w(1, 4, 0);
  const StepFunction f = gen_step_function(8, 17, w, Profile::haar_series);
  const Weight wt = gen_ap_weight(8, 18, w, 2.0, 4.0).weight;
  const double c = -2.25;
  for (double p : {0.5, 1.0, 2.0}) {
    REQUIRE_THAT(lp_norm(c * f, p, wt.fn()),
                 Catch::Matchers::WithinRel(std::fabs(c) * lp_norm(f, p, wt.fn()), 1e-12));
    REQUIRE_THAT(weak_lp_norm(c * f, p, wt.fn()),
                 Catch::Matchers::WithinRel(std::fabs(c) * weak_lp_norm(f, p, wt.fn()), 1e-12));
  }
}
