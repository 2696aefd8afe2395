#include <catch2/catch_amalgamated.hpp>

#include "radialverify/branch.hpp"
#include "radialverify/estimates.hpp"
#include "radialverify/family.hpp"

using namespace rv;

namespace {

EstimateHypotheses semistable_hyp() {
  EstimateHypotheses h;
  h.semistable = true;
  h.h1_finite = true;
  h.radially_decreasing = true;
  return h;
}

EstimateHypotheses full_hyp() {
  EstimateHypotheses h = semistable_hyp();
  h.g_nonnegative = true;
  h.g_nondecreasing = true;
  h.g_convex = true;
  return h;
}

RadialProfile log_profile(int nodes = 3000, double rmin = 1e-6) {
  return sample_profile(
      RadialGrid::geometric(nodes, rmin),
      [](double r) { return -2.0 * std::log(r); },
      [](double r) { return -2.0 / r; },
      [](double r) { return 2.0 / (r * r); },
      [](double r) { return -4.0 / (r * r * r); });
}

RadialProfile power_profile(int N, int nodes = 3000, double rmin = 1e-6) {
  const double al = 2.0 / (joseph_lundgren_exponent(N) - 1.0);
  return sample_profile(
      RadialGrid::geometric(nodes, rmin),
      [al](double r) { return std::pow(r, -al) - 1.0; },
      [al](double r) { return -al * std::pow(r, -al - 1.0); },
      [al](double r) { return al * (al + 1.0) * std::pow(r, -al - 2.0); },
      [al](double r) { return -al * (al + 1.0) * (al + 2.0) * std::pow(r, -al - 3.0); });
}

}  // namespace

TEST_CASE("weighted energy closed forms") {
  auto p = log_profile();
  // int_0^r t^9 (2/t)^2 dt = r^8 / 2
  CHECK(weighted_energy(p, 1.0, 10) == Catch::Approx(0.5).epsilon(2e-4));
  CHECK(weighted_energy(p, 0.5, 10) ==
        Catch::Approx(0.5 * std::pow(0.5, 8.0)).epsilon(2e-4));
  auto c = sample_profile(RadialGrid::geometric(500, 1e-4),
                          [](double) { return 3.0; }, [](double) { return 0.0; });
  CHECK(weighted_energy(c, 1.0, 10) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("weighted-energy ratio constant for the log solution") {
  auto p = log_profile();
  const auto rep = check_lemma_essential(p, 10, semistable_hyp());
  CHECK_FALSE(rep.skipped);
  CHECK(rep.holds_uniformly);
  CHECK(rep.empirical_constant == Catch::Approx(0.0394).epsilon(0.02));
  // flat ratio: slope of log(ratio) vs log(r) near zero
  CHECK(std::abs(rep.slope_at_origin) < 0.02);
  // flat within 5% on [1e-4, 1/2]
  double lo = 1e300, hi = 0.0;
  for (const auto& row : rep.trace) {
    if (row[0] < 1e-4 || row[0] > 0.5) continue;
    lo = std::min(lo, row[3]);
    hi = std::max(hi, row[3]);
  }
  CHECK(hi / lo < 1.05);
}

TEST_CASE("weighted-energy check is skipped without the semi-stability hypothesis") {
  auto p = log_profile();
  EstimateHypotheses none;
  const auto rep = check_lemma_essential(p, 9, none);
  CHECK(rep.skipped);
  CHECK_FALSE(rep.holds_uniformly);
}

TEST_CASE("weighted-energy check is vacuous on a constant profile") {
  auto c = sample_profile(RadialGrid::geometric(500, 1e-4),
                          [](double) { return 1.0; }, [](double) { return 0.0; });
  const auto rep = check_lemma_essential(c, 10, semistable_hyp());
  CHECK(rep.vacuous);
  CHECK(rep.holds_uniformly);
}

TEST_CASE("dyadic gap ratio is constant for the log solution") {
  auto p = log_profile();
  const auto rep = check_rand2r(p, 10, semistable_hyp());
  CHECK(rep.holds_uniformly);
  // |u(r) - u(r/2)| = 2 log 2 and the exponent vanishes at N = 10, so the
  // ratio equals 2 log 2 / grad everywhere
  double lo = 1e300, hi = 0.0;
  for (const auto& row : rep.trace) {
    lo = std::min(lo, row[3]);
    hi = std::max(hi, row[3]);
  }
  CHECK(hi / lo < 1.01);
}

TEST_CASE("dyadic gap ratio is constant for the power solution") {
  auto p = power_profile(16);
  const auto rep = check_rand2r(p, 16, semistable_hyp());
  CHECK(rep.holds_uniformly);
  CHECK(std::abs(rep.slope_at_origin) < 0.02);
}

TEST_CASE("principal bound regimes") {
  auto p10 = log_profile();
  const auto r10 = check_thm_principal(p10, 10, semistable_hyp());
  CHECK(r10.holds_uniformly);
  CHECK(to_string(r10.regime) == "N=10");

  auto p16 = power_profile(16);
  const auto r16 = check_thm_principal(p16, 16, semistable_hyp());
  CHECK(r16.holds_uniformly);
  // sharpness: ratio tends to a positive limit, slope near zero
  CHECK(std::abs(r16.slope_at_origin) < 0.02);

  const auto g = RadialGrid::geometric(800, 1e-6);
  Branch br = solve_branch(exp_nonlinearity(), Dimension(3), 8.0, 8, g);
  const auto ex = extremal_profile(br);
  const auto r3 = check_thm_principal(ex.profile, 3, semistable_hyp());
  CHECK(r3.holds_uniformly);
  CHECK(to_string(r3.regime) == "N<10");
}

TEST_CASE("extremal estimates for the log solution") {
  auto p = log_profile();
  const auto reps = check_thm_extremal(p, 10);
  REQUIRE(reps.size() == 4);
  // item ii: 2|log r| / (min|u_r| |log r|) = 1 with min|u_r| = 2
  CHECK(reps[0].item == 2);
  CHECK(reps[0].holds_uniformly);
  CHECK(reps[0].empirical_constant == Catch::Approx(1.0).epsilon(1e-3));
  // k = 1: |u_r| = 2/r against 2 r^{-2}: ratio r, sup 1 at r near 1
  CHECK(reps[1].note == "k=1");
  CHECK(reps[1].holds_uniformly);
  CHECK(reps[1].empirical_constant == Catch::Approx(1.0).epsilon(1e-2));
  for (const auto& r : reps) CHECK(r.holds_uniformly);
}

TEST_CASE("extremal estimate item iii is sharp in the supercritical case") {
  auto p = power_profile(16);
  const auto reps = check_thm_extremal(p, 16);
  REQUIRE(reps.size() == 4);
  CHECK(reps[0].item == 3);
  CHECK(reps[0].holds_uniformly);
  // sharpness: u / (r^{expo} - 1) tends to 1 near the origin
  const Pchip interp = p.interpolant();
  const double e = decay_exponent(16);
  CHECK(interp(1e-4) / (std::pow(1e-4, e) - 1.0) == Catch::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("extremal check degenerates gracefully on a constant profile") {
  auto c = sample_profile(RadialGrid::geometric(500, 1e-4),
                          [](double) { return 1.0; }, [](double) { return 0.0; });
  const auto reps = check_thm_extremal(c, 10);
  for (const auto& r : reps) CHECK(r.vacuous);
}

TEST_CASE("gradient estimates hold under the full sign hypotheses") {
  auto p = log_profile();
  const auto reps = check_thm_estimas(p, 10, full_hyp());
  REQUIRE(reps.size() == 3);
  for (const auto& r : reps) {
    CHECK_FALSE(r.skipped);
    CHECK(r.holds_uniformly);
    CHECK(std::isfinite(r.empirical_constant));
  }
}

TEST_CASE("gradient estimate items are skipped when flags are absent") {
  auto p = log_profile();
  EstimateHypotheses hyp = semistable_hyp();
  hyp.g_nonnegative = true;  // but not nondecreasing/convex
  const auto reps = check_thm_estimas(p, 10, hyp);
  REQUIRE(reps.size() == 3);
  CHECK_FALSE(reps[0].skipped);
  CHECK(reps[1].skipped);
  CHECK(reps[2].skipped);
  CHECK_FALSE(reps[1].holds_uniformly);  // skipped is never a pass
}

TEST_CASE("gradient estimate is never asserted on a counterexample profile") {
  // the counterexample's g carries no sign information, so every item must
  // come back skipped, and skipped is never reported as a pass
  CounterexampleTarget t;
  for (int n = 1; n <= 12; ++n) {
    t.radii.push_back(std::pow(2.0, -n));
    t.magnitudes.push_back(n);
  }
  const auto grid = RadialGrid::geometric(2000, 1e-5);
  const auto res = counterexample_first(t, 10, grid);
  REQUIRE(res.feasible);
  const auto reps = check_thm_estimas(res.u, 10, semistable_hyp());
  for (const auto& r : reps) {
    CHECK(r.skipped);
    CHECK_FALSE(r.holds_uniformly);
  }
}

TEST_CASE("no pointwise envelope survives the prescribed-derivative family") {
  // against psi(r) = r^{-3}, prescribing |u_r(r_n)| >= n psi(r_n) makes the
  // ratio |u_r|/psi exceed every constant along the sequence
  CounterexampleTarget t;
  for (int n = 1; n <= 14; ++n) {
    t.radii.push_back(std::pow(2.0, -n));
    t.magnitudes.push_back(n * std::pow(8.0, n));  // n * psi(r_n)
  }
  const auto grid = RadialGrid::geometric(2500, 1e-5);
  const auto res = counterexample_first(t, 10, grid);
  REQUIRE(res.feasible);
  for (std::size_t i = 0; i < t.radii.size(); ++i) {
    const double psi = std::pow(t.radii[i], -3.0);
    CHECK(res.achieved[i] / psi >= double(i + 1) * (1.0 - 1e-9));
  }
}

TEST_CASE("monotonicity laws on closed forms and branch output") {
  auto p = log_profile();
  const auto rep = check_monotonias(p, 10, full_hyp());
  CHECK(rep.holds_uniformly);

  auto p16 = power_profile(16);
  CHECK(check_monotonias(p16, 16, full_hyp()).holds_uniformly);

  const auto g = RadialGrid::geometric(800, 1e-6);
  Branch br = solve_branch(exp_nonlinearity(), Dimension(3), 3.0, 6, g);
  for (const auto& pt : br.points)
    CHECK(check_monotonias(pt.profile, 3, full_hyp()).holds_uniformly);

  auto c = sample_profile(RadialGrid::geometric(500, 1e-4),
                          [](double) { return 1.0; }, [](double) { return 0.0; });
  const auto vac = check_monotonias(c, 10, full_hyp());
  CHECK(vac.vacuous);
  CHECK(vac.holds_uniformly);

  EstimateHypotheses none;
  CHECK(check_monotonias(p, 10, none).skipped);
}

TEST_CASE("empirical constants are homogeneous in the solution") {
  auto p = log_profile();
  RadialProfile q = p;
  for (auto& v : q.u) v *= 3.0;
  for (auto& v : *q.u_r) v *= 3.0;
  for (auto& v : *q.u_rr) v *= 3.0;
  for (auto& v : *q.u_rrr) v *= 3.0;
  const auto a = check_lemma_essential(p, 10, semistable_hyp());
  const auto b = check_lemma_essential(q, 10, semistable_hyp());
  CHECK(a.empirical_constant == Catch::Approx(b.empirical_constant).epsilon(1e-10));
  const auto ar = check_rand2r(p, 10, semistable_hyp());
  const auto br2 = check_rand2r(q, 10, semistable_hyp());
  CHECK(ar.empirical_constant == Catch::Approx(br2.empirical_constant).epsilon(1e-10));
}

TEST_CASE("empirical constants stable under grid doubling") {
  auto p1 = log_profile(2000);
  auto p2 = log_profile(4000);
  const auto a = check_lemma_essential(p1, 10, semistable_hyp());
  const auto b = check_lemma_essential(p2, 10, semistable_hyp());
  CHECK(a.empirical_constant == Catch::Approx(b.empirical_constant).epsilon(0.01));
}

TEST_CASE("joseph-lundgren identity gap vanishes") {
  for (int N = 11; N <= 30; ++N)
    CHECK(joseph_lundgren_identity_gap(N) < 1e-12);
}
