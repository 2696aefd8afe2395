// Acceptance gate: one timed check per criterion, one [PASS]/[FAIL] line
// each, nonzero exit if anything fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "radialverify/branch.hpp"
#include "radialverify/core.hpp"
#include "radialverify/estimates.hpp"
#include "radialverify/family.hpp"
#include "radialverify/stability.hpp"

using namespace rv;

namespace {

int g_failures = 0;

void criterion(int id, const std::string& label, double time_limit_s,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (dt > time_limit_s) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
  }
  std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", id,
              label.c_str(), dt, detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

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

RadialProfile jl_profile(int N, std::size_t nodes, double rmin) {
  const double al = 2.0 / (joseph_lundgren_exponent(N) - 1.0);
  return sample_profile(
      RadialGrid::geometric(nodes, rmin),
      [al](double r) { return std::pow(r, -al) - 1.0; },
      [al](double r) { return -al * std::pow(r, -al - 1.0); },
      [al](double r) { return al * (al + 1.0) * std::pow(r, -al - 2.0); },
      [al](double r) {
        return -al * (al + 1.0) * (al + 2.0) * std::pow(r, -al - 3.0);
      });
}

// flat-ratio test used by criterion 5
bool lemma_ratio_ok(const RadialProfile& u, int N, std::string& detail,
                    const char* tag) {
  const auto rep = check_lemma_essential(u, N, semistable_hyp());
  if (!std::isfinite(rep.empirical_constant)) {
    detail += std::string(tag) + ": constant not finite; ";
    return false;
  }
  double lo = 1e300, hi = 0.0;
  for (const auto& row : rep.trace) {
    if (row[0] < 1e-4 || row[0] > 0.5) continue;
    lo = std::min(lo, row[3]);
    hi = std::max(hi, row[3]);
  }
  if (!(hi / lo < 1.05)) {
    detail += std::string(tag) + ": ratio not flat; ";
    return false;
  }
  // stability under grid doubling
  RadialProfile u2 = u;
  const auto g2 = RadialGrid::geometric(2 * u.grid.size(), u.grid.r_min());
  // resample through the closed-form interpolant of u and u_r
  Pchip iu(u.grid.r, u.u), id(u.grid.r, *u.u_r);
  RadialProfile w;
  w.grid = g2;
  w.u.resize(g2.size());
  std::vector<double> d(g2.size());
  for (std::size_t i = 0; i < g2.size(); ++i) {
    w.u[i] = iu(std::clamp(g2.r[i], u.grid.r.front(), 1.0));
    d[i] = id(std::clamp(g2.r[i], u.grid.r.front(), 1.0));
  }
  w.u_r = std::move(d);
  const auto rep2 = check_lemma_essential(w, N, semistable_hyp());
  if (std::abs(rep2.empirical_constant - rep.empirical_constant) >
      0.01 * rep.empirical_constant) {
    detail += std::string(tag) + ": not stable under doubling; ";
    return false;
  }
  return true;
}

}  // namespace

int main() {
  criterion(1, "exponential branch, N=10: extremal value and profile", 60.0,
            [](std::string& detail) {
              const auto grid = RadialGrid::geometric(1200, 1e-6);
              const Branch br =
                  solve_branch(exp_nonlinearity(), Dimension(10), 40.0, 14, grid);
              const double l = br.lambda_star_estimate;
              if (!(l >= 15.8 && l <= 16.0 + 1e-9)) {
                detail = "lambda* = " + std::to_string(l);
                return false;
              }
              const auto ex = extremal_profile(br);
              double maxrel = 0.0;
              for (std::size_t i = 0; i < grid.size(); ++i) {
                const double r = grid.r[i];
                if (r < 1e-3 || r > 0.999) continue;
                const double want = -2.0 * std::log(r);
                maxrel = std::max(maxrel, std::abs(ex.profile.u[i] - want) / want);
              }
              detail = "lambda* = " + std::to_string(l) +
                       ", max rel err vs 2|log r| = " + std::to_string(maxrel);
              return maxrel < 0.02;
            });

  criterion(2, "explicit power solution, N=16: residual, stability, sharpness",
            30.0, [](std::string& detail) {
              const int N = 16;
              const double p = joseph_lundgren_exponent(N);
              const double al = 2.0 / (p - 1.0);
              const double lam = al * (N - 2.0 - al);
              auto u = jl_profile(N, 3000, 1e-6);
              auto gg = [lam, p](double s) { return lam * std::pow(1.0 + s, p); };
              const double res = ode_residual_weighted_max(u, gg, N);
              if (!(res < 1e-6)) {
                detail = "residual = " + std::to_string(res);
                return false;
              }
              // g'(u(r)) = lam p (1+u)^{p-1} = lam p r^{-2} since al (p-1) = 2
              const auto v = first_eigenvalue(
                  u, [lam, p](double r) { return lam * p / (r * r); }, N, 1e-6);
              if (!(v.first_eigenvalue >= -1e-6)) {
                detail = "mu1 = " + std::to_string(v.first_eigenvalue);
                return false;
              }
              const Pchip iu(u.grid.r, u.u);
              const double e = decay_exponent(N);
              const double ratio = iu(1e-5) / (std::pow(1e-5, e) - 1.0);
              detail = "residual = " + std::to_string(res) +
                       ", mu1 = " + std::to_string(v.first_eigenvalue) +
                       ", sharp ratio = " + std::to_string(ratio);
              return ratio > 0.9 && ratio < 1.1;
            });

  criterion(3, "eigenvalue calibration and convergence order", 60.0,
            [](std::string& detail) {
              const double j0sq = 2.404825557695773 * 2.404825557695773;
              auto mu = [](std::size_t n, int N) {
                const auto g = RadialGrid::uniform(n, 1e-6);
                RadialProfile p;
                p.grid = g;
                p.u.assign(g.size(), 0.0);
                p.u_r = std::vector<double>(g.size(), 0.0);
                return first_eigenvalue(p, [](double) { return 0.0; }, N)
                    .first_eigenvalue;
              };
              const double m3 = mu(4000, 3), m2 = mu(4000, 2);
              if (std::abs(m3 - kPi * kPi) > 1e-3 * kPi * kPi ||
                  std::abs(m2 - j0sq) > 1e-3 * j0sq) {
                detail = "mu(N=3) = " + std::to_string(m3) +
                         ", mu(N=2) = " + std::to_string(m2);
                return false;
              }
              const double e1 = std::abs(mu(1000, 3) - kPi * kPi);
              const double e2 = std::abs(mu(2000, 3) - kPi * kPi);
              const double order = std::log2(e1 / e2);
              detail = "order = " + std::to_string(order);
              return order >= 1.9;
            });

  criterion(4, "hardy threshold sweep for the log potential", 20.0,
            [](std::string& detail) {
              const auto g = RadialGrid::geometric(2000, 1e-6);
              auto p = sample_profile(
                  g, [](double r) { return -2.0 * std::log(r); },
                  [](double r) { return -2.0 / r; });
              for (int N : {10, 11, 12}) {
                const double mu =
                    first_eigenvalue(
                        p, [N](double r) { return 2.0 * (N - 2) / (r * r); }, N)
                        .first_eigenvalue;
                if (!(mu >= -1e-4)) {
                  detail = "N=" + std::to_string(N) + " mu1=" + std::to_string(mu);
                  return false;
                }
              }
              const double mu9 =
                  first_eigenvalue(p, [](double r) { return 14.0 / (r * r); }, 9)
                      .first_eigenvalue;
              detail = "mu1(N=9) = " + std::to_string(mu9);
              return mu9 < -1e-2;
            });

  criterion(5, "weighted-energy constants on three closed forms", 120.0,
            [](std::string& detail) {
              auto log10 = sample_profile(
                  RadialGrid::geometric(3000, 1e-6),
                  [](double r) { return -2.0 * std::log(r); },
                  [](double r) { return -2.0 / r; });
              auto jl = jl_profile(16, 3000, 1e-6);
              const auto fam = build_family(zero_seed(10),
                                            RadialGrid::geometric(3000, 1e-6));
              bool ok = true;
              ok &= lemma_ratio_ok(log10, 10, detail, "log N=10");
              ok &= lemma_ratio_ok(jl, 16, detail, "power N=16");
              ok &= lemma_ratio_ok(fam, 10, detail, "family h=0");
              return ok;
            });

  criterion(6, "randomized family factory (20 seeds)", 300.0,
            [](std::string& detail) {
              detail::SplitMix64 rng(2024);
              for (int trial = 0; trial < 20; ++trial) {
                const int N = 10 + int(rng.uniform(0.0, 10.999));
                const int nb = 1 + int(rng.uniform(0.0, 3.999));
                std::vector<SeedBump> bumps;
                for (int b = 0; b < nb; ++b) {
                  const double c = rng.uniform(0.1, 0.9);
                  const double w = rng.uniform(0.01, std::min(c, 1.0 - c) * 0.9);
                  bumps.push_back({c, w, rng.uniform(0.1, 3.0)});
                }
                FamilyFunctions ff(bump_seed(N, bumps));
                const auto grid = RadialGrid::geometric(2000, 1e-6);
                const auto u = build_family(ff, grid);
                const double lb = std::sqrt(2.0) * std::pow(N - 1.0, -0.25);
                const double blo = -0.5 * N + std::sqrt(N - 1.0) + 1.0;
                double h1a = 0.0, h1b = 0.0;
                for (int pass = 0; pass < 2; ++pass) {
                  const auto gg =
                      RadialGrid::geometric(2000, pass == 0 ? 1e-6 : 5e-7);
                  const auto uu = build_family(ff, gg);
                  std::vector<double> f(gg.size());
                  for (std::size_t i = 0; i < gg.size(); ++i)
                    f[i] = ((*uu.u_r)[i] * (*uu.u_r)[i] + uu.u[i] * uu.u[i]) *
                           std::pow(gg.r[i], N - 1);
                  (pass == 0 ? h1a : h1b) = std::sqrt(integrate(gg.r, f));
                }
                for (std::size_t i = 0; i < grid.size(); ++i) {
                  const double r = grid.r[i], ur = (*u.u_r)[i];
                  const double idres =
                      std::abs((N - 1.0) * std::pow(r, N - 3.0) * ur * ur -
                               ff.PhiP(r)) /
                      ff.PhiP(r);
                  if (idres > 1e-8) {
                    detail = "trial " + std::to_string(trial) + ": identity";
                    return false;
                  }
                  if (std::abs(ur) < lb * std::pow(r, blo) * (1.0 - 1e-10)) {
                    detail = "trial " + std::to_string(trial) + ": lower bound";
                    return false;
                  }
                }
                if (std::abs(h1a - h1b) > 1e-3 * h1a) {
                  detail = "trial " + std::to_string(trial) + ": h1 unstable";
                  return false;
                }
                const auto v = verify_family_semistability(ff, u, 100 + trial);
                if (!v.semistable) {
                  detail = "trial " + std::to_string(trial) + ": stability";
                  return false;
                }
                const auto rec = recover_g(u, N);
                const auto u2 = shoot_with_g([&rec](double s) { return rec(s); },
                                             N, grid, u.u[0], (*u.u_r)[0]);
                double scale = 0.0;
                for (double x : u.u) scale = std::max(scale, std::abs(x));
                for (std::size_t i = 0; i < grid.size(); ++i) {
                  if (grid.r[i] < 2.0 * grid.r_min()) continue;
                  if (std::abs(u2.u[i] - u.u[i]) > 1e-4 * scale) {
                    detail = "trial " + std::to_string(trial) + ": round trip";
                    return false;
                  }
                }
              }
              return true;
            });

  criterion(7, "counterexample suite for the three derivative orders", 360.0,
            [](std::string& detail) {
              const auto grid = RadialGrid::geometric(3000, 5e-7);
              CounterexampleTarget t;
              for (int n = 1; n <= 20; ++n) {
                t.radii.push_back(std::pow(2.0, -n));
                t.magnitudes.push_back(n);
              }
              const auto r1 = counterexample_first(t, 10, grid);
              if (!r1.feasible) {
                detail = "k=1 infeasible";
                return false;
              }
              for (std::size_t i = 0; i < 20; ++i)
                if (r1.achieved[i] < t.magnitudes[i]) {
                  detail = "k=1 target missed at n=" + std::to_string(i + 1);
                  return false;
                }
              const auto r2 = counterexample_second(t, 10, grid);
              if (!r2.feasible) {
                detail = "k=2 infeasible";
                return false;
              }
              for (std::size_t i = 0; i < 20; ++i)
                if (r2.achieved[i] < t.magnitudes[i]) {
                  detail = "k=2 target missed";
                  return false;
                }
              if (recover_g(r2.u, 10).min_value() < 0.0) {
                detail = "k=2 recovered g < 0";
                return false;
              }
              const auto r3 = counterexample_third(t, 10, grid);
              if (!r3.feasible) {
                detail = "k=3 infeasible: " + r3.note;
                return false;
              }
              for (std::size_t i = 0; i < 20; ++i)
                if (r3.achieved[i] < t.magnitudes[i]) {
                  detail = "k=3 target missed";
                  return false;
                }
              FamilyFunctions f3(r3.spec);
              for (double r : grid.r)
                if (!(f3.g_of_r(r) >= 0.0 && f3.r2gprime(r) > 0.0)) {
                  detail = "k=3 sign check failed at r=" + std::to_string(r);
                  return false;
                }
              return true;
            });

  criterion(8, "monotonicity laws along the sampled branches", 120.0,
            [](std::string& detail) {
              const auto grid = RadialGrid::geometric(800, 1e-6);
              Branch br =
                  solve_branch(exp_nonlinearity(), Dimension(10), 30.0, 8, grid);
              for (const auto& pt : br.points) {
                const auto rep = check_monotonias(pt.profile, 10, full_hyp());
                if (!rep.holds_uniformly) {
                  detail = "exp branch a=" + std::to_string(pt.a) + ": " + rep.note;
                  return false;
                }
              }
              const int N = 16;
              const double p = joseph_lundgren_exponent(N);
              Branch brp = solve_branch(power_nonlinearity(p), Dimension(N),
                                        1000.0, 8, grid);
              for (const auto& pt : brp.points) {
                const auto rep = check_monotonias(pt.profile, N, full_hyp());
                if (!rep.holds_uniformly) {
                  detail = "power branch a=" + std::to_string(pt.a) + ": " + rep.note;
                  return false;
                }
              }
              return true;
            });

  criterion(9, "scaling invariance of the empirical constants", 120.0,
            [](std::string& detail) {
              const auto grid = RadialGrid::geometric(800, 1e-6);
              auto constant_for = [&](double M) {
                const Nonlinearity f =
                    M == 1.0 ? exp_nonlinearity()
                             : scaled_nonlinearity(exp_nonlinearity(), M);
                Branch br =
                    solve_branch(f, Dimension(10), 20.0 * M, 10, grid);
                const auto ex = extremal_profile(br);
                return check_lemma_essential(ex.profile, 10, semistable_hyp())
                    .empirical_constant;
              };
              const double base = constant_for(1.0);
              for (double M : {0.1, 10.0}) {
                const double c = constant_for(M);
                if (std::abs(c - base) > 1e-3 * base) {
                  detail = "M=" + std::to_string(M) + ": " + std::to_string(c) +
                           " vs " + std::to_string(base);
                  return false;
                }
              }
              return true;
            });

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}
