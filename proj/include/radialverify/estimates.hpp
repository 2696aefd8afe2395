#pragma once

// Quantitative estimate checks: the weighted-energy growth bound, the dyadic
// gap bound, the pointwise theorems for semi-stable solutions and extremal
// solutions, and the monotonicity laws for |u_r|. Every constant appearing
// in the statements is reported as an empirical sup-ratio together with the
// radius where the sup is attained and the log-log slope near the origin
// (so sharpness vs. slack is visible in the report).

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "radialverify/core.hpp"

namespace rv {

enum class TheoremId {
  lemma_essential,
  prop_rand2r,
  thm_principal,
  thm_extremal,
  thm_estimas,
  lemma_monotonias,
};

inline std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::lemma_essential: return "lemma_essential";
    case TheoremId::prop_rand2r: return "prop_rand2r";
    case TheoremId::thm_principal: return "thm_principal";
    case TheoremId::thm_extremal: return "thm_extremal";
    case TheoremId::thm_estimas: return "thm_estimas";
    case TheoremId::lemma_monotonias: return "lemma_monotonias";
  }
  return "?";
}

enum class Regime { below10, at10, above10 };

inline Regime regime_of(int N) {
  if (N < 10) return Regime::below10;
  if (N == 10) return Regime::at10;
  return Regime::above10;
}

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::below10: return "N<10";
    case Regime::at10: return "N=10";
    case Regime::above10: return "N>10";
  }
  return "?";
}

struct EstimateReport {
  TheoremId theorem_id = TheoremId::lemma_essential;
  Regime regime = Regime::at10;
  int item = 0;  // sub-item (theorem item number or derivative order)
  double empirical_constant = 0.0;
  double sup_location = 0.0;
  bool holds_uniformly = false;
  bool vacuous = false;   // hypothesis degenerate (e.g. constant profile)
  bool skipped = false;   // hypothesis absent; never reported as a pass
  double slope_at_origin = 0.0;
  std::string note;
  std::vector<std::array<double, 4>> trace;  // r, lhs, rhs, ratio
};

namespace detail {

// Least-squares slope of log(ratio) vs log(r) over the first decade of radii.
inline double log_slope_at_origin(const std::vector<double>& r,
                                  const std::vector<double>& ratio) {
  const double cutoff = r.front() * 10.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < r.size() && r[i] <= cutoff; ++i) {
    if (!(ratio[i] > 0.0)) continue;
    const double x = std::log(r[i]), y = std::log(ratio[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) return 0.0;
  const double denom = n * sxx - sx * sx;
  return denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
}

// Sup of sampled ratio with 3 rounds of 10x local zoom through a monotone
// cubic interpolant (guards against a peak straddling two nodes).
inline void sup_with_zoom(const std::vector<double>& r,
                          const std::vector<double>& ratio, double& sup,
                          double& where) {
  sup = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < ratio.size(); ++i)
    if (ratio[i] > sup) {
      sup = ratio[i];
      arg = i;
    }
  where = r[arg];
  if (r.size() < 4 || !std::isfinite(sup)) return;
  std::vector<double> lx(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) lx[i] = std::log(r[i]);
  Pchip interp(lx, ratio);
  double lo = lx[arg > 0 ? arg - 1 : 0];
  double hi = lx[std::min(arg + 1, r.size() - 1)];
  for (int round = 0; round < 3; ++round) {
    double best = sup, bestx = std::log(where);
    for (int k = 0; k <= 10; ++k) {
      const double x = lo + (hi - lo) * k / 10.0;
      const double v = interp(x);
      if (v > best) {
        best = v;
        bestx = x;
      }
    }
    sup = best;
    where = std::exp(bestx);
    const double w = (hi - lo) / 10.0;
    lo = bestx - w;
    hi = bestx + w;
  }
}

}  // namespace detail

// int_0^r t^{N-1} u_r(t)^2 dt: quadrature on [r_min, r] plus a power-law
// tail estimate for (0, r_min).
inline double weighted_energy(const RadialProfile& u, double r, int N) {
  RadialProfile w = u;
  ensure_derivatives(w, 1);
  const auto& t = w.grid.r;
  if (!(r > t.front() && r <= t.back() + 1e-12))
    throw std::invalid_argument("weighted_energy: r out of range");
  std::vector<double> f(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    f[i] = std::pow(t[i], N - 1) * (*w.u_r)[i] * (*w.u_r)[i];
  // tail below r_min, assuming local power behavior of the integrand
  double tail = 0.0;
  if (f[0] > 0.0 && f[1] > 0.0) {
    const double q = std::log(f[1] / f[0]) / std::log(t[1] / t[0]);
    if (q > -0.9) tail = f[0] * t[0] / (q + 1.0);
  }
  double acc = tail;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] <= r) {
      acc += 0.5 * (t[i] - t[i - 1]) * (f[i - 1] + f[i]);
    } else {
      const double fr = f[i - 1] + (f[i] - f[i - 1]) * (r - t[i - 1]) / (t[i] - t[i - 1]);
      acc += 0.5 * (r - t[i - 1]) * (f[i - 1] + fr);
      break;
    }
  }
  return acc;
}

// Hypotheses the caller has verified; checks mark themselves skipped rather
// than passed when a required hypothesis is absent.
struct EstimateHypotheses {
  bool semistable = false;
  bool h1_finite = false;
  bool radially_decreasing = false;
  bool g_nonnegative = false;
  bool g_nondecreasing = false;
  bool g_convex = false;
};

inline EstimateReport check_lemma_essential(const RadialProfile& u, int N,
                                            const EstimateHypotheses& hyp) {
  EstimateReport rep;
  rep.theorem_id = TheoremId::lemma_essential;
  rep.regime = regime_of(N);
  if (!hyp.semistable || !hyp.h1_finite) {
    rep.skipped = true;
    rep.note = "hypothesis absent: semi-stable H^1 solution required";
    return rep;
  }
  RadialProfile w = u;
  ensure_derivatives(w, 1);
  const double grad = annulus_norms(w, N).grad_l2;
  if (grad == 0.0) {
    rep.vacuous = true;
    rep.note = "grad_l2 = 0 (constant profile): estimate vacuous";
    rep.holds_uniformly = true;
    return rep;
  }
  const double expo = 2.0 * std::sqrt(N - 1.0) + 2.0;
  const auto& t = w.grid.r;
  std::vector<double> rr, ratio;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double lhs = weighted_energy(w, t[i], N);
    const double rhs = grad * grad * std::pow(t[i], expo);
    rr.push_back(t[i]);
    ratio.push_back(lhs / rhs);
    rep.trace.push_back({t[i], lhs, rhs, lhs / rhs});
  }
  detail::sup_with_zoom(rr, ratio, rep.empirical_constant, rep.sup_location);
  rep.slope_at_origin = detail::log_slope_at_origin(rr, ratio);
  rep.holds_uniformly =
      std::isfinite(rep.empirical_constant) && rep.slope_at_origin > -0.1;
  return rep;
}

inline EstimateReport check_rand2r(const RadialProfile& u, int N,
                                   const EstimateHypotheses& hyp) {
  EstimateReport rep;
  rep.theorem_id = TheoremId::prop_rand2r;
  rep.regime = regime_of(N);
  if (!hyp.semistable || !hyp.h1_finite) {
    rep.skipped = true;
    rep.note = "hypothesis absent: semi-stable H^1 solution required";
    return rep;
  }
  RadialProfile w = u;
  ensure_derivatives(w, 1);
  const double grad = annulus_norms(w, N).grad_l2;
  if (grad == 0.0) {
    rep.vacuous = true;
    rep.holds_uniformly = true;
    rep.note = "all dyadic gaps vanish (constant profile)";
    return rep;
  }
  const double expo = decay_exponent(N);
  const Pchip interp = w.interpolant();
  const auto& t = w.grid.r;
  std::vector<double> rr, ratio;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] / 2.0 < t.front()) continue;
    const double gap = std::abs(w.u[i] - interp(t[i] / 2.0));
    const double rhs = grad * std::pow(t[i], expo);
    rr.push_back(t[i]);
    ratio.push_back(gap / rhs);
    rep.trace.push_back({t[i], gap, rhs, gap / rhs});
  }
  detail::sup_with_zoom(rr, ratio, rep.empirical_constant, rep.sup_location);
  rep.slope_at_origin = detail::log_slope_at_origin(rr, ratio);
  rep.holds_uniformly =
      std::isfinite(rep.empirical_constant) && rep.slope_at_origin > -0.1;
  return rep;
}

inline EstimateReport check_thm_principal(const RadialProfile& u, int N,
                                          const EstimateHypotheses& hyp) {
  EstimateReport rep;
  rep.theorem_id = TheoremId::thm_principal;
  rep.regime = regime_of(N);
  if (!hyp.semistable || !hyp.h1_finite) {
    rep.skipped = true;
    rep.note = "hypothesis absent: semi-stable H^1 solution required";
    return rep;
  }
  RadialProfile w = u;
  ensure_derivatives(w, 1);
  const double h1 = annulus_norms(w, N).h1;
  if (h1 == 0.0) {
    rep.vacuous = true;
    rep.holds_uniformly = true;
    return rep;
  }
  const double expo = decay_exponent(N);
  auto bound = [&](double r) {
    switch (rep.regime) {
      case Regime::below10: return 1.0;
      case Regime::at10: return std::abs(std::log(r)) + 1.0;
      case Regime::above10: return std::pow(r, expo);
    }
    return 1.0;
  };
  const auto& t = w.grid.r;
  std::vector<double> rr, ratio;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double rhs = h1 * bound(t[i]);
    const double lhs = std::abs(w.u[i]);
    rr.push_back(t[i]);
    ratio.push_back(lhs / rhs);
    rep.trace.push_back({t[i], lhs, rhs, lhs / rhs});
  }
  detail::sup_with_zoom(rr, ratio, rep.empirical_constant, rep.sup_location);
  rep.slope_at_origin = detail::log_slope_at_origin(rr, ratio);
  rep.holds_uniformly =
      std::isfinite(rep.empirical_constant) && rep.slope_at_origin > -0.1;
  return rep;
}

// Theorem items i)-iv) for the extremal profile; the constant is normalized
// by min_{[1/2,1]} |u*_r|, which scales linearly with the solution.
inline std::vector<EstimateReport> check_thm_extremal(const RadialProfile& ustar,
                                                      int N) {
  RadialProfile w = ustar;
  ensure_derivatives(w, 3);
  const auto& t = w.grid.r;
  double min_ur = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= 0.5) min_ur = std::min(min_ur, std::abs((*w.u_r)[i]));
  std::vector<EstimateReport> reports;
  const Regime reg = regime_of(N);
  const double expo = decay_exponent(N);

  auto make = [&](int item, const std::function<double(double)>& lhs_at,
                  const std::function<double(double)>& bound_at) {
    EstimateReport rep;
    rep.theorem_id = TheoremId::thm_extremal;
    rep.regime = reg;
    rep.item = item;
    if (!(min_ur > 0.0) || !std::isfinite(min_ur)) {
      rep.vacuous = true;
      rep.note = "min_{[1/2,1]} |u*_r| = 0: cannot normalize";
      return rep;
    }
    std::vector<double> rr, ratio;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double b = bound_at(t[i]);
      if (!(b > 1e-12)) continue;  // bound degenerates at r = 1
      const double l = lhs_at(t[i]) >= 0 ? lhs_at(t[i]) : 0.0;
      rr.push_back(t[i]);
      ratio.push_back(l / (b * min_ur));
      rep.trace.push_back({t[i], l, b * min_ur, l / (b * min_ur)});
    }
    detail::sup_with_zoom(rr, ratio, rep.empirical_constant, rep.sup_location);
    rep.slope_at_origin = detail::log_slope_at_origin(rr, ratio);
    rep.holds_uniformly =
        std::isfinite(rep.empirical_constant) && rep.slope_at_origin > -0.1;
    return rep;
  };

  const Pchip ui = w.interpolant();
  auto uval = [&](double r) { return ui(r); };
  switch (reg) {
    case Regime::below10:
      reports.push_back(make(1, uval, [](double r) { return 1.0 - r; }));
      break;
    case Regime::at10:
      reports.push_back(make(2, uval, [](double r) { return std::abs(std::log(r)); }));
      break;
    case Regime::above10:
      reports.push_back(make(3, uval, [&](double r) { return std::pow(r, expo) - 1.0; }));
      break;
  }
  if (N >= 10) {
    const std::vector<double>* dk[3] = {&*w.u_r, &*w.u_rr, &*w.u_rrr};
    for (int k = 1; k <= 3; ++k) {
      const std::vector<double>& d = *dk[k - 1];
      Pchip di(t, d);
      reports.push_back(make(
          3 + k, [&di](double r) { return std::abs(di(r)); },
          [&, k](double r) { return std::pow(r, expo - k); }));
      reports.back().item = 4;
      reports.back().note = "k=" + std::to_string(k);
    }
  }
  return reports;
}

// |partial^k u| <= M' ||grad u||_{L^2(annulus)} r^{expo - k + 1}, items gated
// by the sign/monotonicity/convexity hypotheses on g.
inline std::vector<EstimateReport> check_thm_estimas(
    const RadialProfile& u, int N, const EstimateHypotheses& hyp) {
  RadialProfile w = u;
  ensure_derivatives(w, 3);
  const double grad = annulus_norms(w, N).grad_l2;
  const auto& t = w.grid.r;
  const double expo = decay_exponent(N);
  std::vector<EstimateReport> reports;
  const bool gates[3] = {hyp.g_nonnegative,
                         hyp.g_nonnegative && hyp.g_nondecreasing,
                         hyp.g_nonnegative && hyp.g_nondecreasing && hyp.g_convex};
  const char* reasons[3] = {"g >= 0 required", "g >= 0 nondecreasing required",
                            "g >= 0 nondecreasing convex required"};
  const std::vector<double>* dk[3] = {&*w.u_r, &*w.u_rr, &*w.u_rrr};
  for (int k = 1; k <= 3; ++k) {
    EstimateReport rep;
    rep.theorem_id = TheoremId::thm_estimas;
    rep.regime = regime_of(N);
    rep.item = k;
    if (!gates[k - 1]) {
      rep.skipped = true;
      rep.note = std::string("hypothesis absent: ") + reasons[k - 1];
      reports.push_back(std::move(rep));
      continue;
    }
    if (grad == 0.0) {
      rep.vacuous = true;
      rep.holds_uniformly = true;
      rep.note = "grad_l2 = 0: all derivative ratios vanish";
      reports.push_back(std::move(rep));
      continue;
    }
    std::vector<double> rr, ratio;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] > 0.5) break;
      const double rhs = grad * std::pow(t[i], expo - k);
      const double lhs = std::abs((*dk[k - 1])[i]);
      rr.push_back(t[i]);
      ratio.push_back(lhs / rhs);
      rep.trace.push_back({t[i], lhs, rhs, lhs / rhs});
    }
    detail::sup_with_zoom(rr, ratio, rep.empirical_constant, rep.sup_location);
    rep.slope_at_origin = detail::log_slope_at_origin(rr, ratio);
    rep.holds_uniformly =
        std::isfinite(rep.empirical_constant) && rep.slope_at_origin > -0.1;
    reports.push_back(std::move(rep));
  }
  return reports;
}

// Monotonicity laws: i) r^{N-1}|u_r| nondecreasing, ii) r^{-1}|u_r|
// nonincreasing, iii) max/min on [1/2,1] <= 2^{N-1}, iv) empirical
// q = grad_l2 / min_{[1/2,1]}|u_r|.
inline EstimateReport check_monotonias(const RadialProfile& u, int N,
                                       const EstimateHypotheses& hyp) {
  EstimateReport rep;
  rep.theorem_id = TheoremId::lemma_monotonias;
  rep.regime = regime_of(N);
  if (!hyp.radially_decreasing || !hyp.g_nonnegative || !hyp.g_nondecreasing) {
    rep.skipped = true;
    rep.note = "hypothesis absent: radially decreasing, g >= 0 nondecreasing";
    return rep;
  }
  RadialProfile w = u;
  ensure_derivatives(w, 1);
  const auto& t = w.grid.r;
  double scale = 0.0;
  for (double v : *w.u_r) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) {
    rep.vacuous = true;
    rep.holds_uniformly = true;
    rep.note = "constant profile: vacuous pass";
    return rep;
  }
  const double tol = 1e-6;
  bool mono_up = true, mono_down = true;
  double prev_up = -std::numeric_limits<double>::infinity();
  double prev_down = std::numeric_limits<double>::infinity();
  double maxmid = 0.0, minmid = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double a = std::abs((*w.u_r)[i]);
    const double up = std::pow(t[i], N - 1) * a;
    const double dn = a / t[i];
    if (up < prev_up * (1.0 - tol)) mono_up = false;
    if (dn > prev_down * (1.0 + tol)) mono_down = false;
    prev_up = std::max(prev_up, up);
    prev_down = std::min(prev_down, dn);
    if (t[i] >= 0.5) {
      maxmid = std::max(maxmid, a);
      minmid = std::min(minmid, a);
    }
  }
  const bool dyadic_ok = maxmid <= std::pow(2.0, N - 1) * minmid * (1.0 + tol);
  rep.holds_uniformly = mono_up && mono_down && dyadic_ok;
  rep.empirical_constant =
      minmid > 0.0 ? annulus_norms(w, N).grad_l2 / minmid
                   : std::numeric_limits<double>::infinity();
  rep.sup_location = 0.0;
  if (!mono_up) rep.note += "i) violated;";
  if (!mono_down) rep.note += "ii) violated;";
  if (!dyadic_ok) rep.note += "iii) violated;";
  return rep;
}

// Exponent identity -2/(p_N - 1) = -N/2 + sqrt(N-1) + 2 for N > 10.
inline double joseph_lundgren_identity_gap(int N) {
  const double p = joseph_lundgren_exponent(N);
  return std::abs(-2.0 / (p - 1.0) - decay_exponent(N));
}

}  // namespace rv
