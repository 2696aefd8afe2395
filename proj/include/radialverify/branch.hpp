#pragma once

// Radial shooting for -Delta u = lambda f(u) on B_1 with u(1) = 0, the
// minimal branch parameterized by the center value a = u(0), and the
// extremal profile at the top of the sampled branch.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "radialverify/core.hpp"

namespace rv {

struct ShootOptions {
  double blowup_ceiling = 1e8;
  int substeps = 4;  // RK4 substeps per grid interval
};

struct ShootResult {
  RadialProfile profile;
  double boundary_value = 0.0;  // u(1)
  bool blew_up = false;
  double blowup_radius = 0.0;
  bool flags_ok = true;  // opportunistic nonlinearity flag check
};

namespace detail {

// RK4 integration of u'' + (N-1)/r u' + rhs(u) = 0 from node `start` with
// data (u0, v0), writing u into prof.u and v into prof.u_r. Returns index of
// the last node reached (== last index unless the ceiling was hit).
inline std::size_t integrate_radial(const std::function<double(double)>& rhs,
                                    int N, RadialProfile& prof,
                                    std::size_t start, double u0, double v0,
                                    const ShootOptions& opt) {
  const auto& r = prof.grid.r;
  prof.u.assign(r.size(), 0.0);
  std::vector<double> v(r.size(), 0.0);
  prof.u[start] = u0;
  v[start] = v0;
  double u = u0, w = v0;
  for (std::size_t i = start; i + 1 < r.size(); ++i) {
    const double h = (r[i + 1] - r[i]) / opt.substeps;
    double x = r[i];
    for (int s = 0; s < opt.substeps; ++s) {
      auto fu = [&](double rr, double uu, double vv) { return vv; };
      auto fv = [&](double rr, double uu, double vv) {
        return -(N - 1) / rr * vv - rhs(uu);
      };
      const double k1u = fu(x, u, w), k1v = fv(x, u, w);
      const double k2u = fu(x + h / 2, u + h / 2 * k1u, w + h / 2 * k1v);
      const double k2v = fv(x + h / 2, u + h / 2 * k1u, w + h / 2 * k1v);
      const double k3u = fu(x + h / 2, u + h / 2 * k2u, w + h / 2 * k2v);
      const double k3v = fv(x + h / 2, u + h / 2 * k2u, w + h / 2 * k2v);
      const double k4u = fu(x + h, u + h * k3u, w + h * k3v);
      const double k4v = fv(x + h, u + h * k3u, w + h * k3v);
      u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
      w += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
      x += h;
      if (!(std::abs(u) < opt.blowup_ceiling)) {
        prof.u_r = std::move(v);
        return i;
      }
    }
    prof.u[i + 1] = u;
    v[i + 1] = w;
  }
  prof.u_r = std::move(v);
  return r.size() - 1;
}

}  // namespace detail

// Shoot the IVP u(0) = a, u_r(0) = 0. The (N-1)/r singularity is removed by
// the series start u(r) = a - lambda f(a) r^2/(2N) + O(r^4) on [0, r_0].
inline ShootResult shoot(const Nonlinearity& f, Dimension dim, double lambda,
                         double a, const RadialGrid& grid,
                         const ShootOptions& opt = {}) {
  if (lambda < 0.0) throw std::invalid_argument("shoot: lambda >= 0 required");
  if (a < 0.0) throw std::invalid_argument("shoot: a >= 0 required");
  grid.validate();
  const int N = dim.value();
  ShootResult out;
  out.profile.grid = grid;
  const double r0 = grid.r.front();
  const double fa = f.f(a);
  const double u0 = a - lambda * fa * r0 * r0 / (2.0 * N);
  const double v0 = -lambda * fa * r0 / N;
  auto rhs = [&f, lambda](double u) { return lambda * f.f(u); };
  const std::size_t last =
      detail::integrate_radial(rhs, N, out.profile, 0, u0, v0, opt);
  if (last + 1 < grid.size()) {
    out.blew_up = true;
    out.blowup_radius = grid.r[last];
    out.boundary_value = -opt.blowup_ceiling;
    out.profile.u.resize(last + 1);  // truncated; not a valid full profile
    return out;
  }
  out.boundary_value = out.profile.u.back();
  out.flags_ok = flags_hold_at(f, std::min(0.0, out.boundary_value), a);
  return out;
}

struct BranchPoint {
  double a = 0.0;       // center value u(0)
  double lambda = 0.0;  // lambda(a) with u(1) = 0
  RadialProfile profile;
  double first_eigenvalue = std::numeric_limits<double>::quiet_NaN();
};

struct Branch {
  int dim = 0;
  std::string nonlinearity;
  std::vector<BranchPoint> points;  // ordered by a
  double lambda_star_estimate = 0.0;          // max sampled lambda
  double lambda_star_upper = 0.0;             // + Richardson slack (monotone case)
  bool turning_detected = false;
};

struct BranchOptions {
  double a_min_factor = 1e-3;     // ladder starts at a_max * a_min_factor
  double shoot_target = 1e-9;     // |u(1)| target in the bisection
  double lambda_rel_tol = 1e-9;   // relative bracket width
  ShootOptions shoot;
};

// lambda(a) by bisection: for fixed a, u(1; lambda) is decreasing in lambda,
// positive at lambda = 0 (u == a there).
inline double solve_lambda_for_a(const Nonlinearity& f, Dimension dim, double a,
                                 const RadialGrid& grid,
                                 const BranchOptions& opt,
                                 RadialProfile* out_profile = nullptr) {
  double lo = 0.0;
  double hi = 1.0;
  ShootResult sr = shoot(f, dim, hi, a, grid, opt.shoot);
  int guard = 0;
  while (sr.boundary_value > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 80)
      throw std::runtime_error("solve_lambda_for_a: bisection bracket failure at a=" +
                               std::to_string(a));
    sr = shoot(f, dim, hi, a, grid, opt.shoot);
  }
  double mid = hi;
  while (hi - lo > opt.lambda_rel_tol * hi) {
    mid = 0.5 * (lo + hi);
    sr = shoot(f, dim, mid, a, grid, opt.shoot);
    if (std::abs(sr.boundary_value) <= opt.shoot_target) break;
    (sr.boundary_value > 0.0 ? lo : hi) = mid;
  }
  if (out_profile) {
    if (sr.blew_up) {
      mid = lo;
      sr = shoot(f, dim, lo, a, grid, opt.shoot);
    }
    *out_profile = std::move(sr.profile);
    out_profile->radially_decreasing = true;
  }
  return mid;
}

inline Branch solve_branch(const Nonlinearity& f, Dimension dim, double a_max,
                           int samples, const RadialGrid& grid,
                           const BranchOptions& opt = {}) {
  if (!(a_max > 0.0)) throw std::invalid_argument("solve_branch: a_max > 0 required");
  if (samples < 2) throw std::invalid_argument("solve_branch: samples >= 2 required");
  Branch br;
  br.dim = dim.value();
  br.nonlinearity = f.descriptor;
  const double a_min = a_max * opt.a_min_factor;
  br.points.resize(samples);
  for (int j = 0; j < samples; ++j) {
    const double a =
        a_min * std::pow(a_max / a_min, double(j) / double(samples - 1));
    BranchPoint& pt = br.points[j];
    pt.a = a;
    pt.lambda = solve_lambda_for_a(f, dim, a, grid, opt, &pt.profile);
  }
  double lmax = 0.0;
  bool monotone = true;
  for (int j = 0; j < samples; ++j) {
    lmax = std::max(lmax, br.points[j].lambda);
    if (j > 0 && br.points[j].lambda <
                     br.points[j - 1].lambda - 1e-7 * (lmax + 1.0))
      monotone = false;
  }
  br.lambda_star_estimate = lmax;
  br.turning_detected = !monotone;
  br.lambda_star_upper = lmax;
  if (monotone && samples >= 3) {
    // Richardson in 1/a: lambda(a) ~ lambda* - c/a for the monotone regimes.
    const BranchPoint& p1 = br.points[samples - 2];
    const BranchPoint& p2 = br.points[samples - 1];
    const double extrap =
        (p2.lambda * p2.a - p1.lambda * p1.a) / (p2.a - p1.a);
    br.lambda_star_upper = lmax + std::max(0.0, extrap - lmax);
  }
  return br;
}

struct ExtremalResult {
  RadialProfile profile;
  double lambda = 0.0;
  double a = 0.0;
  bool low_confidence = false;
};

// Profile at the top of the branch: largest a among points whose lambda is
// within tolerance of the lambda* estimate.
inline ExtremalResult extremal_profile(const Branch& br, double rel_tol = 2e-2) {
  if (br.points.empty())
    throw std::invalid_argument("extremal_profile: empty branch");
  const double lstar = br.lambda_star_estimate;
  ExtremalResult out;
  double best_a = -1.0;
  for (const auto& pt : br.points) {
    if (pt.lambda >= lstar * (1.0 - rel_tol) && pt.a > best_a) {
      best_a = pt.a;
      out.profile = pt.profile;
      out.lambda = pt.lambda;
      out.a = pt.a;
    }
  }
  // Confidence: gap between the two largest sampled lambdas near the top.
  double l1 = 0.0, l2 = 0.0;
  for (const auto& pt : br.points) {
    if (pt.lambda > l1) {
      l2 = l1;
      l1 = pt.lambda;
    } else if (pt.lambda > l2) {
      l2 = pt.lambda;
    }
  }
  out.low_confidence = (l1 - l2) > rel_tol * std::max(l1, 1e-30);
  return out;
}

// Minimality invariant: u_{a_j} <= u_{a_{j+1}} at every node.
inline bool branch_pointwise_monotone(const Branch& br, double tol = 1e-8) {
  for (std::size_t j = 1; j < br.points.size(); ++j) {
    const auto& lo = br.points[j - 1].profile.u;
    const auto& hi = br.points[j].profile.u;
    if (lo.size() != hi.size()) return false;
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (lo[i] > hi[i] + tol * (std::abs(hi[i]) + 1.0)) return false;
  }
  return true;
}

}  // namespace rv
