#pragma once

// Semi-stability tests: the quadratic form int(|grad v|^2 - g'(u) v^2), its
// radial reduction, and the first eigenvalue of the linearized operator
// -Delta - g'(u) discretized as a weighted Sturm-Liouville problem.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "radialverify/branch.hpp"
#include "radialverify/core.hpp"

namespace rv {

struct LinearizedOperator {
  std::vector<double> r;          // ascending, last node 1 (Dirichlet there)
  std::vector<double> potential;  // g'(u(r_i))
  int dim = 0;
};

struct StabilityVerdict {
  double first_eigenvalue = 0.0;
  bool semistable = false;
  double margin = 0.0;
  std::string method = "spectral";
  std::size_t grid_size = 0;
  double r_min = 0.0;
  bool potential_flagged = false;  // singularity worse than C/r^2 near r_min
};

// sigma_N * int (v_r^2 - gprime(r) v^2) t^{N-1} dt for v compactly supported
// in (r_min, 1).
inline double quadratic_form(const RadialProfile& v,
                             const std::function<double(double)>& gprime_of_r,
                             int N) {
  RadialProfile w = v;
  ensure_derivatives(w, 1);
  double vmax = 0.0;
  for (double x : w.u) vmax = std::max(vmax, std::abs(x));
  if (vmax > 0.0 &&
      (std::abs(w.u.front()) > 1e-6 * vmax || std::abs(w.u.back()) > 1e-6 * vmax))
    throw std::invalid_argument("quadratic_form: v must vanish at support ends");
  const auto& r = w.grid.r;
  std::vector<double> f(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double vr = (*w.u_r)[i];
    f[i] = (vr * vr - gprime_of_r(r[i]) * w.u[i] * w.u[i]) *
           std::pow(r[i], N - 1);
  }
  return surface_measure(N) * integrate(r, f);
}

struct FormTestResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// (N-1) int u_r^2 eta^2 t^{N-1} dt  <=  int u_r^2 ((t eta)')^2 t^{N-1} dt,
// the radial consequence of semi-stability used throughout.
inline FormTestResult radial_form_test(
    const RadialProfile& u, const std::function<double(double)>& eta,
    const std::function<double(double)>& eta_prime, int N,
    double eps_rel = 1e-4) {
  RadialProfile w = u;
  ensure_derivatives(w, 1);
  const auto& r = w.grid.r;
  std::vector<double> fl(r.size()), fr(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double t = r[i];
    const double e = eta(t);
    const double te = e + t * eta_prime(t);  // (t eta)'
    if (!std::isfinite(te))
      throw std::invalid_argument("radial_form_test: unbounded (t eta)'");
    const double ur2w = (*w.u_r)[i] * (*w.u_r)[i] * std::pow(t, N - 1);
    fl[i] = (N - 1) * e * e * ur2w;
    fr[i] = te * te * ur2w;
  }
  FormTestResult out;
  out.lhs = integrate(r, fl);
  out.rhs = integrate(r, fr);
  out.holds = out.lhs <= out.rhs + eps_rel * (std::abs(out.lhs) + std::abs(out.rhs));
  return out;
}

inline LinearizedOperator make_linearized(
    const RadialProfile& u, const std::function<double(double)>& gprime_of_r,
    int N) {
  LinearizedOperator op;
  op.r = u.grid.r;
  op.dim = N;
  op.potential.reserve(op.r.size());
  for (double r : op.r) {
    const double v = gprime_of_r(r);
    if (!std::isfinite(v))
      throw std::invalid_argument("make_linearized: non-finite potential");
    op.potential.push_back(v);
  }
  return op;
}

namespace detail {

struct Tridiag {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i and i+1
};

// Number of eigenvalues < x (Sturm sequence via LDL^T).
inline int sturm_count(const Tridiag& T, double x) {
  int count = 0;
  double d = T.diag[0] - x;
  if (d < 0.0) ++count;
  for (std::size_t i = 1; i < T.diag.size(); ++i) {
    double denom = d;
    if (std::abs(denom) < 1e-300) denom = (denom < 0 ? -1e-300 : 1e-300);
    d = T.diag[i] - x - T.off[i - 1] * T.off[i - 1] / denom;
    if (d < 0.0) ++count;
  }
  return count;
}

inline double smallest_eigenvalue(const Tridiag& T) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  const std::size_t n = T.diag.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double radius = (i > 0 ? std::abs(T.off[i - 1]) : 0.0) +
                          (i + 1 < n ? std::abs(T.off[i]) : 0.0);
    lo = std::min(lo, T.diag[i] - radius);
    hi = std::max(hi, T.diag[i] + radius);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (std::abs(lo) + std::abs(hi) + 1e-300); ++it) {
    const double mid = 0.5 * (lo + hi);
    (sturm_count(T, mid) >= 1 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Discretize -(t^{N-1} phi')' - t^{N-1} V phi = mu t^{N-1} phi on
// [r_min, 1], phi(1) = 0, zero flux through the inner face (test functions
// live away from the origin), as a symmetric tridiagonal pencil.
inline StabilityVerdict first_eigenvalue(const LinearizedOperator& op,
                                         double tol_base = 1e-6) {
  const auto& r = op.r;
  const int N = op.dim;
  if (r.size() < 4) throw std::invalid_argument("first_eigenvalue: grid too coarse");
  const std::size_t M = r.size() - 1;  // unknowns r_0 .. r_{M-1}
  std::vector<double> pmid(M);         // t^{N-1} at interval midpoints
  for (std::size_t i = 0; i < M; ++i)
    pmid[i] = std::pow(0.5 * (r[i] + r[i + 1]), N - 1);
  std::vector<double> w(M);  // lumped weights t^{N-1} * cell width
  for (std::size_t i = 0; i < M; ++i) {
    const double left = (i == 0) ? 0.0 : 0.5 * (r[i] - r[i - 1]);
    const double right = 0.5 * (r[i + 1] - r[i]);
    w[i] = std::pow(r[i], N - 1) * (left + right);
  }
  detail::Tridiag A;
  A.diag.assign(M, 0.0);
  A.off.assign(M - 1, 0.0);
  for (std::size_t i = 0; i < M; ++i) {
    double d = pmid[i] / (r[i + 1] - r[i]);
    if (i > 0) d += pmid[i - 1] / (r[i] - r[i - 1]);
    A.diag[i] = d - w[i] * op.potential[i];
    if (i + 1 < M) A.off[i] = -pmid[i] / (r[i + 1] - r[i]);
  }
  // symmetrize the pencil: B = W^{-1/2} A W^{-1/2}
  detail::Tridiag B;
  B.diag.resize(M);
  B.off.resize(M - 1);
  for (std::size_t i = 0; i < M; ++i) B.diag[i] = A.diag[i] / w[i];
  for (std::size_t i = 0; i + 1 < M; ++i)
    B.off[i] = A.off[i] / std::sqrt(w[i] * w[i + 1]);
  const double mu1 = detail::smallest_eigenvalue(B);

  StabilityVerdict out;
  out.first_eigenvalue = mu1;
  out.margin = mu1;
  out.grid_size = r.size();
  out.r_min = r.front();
  double vscale = 0.0;
  for (std::size_t i = 0; i < M; ++i)
    vscale = std::max(vscale, std::abs(op.potential[i]) * r[i] * r[i]);
  out.semistable = mu1 >= -tol_base * (1.0 + vscale);
  // Flag potentials growing faster than C/r^2 toward the origin, where the
  // truncated discretization cannot be trusted.
  {
    const std::size_t k = std::min<std::size_t>(M - 1, r.size() / 4);
    const double inner = std::abs(op.potential[0]) * r[0] * r[0];
    const double outer = std::abs(op.potential[k]) * r[k] * r[k];
    out.potential_flagged = inner > 10.0 * (outer + 1.0);
  }
  return out;
}

inline StabilityVerdict first_eigenvalue(
    const RadialProfile& u, const std::function<double(double)>& gprime_of_r,
    int N, double tol_base = 1e-6) {
  return first_eigenvalue(make_linearized(u, gprime_of_r, N), tol_base);
}

// Fill BranchPoint::first_eigenvalue along a branch: potential lambda f'(u_lambda).
inline void attach_eigenvalues(Branch& br, const Nonlinearity& f,
                               double tol_base = 1e-6) {
  for (auto& pt : br.points) {
    const Pchip interp = pt.profile.interpolant();
    const double lambda = pt.lambda;
    auto gp = [&](double r) { return lambda * f.fprime(interp(r)); };
    pt.first_eigenvalue =
        first_eigenvalue(pt.profile, gp, br.dim, tol_base).first_eigenvalue;
  }
}

}  // namespace rv
