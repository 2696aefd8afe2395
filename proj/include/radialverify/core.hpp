#pragma once

// Grids, interpolation, differentiation, quadrature and weighted norms for
// radial functions on the unit ball, sampled on (0, 1].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <memory>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rv {

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Dimension

class Dimension {
 public:
  explicit Dimension(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("Dimension: N >= 2 required");
  }
  int value() const { return n_; }

 private:
  int n_;
};

// Surface measure of the unit (N-1)-sphere in R^N.
inline double surface_measure(int N) {
  return 2.0 * std::pow(kPi, 0.5 * N) / std::tgamma(0.5 * N);
}

// The decay exponent -N/2 + sqrt(N-1) + 2 that governs every pointwise
// estimate in dimensions N >= 10 (zero at N = 10, negative above).
inline double decay_exponent(int N) {
  return -0.5 * N + std::sqrt(N - 1.0) + 2.0;
}

// Joseph-Lundgren exponent, defined for N > 10.
inline double joseph_lundgren_exponent(int N) {
  const double s = 2.0 * std::sqrt(N - 1.0);
  return (N - s) / (N - s - 4.0);
}

// ---------------------------------------------------------------------------
// RadialGrid

struct RadialGrid {
  enum class Grading { Geometric, Uniform };

  std::vector<double> r;
  Grading grading = Grading::Geometric;

  double r_min() const { return r.front(); }
  std::size_t size() const { return r.size(); }

  // Log-spaced nodes from r_min to 1; solutions and weights behave like
  // powers of r, so relative spacing is what matters near the origin.
  static RadialGrid geometric(std::size_t nodes, double r_min = 1e-6) {
    check_params(nodes, r_min);
    RadialGrid g;
    g.grading = Grading::Geometric;
    g.r.resize(nodes);
    const double L = std::log(r_min);
    for (std::size_t i = 0; i < nodes; ++i)
      g.r[i] = std::exp(L * (1.0 - double(i) / double(nodes - 1)));
    g.r.back() = 1.0;
    return g;
  }

  static RadialGrid uniform(std::size_t nodes, double r_min = 1e-6) {
    check_params(nodes, r_min);
    RadialGrid g;
    g.grading = Grading::Uniform;
    g.r.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i)
      g.r[i] = r_min + (1.0 - r_min) * double(i) / double(nodes - 1);
    g.r.back() = 1.0;
    return g;
  }

  void validate() const {
    if (r.size() < 3) throw std::invalid_argument("RadialGrid: too few nodes");
    if (!(r.front() > 0.0)) throw std::invalid_argument("RadialGrid: r_min must be > 0");
    if (r.back() != 1.0) throw std::invalid_argument("RadialGrid: last node must be 1");
    for (std::size_t i = 1; i < r.size(); ++i)
      if (!(r[i] > r[i - 1]))
        throw std::invalid_argument("RadialGrid: nodes must be strictly increasing");
  }

 private:
  static void check_params(std::size_t nodes, double r_min) {
    if (nodes < 4) throw std::invalid_argument("RadialGrid: need at least 4 nodes");
    if (!(r_min > 0.0 && r_min < 1.0))
      throw std::invalid_argument("RadialGrid: r_min must lie in (0, 1)");
  }
};

// ---------------------------------------------------------------------------
// Monotone cubic (Fritsch-Carlson) interpolation on arbitrary increasing
// abscissae. Used for profile evaluation, u^{-1} and tabulated g.

class Pchip {
 public:
  Pchip() = default;

  Pchip(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
      throw std::invalid_argument("Pchip: need matching arrays, size >= 2");
    for (std::size_t i = 1; i < n; ++i)
      if (!(x_[i] > x_[i - 1]))
        throw std::invalid_argument("Pchip: abscissae must be strictly increasing");
    d_.resize(n);
    if (n == 2) {
      d_[0] = d_[1] = slope(0);
      return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double dl = slope(i - 1), dr = slope(i);
      if (dl * dr <= 0.0) {
        d_[i] = 0.0;
      } else {
        const double hl = x_[i] - x_[i - 1], hr = x_[i + 1] - x_[i];
        const double w1 = 2.0 * hr + hl, w2 = hr + 2.0 * hl;
        d_[i] = (w1 + w2) / (w1 / dl + w2 / dr);
      }
    }
    d_[0] = end_slope(x_[1] - x_[0], x_[2] - x_[1], slope(0), slope(1));
    d_[n - 1] = end_slope(x_[n - 1] - x_[n - 2], x_[n - 2] - x_[n - 3],
                          slope(n - 2), slope(n - 3));
  }

  double operator()(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
  }

  double derivative(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double g00 = (6 * t2 - 6 * t) / h, g10 = 3 * t2 - 4 * t + 1;
    const double g01 = (-6 * t2 + 6 * t) / h, g11 = 3 * t2 - 2 * t;
    return g00 * y_[i] + g10 * d_[i] + g01 * y_[i + 1] + g11 * d_[i + 1];
  }

  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

 private:
  double slope(std::size_t i) const {
    return (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  }
  static double end_slope(double h0, double h1, double s0, double s1) {
    double d = ((2 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if (d * s0 <= 0.0) return 0.0;
    if (s0 * s1 < 0.0 && std::abs(d) > 3.0 * std::abs(s0)) return 3.0 * s0;
    return d;
  }
  std::size_t segment(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = (it == x_.begin()) ? 0 : std::size_t(it - x_.begin()) - 1;
    if (i + 1 >= x_.size()) i = x_.size() - 2;
    return i;
  }

  std::vector<double> x_, y_, d_;
};

// ---------------------------------------------------------------------------
// RadialProfile

struct RadialProfile {
  RadialGrid grid;
  std::vector<double> u;
  std::optional<std::vector<double>> u_r;
  std::optional<std::vector<double>> u_rr;
  std::optional<std::vector<double>> u_rrr;
  bool radially_decreasing = false;

  std::size_t size() const { return u.size(); }

  void validate() const {
    grid.validate();
    if (u.size() != grid.size())
      throw std::invalid_argument("RadialProfile: values/grid size mismatch");
    for (double v : u)
      if (!std::isfinite(v))
        throw std::invalid_argument("RadialProfile: non-finite value");
    for (const auto* d : {&u_r, &u_rr, &u_rrr})
      if (d->has_value() && (*d)->size() != grid.size())
        throw std::invalid_argument("RadialProfile: derivative size mismatch");
    if (radially_decreasing && u_r.has_value())
      for (double v : *u_r)
        if (v > 1e-9)
          throw std::invalid_argument("RadialProfile: flagged decreasing but u_r > 0");
  }

  Pchip interpolant() const { return Pchip(grid.r, u); }
};

inline RadialProfile sample_profile(
    const RadialGrid& grid, const std::function<double(double)>& u,
    const std::function<double(double)>& u_r = nullptr,
    const std::function<double(double)>& u_rr = nullptr,
    const std::function<double(double)>& u_rrr = nullptr) {
  RadialProfile p;
  p.grid = grid;
  p.u.reserve(grid.size());
  for (double r : grid.r) p.u.push_back(u(r));
  auto fill = [&](const std::function<double(double)>& f,
                  std::optional<std::vector<double>>& dst) {
    if (!f) return;
    std::vector<double> v;
    v.reserve(grid.size());
    for (double r : grid.r) v.push_back(f(r));
    dst = std::move(v);
  };
  fill(u_r, p.u_r);
  fill(u_rr, p.u_rr);
  fill(u_rrr, p.u_rrr);
  return p;
}

// ---------------------------------------------------------------------------
// Quadrature: composite trapezoid on the sampled nodes (order 2).

inline double integrate(const std::vector<double>& t, const std::vector<double>& f) {
  if (t.size() != f.size() || t.size() < 2)
    throw std::invalid_argument("integrate: bad arrays");
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!std::isfinite(f[i - 1]) || !std::isfinite(f[i]))
      throw std::invalid_argument("integrate: non-finite sample");
    acc += 0.5 * (t[i] - t[i - 1]) * (f[i - 1] + f[i]);
  }
  return acc;
}

// \int t^m phi(t) dt over the sampled interval.
inline double quadrature(const std::vector<double>& t,
                         const std::vector<double>& phi, double m) {
  if (t.size() != phi.size() || t.size() < 2)
    throw std::invalid_argument("quadrature: bad arrays");
  std::vector<double> f(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) f[i] = std::pow(t[i], m) * phi[i];
  return integrate(t, f);
}

inline double quadrature(const RadialGrid& grid, const std::vector<double>& phi,
                         double m) {
  return quadrature(grid.r, phi, m);
}

// Cumulative trapezoid: F[i] = int_{t0}^{t_i} f.
inline std::vector<double> cumulative_integral(const std::vector<double>& t,
                                               const std::vector<double>& f) {
  std::vector<double> F(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i)
    F[i] = F[i - 1] + 0.5 * (t[i] - t[i - 1]) * (f[i - 1] + f[i]);
  return F;
}

// ---------------------------------------------------------------------------
// Differentiation: 3-point stencils on the exact (nonuniform) node spacing,
// second order at interior nodes, one-sided at the endpoints.

inline std::vector<double> derivative_samples(const std::vector<double>& t,
                                              const std::vector<double>& y) {
  const std::size_t n = t.size();
  if (n < 3 || y.size() != n)
    throw std::invalid_argument("derivative_samples: grid too coarse");
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * y[i - 1] + (h2 - h1) / (h1 * h2) * y[i] +
           h1 / (h2 * (h1 + h2)) * y[i + 1];
  }
  {  // left end: quadratic through first three nodes
    const double h1 = t[1] - t[0], h2 = t[2] - t[1];
    d[0] = -(2 * h1 + h2) / (h1 * (h1 + h2)) * y[0] +
           (h1 + h2) / (h1 * h2) * y[1] - h1 / (h2 * (h1 + h2)) * y[2];
  }
  {  // right end
    const double h1 = t[n - 2] - t[n - 3], h2 = t[n - 1] - t[n - 2];
    d[n - 1] = h2 / (h1 * (h1 + h2)) * y[n - 3] -
               (h1 + h2) / (h1 * h2) * y[n - 2] +
               (h1 + 2 * h2) / (h2 * (h1 + h2)) * y[n - 1];
  }
  return d;
}

inline RadialProfile differentiate(const RadialProfile& p, int order) {
  if (order < 1 || order > 3)
    throw std::invalid_argument("differentiate: order must be 1, 2 or 3");
  if (p.grid.size() < std::size_t(order + 3))
    throw std::invalid_argument("differentiate: grid too coarse for requested order");
  std::vector<double> d = p.u;
  for (int k = 0; k < order; ++k) d = derivative_samples(p.grid.r, d);
  RadialProfile out;
  out.grid = p.grid;
  out.u = std::move(d);
  return out;
}

// Fill missing derivative samples in place (finite differences).
inline void ensure_derivatives(RadialProfile& p, int up_to = 1) {
  if (up_to >= 1 && !p.u_r) p.u_r = derivative_samples(p.grid.r, p.u);
  if (up_to >= 2 && !p.u_rr) p.u_rr = derivative_samples(p.grid.r, *p.u_r);
  if (up_to >= 3 && !p.u_rrr) p.u_rrr = derivative_samples(p.grid.r, *p.u_rr);
}

// ---------------------------------------------------------------------------
// Annulus norms on B_1 \ B_{1/2}.

struct AnnulusNorms {
  double grad_l2 = 0.0;  // || grad u ||_{L^2(B_1 \ B_{1/2})}
  double h1 = 0.0;       // || u ||_{H^1(B_1 \ B_{1/2})}
};

namespace detail {

// Restrict (r, f) samples to [a, b], inserting interpolated endpoints.
inline void restrict_samples(const std::vector<double>& r,
                             const std::vector<double>& f, double a, double b,
                             std::vector<double>& rt, std::vector<double>& ft) {
  Pchip interp(r, f);
  rt.clear();
  ft.clear();
  if (r.front() < a) {
    rt.push_back(a);
    ft.push_back(interp(a));
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] > a && r[i] < b) {
      rt.push_back(r[i]);
      ft.push_back(f[i]);
    } else if (r[i] == a || r[i] == b) {
      rt.push_back(r[i]);
      ft.push_back(f[i]);
    }
  }
  if (rt.empty() || rt.back() < b) {
    rt.push_back(b);
    ft.push_back(interp(b));
  }
}

}  // namespace detail

inline AnnulusNorms annulus_norms(const RadialProfile& p, int N) {
  if (!p.u_r)
    throw std::invalid_argument("annulus_norms: deriv1 samples required");
  if (p.grid.r.back() < 1.0 || p.grid.r.front() > 0.5)
    throw std::invalid_argument("annulus_norms: profile must cover [1/2, 1]");
  const double sigma = surface_measure(N);
  std::vector<double> rt, ft;
  detail::restrict_samples(p.grid.r, *p.u_r, 0.5, 1.0, rt, ft);
  std::vector<double> integ(rt.size());
  for (std::size_t i = 0; i < rt.size(); ++i)
    integ[i] = ft[i] * ft[i] * std::pow(rt[i], N - 1);
  const double grad2 = sigma * integrate(rt, integ);
  detail::restrict_samples(p.grid.r, p.u, 0.5, 1.0, rt, ft);
  integ.resize(rt.size());
  for (std::size_t i = 0; i < rt.size(); ++i)
    integ[i] = ft[i] * ft[i] * std::pow(rt[i], N - 1);
  const double l2sq = sigma * integrate(rt, integ);
  AnnulusNorms out;
  out.grad_l2 = std::sqrt(grad2);
  out.h1 = std::sqrt(grad2 + l2sq);
  return out;
}

// ---------------------------------------------------------------------------
// Nonlinearity

struct NonlinearityFlags {
  bool nonnegative = true;
  bool nondecreasing = true;
  bool convex = true;
  bool positive_at_zero = true;
  bool superlinear = true;
};

struct Nonlinearity {
  std::function<double(double)> f;
  std::function<double(double)> fprime;
  NonlinearityFlags flags;
  std::string descriptor;
};

inline Nonlinearity exp_nonlinearity() {
  Nonlinearity n;
  n.f = [](double s) { return std::exp(s); };
  n.fprime = [](double s) { return std::exp(s); };
  n.descriptor = "exp";
  return n;
}

// (1+s)^p on s > -1, clamped to 0 below (the clamp is only reachable through
// shooting overshoot; solutions of interest stay nonnegative).
inline Nonlinearity power_nonlinearity(double p) {
  if (p <= 1.0) throw std::invalid_argument("power_nonlinearity: p > 1 required");
  Nonlinearity n;
  n.f = [p](double s) { return s > -1.0 ? std::pow(1.0 + s, p) : 0.0; };
  n.fprime = [p](double s) { return s > -1.0 ? p * std::pow(1.0 + s, p - 1.0) : 0.0; };
  std::ostringstream os;
  os << "power:" << p;
  n.descriptor = os.str();
  return n;
}

// f(./M); the extremal solution scales to M u* (homogeneity of the problem).
inline Nonlinearity scaled_nonlinearity(const Nonlinearity& base, double M) {
  if (!(M > 0.0)) throw std::invalid_argument("scaled_nonlinearity: M > 0 required");
  Nonlinearity n;
  auto f = base.f;
  auto fp = base.fprime;
  n.f = [f, M](double s) { return f(s / M); };
  n.fprime = [fp, M](double s) { return fp(s / M) / M; };
  n.flags = base.flags;
  n.descriptor = base.descriptor + "/scaled:" + std::to_string(M);
  return n;
}

inline Nonlinearity table_nonlinearity(std::vector<double> s,
                                       std::vector<double> f,
                                       std::vector<double> fp,
                                       std::string descriptor = "table") {
  auto fi = std::make_shared<Pchip>(s, std::move(f));
  auto fpi = std::make_shared<Pchip>(std::move(s), std::move(fp));
  Nonlinearity n;
  n.f = [fi](double x) {
    return (*fi)(std::clamp(x, fi->x_front(), fi->x_back()));
  };
  n.fprime = [fpi](double x) {
    return (*fpi)(std::clamp(x, fpi->x_front(), fpi->x_back()));
  };
  n.descriptor = std::move(descriptor);
  return n;
}

// Opportunistic flag check at a pair of sampled arguments s0 < s1.
inline bool flags_hold_at(const Nonlinearity& n, double s0, double s1) {
  const double f0 = n.f(s0), f1 = n.f(s1);
  if (n.flags.nonnegative && (f0 < 0.0 || f1 < 0.0)) return false;
  if (n.flags.nondecreasing && f1 < f0 - 1e-12 * (std::abs(f0) + 1.0)) return false;
  if (n.flags.convex && n.fprime(s1) < n.fprime(s0) - 1e-10 * (std::abs(n.fprime(s0)) + 1.0))
    return false;
  return true;
}

// ---------------------------------------------------------------------------
// Weighted ODE residual of -u'' - (N-1)/r u' = g(u), max over nodes, each
// residual scaled by the magnitude of the terms entering it.

inline double ode_residual_weighted_max(const RadialProfile& p,
                                        const std::function<double(double)>& g,
                                        int N) {
  RadialProfile q = p;
  ensure_derivatives(q, 2);
  double worst = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double r = q.grid.r[i];
    const double a = (*q.u_rr)[i];
    const double b = (N - 1) / r * (*q.u_r)[i];
    const double c = g(q.u[i]);
    const double res = a + b + c;
    const double scale = std::abs(a) + std::abs(b) + std::abs(c) + 1.0;
    worst = std::max(worst, std::abs(res) / scale);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Profile CSV: header r,u,u_r,u_rr,u_rrr; missing derivative columns empty.

inline void write_profile_csv(std::ostream& os, const RadialProfile& p) {
  os << "r,u,u_r,u_rr,u_rrr\n";
  os.precision(17);
  for (std::size_t i = 0; i < p.size(); ++i) {
    os << p.grid.r[i] << ',' << p.u[i] << ',';
    if (p.u_r) os << (*p.u_r)[i];
    os << ',';
    if (p.u_rr) os << (*p.u_rr)[i];
    os << ',';
    if (p.u_rrr) os << (*p.u_rrr)[i];
    os << '\n';
  }
}

inline void write_profile_csv(const std::string& path, const RadialProfile& p) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp);
    if (!os) throw std::runtime_error("cannot open " + tmp);
    write_profile_csv(os, p);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp);
}

inline RadialProfile read_profile_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("r,u", 0) != 0)
    throw std::runtime_error("profile CSV: bad header");
  std::vector<double> r, u;
  std::vector<double> d1, d2, d3;
  bool has1 = true, has2 = true, has3 = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    cells.resize(5);
    r.push_back(std::stod(cells[0]));
    u.push_back(std::stod(cells[1]));
    auto grab = [](const std::string& c, std::vector<double>& v, bool& has) {
      if (c.empty()) {
        has = false;
      } else {
        v.push_back(std::stod(c));
      }
    };
    grab(cells[2], d1, has1);
    grab(cells[3], d2, has2);
    grab(cells[4], d3, has3);
  }
  RadialProfile p;
  p.grid.r = std::move(r);
  p.u = std::move(u);
  if (has1 && d1.size() == p.u.size()) p.u_r = std::move(d1);
  if (has2 && d2.size() == p.u.size()) p.u_rr = std::move(d2);
  if (has3 && d3.size() == p.u.size()) p.u_rrr = std::move(d3);
  p.validate();
  return p;
}

inline RadialProfile read_profile_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_profile_csv(is);
}

}  // namespace rv
