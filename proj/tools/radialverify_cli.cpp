// Batch front end: solve minimal branches, extract extremal profiles, verify
// pointwise estimates, build family members and counterexamples, and run
// stability / Hardy checks. One command per invocation; outputs are written
// atomically into --out (or $RADIALVERIFY_OUT, or the current directory).
//
// Exit codes: 0 all asserted checks pass, 1 some check failed, 2 config or
// hypothesis error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "radialverify/branch.hpp"
#include "radialverify/core.hpp"
#include "radialverify/estimates.hpp"
#include "radialverify/family.hpp"
#include "radialverify/report.hpp"
#include "radialverify/stability.hpp"

namespace {

struct GlobalOpts {
  int dim = 10;
  std::string nonlinearity = "exp";
  std::size_t grid_nodes = 2000;
  double grid_rmin = 1e-6;
  double tol_ode = 1e-9;
  double tol_eigen = 1e-6;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
};

rv::RadialGrid make_grid(const GlobalOpts& g) {
  return rv::RadialGrid::geometric(g.grid_nodes, g.grid_rmin);
}

rv::Nonlinearity make_nonlinearity(const std::string& desc) {
  if (desc == "exp") return rv::exp_nonlinearity();
  if (desc.rfind("power:", 0) == 0)
    return rv::power_nonlinearity(std::stod(desc.substr(6)));
  if (desc.rfind("table:", 0) == 0) {
    const std::string file = desc.substr(6);
    std::ifstream is(file);
    if (!is) throw CLI::ValidationError("--nonlinearity", "cannot open " + file);
    std::vector<double> s, f, fp;
    std::string line;
    std::getline(is, line);  // header s,f,fprime
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      double a, b, c;
      char comma;
      ls >> a >> comma >> b >> comma >> c;
      s.push_back(a);
      f.push_back(b);
      fp.push_back(c);
    }
    return rv::table_nonlinearity(s, f, fp);
  }
  throw CLI::ValidationError("--nonlinearity",
                             "expected exp | power:<p> | table:<csv>");
}

std::string out_dir(const GlobalOpts& g) {
  std::string d = g.out;
  if (d.empty()) {
    const char* env = std::getenv("RADIALVERIFY_OUT");
    d = env ? env : ".";
  }
  std::filesystem::create_directories(d);
  return d;
}

std::string path_in(const GlobalOpts& g, const std::string& name) {
  return out_dir(g) + "/" + name;
}

rv::json config_echo(const GlobalOpts& g, const std::string& command) {
  return rv::json{{"command", command},
                  {"dim", g.dim},
                  {"nonlinearity", g.nonlinearity},
                  {"grid_nodes", g.grid_nodes},
                  {"grid_rmin", g.grid_rmin},
                  {"tol_ode", g.tol_ode},
                  {"tol_eigen", g.tol_eigen},
                  {"seed", g.seed},
                  {"format", g.format}};
}

rv::EstimateHypotheses branch_hypotheses(const rv::Nonlinearity& f) {
  rv::EstimateHypotheses hyp;
  hyp.semistable = true;  // minimal solutions are semi-stable
  hyp.h1_finite = true;
  hyp.radially_decreasing = true;
  hyp.g_nonnegative = f.flags.nonnegative;
  hyp.g_nondecreasing = f.flags.nondecreasing;
  hyp.g_convex = f.flags.convex;
  return hyp;
}

int cmd_branch(const GlobalOpts& g, double a_max, int samples, bool extremal_only) {
  const rv::Nonlinearity f = make_nonlinearity(g.nonlinearity);
  const rv::RadialGrid grid = make_grid(g);
  rv::BranchOptions bopt;
  bopt.shoot_target = g.tol_ode;
  rv::Branch br = rv::solve_branch(f, rv::Dimension(g.dim), a_max, samples, grid, bopt);
  rv::attach_eigenvalues(br, f, g.tol_eigen);

  bool pass = rv::branch_pointwise_monotone(br);
  for (const auto& pt : br.points) {
    auto interp = pt.profile.interpolant();
    const double lam = pt.lambda;
    auto gg = [&](double s) { return lam * f.f(s); };
    if (rv::ode_residual_weighted_max(pt.profile, gg, g.dim) > 1e-3) pass = false;
    double vscale = 0.0;
    for (double r : pt.profile.grid.r)
      vscale = std::max(vscale, std::abs(lam * f.fprime(interp(r))) * r * r);
    if (pt.first_eigenvalue < -g.tol_eigen * (1.0 + vscale)) pass = false;
  }

  rv::json rep = rv::verification_report(
      config_echo(g, extremal_only ? "extremal" : "branch"), grid, g.seed);
  rep["branch"] = rv::to_json(br, extremal_only ? "" : "profile");
  if (extremal_only) {
    const rv::ExtremalResult ex = rv::extremal_profile(br);
    rep["extremal"] = rv::json{{"a", ex.a},
                               {"lambda", ex.lambda},
                               {"low_confidence", ex.low_confidence}};
    rv::write_profile_csv(path_in(g, "extremal_profile.csv"), ex.profile);
  } else {
    for (std::size_t i = 0; i < br.points.size(); ++i)
      rv::write_profile_csv(path_in(g, "profile_" + std::to_string(i) + ".csv"),
                            br.points[i].profile);
  }
  rep["overall_pass"] = pass;
  rv::write_json_atomic(path_in(g, extremal_only ? "extremal.json" : "branch.json"), rep);
  return pass ? 0 : 1;
}

int cmd_verify(const GlobalOpts& g, const std::string& theorem,
               const std::string& input, double a_max, int samples) {
  const rv::Nonlinearity f = make_nonlinearity(g.nonlinearity);
  const rv::RadialGrid grid = make_grid(g);
  rv::RadialProfile prof;
  if (!input.empty()) {
    prof = rv::read_profile_csv(input);
  } else {
    rv::BranchOptions bopt;
    bopt.shoot_target = g.tol_ode;
    rv::Branch br =
        rv::solve_branch(f, rv::Dimension(g.dim), a_max, samples, grid, bopt);
    prof = rv::extremal_profile(br).profile;
  }
  const rv::EstimateHypotheses hyp = branch_hypotheses(f);

  std::vector<rv::EstimateReport> reports;
  if (theorem == "lemma_essential")
    reports.push_back(rv::check_lemma_essential(prof, g.dim, hyp));
  else if (theorem == "prop_rand2r")
    reports.push_back(rv::check_rand2r(prof, g.dim, hyp));
  else if (theorem == "thm_principal")
    reports.push_back(rv::check_thm_principal(prof, g.dim, hyp));
  else if (theorem == "thm_extremal")
    reports = rv::check_thm_extremal(prof, g.dim);
  else if (theorem == "thm_estimas")
    reports = rv::check_thm_estimas(prof, g.dim, hyp);
  else if (theorem == "lemma_monotonias")
    reports.push_back(rv::check_monotonias(prof, g.dim, hyp));
  else
    throw CLI::ValidationError("--theorem", "unknown selector " + theorem);

  rv::json rep = rv::verification_report(config_echo(g, "verify"), grid, g.seed);
  bool pass = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    rep["entries"].push_back(rv::to_json(r, rv::grid_meta(grid)));
    if (!r.skipped && !r.vacuous && !r.holds_uniformly) pass = false;
    if (!r.trace.empty())
      rv::write_ratio_trace_csv(
          path_in(g, "trace_" + theorem + "_" + std::to_string(i) + ".csv"),
          r.trace);
  }
  rep["overall_pass"] = pass;
  rv::write_json_atomic(path_in(g, "verify_" + theorem + ".json"), rep);
  return pass ? 0 : 1;
}

rv::CounterexampleTarget dyadic_target(int count, const std::string& magnitudes) {
  rv::CounterexampleTarget t;
  for (int n = 1; n <= count; ++n) {
    t.radii.push_back(std::pow(2.0, -n));
    if (magnitudes == "linear")
      t.magnitudes.push_back(n);
    else if (magnitudes == "quadratic")
      t.magnitudes.push_back(double(n) * n);
    else
      throw CLI::ValidationError("--magnitudes", "expected linear | quadratic");
  }
  return t;
}

int cmd_family(const GlobalOpts& g, const std::string& hdesc,
               const std::string& counterexample, const std::string& radii,
               const std::string& magnitudes, int count) {
  if (g.dim < 10) {
    std::cerr << "family: refused, the construction requires dimension >= 10\n";
    return 2;
  }
  const rv::RadialGrid grid = make_grid(g);
  rv::json rep = rv::verification_report(config_echo(g, "family"), grid, g.seed);
  rv::FamilySpec spec;
  rv::RadialProfile u;
  bool pass = true;

  if (!counterexample.empty()) {
    if (radii != "dyadic")
      throw CLI::ValidationError("--radii", "only dyadic targets are built in");
    const rv::CounterexampleTarget t = dyadic_target(count, magnitudes);
    rv::CounterexampleResult res;
    if (counterexample == "k=1")
      res = rv::counterexample_first(t, g.dim, grid);
    else if (counterexample == "k=2")
      res = rv::counterexample_second(t, g.dim, grid);
    else if (counterexample == "k=3")
      res = rv::counterexample_third(t, g.dim, grid);
    else
      throw CLI::ValidationError("--counterexample", "expected k=1 | k=2 | k=3");
    if (!res.feasible) {
      std::cerr << "family: infeasible target: " << res.note << "\n";
      return 2;
    }
    spec = res.spec;
    u = res.u;
    rv::json ach = rv::json::array();
    for (std::size_t i = 0; i < t.radii.size(); ++i) {
      ach.push_back(rv::json{{"r", t.radii[i]},
                             {"target", t.magnitudes[i]},
                             {"achieved", res.achieved[i]}});
      if (res.achieved[i] < t.magnitudes[i]) pass = false;
    }
    rep["targets"] = std::move(ach);
  } else {
    if (hdesc == "zero")
      spec = rv::zero_seed(g.dim);
    else if (hdesc.rfind("monomial:", 0) == 0) {
      const auto comma = hdesc.find(',', 9);
      spec = rv::monomial_seed(g.dim, std::stod(hdesc.substr(9)),
                               std::stod(hdesc.substr(comma + 1)));
    } else if (hdesc.rfind("bumps:", 0) == 0) {
      // bumps:<count> random admissible bumps from the seed
      rv::detail::SplitMix64 rng(g.seed);
      std::vector<rv::SeedBump> bumps;
      const int nb = std::stoi(hdesc.substr(6));
      for (int i = 0; i < nb; ++i) {
        const double c = rng.uniform(0.1, 0.9);
        const double w = rng.uniform(0.01, std::min(c, 1.0 - c) * 0.9);
        bumps.push_back({c, w, rng.uniform(0.1, 3.0)});
      }
      spec = rv::bump_seed(g.dim, std::move(bumps), hdesc);
    } else {
      throw CLI::ValidationError("--h", "expected zero | monomial:<c>,<k> | bumps:<n>");
    }
    u = rv::build_family(spec, grid);
  }

  rv::FamilyFunctions ff(spec);
  const rv::FamilyVerdict verdict =
      rv::verify_family_semistability(ff, u, g.seed, 12, g.tol_eigen);
  if (!verdict.semistable) pass = false;
  const rv::RecoveredG rg = rv::recover_g(u, g.dim);

  rep["family_spec"] = rv::to_json(spec);
  rep["verdict"] = rv::to_json(verdict);
  rep["overall_pass"] = pass;
  rv::write_profile_csv(path_in(g, "family_profile.csv"), u);
  rv::write_recovered_g_csv(path_in(g, "recovered_g.csv"), rg);
  rv::write_json_atomic(path_in(g, "family.json"), rep);
  return pass ? 0 : 1;
}

int cmd_hardy(const GlobalOpts& g, const std::string& hdesc) {
  if (g.dim < 10) {
    std::cerr << "hardy: refused, the construction requires dimension >= 10\n";
    return 2;
  }
  rv::FamilySpec spec =
      hdesc == "zero" ? rv::zero_seed(g.dim) : rv::monomial_seed(g.dim, 1.0, 1.0);
  rv::FamilyFunctions ff(spec);
  rv::detail::SplitMix64 rng(g.seed);
  rv::json rep = rv::verification_report(config_echo(g, "hardy"), make_grid(g), g.seed);
  bool pass = true;
  for (int k = 0; k < 8; ++k) {
    const double s = rng.uniform(0.3, 1.5);
    const double mu = rng.uniform(std::log(g.grid_rmin) + s + 0.05, -s - 0.05);
    auto xi = [mu, s](double t) { return rv::kernels::bump((std::log(t) - mu) / s); };
    auto xip = [mu, s](double t) {
      return rv::kernels::bump_d1((std::log(t) - mu) / s) / (s * t);
    };
    const auto res = rv::hardy_check([&](double r) { return ff.Phi(r); },
                                     [&](double r) { return ff.PhiP(r); }, xi, xip,
                                     std::exp(mu - s), std::exp(mu + s));
    rep["entries"].push_back(
        rv::json{{"lhs", res.lhs}, {"rhs", res.rhs}, {"holds", res.holds}});
    if (!res.holds) pass = false;
  }
  rep["overall_pass"] = pass;
  rv::write_json_atomic(path_in(g, "hardy.json"), rep);
  return pass ? 0 : 1;
}

int cmd_stability(const GlobalOpts& g, const std::string& input,
                  const std::string& potential) {
  const rv::RadialProfile prof = rv::read_profile_csv(input);
  std::function<double(double)> gp;
  if (potential.rfind("hardy:", 0) == 0) {
    const double c = std::stod(potential.substr(6));
    gp = [c](double r) { return c / (r * r); };
  } else if (potential.rfind("const:", 0) == 0) {
    const double c = std::stod(potential.substr(6));
    gp = [c](double) { return c; };
  } else if (potential == "recovered") {
    const rv::RecoveredG rg = rv::recover_g(prof, g.dim);
    auto interp = prof.interpolant();
    const double eps = 1e-6;
    gp = [rg, interp, eps](double r) {
      const double s = interp(r);
      return (rg(s + eps) - rg(s - eps)) / (2 * eps);
    };
  } else {
    throw CLI::ValidationError("--potential",
                               "expected hardy:<c> | const:<c> | recovered");
  }
  const rv::StabilityVerdict v = rv::first_eigenvalue(prof, gp, g.dim, g.tol_eigen);
  rv::json rep = rv::verification_report(config_echo(g, "stability"),
                                         prof.grid, g.seed);
  rep["verdict"] = rv::to_json(v);
  rep["overall_pass"] = v.semistable;
  rv::write_json_atomic(path_in(g, "stability.json"), rep);
  return v.semistable ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical verification for radial semilinear problems"};
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_option("--dim", g.dim, "space dimension N >= 2");
  app.add_option("--nonlinearity", g.nonlinearity, "exp | power:<p> | table:<csv>");
  app.add_option("--grid-nodes", g.grid_nodes, "grid size");
  app.add_option("--grid-rmin", g.grid_rmin, "inner truncation radius");
  app.add_option("--tol-ode", g.tol_ode, "shooting boundary tolerance");
  app.add_option("--tol-eigen", g.tol_eigen, "eigenvalue tolerance");
  app.add_option("--seed", g.seed, "rng seed");
  app.add_option("--out", g.out, "output directory (default $RADIALVERIFY_OUT or .)");
  app.add_option("--format", g.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));

  double a_max = 30.0;
  int samples = 12;
  auto* branch = app.add_subcommand("branch", "sample the minimal branch");
  branch->add_option("--a-max", a_max, "largest center value u(0)");
  branch->add_option("--samples", samples, "branch sample count");

  auto* extremal = app.add_subcommand("extremal", "profile at the branch top");
  extremal->add_option("--a-max", a_max);
  extremal->add_option("--samples", samples);

  std::string theorem = "thm_extremal", input;
  auto* verify = app.add_subcommand("verify", "check a pointwise estimate");
  verify->add_option("--theorem", theorem,
                     "lemma_essential | prop_rand2r | thm_principal | "
                     "thm_extremal | thm_estimas | lemma_monotonias");
  verify->add_option("--input", input, "profile CSV (default: solve a branch)");
  verify->add_option("--a-max", a_max);
  verify->add_option("--samples", samples);

  std::string hdesc = "zero", counterexample, radii = "dyadic",
              magnitudes = "linear";
  int count = 20;
  auto* family = app.add_subcommand("family", "build a semi-stable family member");
  family->set_help_flag("--help", "print help");  // frees -h for the seed flag
  family->add_option("--h", hdesc, "zero | monomial:<c>,<k> | bumps:<n>");
  family->add_option("--counterexample", counterexample, "k=1 | k=2 | k=3");
  family->add_option("--radii", radii, "target radii pattern (dyadic)");
  family->add_option("--magnitudes", magnitudes, "linear | quadratic");
  family->add_option("--count", count, "number of target radii");

  auto* hardy = app.add_subcommand("hardy", "generalized Hardy inequality suite");
  hardy->set_help_flag("--help", "print help");
  hardy->add_option("--h", hdesc, "zero | linear");

  std::string potential = "const:0";
  auto* stability = app.add_subcommand("stability", "first eigenvalue of a profile");
  stability->add_option("--input", input, "profile CSV")->required();
  stability->add_option("--potential", potential, "hardy:<c> | const:<c> | recovered");

  // global flags may appear before or after the subcommand name
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (g.dim < 2) {
      std::cerr << "error: --dim must be >= 2\n";
      return 2;
    }
    if (branch->parsed()) return cmd_branch(g, a_max, samples, false);
    if (extremal->parsed()) return cmd_branch(g, a_max, samples, true);
    if (verify->parsed()) return cmd_verify(g, theorem, input, a_max, samples);
    if (family->parsed())
      return cmd_family(g, hdesc, counterexample, radii, magnitudes, count);
    if (hardy->parsed()) return cmd_hardy(g, hdesc);
    if (stability->parsed()) return cmd_stability(g, input, potential);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
