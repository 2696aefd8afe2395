#pragma once

// Serialization: JSON reports (branch, stability, estimates, family,
// verification wrapper) and CSV traces. All file writes are atomic
// (temp + rename) and byte-deterministic for a fixed config + seed.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "radialverify/branch.hpp"
#include "radialverify/core.hpp"
#include "radialverify/estimates.hpp"
#include "radialverify/family.hpp"
#include "radialverify/stability.hpp"

namespace rv {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

// NaN is not representable in JSON; nlohmann would emit null non-portably.
inline json json_number(double v) {
  if (std::isfinite(v)) return json(v);
  return json(nullptr);
}

inline void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp);
    os << text;
    if (!os) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);
}

inline void write_json_atomic(const std::string& path, const json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

inline json grid_meta(const RadialGrid& g) {
  return json{{"nodes", g.size()},
              {"r_min", g.r_min()},
              {"grading", g.grading == RadialGrid::Grading::Geometric
                              ? "geometric"
                              : "uniform"}};
}

inline json to_json(const StabilityVerdict& v) {
  return json{{"mu1", json_number(v.first_eigenvalue)},
              {"semistable", v.semistable},
              {"margin", json_number(v.margin)},
              {"grid_size", v.grid_size},
              {"r_min", v.r_min},
              {"method", v.method},
              {"potential_flagged", v.potential_flagged}};
}

inline json to_json(const EstimateReport& r, const json& grid = json::object()) {
  json j{{"theorem_id", to_string(r.theorem_id)},
         {"regime", to_string(r.regime)},
         {"item", r.item},
         {"empirical_constant", json_number(r.empirical_constant)},
         {"sup_location", json_number(r.sup_location)},
         {"holds_uniformly", r.holds_uniformly},
         {"vacuous", r.vacuous},
         {"skipped", r.skipped},
         {"slope_at_origin", json_number(r.slope_at_origin)},
         {"note", r.note}};
  j["grid_meta"] = grid;
  return j;
}

inline json to_json(const Branch& br, const std::string& profile_ref_stem = "") {
  json pts = json::array();
  for (std::size_t i = 0; i < br.points.size(); ++i) {
    const auto& pt = br.points[i];
    json p{{"a", pt.a},
           {"lambda", pt.lambda},
           {"eigenvalue", json_number(pt.first_eigenvalue)}};
    if (!profile_ref_stem.empty())
      p["profile_ref"] = profile_ref_stem + "_" + std::to_string(i) + ".csv";
    pts.push_back(std::move(p));
  }
  return json{{"dimension", br.dim},
              {"nonlinearity", br.nonlinearity},
              {"points", std::move(pts)},
              {"lambda_star_estimate", br.lambda_star_estimate},
              {"lambda_star_upper", br.lambda_star_upper},
              {"turning_detected", br.turning_detected}};
}

inline json to_json(const FamilySpec& s) {
  return json{{"N", s.dim},
              {"h", s.descriptor},
              {"normalization", "u(1)=0"}};
}

inline json to_json(const FamilyVerdict& v) {
  return json{{"pointwise_ok", v.pointwise_ok},
              {"eta_passed", v.eta_passed},
              {"eta_total", v.eta_total},
              {"spectral", to_json(v.spectral)},
              {"semistable", v.semistable}};
}

// Wrapper carrying config echo, provenance and an entries array; the CLI
// fills entries with per-check objects and sets overall_pass.
inline json verification_report(const json& config_echo, const RadialGrid& grid,
                                std::uint64_t seed) {
  return json{{"config", config_echo},
              {"provenance",
               json{{"grid", grid_meta(grid)}, {"version", kVersion}, {"seed", seed}}},
              {"entries", json::array()},
              {"overall_pass", false}};
}

// CSV ratio trace `r,lhs,rhs,ratio` (full double precision, atomic write).
inline void write_ratio_trace_csv(const std::string& path,
                                  const std::vector<std::array<double, 4>>& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "r,lhs,rhs,ratio\n";
  for (const auto& row : trace)
    os << row[0] << ',' << row[1] << ',' << row[2] << ',' << row[3] << '\n';
  write_text_atomic(path, os.str());
}

// CSV table `s,g` for a recovered nonlinearity.
inline void write_recovered_g_csv(const std::string& path, const RecoveredG& g) {
  std::ostringstream os;
  os.precision(17);
  os << "s,g\n";
  for (std::size_t i = 0; i < g.s.size(); ++i)
    os << g.s[i] << ',' << g.g[i] << '\n';
  write_text_atomic(path, os.str());
}

}  // namespace rv
