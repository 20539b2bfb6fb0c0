#include "mstefan/runner.hpp"

#include "mstefan/errors.hpp"
#include "mstefan/sampling.hpp"
#include "mstefan/spectral.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

namespace mstefan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json to_json(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(const SpectrumReport& r) {
  return json{{"eigenvalues", to_json(r.eigenvalues)},
              {"zero_multiplicity", r.zero_multiplicity},
              {"in_band", r.in_band},
              {"delta", r.delta},
              {"Delta", r.Delta},
              {"tol", r.tol}};
}

json to_json(const AuditVerdict& v) {
  json checks = json::object();
  for (const auto& c : v.checks) checks[c.name] = json{{"passed", c.passed}, {"margin", c.margin}};
  return json{{"time", v.time}, {"passed", v.passed()}, {"checks", checks}};
}

void write_text(const fs::path& path, const std::string& text, std::vector<std::string>& files) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  files.push_back(path.string());
}

std::string snapshot_csv(const Grid1D& grid, const StepState& s) {
  const int n = static_cast<int>(s.c.cols());
  std::string out = "x";
  for (int i = 1; i <= n; ++i) out += ",c_" + std::to_string(i);
  for (int i = 1; i < n; ++i) out += ",w_" + std::to_string(i);
  out += "\n";
  for (int m = 0; m < grid.cells(); ++m) {
    out += format_double(grid.center(m));
    for (int i = 0; i < n; ++i) out += "," + format_double(s.c(m, i));
    for (int i = 0; i + 1 < n; ++i) out += "," + format_double(s.w(m, i));
    out += "\n";
  }
  return out;
}

std::string snapshot_name(int step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snapshot_%04d.csv", step);
  return buf;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string timeseries_header(int n_species) {
  std::string h = "time,entropy,relative_entropy,dissipation_raw,dissipation_sqrt";
  for (int i = 1; i <= n_species; ++i) h += ",mass_" + std::to_string(i);
  h += ",min_c,picard_iterations";
  return h;
}

std::string timeseries_row(const DiagnosticsRecord& r) {
  std::string row = format_double(r.time) + "," + format_double(r.entropy) + "," +
                    format_double(r.relative_entropy) + "," + format_double(r.dissipation_raw) + "," +
                    format_double(r.dissipation_sqrt);
  for (int i = 0; i < r.masses.size(); ++i) row += "," + format_double(r.masses(i));
  row += "," + format_double(r.min_c) + "," + std::to_string(r.picard_iterations);
  return row;
}

std::optional<ConcentrationField> heat_analytic_solution(const RunConfig& cfg, double t) {
  const MixtureSpec spec = cfg.mixture();
  if (cfg.initial.kind != InitialKind::Cosine || !spec.equal_diffusivities(1e-14) ||
      !spec.production().is_zero()) {
    return std::nullopt;
  }
  constexpr double kPi = 3.14159265358979323846;
  const Grid1D grid = cfg.grid();
  const double k = kPi / cfg.length;
  const double decay = std::exp(-spec.D()(0, 1) * k * k * t);
  ConcentrationField c(grid.cells(), cfg.species);
  for (int m = 0; m < grid.cells(); ++m) {
    c.row(m) = (cfg.initial.first + cfg.initial.second * std::cos(k * grid.center(m)) * decay).transpose();
  }
  return c;
}

ScenarioResult run_scenario(const RunConfig& cfg) {
  ScenarioResult out;
  const MixtureSpec spec = cfg.mixture();
  const Grid1D grid = cfg.grid();
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);

  std::ofstream ts;
  if (cfg.emit.timeseries) {
    ts.open(dir / "timeseries.csv", std::ios::binary);
    ts << timeseries_header(cfg.species) << "\n";
    out.files.push_back((dir / "timeseries.csv").string());
  }

  int step = 0;
  StepState last;
  SimulationHooks hooks;
  hooks.on_step = [&](const StepState& s, const AuditVerdict* verdict) {
    if (ts.is_open()) ts << timeseries_row(s.record) << "\n" << std::flush;
    if (cfg.emit.snapshots) {
      const bool periodic = cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0;
      if (verdict == nullptr || periodic) {
        write_text(dir / snapshot_name(step), snapshot_csv(grid, s), out.files);
      }
      last = s;
    }
    ++step;
  };

  out.trajectory = run_simulation(spec, grid, cfg.scheme, cfg.initial_field(), hooks);
  const Trajectory& traj = out.trajectory;
  const int steps_taken = static_cast<int>(traj.audits.size());
  if (cfg.emit.snapshots && steps_taken > 0) {
    const auto name = dir / snapshot_name(steps_taken);
    if (!fs::exists(name)) write_text(name, snapshot_csv(grid, traj.final_state), out.files);
  }
  ts.close();

  if (cfg.emit.audit_json) {
    json steps_json = json::array();
    for (const auto& v : traj.audits) steps_json.push_back(to_json(v));
    bool all = std::all_of(traj.audits.begin(), traj.audits.end(), [](const auto& v) { return v.passed(); });
    json audit{{"scenario", cfg.scenario}, {"all_passed", all}, {"steps", steps_json}};
    write_text(dir / "audit.json", audit.dump(2) + "\n", out.files);
  }

  json summary;
  summary["scenario"] = cfg.scenario;
  summary["status"] = to_string(traj.status);
  summary["message"] = traj.message;
  summary["species"] = cfg.species;
  summary["cells"] = cfg.cells;
  summary["tau"] = cfg.scheme.tau;
  summary["eps"] = cfg.scheme.eps;
  summary["t_end"] = cfg.scheme.t_end;
  summary["steps"] = steps_taken;
  summary["final_time"] = traj.records.back().time;
  summary["initial_masses"] = to_json(traj.records.front().masses);
  summary["final_masses"] = to_json(traj.records.back().masses);
  summary["reference_composition"] = to_json(traj.reference);
  try {
    const DecayFit fit = fit_decay_rate(traj.records);
    summary["decay_fit"] = json{{"lambda", fit.lambda}, {"r_squared", fit.r_squared}, {"points", fit.points}};
  } catch (const Error& e) {
    summary["decay_fit"] = json{{"error", e.what()}};
  }
  std::map<std::string, double> worst;
  int failures = 0;
  for (const auto& v : traj.audits) {
    if (!v.passed()) ++failures;
    for (const auto& c : v.checks) {
      auto it = worst.find(c.name);
      if (it == worst.end() || c.margin < it->second) worst[c.name] = c.margin;
    }
  }
  summary["worst_audit_margins"] = worst;
  summary["audit_failures"] = failures;
  summary["clamp_count"] = traj.bound_violations;
  summary["max_mass_identity_error"] = traj.max_mass_identity_error;
  summary["max_flux_residual"] = traj.max_flux_residual;
  summary["tau_halvings"] = traj.tau_halvings;
  summary["damping_restarts"] = traj.damping_restarts;
  summary["uphill_event"] = traj.uphill_seen();
  if (traj.uphill_seen()) {
    summary["uphill"] = json{{"time", traj.uphill.time},
                             {"face", traj.uphill.event.face},
                             {"species", traj.uphill.event.species + 1},
                             {"flux_times_gradient", traj.uphill.event.strength}};
  }
  if (auto exact = heat_analytic_solution(cfg, traj.records.back().time)) {
    const double err = std::sqrt((traj.final_state.c - *exact).squaredNorm() * grid.h());
    summary["l2_error_vs_analytic"] = err;
  }
  summary["warnings"] = spec.warnings();
  write_text(dir / "run_summary.json", summary.dump(2) + "\n", out.files);
  out.summary = summary;

  switch (traj.status) {
    case RunStatus::Completed:
      out.exit_code = failures > 0 ? exit_code::kAuditFailure : exit_code::kClean;
      break;
    case RunStatus::AuditFailed: out.exit_code = exit_code::kAuditFailure; break;
    case RunStatus::SolverAborted: out.exit_code = exit_code::kSolverAbort; break;
  }
  return out;
}

CertifyResult certify(const RunConfig& cfg) {
  CertifyResult out;
  const MixtureSpec spec = cfg.mixture();
  Rng rng(cfg.seed);
  json reports = json::array();
  bool all = true;
  for (int s = 0; s < cfg.samples; ++s) {
    const ConcVector c = ConcVector::from_full(sample_simplex(rng, spec.species()));
    json item;
    item["c"] = to_json(c.full());
    bool ok = true;
    try {
      const SpectrumReport a = certify_A_spectrum(spec, c);
      const SpectrumReport a0 = certify_A0_spectrum(spec, c);
      const Matrix B = assemble_B(spec, c);
      const double sym = (B - B.transpose()).cwiseAbs().maxCoeff();
      const double bmin = symmetric_spectrum(0.5 * (B + B.transpose()))(0);
      const bool spd = sym <= 1e-10 && bmin > 0.0;
      ok = a.certified(1) && a0.certified(0) && spd;
      item["A"] = to_json(a);
      item["A0"] = to_json(a0);
      item["B"] = json{{"symmetry_residual", sym}, {"min_eigenvalue", bmin}, {"spd", spd}};
    } catch (const Error& e) {
      ok = false;
      item["error"] = e.what();
    }
    item["passed"] = ok;
    all = all && ok;
    reports.push_back(item);
  }
  out.report = json{{"scenario", cfg.scenario}, {"species", spec.species()}, {"samples", cfg.samples},
                    {"seed", cfg.seed}, {"delta", spec.delta()}, {"Delta", spec.Delta()},
                    {"all_passed", all}, {"reports", reports}};
  if (cfg.emit.certify_json) {
    fs::create_directories(cfg.output_dir);
    write_text(fs::path(cfg.output_dir) / "certify.json", out.report.dump(2) + "\n", out.files);
  }
  out.exit_code = all ? exit_code::kClean : exit_code::kAuditFailure;
  return out;
}

}  // namespace mstefan
