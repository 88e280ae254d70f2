#include "cavfermi/run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cavfermi/coefficients.hpp"
#include "cavfermi/csv.hpp"
#include "cavfermi/dynamics.hpp"
#include "cavfermi/fermisea.hpp"
#include "cavfermi/steadystate.hpp"

namespace cavfermi {

namespace {

const std::vector<std::string> kBranchColumns = {"branch_id", "n_bar", "y",     "stability",
                                                 "valid_tb",  "xi",    "status"};

/// Collects the first failure seen while assembling rows.
struct Failure {
  std::string message;
  void note(const std::string& m) {
    if (message.empty()) message = m;
  }
  bool any() const { return !message.empty(); }
};

SweepOptions sweep_options(const RunConfig& c) {
  SweepOptions o;
  o.solver = c.solver;
  o.classify = c.classify;
  o.stability = c.stability;
  o.threads = c.threads;
  return o;
}

std::optional<double> y_of(double n_bar, double u0) {
  if (!(n_bar > 0.0) || !std::isfinite(n_bar) || u0 == 0.0) return std::nullopt;
  return photons_to_y(n_bar, u0);
}

bool valid_at(std::optional<double> y, const SystemParams& p) { return y && *y <= p.y_max; }

/// One row per branch, or a single placeholder row when there are none.
void branch_rows(CsvDocument& doc, const SweepRow& row, const CsvDocument::Row& prefix,
                 Failure& failure) {
  if (!row.error.empty()) {
    failure.note(row.error);
    CsvDocument::Row r = prefix;
    r.empty().empty().empty().empty().add(false).empty().add("error");
    doc.append(r);
    return;
  }
  if (row.branches.empty()) {
    CsvDocument::Row r = prefix;
    r.empty().empty().empty().empty().add(false).empty().add("no_branch");
    doc.append(r);
    return;
  }
  for (std::size_t i = 0; i < row.branches.size(); ++i) {
    const SteadyStateBranch& b = row.branches[i];
    CsvDocument::Row r = prefix;
    r.add(static_cast<int>(i)).add(b.n_bar).add(b.y).add(to_string(b.stability)).add(b.valid_tb)
        .add(b.xi).add("ok");
    doc.append(r);
  }
}

std::string trajectory_status(TrajectoryStatus status, bool converged) {
  if (status == TrajectoryStatus::left_domain) return "left_domain";
  return converged ? "converged" : "not_converged";
}

void run_coeffs(const RunConfig& c, CsvDocument& doc, Failure&) {
  doc.columns({"y", "n_bar", "E", "J", "E1", "J1", "dE", "dJ", "dE1", "dJ1", "valid_tb"});
  for (double y : c.y_list) {
    const double n = y_to_photons(y, c.params.u0);
    const LatticeCoefficients k = gaussian_coefficients(n, c.params);
    CsvDocument::Row r;
    r.add(y).add(n).add(k.e_onsite).add(k.j_onsite).add(k.e_hop).add(k.j_hop).add(k.d_e)
        .add(k.d_j).add(k.d_e_hop).add(k.d_j_hop).add(y <= c.params.y_max);
    doc.append(r);
  }
}

void run_atoms(const RunConfig& c, const std::vector<int>& n_list, CsvDocument& doc,
               Failure& failure) {
  std::vector<std::string> cols = {"N"};
  cols.insert(cols.end(), kBranchColumns.begin(), kBranchColumns.end());
  doc.columns(cols);
  const auto rows = sweep_atoms(c.params, n_list, sweep_options(c));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CsvDocument::Row prefix;
    prefix.add(n_list[i]);
    branch_rows(doc, rows[i], prefix, failure);
  }
}

void follow_rows(const RunConfig& c, const std::vector<double>& etas, double n0,
                 std::string_view kind, CsvDocument& doc, Failure& failure) {
  const FermiSeaSummary summary = fermi_sea_summary(c.params);
  std::vector<HysteresisPoint> points;
  try {
    points = follow_pump(etas, n0, summary, c.params, c.integrator);
  } catch (const std::exception& e) {
    failure.note(std::string(kind) + ": " + e.what());
  }
  for (std::size_t i = 0; i < etas.size(); ++i) {
    CsvDocument::Row r;
    r.add(etas[i]).add(1.0 / etas[i]).add(kind).empty();
    if (i >= points.size()) {
      r.empty().empty().empty().add(false).empty().add("error");
      doc.append(r);
      continue;
    }
    const HysteresisPoint& p = points[i];
    const std::optional<double> y = p.attractor ? y_of(*p.attractor, c.params.u0) : std::nullopt;
    std::optional<double> xi;
    if (p.attractor && *p.attractor > 0.0) {
      SystemParams at = c.params;
      at.eta = etas[i];
      xi = xi_shift(*p.attractor, summary, at);
    }
    r.add(p.attractor).add(y).empty().add(valid_at(y, c.params)).add(xi)
        .add(trajectory_status(p.status, p.converged));
    doc.append(r);
  }
}

void run_pump(const RunConfig& c, CsvDocument& doc, Failure& failure) {
  std::vector<std::string> cols = {"eta", "inv_eta", "kind"};
  cols.insert(cols.end(), kBranchColumns.begin(), kBranchColumns.end());
  doc.columns(cols);
  const auto rows = sweep_pump(c.params, c.eta_list, sweep_options(c));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CsvDocument::Row prefix;
    prefix.add(c.eta_list[i]).add(1.0 / c.eta_list[i]).add("branch");
    branch_rows(doc, rows[i], prefix, failure);
  }
  if (!c.hysteresis) return;
  std::vector<double> up = c.eta_list;
  std::sort(up.begin(), up.end());
  std::vector<double> down(up.rbegin(), up.rend());
  follow_rows(c, up, c.hysteresis->n0_low, "follow_up", doc, failure);
  follow_rows(c, down, c.hysteresis->n0_high, "follow_down", doc, failure);
}

void run_dynamics(const RunConfig& c, CsvDocument& doc, Failure& failure) {
  doc.columns({"t", "re_alpha", "im_alpha", "n_bar", "abs_alpha_sq", "y", "valid_tb"});
  const FermiSeaSummary summary = fermi_sea_summary(c.params);
  Integrator integrator(initial_state(c.n0), summary, c.params, c.integrator);
  FieldTrajectory traj;
  try {
    integrator.advance_to(c.integrator.t_max);
    traj = integrator.finish();
    if (traj.status == TrajectoryStatus::left_domain) {
      doc.comment("trajectory left the tight-binding domain (n_bar < n_floor)");
    }
    if (traj.attractor) {
      doc.comment("attractor: " + format_double(*traj.attractor) +
                  (traj.converged ? " (converged)" : " (not converged)"));
    }
  } catch (const IntegrationError& e) {
    traj = integrator.trajectory();
    failure.note(std::string(e.what()) + "; retry with dt = " + format_double(e.retry_dt()));
  }
  for (const FieldState& s : traj.states) {
    const std::optional<double> y = y_of(s.n_bar, c.params.u0);
    CsvDocument::Row r;
    r.add(s.t).add(s.alpha.real()).add(s.alpha.imag()).add(s.n_bar).add(std::norm(s.alpha))
        .add(y).add(valid_at(y, c.params));
    doc.append(r);
  }
}

void run_basins(const RunConfig& c, CsvDocument& doc, Failure& failure) {
  doc.columns({"n0", "attractor", "converged", "cluster", "y", "valid_tb", "status"});
  const FermiSeaSummary summary = fermi_sea_summary(c.params);
  const BasinScan scan = basin_scan(c.n0_list, summary, c.params, c.integrator, c.threads);
  std::string reps;
  for (double a : scan.attractors) reps += (reps.empty() ? "" : " ") + format_double(a);
  doc.comment("attractors: " + (reps.empty() ? std::string("none") : reps));
  for (const BasinRow& row : scan.rows) {
    CsvDocument::Row r;
    r.add(row.n0);
    if (!row.error.empty()) {
      failure.note(row.error);
      r.empty().add(false).add(-1).empty().add(false).add("error");
    } else {
      const std::optional<double> y = row.attractor ? y_of(*row.attractor, c.params.u0)
                                                    : std::nullopt;
      r.add(row.attractor).add(row.converged).add(row.cluster).add(y).add(valid_at(y, c.params))
          .add(trajectory_status(row.status, row.converged));
    }
    doc.append(r);
  }
}

void run_stability_check(const RunConfig& c, CsvDocument& doc, Failure& failure) {
  doc.columns({"n_bar", "y", "valid_tb", "trials", "n_lower", "min_delta", "reference_energy",
               "verdict"});
  const MomentumGrid grid(c.params.n_sites);
  const OccupationState sea = build_fermi_sea(c.params.n_atoms, grid);
  std::optional<double> n = c.n_photons;
  if (!n) {
    const auto branches = find_branches(hopping_expectation(sea, grid), c.params, c.solver);
    for (const SteadyStateBranch& b : branches) {
      if (b.valid_tb) {
        n = b.n_bar;
        break;
      }
    }
  }
  if (!n) {
    failure.note("no steady state inside the tight-binding domain to test");
    return;
  }
  const LatticeCoefficients k = gaussian_coefficients(*n, c.params);
  const VariationalReport rep =
      variational_stability_check(sea, grid, k, c.params, c.trials, c.seed);
  CsvDocument::Row r;
  r.add(*n).add(k.y).add(k.y <= c.params.y_max).add(rep.trials_run).add(rep.n_lower)
      .add(rep.min_delta).add(rep.reference_energy)
      .add(rep.n_lower == 0 ? "no_lower_state" : "lower_state_found");
  doc.append(r);
}

void dispatch(const RunConfig& c, CsvDocument& doc, Failure& failure) {
  switch (c.mode) {
    case Mode::coeffs: return run_coeffs(c, doc, failure);
    case Mode::steady: return run_atoms(c, {c.params.n_atoms}, doc, failure);
    case Mode::sweep_atoms: return run_atoms(c, c.n_list, doc, failure);
    case Mode::sweep_pump: return run_pump(c, doc, failure);
    case Mode::dynamics: return run_dynamics(c, doc, failure);
    case Mode::basins: return run_basins(c, doc, failure);
    case Mode::stability_check: return run_stability_check(c, doc, failure);
  }
}

std::string single_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  std::replace(text.begin(), text.end(), '\r', ' ');
  return text;
}

}  // namespace

RunResult run(const RunConfig& config) {
  CsvDocument body;
  Failure failure;
  try {
    dispatch(config, body, failure);
  } catch (const std::exception& e) {
    failure.note(e.what());
  }

  std::string header;
  const auto line = [&header](const std::string& text) { header += "# " + text + '\n'; };
  line("simulate " + std::string(kToolVersion));
  line("mode: " + std::string(to_string(config.mode)));
  line("seed: " + std::to_string(config.seed));
  RunConfig recorded = config;
  recorded.output.clear();
  recorded.threads = 0;
  line("config: " + emit_config(recorded));
  line("units: rates and detunings in recoil frequencies, time in inverse recoil frequencies");
  line(failure.any() ? "status: partial; " + single_line(failure.message) : "status: ok");

  RunResult result;
  result.exit_code = failure.any() ? exit_numerical : exit_ok;
  result.message = failure.message;
  result.csv = header + body.str();
  return result;
}

int run_cli(const CliRequest& request, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    std::ifstream in(request.config_path);
    if (!in) throw ConfigError("--config", "cannot read '" + request.config_path + "'");
    std::stringstream text;
    text << in.rdbuf();
    config = parse_config(text.str(), request.mode);
    if (request.out_path) config.output = *request.out_path;
    if (request.seed) config.seed = *request.seed;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  }

  std::ofstream file;
  if (!config.output.empty()) {
    file.open(config.output, std::ios::out | std::ios::app);
    if (!file) {
      err << "config error: output: cannot write '" << config.output << "'\n";
      return exit_config;
    }
    file.close();
  }

  const RunResult result = run(config);
  if (config.output.empty()) {
    out << result.csv;
  } else {
    file.open(config.output, std::ios::out | std::ios::trunc | std::ios::binary);
    file << result.csv;
    if (!file) {
      err << "error: failed writing '" << config.output << "'\n";
      return exit_numerical;
    }
  }
  if (result.exit_code != exit_ok) err << "numerical failure: " << result.message << '\n';
  return result.exit_code;
}

}  // namespace cavfermi
