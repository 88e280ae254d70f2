#include "cavfermi/steadystate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cavfermi/coefficients.hpp"
#include "cavfermi/parallel.hpp"

namespace cavfermi {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

double bisect(const auto& f, double a, double b, double fa) {
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

SteadyStateBranch make_branch(double y, const FermiSeaSummary& summary,
                              const SystemParams& params) {
  SteadyStateBranch b;
  b.y = y;
  b.n_bar = y_to_photons(y, params.u0);
  b.valid_tb = y <= params.y_max;
  b.xi = xi_shift(b.n_bar, summary, params);
  return b;
}

}  // namespace

const char* to_string(Stability stability) {
  switch (stability) {
    case Stability::undetermined: return "undetermined";
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
  }
  return "unknown";
}

ShiftFunctions shift_functions(double y, int s) {
  const double decay = std::exp(-y);
  ShiftFunctions f;
  f.f1 = 1.0 + s * y - s * decay * (1.0 + 0.5 * y);
  f.f2 = s * decay * (1.0 + 0.5 * y - kPi2 / (8.0 * y)) +
         s * (kPi2 * kPi2 / (8.0 * y) - 0.75 * kPi2 - y);
  return f;
}

ShiftBreakdown xi_breakdown(double n_bar, const FermiSeaSummary& summary,
                            const SystemParams& params) {
  if (!(n_bar > 0.0)) throw std::domain_error("xi: photon number must be > 0");
  ShiftBreakdown x;
  if (summary.n_atoms == 0) return x;
  const LatticeCoefficients c = gaussian_coefficients(n_bar, params);
  const double n = summary.n_atoms;
  const double b = n * summary.b_tilde;
  x.h2 = h1_h2_expectations(summary, c, params).h2;
  x.d_h1 = c.d_e * n + c.d_e_hop * b;
  x.n_d_h2 = n_bar * params.u0 * (c.d_j * n + c.d_j_hop * b);
  x.total = x.h2 + x.d_h1 + x.n_d_h2;
  return x;
}

double xi_shift(double n_bar, const FermiSeaSummary& summary, const SystemParams& params) {
  return xi_breakdown(n_bar, summary, params).total;
}

double residual_y(double y, const FermiSeaSummary& summary, const SystemParams& params) {
  const ShiftFunctions f = shift_functions(y, params.s);
  const double shift = 0.5 * params.u0 * summary.n_atoms *
                       (f.f1 + summary.b_tilde * std::exp(-kPi2 / (4.0 * y)) * f.f2);
  const double detuning = params.delta_c - shift;
  return std::abs(params.u0) * params.eta * params.eta * y * y - params.kappa * params.kappa -
         detuning * detuning;
}

double fixed_point_residual(double n_bar, const FermiSeaSummary& summary,
                            const SystemParams& params) {
  const double detuning = params.delta_c - xi_shift(n_bar, summary, params);
  const double lorentzian =
      params.eta * params.eta / (params.kappa * params.kappa + detuning * detuning);
  return (n_bar - lorentzian) / n_bar;
}

std::vector<SteadyStateBranch> find_branches(const FermiSeaSummary& summary,
                                             const SystemParams& params,
                                             const SolverOptions& options) {
  if (params.u0 == 0.0) throw std::domain_error("u0 = 0: no lattice, y undefined");
  if (!(options.y_lo > 0.0) || !(options.y_hi > options.y_lo)) {
    throw std::invalid_argument("solver window: need 0 < y_lo < y_hi");
  }
  if (options.n_scan < 100) throw std::invalid_argument("n_scan: must be >= 100");

  std::vector<SteadyStateBranch> branches;
  if (params.eta == 0.0) return branches;  // n = 0 is the only solution

  auto residual = [&](double y) { return residual_y(y, summary, params); };
  double y_lo = options.y_lo, y_hi = options.y_hi;
  if (summary.n_atoms == 0) {
    while (residual(y_hi) < 0.0) y_hi *= 2.0;
    while (residual(y_lo) > 0.0) y_lo *= 0.5;
  }

  const double ratio = std::log(y_hi / y_lo) / options.n_scan;
  double y_prev = y_lo;
  double r_prev = residual(y_prev);
  std::vector<double> roots;
  if (r_prev == 0.0) roots.push_back(y_prev);
  for (int i = 1; i <= options.n_scan; ++i) {
    const double y = i == options.n_scan ? y_hi : y_lo * std::exp(ratio * i);
    const double r = residual(y);
    if (r == 0.0) {
      roots.push_back(y);
    } else if (r_prev != 0.0 && (r < 0.0) != (r_prev < 0.0)) {
      roots.push_back(bisect(residual, y_prev, y, r_prev));
    }
    y_prev = y;
    r_prev = r;
  }

  for (double y : roots) {
    if (!branches.empty() && std::abs(y - branches.back().y) <= 1e-8 * y) continue;
    branches.push_back(make_branch(y, summary, params));
  }
  return branches;
}

SteadyStateBranch classify_stability(SteadyStateBranch branch, const FermiSeaSummary& summary,
                                     const SystemParams& params, const StabilityOptions& options,
                                     std::span<const SteadyStateBranch> siblings) {
  branch.stability = Stability::undetermined;
  DynamicsOptions dyn = options.dynamics;
  dyn.t_max = options.t_max > 0.0 ? options.t_max : 50.0 / params.kappa;

  const double n_minus = branch.n_bar * (1.0 - options.epsilon);
  if (summary.n_atoms > 0 && n_minus < dyn.n_floor) return branch;

  const double detuning = params.delta_c - exact_shift(branch.n_bar, summary, params);
  const double phase = std::arg(params.eta / Complex(params.kappa, -detuning));

  enum class Outcome { settled, departed, ambiguous };
  struct Run {
    Outcome outcome;
    double attractor;
  };
  auto run = [&](double n0) -> Run {
    FieldState start;
    start.n_bar = n0;
    start.alpha = std::polar(std::sqrt(n0), phase);
    start.alpha_conj = std::conj(start.alpha);
    try {
      const FieldTrajectory tr = integrate_from(start, summary, params, dyn);
      if (tr.status == TrajectoryStatus::left_domain) return {Outcome::departed, 0.0};
      if (tr.attractor) return {Outcome::settled, *tr.attractor};
    } catch (const IntegrationError&) {
    }
    return {Outcome::ambiguous, 0.0};
  };

  const Run up = run(branch.n_bar * (1.0 + options.epsilon));
  const Run down = run(n_minus);

  if (up.outcome == Outcome::departed || down.outcome == Outcome::departed) {
    branch.stability = Stability::unstable;
    return branch;
  }
  if (up.outcome != Outcome::settled || down.outcome != Outcome::settled) return branch;
  if (std::abs(up.attractor - down.attractor) > 1e-2 * std::max(up.attractor, down.attractor)) {
    branch.stability = Stability::unstable;
    return branch;
  }

  const double attractor = 0.5 * (up.attractor + down.attractor);
  if (std::abs(attractor - branch.n_bar) <= options.return_band * branch.n_bar) {
    branch.stability = Stability::stable;
    return branch;
  }
  const double own = std::abs(std::log(attractor / branch.n_bar));
  bool nearest = !siblings.empty();
  for (const SteadyStateBranch& other : siblings) {
    if (other.n_bar == branch.n_bar) continue;
    if (std::abs(std::log(attractor / other.n_bar)) < own) nearest = false;
  }
  branch.stability = nearest ? Stability::stable : Stability::unstable;
  return branch;
}

namespace {

SweepRow solve_point(double parameter, const SystemParams& params, const SweepOptions& options) {
  SweepRow row;
  row.parameter = parameter;
  try {
    params.validate();
    const FermiSeaSummary summary = fermi_sea_summary(params);
    row.branches = find_branches(summary, params, options.solver);
    if (options.classify) {
      const std::vector<SteadyStateBranch> siblings = row.branches;
      for (SteadyStateBranch& b : row.branches) {
        b = classify_stability(b, summary, params, options.stability, siblings);
      }
    }
  } catch (const std::exception& e) {
    row.branches.clear();
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> sweep_atoms(const SystemParams& params, const std::vector<int>& n_list,
                                  const SweepOptions& options) {
  if (n_list.empty()) throw std::invalid_argument("atom list: must not be empty");
  std::vector<SweepRow> rows(n_list.size());
  parallel_for(n_list.size(), options.threads, [&](std::size_t i) {
    SystemParams p = params;
    p.n_atoms = n_list[i];
    rows[i] = solve_point(n_list[i], p, options);
  });
  return rows;
}

std::vector<SweepRow> sweep_pump(const SystemParams& params, const std::vector<double>& eta_list,
                                 const SweepOptions& options) {
  if (eta_list.empty()) throw std::invalid_argument("pump list: must not be empty");
  std::vector<SweepRow> rows(eta_list.size());
  parallel_for(eta_list.size(), options.threads, [&](std::size_t i) {
    SystemParams p = params;
    p.eta = eta_list[i];
    rows[i] = solve_point(eta_list[i], p, options);
  });
  return rows;
}

}  // namespace cavfermi
