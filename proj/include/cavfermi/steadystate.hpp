#pragma once

#include <span>
#include <string>
#include <vector>

#include "cavfermi/dynamics.hpp"
#include "cavfermi/fermisea.hpp"
#include "cavfermi/params.hpp"

namespace cavfermi {

enum class Stability { undetermined, stable, unstable };

const char* to_string(Stability stability);

/// A self-consistent photon number.
struct SteadyStateBranch {
  double n_bar = 0.0;
  double y = 0.0;
  Stability stability = Stability::undetermined;
  bool valid_tb = false;  ///< y <= y_max
  double xi = 0.0;        ///< cavity shift at the solution
};

struct ShiftFunctions {
  double f1 = 0.0;
  double f2 = 0.0;
};

/// f1 = 1 + s y - s e^{-y}(1 + y/2)
/// f2 = s e^{-y}(1 + y/2 - pi^2/8y) + s (pi^4/8y - 6 pi^2/8 - y)
/// The factor s on the second part of f2 comes from dE1/dn, which scales
/// with |u0| = s u0 just like the s y term of f1.
ShiftFunctions shift_functions(double y, int s);

struct ShiftBreakdown {
  double h2 = 0.0;      ///< H2 at n
  double d_h1 = 0.0;    ///< dH1/dn
  double n_d_h2 = 0.0;  ///< n dH2/dn
  double total = 0.0;
};

/// Shift of the cavity resonance with commutators replaced by photon-number
/// derivatives, everything at n: H2 + dH1 + n dH2. Equals
/// (u0 N / 2)(f1 + B e^{-pi^2/4y} f2). Throws std::domain_error for n <= 0.
ShiftBreakdown xi_breakdown(double n_bar, const FermiSeaSummary& summary,
                            const SystemParams& params);
double xi_shift(double n_bar, const FermiSeaSummary& summary, const SystemParams& params);

/// |u0| eta^2 y^2 - kappa^2 - (delta_c - (u0 N/2)(f1 + B e^{-pi^2/4y} f2))^2.
/// Zero exactly when n = 1/(|u0| y^2) solves the Lorentzian fixed point.
double residual_y(double y, const FermiSeaSummary& summary, const SystemParams& params);

/// (n - eta^2 / (kappa^2 + (delta_c - xi(n))^2)) / n.
double fixed_point_residual(double n_bar, const FermiSeaSummary& summary,
                            const SystemParams& params);

struct SolverOptions {
  double y_lo = 1e-3;
  double y_hi = 1.0;
  int n_scan = 2000;

  bool operator==(const SolverOptions&) const = default;
};

/// Brackets every sign change of residual_y on a log grid over [y_lo, y_hi]
/// and bisects each to machine precision. Branches come out in ascending y,
/// i.e. descending n. For N = 0 the window is widened until it brackets the
/// single empty-cavity root. Throws std::domain_error if u0 == 0.
std::vector<SteadyStateBranch> find_branches(const FermiSeaSummary& summary,
                                             const SystemParams& params,
                                             const SolverOptions& options = {});

struct StabilityOptions {
  double epsilon = 1e-2;
  double t_max = 0.0;  ///< <= 0 means 50 / kappa
  double return_band = 1e-2;
  DynamicsOptions dynamics{};

  bool operator==(const StabilityOptions&) const = default;
};

/// Perturb-and-integrate. Both runs start at n (1 +- epsilon) with the field
/// phase of the steady state. Stable when both settle on one attractor that
/// lies within return_band of the branch, or (if siblings are given) closer
/// to this branch than to any sibling. Unstable when the runs split, leave the
/// tight-binding domain, or settle nearer another branch. Otherwise
/// undetermined; a branch below the domain floor is always undetermined.
SteadyStateBranch classify_stability(SteadyStateBranch branch, const FermiSeaSummary& summary,
                                     const SystemParams& params,
                                     const StabilityOptions& options = {},
                                     std::span<const SteadyStateBranch> siblings = {});

struct SweepOptions {
  SolverOptions solver{};
  bool classify = true;
  StabilityOptions stability{};
  int threads = 0;
};

struct SweepRow {
  double parameter = 0.0;
  std::vector<SteadyStateBranch> branches;
  std::string error;  ///< non-empty for a failed point
};

/// One row per atom number, in input order.
std::vector<SweepRow> sweep_atoms(const SystemParams& params, const std::vector<int>& n_list,
                                  const SweepOptions& options = {});

/// One row per pump amplitude, in input order.
std::vector<SweepRow> sweep_pump(const SystemParams& params, const std::vector<double>& eta_list,
                                 const SweepOptions& options = {});

}  // namespace cavfermi
