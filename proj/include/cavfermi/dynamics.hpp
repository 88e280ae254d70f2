#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cavfermi/fermisea.hpp"
#include "cavfermi/params.hpp"

namespace cavfermi {

using Complex = std::complex<double>;

/// c-number field variables. alpha_conj is evolved on its own and is not
/// forced to equal conj(alpha); n_bar is likewise independent of |alpha|^2.
struct FieldState {
  Complex alpha{};
  Complex alpha_conj{};
  double n_bar = 0.0;
  double t = 0.0;
};

/// alpha = alpha* = sqrt(n0), n = n0.
FieldState initial_state(double n0);

struct FieldDrift {
  Complex d_alpha{};
  Complex d_alpha_conj{};
  double d_n = 0.0;
};

/// Frequency shift seen by the field with the photon-number commutators taken
/// exactly: [H1(n) - H1(n-1)] + [H2(n) - H2(n-1)] n + H2(n), where H2(n) uses
/// couplings at n-1. Photon arguments <= 0 use the free-lattice limit.
double exact_shift(double n_bar, const FermiSeaSummary& summary, const SystemParams& params);

/// Truncated Heisenberg equations for (alpha, alpha*, n) with exact commutators.
FieldDrift drift(const FieldState& state, const FermiSeaSummary& summary,
                 const SystemParams& params);

/// Same equations with commutators replaced by photon-number derivatives,
/// i.e. the shift is xi_shift(n). Comparison path only.
FieldDrift drift_derivative_form(const FieldState& state, const FermiSeaSummary& summary,
                                 const SystemParams& params);

struct DynamicsOptions {
  double dt = 1e-3;
  double t_max = 200.0;
  int stride = 100;              ///< record every stride-th step
  double n_floor = 1.05;         ///< halt below this photon number when atoms are present
  double window = 10.0;          ///< trailing window for convergence detection
  double converge_rtol = 1e-3;   ///< spread/mean below this marks the run converged
  double stop_rtol = 1e-11;      ///< spread/mean below this stops the run early
  bool early_stop = true;

  bool operator==(const DynamicsOptions&) const = default;
};

enum class TrajectoryStatus { running, finished, left_domain };

const char* to_string(TrajectoryStatus status);

struct FieldTrajectory {
  std::vector<FieldState> states;  ///< strictly increasing t
  std::optional<double> attractor;
  bool converged = false;
  TrajectoryStatus status = TrajectoryStatus::running;

  const FieldState& final_state() const { return states.back(); }
};

/// Thrown when the step produces a non-finite state.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, FieldState last_finite, double retry_dt)
      : std::runtime_error(what), last_finite_(last_finite), retry_dt_(retry_dt) {}
  const FieldState& last_finite() const { return last_finite_; }
  double retry_dt() const { return retry_dt_; }

 private:
  FieldState last_finite_;
  double retry_dt_;
};

/// Fixed-step classical RK4. Time is step_index * dt, so stopping at t1 and
/// continuing to t2 reproduces a direct run to t2 bit for bit.
class Integrator {
 public:
  Integrator(FieldState start, FermiSeaSummary summary, SystemParams params,
             DynamicsOptions options);

  /// Steps until t >= t_end (rounded to whole steps), the floor is crossed,
  /// or the early-stop criterion fires.
  TrajectoryStatus advance_to(double t_end);

  /// Records the final state and decides convergence. Call once, last.
  FieldTrajectory finish();

  const FieldTrajectory& trajectory() const { return trajectory_; }
  const FieldState& state() const { return state_; }
  /// Latest state at or above the floor; equals state() unless the run left the domain.
  const FieldState& last_in_domain() const { return last_in_domain_; }

 private:
  void step();
  void record();
  void probe();
  double window_spread() const;

  FieldState state_;
  FieldState last_in_domain_;
  FermiSeaSummary summary_;
  SystemParams params_;
  DynamicsOptions options_;
  long long step_index_ = 0;
  int probe_every_ = 1;
  std::size_t window_size_ = 1;
  std::vector<double> window_;  // ring buffer of probed n_bar
  std::size_t window_next_ = 0;
  std::size_t window_filled_ = 0;
  FieldTrajectory trajectory_;
};

/// Integrates from the real initial condition alpha = alpha* = sqrt(n0).
FieldTrajectory integrate(double n0, const FermiSeaSummary& summary, const SystemParams& params,
                          const DynamicsOptions& options);

FieldTrajectory integrate_from(const FieldState& start, const FermiSeaSummary& summary,
                               const SystemParams& params, const DynamicsOptions& options);

struct BasinRow {
  double n0 = 0.0;
  std::optional<double> attractor;
  bool converged = false;
  TrajectoryStatus status = TrajectoryStatus::finished;
  int cluster = -1;  ///< index into BasinScan::attractors, -1 when none
  std::string error;
};

struct BasinScan {
  std::vector<BasinRow> rows;       ///< input order
  std::vector<double> attractors;   ///< cluster representatives, ascending
};

/// Attractors within 1% of each other share a cluster.
BasinScan basin_scan(const std::vector<double>& n0_list, const FermiSeaSummary& summary,
                     const SystemParams& params, const DynamicsOptions& options,
                     int threads = 0);

struct HysteresisPoint {
  double eta = 0.0;
  std::optional<double> attractor;  ///< empty when the field fell below the floor
  bool converged = false;
  TrajectoryStatus status = TrajectoryStatus::finished;
};

/// Follows the field through a pump sweep: every point starts from the final
/// in-domain state of the previous one. eta_list is visited in order.
std::vector<HysteresisPoint> follow_pump(const std::vector<double>& eta_list, double n0,
                                         const FermiSeaSummary& summary, SystemParams params,
                                         const DynamicsOptions& options);

}  // namespace cavfermi
