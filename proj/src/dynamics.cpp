#include "cavfermi/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "cavfermi/coefficients.hpp"
#include "cavfermi/parallel.hpp"
#include "cavfermi/steadystate.hpp"

namespace cavfermi {

namespace {

constexpr Complex kI{0.0, 1.0};

double h1_at(double n, const FermiSeaSummary& summary, const SystemParams& params) {
  return h1_h2_expectations(summary, coefficients_or_free_limit(n, params), params).h1;
}

// H2 carries its own (n - 1) shift from normal ordering.
double h2_at(double n, const FermiSeaSummary& summary, const SystemParams& params) {
  return h1_h2_expectations(summary, coefficients_or_free_limit(n - 1.0, params), params).h2;
}

FieldDrift field_drift(const FieldState& s, double shift, const SystemParams& params) {
  const double detuning = params.delta_c - shift;
  FieldDrift d;
  d.d_alpha = kI * detuning * s.alpha - params.kappa * s.alpha + params.eta;
  d.d_alpha_conj = -kI * detuning * s.alpha_conj - params.kappa * s.alpha_conj + params.eta;
  d.d_n = params.eta * (s.alpha + s.alpha_conj).real() - 2.0 * params.kappa * s.n_bar;
  return d;
}

FieldState axpy(const FieldState& s, double h, const FieldDrift& d) {
  FieldState out = s;
  out.alpha += h * d.d_alpha;
  out.alpha_conj += h * d.d_alpha_conj;
  out.n_bar += h * d.d_n;
  return out;
}

bool finite(const FieldState& s) {
  return std::isfinite(s.alpha.real()) && std::isfinite(s.alpha.imag()) &&
         std::isfinite(s.alpha_conj.real()) && std::isfinite(s.alpha_conj.imag()) &&
         std::isfinite(s.n_bar);
}

}  // namespace

FieldState initial_state(double n0) {
  FieldState s;
  s.alpha = s.alpha_conj = Complex(std::sqrt(n0), 0.0);
  s.n_bar = n0;
  return s;
}

const char* to_string(TrajectoryStatus status) {
  switch (status) {
    case TrajectoryStatus::running: return "running";
    case TrajectoryStatus::finished: return "finished";
    case TrajectoryStatus::left_domain: return "left_domain";
  }
  return "unknown";
}

double exact_shift(double n_bar, const FermiSeaSummary& summary, const SystemParams& params) {
  if (summary.n_atoms == 0) return 0.0;
  const double h1_n = h1_at(n_bar, summary, params);
  const double h1_prev = h1_at(n_bar - 1.0, summary, params);
  const double h2_n = h2_at(n_bar, summary, params);
  const double h2_prev = h2_at(n_bar - 1.0, summary, params);
  return (h1_n - h1_prev) + (h2_n - h2_prev) * n_bar + h2_n;
}

FieldDrift drift(const FieldState& state, const FermiSeaSummary& summary,
                 const SystemParams& params) {
  return field_drift(state, exact_shift(state.n_bar, summary, params), params);
}

FieldDrift drift_derivative_form(const FieldState& state, const FermiSeaSummary& summary,
                                 const SystemParams& params) {
  const double shift = summary.n_atoms == 0 ? 0.0 : xi_shift(state.n_bar, summary, params);
  return field_drift(state, shift, params);
}

Integrator::Integrator(FieldState start, FermiSeaSummary summary, SystemParams params,
                       DynamicsOptions options)
    : state_(start), summary_(summary), params_(params), options_(options) {
  if (!(options_.dt > 0.0)) throw std::invalid_argument("dt: must be > 0");
  if (options_.stride < 1) throw std::invalid_argument("stride: must be >= 1");
  if (!(options_.window > 0.0)) throw std::invalid_argument("window: must be > 0");
  probe_every_ = std::max(1, static_cast<int>(std::lround(0.1 / options_.dt)));
  window_size_ = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::llround(options_.window / (probe_every_ * options_.dt))));
  window_.assign(window_size_, 0.0);
  last_in_domain_ = state_;

  trajectory_.status = TrajectoryStatus::running;
  record();
  probe();
  if (summary_.n_atoms > 0 && state_.n_bar < options_.n_floor) {
    trajectory_.status = TrajectoryStatus::left_domain;
  }
}

void Integrator::record() { trajectory_.states.push_back(state_); }

void Integrator::probe() {
  window_[window_next_] = state_.n_bar;
  window_next_ = (window_next_ + 1) % window_size_;
  window_filled_ = std::min(window_filled_ + 1, window_size_);
}

double Integrator::window_spread() const {
  if (window_filled_ < window_size_) return std::numeric_limits<double>::infinity();
  const auto [lo, hi] = std::minmax_element(window_.begin(), window_.end());
  double mean = 0.0;
  for (double v : window_) mean += v;
  mean /= static_cast<double>(window_.size());
  if (!(mean > 0.0)) return std::numeric_limits<double>::infinity();
  return (*hi - *lo) / mean;
}

void Integrator::step() {
  const double h = options_.dt;
  const FieldDrift k1 = drift(state_, summary_, params_);
  const FieldDrift k2 = drift(axpy(state_, 0.5 * h, k1), summary_, params_);
  const FieldDrift k3 = drift(axpy(state_, 0.5 * h, k2), summary_, params_);
  const FieldDrift k4 = drift(axpy(state_, h, k3), summary_, params_);

  FieldState next = state_;
  next.alpha += h / 6.0 * (k1.d_alpha + 2.0 * k2.d_alpha + 2.0 * k3.d_alpha + k4.d_alpha);
  next.alpha_conj += h / 6.0 * (k1.d_alpha_conj + 2.0 * k2.d_alpha_conj +
                                2.0 * k3.d_alpha_conj + k4.d_alpha_conj);
  next.n_bar += h / 6.0 * (k1.d_n + 2.0 * k2.d_n + 2.0 * k3.d_n + k4.d_n);
  ++step_index_;
  next.t = trajectory_.states.front().t + static_cast<double>(step_index_) * h;

  if (!finite(next)) {
    throw IntegrationError("non-finite field state at t = " + std::to_string(next.t), state_,
                           0.5 * h);
  }
  state_ = next;
}

TrajectoryStatus Integrator::advance_to(double t_end) {
  if (trajectory_.status != TrajectoryStatus::running) return trajectory_.status;
  const double t_start = trajectory_.states.front().t;
  const auto target = static_cast<long long>(std::llround((t_end - t_start) / options_.dt));

  while (step_index_ < target) {
    step();
    if (summary_.n_atoms > 0 && state_.n_bar < options_.n_floor) {
      trajectory_.status = TrajectoryStatus::left_domain;
      record();
      return trajectory_.status;
    }
    last_in_domain_ = state_;
    if (step_index_ % options_.stride == 0) record();
    if (step_index_ % probe_every_ == 0) {
      probe();
      if (options_.early_stop && window_spread() < options_.stop_rtol) {
        trajectory_.status = TrajectoryStatus::finished;
        break;
      }
    }
  }
  return trajectory_.status;
}

FieldTrajectory Integrator::finish() {
  if (trajectory_.states.back().t != state_.t) record();
  if (trajectory_.status == TrajectoryStatus::running) {
    trajectory_.status = TrajectoryStatus::finished;
  }
  if (trajectory_.status == TrajectoryStatus::finished &&
      window_spread() < options_.converge_rtol) {
    trajectory_.converged = true;
    trajectory_.attractor = state_.n_bar;
  }
  return std::move(trajectory_);
}

FieldTrajectory integrate_from(const FieldState& start, const FermiSeaSummary& summary,
                               const SystemParams& params, const DynamicsOptions& options) {
  Integrator integrator(start, summary, params, options);
  integrator.advance_to(start.t + options.t_max);
  return integrator.finish();
}

FieldTrajectory integrate(double n0, const FermiSeaSummary& summary, const SystemParams& params,
                          const DynamicsOptions& options) {
  if (!(n0 > 0.0)) throw std::invalid_argument("n0: must be > 0");
  return integrate_from(initial_state(n0), summary, params, options);
}

BasinScan basin_scan(const std::vector<double>& n0_list, const FermiSeaSummary& summary,
                     const SystemParams& params, const DynamicsOptions& options, int threads) {
  if (n0_list.empty()) throw std::invalid_argument("n0 list: must not be empty");
  BasinScan scan;
  scan.rows.resize(n0_list.size());
  parallel_for(n0_list.size(), threads, [&](std::size_t i) {
    BasinRow& row = scan.rows[i];
    row.n0 = n0_list[i];
    try {
      const FieldTrajectory tr = integrate(row.n0, summary, params, options);
      row.attractor = tr.attractor;
      row.converged = tr.converged;
      row.status = tr.status;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });

  std::vector<double> values;
  for (const BasinRow& row : scan.rows) {
    if (row.attractor) values.push_back(*row.attractor);
  }
  std::sort(values.begin(), values.end());
  std::vector<double> cluster_lo;
  for (double v : values) {
    if (cluster_lo.empty() || v > cluster_lo.back() * 1.01) cluster_lo.push_back(v);
  }
  std::vector<std::vector<double>> members(cluster_lo.size());
  for (BasinRow& row : scan.rows) {
    if (!row.attractor) continue;
    auto it = std::upper_bound(cluster_lo.begin(), cluster_lo.end(), *row.attractor);
    row.cluster = static_cast<int>(it - cluster_lo.begin()) - 1;
  }
  for (double v : values) {
    auto it = std::upper_bound(cluster_lo.begin(), cluster_lo.end(), v);
    members[static_cast<std::size_t>(it - cluster_lo.begin() - 1)].push_back(v);
  }
  for (const auto& m : members) {
    // median member keeps the representative independent of outliers at the edge
    scan.attractors.push_back(m[m.size() / 2]);
  }
  return scan;
}

std::vector<HysteresisPoint> follow_pump(const std::vector<double>& eta_list, double n0,
                                         const FermiSeaSummary& summary, SystemParams params,
                                         const DynamicsOptions& options) {
  std::vector<HysteresisPoint> out;
  FieldState start = initial_state(n0);
  for (double eta : eta_list) {
    params.eta = eta;
    start.t = 0.0;
    Integrator integrator(start, summary, params, options);
    integrator.advance_to(options.t_max);
    start = integrator.last_in_domain();
    const FieldTrajectory tr = integrator.finish();
    out.push_back({eta, tr.attractor, tr.converged, tr.status});
  }
  return out;
}

}  // namespace cavfermi
