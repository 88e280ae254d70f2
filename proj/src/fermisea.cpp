#include "cavfermi/fermisea.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cavfermi {

MomentumGrid::MomentumGrid(int n_sites) : n_sites_(n_sites) {
  if (n_sites < 1) throw std::invalid_argument("n_sites: must be >= 1");
  k_values_.reserve(static_cast<std::size_t>(n_sites));
  for (int j = 0; j < n_sites; ++j) {
    k_values_.push_back(static_cast<double>(2 * j - n_sites) / n_sites);
  }
}

double MomentumGrid::band_cosine(int j) const { return std::cos(k(j) * std::numbers::pi); }

OccupationState::OccupationState(std::vector<int> occupied, int n_sites)
    : occupied_(std::move(occupied)), n_sites_(n_sites) {
  std::sort(occupied_.begin(), occupied_.end());
  if (std::adjacent_find(occupied_.begin(), occupied_.end()) != occupied_.end()) {
    throw std::invalid_argument("occupation: index occupied twice");
  }
  if (!occupied_.empty() && (occupied_.front() < 0 || occupied_.back() >= n_sites)) {
    throw std::invalid_argument("occupation: index outside the grid");
  }
}

bool OccupationState::is_occupied(int j) const {
  return std::binary_search(occupied_.begin(), occupied_.end(), j);
}

OccupationState build_fermi_sea(int n_atoms, const MomentumGrid& grid) {
  const int K = grid.n_sites();
  if (n_atoms < 0 || n_atoms > K) {
    throw std::invalid_argument("n_atoms: exceeds the Pauli capacity of the grid");
  }
  // k_j K = 2j - K is an integer, so |k| ties are detected exactly
  std::vector<int> order(static_cast<std::size_t>(K));
  for (int j = 0; j < K; ++j) order[static_cast<std::size_t>(j)] = j;
  std::sort(order.begin(), order.end(), [K](int a, int b) {
    const int ka = 2 * a - K, kb = 2 * b - K;
    if (std::abs(ka) != std::abs(kb)) return std::abs(ka) < std::abs(kb);
    return ka < kb;
  });
  order.resize(static_cast<std::size_t>(n_atoms));
  return OccupationState(std::move(order), K);
}

FermiSeaSummary hopping_expectation(const OccupationState& state, const MomentumGrid& grid) {
  FermiSeaSummary summary;
  summary.n_atoms = state.n_atoms();
  if (summary.n_atoms == 0) return summary;
  double sum = 0.0;
  for (int j : state.occupied()) sum += grid.band_cosine(j);
  summary.b_tilde = 2.0 * sum / summary.n_atoms;
  return summary;
}

FermiSeaSummary fermi_sea_summary(const SystemParams& params) {
  const MomentumGrid grid(params.n_sites);
  return hopping_expectation(build_fermi_sea(params.n_atoms, grid), grid);
}

AtomicExpectations h1_h2_expectations(const FermiSeaSummary& summary,
                                      const LatticeCoefficients& coeffs,
                                      const SystemParams& params) {
  const double n = summary.n_atoms;
  const double b = n * summary.b_tilde;
  return {coeffs.e_onsite * n + coeffs.e_hop * b,
          params.u0 * (coeffs.j_onsite * n + coeffs.j_hop * b)};
}

AtomicExpectations h1_h2_expectations(const OccupationState& state, const MomentumGrid& grid,
                                      const LatticeCoefficients& coeffs,
                                      const SystemParams& params) {
  return h1_h2_expectations(hopping_expectation(state, grid), coeffs, params);
}

double effective_energy(const FermiSeaSummary& summary, const LatticeCoefficients& coeffs,
                        const SystemParams& params) {
  const double n = summary.n_atoms;
  const double kappa = params.kappa;
  const double eta2 = params.eta * params.eta;
  const double zeta = params.delta_c - params.u0 * coeffs.j_onsite * n;
  const double f = eta2 / kappa * std::atan(zeta / kappa);
  const double hop = coeffs.e_hop + params.u0 * eta2 * coeffs.j_hop / (kappa * kappa + zeta * zeta);
  return coeffs.e_onsite * n + f + hop * n * summary.b_tilde;
}

double effective_energy(const OccupationState& state, const MomentumGrid& grid,
                        const LatticeCoefficients& coeffs, const SystemParams& params) {
  return effective_energy(hopping_expectation(state, grid), coeffs, params);
}

VariationalReport variational_stability_check(const OccupationState& state,
                                              const MomentumGrid& grid,
                                              const LatticeCoefficients& coeffs,
                                              const SystemParams& params, int trials,
                                              std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials: must be >= 1");

  VariationalReport report;
  report.reference_energy = effective_energy(state, grid, coeffs, params);

  std::vector<int> empty;
  for (int j = 0; j < grid.n_sites(); ++j) {
    if (!state.is_occupied(j)) empty.push_back(j);
  }
  if (empty.empty() || state.n_atoms() == 0) return report;

  const double tolerance = 1e-12 * std::max(1.0, std::abs(report.reference_energy));
  report.min_delta = std::numeric_limits<double>::infinity();

  const auto& occupied = state.occupied();
  for (int trial = 0; trial < trials; ++trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial)};
    std::mt19937_64 rng(seq);
    const auto from = static_cast<std::size_t>(rng() % occupied.size());
    const auto to = static_cast<std::size_t>(rng() % empty.size());

    std::vector<int> moved = occupied;
    moved[from] = empty[to];
    const double delta =
        effective_energy(OccupationState(std::move(moved), grid.n_sites()), grid, coeffs, params) -
        report.reference_energy;

    ++report.trials_run;
    if (delta < -tolerance) ++report.n_lower;
    report.min_delta = std::min(report.min_delta, delta);
  }
  return report;
}

}  // namespace cavfermi
