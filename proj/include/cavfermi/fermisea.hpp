#pragma once

#include <cstdint>
#include <vector>

#include "cavfermi/coefficients.hpp"
#include "cavfermi/params.hpp"

namespace cavfermi {

/// Quasi-momenta k_j = -1 + 2j/K, j = 0..K-1, in units of the zone edge.
class MomentumGrid {
 public:
  explicit MomentumGrid(int n_sites);

  int n_sites() const { return n_sites_; }
  double k(int j) const { return k_values_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& k_values() const { return k_values_; }

  /// cos(k_j pi).
  double band_cosine(int j) const;

 private:
  int n_sites_;
  std::vector<double> k_values_;
};

/// A set of occupied grid indices, each at most once.
class OccupationState {
 public:
  OccupationState(std::vector<int> occupied, int n_sites);

  const std::vector<int>& occupied() const { return occupied_; }
  int n_atoms() const { return static_cast<int>(occupied_.size()); }
  int n_sites() const { return n_sites_; }
  bool is_occupied(int j) const;

 private:
  std::vector<int> occupied_;  // sorted ascending
  int n_sites_;
};

struct FermiSeaSummary {
  double b_tilde = 0.0;  ///< (2/N) sum_i cos(k_i pi); 0 for the empty gas
  int n_atoms = 0;
};

/// Fills the n_atoms smallest-|k| states. Of a +-k pair, -k is filled first.
/// Throws std::invalid_argument when n_atoms exceeds the number of sites.
OccupationState build_fermi_sea(int n_atoms, const MomentumGrid& grid);

FermiSeaSummary hopping_expectation(const OccupationState& state, const MomentumGrid& grid);

/// Convenience: summary of the ground-state Fermi sea for params.n_atoms.
FermiSeaSummary fermi_sea_summary(const SystemParams& params);

struct AtomicExpectations {
  double h1 = 0.0;  ///< E N + E1 N B
  double h2 = 0.0;  ///< U0 (J N + J1 N B)
};

/// The coefficients are taken as given; shifting their photon argument is
/// the caller's business.
AtomicExpectations h1_h2_expectations(const FermiSeaSummary& summary,
                                      const LatticeCoefficients& coeffs,
                                      const SystemParams& params);
AtomicExpectations h1_h2_expectations(const OccupationState& state, const MomentumGrid& grid,
                                      const LatticeCoefficients& coeffs,
                                      const SystemParams& params);

/// Effective atomic energy after eliminating the cavity field, with N and B
/// replaced by their values in the given state. zeta uses the on-site J.
double effective_energy(const FermiSeaSummary& summary, const LatticeCoefficients& coeffs,
                        const SystemParams& params);
double effective_energy(const OccupationState& state, const MomentumGrid& grid,
                        const LatticeCoefficients& coeffs, const SystemParams& params);

struct VariationalReport {
  int trials_run = 0;
  int n_lower = 0;          ///< perturbed states strictly below the reference
  double min_delta = 0.0;   ///< smallest E(perturbed) - E(reference) seen
  double reference_energy = 0.0;
};

/// Moves one random occupied fermion to a random empty state, `trials` times,
/// and compares effective energies. Each trial draws from its own stream
/// seeded by (seed, trial index), so the report does not depend on order.
/// Differences within 1e-12 of the energy scale count as degenerate.
VariationalReport variational_stability_check(const OccupationState& state,
                                              const MomentumGrid& grid,
                                              const LatticeCoefficients& coeffs,
                                              const SystemParams& params, int trials,
                                              std::uint64_t seed);

}  // namespace cavfermi
