#pragma once

#include <string>

namespace cavfermi {

/// Dimensionless control parameters. Energies and rates are in units of the
/// recoil frequency, times in units of its inverse.
struct SystemParams {
  double u0 = 0.0;       ///< light shift per photon; sign follows the atomic detuning
  double delta_c = 0.0;  ///< cavity-pump detuning
  double eta = 0.0;      ///< pump amplitude
  double kappa = 1.0;    ///< cavity decay rate
  int n_atoms = 0;
  int n_sites = 1;
  int s = 1;             ///< sign of the atomic detuning, +1 or -1
  double y_max = 0.5;    ///< tight-binding validity threshold on y

  bool operator==(const SystemParams&) const = default;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Laboratory parameters. Frequencies in rad/s, SI units otherwise.
struct PhysicalParams {
  double mass = 0.0;
  double wavelength = 0.0;
  double g0 = 0.0;
  double delta_a = 0.0;
  double delta_c = 0.0;
  double eta = 0.0;
  double kappa = 0.0;
};

/// hbar q^2 / 2m with q = 2 pi / wavelength, in rad/s.
double recoil_frequency(const PhysicalParams& physical);

/// Maps laboratory parameters onto the dimensionless model. Atom and site
/// counts are not part of the physical input and stay at their defaults.
SystemParams rescale(const PhysicalParams& physical);

/// 40K atoms in an 800 nm standing wave.
PhysicalParams potassium40_800nm();

}  // namespace cavfermi
