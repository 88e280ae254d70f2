#include "cavfermi/params.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cavfermi {

namespace {

constexpr double kHbar = 1.054571817e-34;       // J s
constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void SystemParams::validate() const {
  require(std::isfinite(u0), "u0: must be finite");
  require(std::isfinite(delta_c), "delta_c: must be finite");
  require(std::isfinite(eta) && eta >= 0.0, "eta: must be finite and >= 0");
  require(std::isfinite(kappa) && kappa > 0.0, "kappa: must be > 0");
  require(n_sites >= 1, "n_sites: must be >= 1");
  require(n_atoms >= 0, "n_atoms: must be >= 0");
  require(n_atoms <= n_sites, "n_atoms: must not exceed n_sites (one polarized fermion per site)");
  require(s == 1 || s == -1, "s: must be +1 or -1");
  require(u0 == 0.0 || (u0 > 0.0) == (s > 0), "s: must equal sign(u0) when u0 != 0");
  require(std::isfinite(y_max) && y_max > 0.0, "y_max: must be > 0");
}

double recoil_frequency(const PhysicalParams& physical) {
  if (!(physical.mass > 0.0) || !(physical.wavelength > 0.0)) {
    throw std::invalid_argument("mass and wavelength must be > 0");
  }
  const double q = 2.0 * std::numbers::pi / physical.wavelength;
  return kHbar * q * q / (2.0 * physical.mass);
}

SystemParams rescale(const PhysicalParams& physical) {
  const double rates[] = {physical.g0, physical.delta_a, physical.delta_c, physical.eta,
                          physical.kappa};
  for (double r : rates) {
    if (!std::isfinite(r)) throw std::invalid_argument("physical rates must be finite");
  }
  if (physical.delta_a == 0.0) {
    throw std::invalid_argument("delta_a: zero atomic detuning, dispersive limit undefined");
  }
  const double omega_r = recoil_frequency(physical);

  SystemParams p;
  p.u0 = physical.g0 * physical.g0 / physical.delta_a / omega_r;
  p.delta_c = physical.delta_c / omega_r;
  p.eta = physical.eta / omega_r;
  p.kappa = physical.kappa / omega_r;
  p.s = physical.delta_a > 0.0 ? 1 : -1;
  return p;
}

PhysicalParams potassium40_800nm() {
  PhysicalParams p;
  p.mass = 39.96399848 * kAtomicMassUnit;
  p.wavelength = 800e-9;
  return p;
}

}  // namespace cavfermi
