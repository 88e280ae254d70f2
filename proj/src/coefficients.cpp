#include "cavfermi/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cavfermi {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

}  // namespace

GaussianForms gaussian_forms(double y, int s) {
  const double inv_y = 1.0 / y;
  const double gauss = std::exp(-kPi2 / (4.0 * y));
  const double decay = std::exp(-y);

  GaussianForms g{};
  g.e_onsite = inv_y;
  // 1 - e^{-y} cancels for small y
  g.j_onsite = s > 0 ? -0.5 * std::expm1(-y) : 0.5 * (1.0 + decay);
  g.e_hop = -0.5 * inv_y * inv_y * gauss * (2.0 * y + kPi2);
  g.j_hop = 0.5 * s * gauss * decay;

  g.de_dy = -inv_y * inv_y;
  g.dj_dy = 0.5 * s * decay;
  g.de_hop_dy = -gauss * inv_y * inv_y *
                (kPi2 * kPi2 / 8.0 * inv_y * inv_y - 0.75 * kPi2 * inv_y - 1.0);
  g.dj_hop_dy = g.j_hop * (kPi2 / 4.0 * inv_y * inv_y - 1.0);
  return g;
}

double photons_to_y(double n_photons, double u0) {
  if (!(n_photons > 0.0)) throw std::domain_error("photon number must be > 0");
  if (u0 == 0.0) throw std::domain_error("u0 = 0: no lattice");
  return 1.0 / std::sqrt(std::abs(u0) * n_photons);
}

double y_to_photons(double y, double u0) { return 1.0 / (std::abs(u0) * y * y); }

LatticeCoefficients gaussian_coefficients(double n_photons, const SystemParams& params) {
  const double y = photons_to_y(n_photons, params.u0);
  const GaussianForms g = gaussian_forms(y, params.s);
  const double dy_dn = -y / (2.0 * n_photons);

  LatticeCoefficients c;
  c.y = y;
  c.e_onsite = g.e_onsite;
  c.j_onsite = g.j_onsite;
  c.e_hop = g.e_hop;
  c.j_hop = g.j_hop;
  c.d_e = g.de_dy * dy_dn;
  c.d_j = g.dj_dy * dy_dn;
  c.d_e_hop = g.de_hop_dy * dy_dn;
  c.d_j_hop = g.dj_hop_dy * dy_dn;
  return c;
}

LatticeCoefficients free_lattice_limit() {
  LatticeCoefficients c;
  c.y = std::numeric_limits<double>::infinity();
  c.j_onsite = 0.5;
  return c;
}

LatticeCoefficients coefficients_or_free_limit(double n_photons, const SystemParams& params) {
  if (n_photons > 0.0) return gaussian_coefficients(n_photons, params);
  return free_lattice_limit();
}

double coefficient_derivatives_check(double n_photons, const SystemParams& params, double h) {
  const LatticeCoefficients c = gaussian_coefficients(n_photons, params);
  const LatticeCoefficients up = gaussian_coefficients(n_photons + h, params);
  const LatticeCoefficients down = gaussian_coefficients(n_photons - h, params);

  auto rel = [h](double analytic, double plus, double minus) {
    const double fd = (plus - minus) / (2.0 * h);
    const double scale = std::max(std::abs(analytic), std::numeric_limits<double>::min());
    return std::abs(analytic - fd) / scale;
  };
  return std::max({rel(c.d_e, up.e_onsite, down.e_onsite),
                   rel(c.d_j, up.j_onsite, down.j_onsite),
                   rel(c.d_e_hop, up.e_hop, down.e_hop),
                   rel(c.d_j_hop, up.j_hop, down.j_hop)});
}

double neighbour_suppression(int ell, double y) {
  const double l2 = static_cast<double>(ell) * ell;
  return std::exp(-(l2 - 1.0) * kPi2 / (4.0 * y));
}

}  // namespace cavfermi
