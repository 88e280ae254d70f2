#pragma once

#include "cavfermi/params.hpp"

namespace cavfermi {

/// Tight-binding couplings from orthogonalized Gaussian Wannier functions at a
/// given photon number, plus their derivatives with respect to photon number.
struct LatticeCoefficients {
  double y = 0.0;  ///< squared Gaussian width, (|u0| n)^(-1/2)

  double e_onsite = 0.0;  ///< kinetic, on-site
  double j_onsite = 0.0;  ///< cos^2 overlap, on-site
  double e_hop = 0.0;     ///< kinetic, nearest neighbour
  double j_hop = 0.0;     ///< cos^2 overlap, nearest neighbour

  double d_e = 0.0;
  double d_j = 0.0;
  double d_e_hop = 0.0;
  double d_j_hop = 0.0;
};

/// Closed forms as functions of y, with their y-derivatives.
struct GaussianForms {
  double e_onsite, j_onsite, e_hop, j_hop;
  double de_dy, dj_dy, de_hop_dy, dj_hop_dy;
};

GaussianForms gaussian_forms(double y, int s);

/// y = (|u0| n)^(-1/2). Throws std::domain_error unless n > 0 and u0 != 0.
double photons_to_y(double n_photons, double u0);

/// n = 1 / (|u0| y^2).
double y_to_photons(double y, double u0);

/// Throws std::domain_error for n_photons <= 0 or u0 == 0.
LatticeCoefficients gaussian_coefficients(double n_photons, const SystemParams& params);

/// Couplings of a vanishing lattice (y -> infinity): E = E1 = J1 = 0, J = 1/2.
LatticeCoefficients free_lattice_limit();

/// gaussian_coefficients for n_photons > 0, the free-lattice limit otherwise.
/// The closed forms approach that limit continuously as n -> 0+.
LatticeCoefficients coefficients_or_free_limit(double n_photons, const SystemParams& params);

/// Largest relative deviation between the analytic photon-number derivatives
/// and central differences of the closed forms with step h.
double coefficient_derivatives_check(double n_photons, const SystemParams& params, double h);

/// |J_ell / J_1| = exp(-(ell^2 - 1) pi^2 / 4y).
double neighbour_suppression(int ell, double y);

}  // namespace cavfermi
