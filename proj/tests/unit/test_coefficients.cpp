#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cavfermi/coefficients.hpp"

using namespace cavfermi;

namespace {

constexpr double kPi = std::numbers::pi;

SystemParams lattice(double u0) {
  SystemParams p;
  p.u0 = u0;
  p.s = u0 < 0.0 ? -1 : 1;
  p.n_sites = 50;
  return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

/// Composite Simpson over [x0 - 30 sqrt(y) - 2 pi, x0 + 30 sqrt(y) + 2 pi].
template <typename F>
double simpson(F&& f, double lo, double hi, int n = 20000) {
  const double h = (hi - lo) / n;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return sum * h / 3.0;
}

/// Raw Gaussian of squared width y centred at the potential minimum for sign s.
struct Gaussian {
  double y;
  double centre;
  double operator()(double x) const {
    const double d = x - centre;
    return std::pow(kPi * y, -0.25) * std::exp(-d * d / (2.0 * y));
  }
};

// Arbitrary-precision evaluations (40 digits, rounded) of the closed forms and
// of their photon-number derivatives.
struct Reference {
  double n, u0;
  std::array<double, 4> value;  // E, J, E1, J1
  std::array<double, 4> deriv;
};

constexpr Reference kReference[] = {
    {1, 10, {3.162277660168379332, 0.13555329294498769901, -0.021459281062909193835,
             0.00014893772019866109792},
     {1.581138830084189666, -0.057624084002099754176, 0.06290605221301626665,
      -0.00055750215598017692872}},
    {3.7, 1, {1.9235384061671345214, 0.20270263896932844298, -0.17528632965326253716,
              0.0025820717322996141617},
     {0.25993762245501816608, -0.020886153834719981049, 0.067306372260007052594,
      -0.0014746649690288007581}},
    {42, -1, {6.480740698407860231, 0.92850600350799644635, -0.000024281033585901691399,
              -4.8678067854847894811e-8},
     {0.077151674981045955131, 0.00078714180738275904077, 4.0528823235491239946e-6,
      9.177139011117530409e-9}},
    {250, 0.62, {12.44989959798873233, 0.038590393647837274893, -3.5445930114542072092e-11,
                 2.1039703911074633776e-14},
     {0.02489979919597746466, -0.000074122622872670064359, 2.0370713586407880495e-12,
      -1.2892530518433836502e-15}},
    {1000, -1, {31.62277660168379332, 0.98443599717003771347, -6.4528354697151292239e-31,
                -6.2942374036258655613e-35},
     {0.01581138830084189666, 7.6596056581610124613e-6, 2.453124163653856912e-32,
      2.4545779539250751399e-36}},
};

}  // namespace

TEST_CASE("closed forms at y = 1") {
  const GaussianForms g = gaussian_forms(1.0, 1);
  CHECK(g.e_onsite == 1.0);
  // 40-digit values
  CHECK(rel(g.j_onsite, 0.316060279414278839) < 1e-15);
  CHECK(rel(g.e_hop, -0.503300737238696996) < 1e-14);
  CHECK(rel(g.j_hop, 0.0155990029406164432) < 1e-14);
  // the values usually quoted to five figures agree to that many figures
  CHECK(g.j_onsite == doctest::Approx(0.31606).epsilon(1e-4));
  CHECK(g.e_hop == doctest::Approx(-0.50333).epsilon(1e-4));
  CHECK(g.j_hop == doctest::Approx(0.015597).epsilon(2e-4));
}

TEST_CASE("coefficients and derivatives against high-precision reference") {
  for (const Reference& r : kReference) {
    CAPTURE(r.n);
    CAPTURE(r.u0);
    const LatticeCoefficients c = gaussian_coefficients(r.n, lattice(r.u0));
    const double got[] = {c.e_onsite, c.j_onsite, c.e_hop, c.j_hop};
    const double dgot[] = {c.d_e, c.d_j, c.d_e_hop, c.d_j_hop};
    for (int i = 0; i < 4; ++i) {
      CAPTURE(i);
      CHECK(rel(got[i], r.value[i]) < 1e-13);
      CHECK(rel(dgot[i], r.deriv[i]) < 1e-12);
    }
  }
}

TEST_CASE("cos^2 overlaps by quadrature of raw Gaussians") {
  for (int s : {1, -1}) {
    for (double y : {0.05, 0.2, 0.5, 1.0}) {
      CAPTURE(s);
      CAPTURE(y);
      const double centre = s > 0 ? kPi / 2.0 : 0.0;
      const Gaussian w0{y, centre};
      const Gaussian w1{y, centre + kPi};
      const double lo = centre - 30.0 * std::sqrt(y) - 2.0 * kPi;
      const double hi = centre + 30.0 * std::sqrt(y) + 2.0 * kPi;
      auto cos2 = [](double x) { return std::cos(x) * std::cos(x); };

      const double j = simpson([&](double x) { return w0(x) * w0(x) * cos2(x); }, lo, hi);
      // overlap-subtracted nearest-neighbour matrix element
      const double raw = simpson([&](double x) { return w0(x) * w1(x) * cos2(x); }, lo, hi);
      const double overlap = simpson([&](double x) { return w0(x) * w1(x); }, lo, hi);

      const GaussianForms g = gaussian_forms(y, s);
      CHECK(g.j_onsite == doctest::Approx(j).epsilon(1e-10));
      CHECK(g.j_hop == doctest::Approx(raw - 0.5 * overlap).epsilon(1e-8));
    }
  }
}

TEST_CASE("identities on a dense y grid") {
  for (int i = 1; i <= 1000; ++i) {
    const double y = i / 1000.0;
    const GaussianForms up = gaussian_forms(y, 1);
    const GaussianForms down = gaussian_forms(y, -1);
    CHECK(up.e_onsite * y == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(up.j_onsite + down.j_onsite == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(up.j_hop) < 18.0 * up.j_onsite);
    CHECK(std::abs(down.j_hop) < 18.0 * down.j_onsite);
    CHECK(up.j_hop == -down.j_hop);
  }
}

TEST_CASE("small-y on-site overlap keeps full relative precision") {
  const double y = 1e-9;
  CHECK(rel(gaussian_forms(y, 1).j_onsite, 0.5 * (y - y * y / 2.0)) < 1e-12);
}

TEST_CASE("photon number and y conversions") {
  CHECK(photons_to_y(4.0, 1.0) == 0.5);
  CHECK(photons_to_y(1.0, -4.0) == 0.5);
  CHECK(y_to_photons(0.5, -4.0) == 1.0);
  CHECK_THROWS_AS(photons_to_y(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(photons_to_y(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(photons_to_y(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(gaussian_coefficients(1.0, lattice(0.0)), std::domain_error);
  CHECK_THROWS_AS(coefficient_derivatives_check(1.0, lattice(0.0), 1e-4), std::domain_error);
}

TEST_CASE("E derivative by hand: d(1/y)/dn = 1/(2 y n)") {
  const LatticeCoefficients c = gaussian_coefficients(7.0, lattice(2.0));
  CHECK(rel(c.d_e, 1.0 / (2.0 * c.y * 7.0)) < 1e-15);
}

TEST_CASE("derivatives match central differences") {
  for (double u0 : {1.0, -1.0, 0.62}) {
    for (int i = 0; i <= 60; ++i) {
      const double n = std::pow(10.0, 3.0 * i / 60.0);
      CAPTURE(u0);
      CAPTURE(n);
      CHECK(coefficient_derivatives_check(n, lattice(u0), 1e-4 * n) <= 1e-5);
    }
  }
}

TEST_CASE("free-lattice limit is the n -> 0 limit of the closed forms") {
  const LatticeCoefficients free = free_lattice_limit();
  CHECK(free.e_onsite == 0.0);
  CHECK(free.e_hop == 0.0);
  CHECK(free.j_hop == 0.0);
  CHECK(free.j_onsite == 0.5);
  // at n = 1e-12 the lattice is 1e6 recoil widths wide
  const LatticeCoefficients tiny = gaussian_coefficients(1e-12, lattice(1.0));
  CHECK(std::abs(tiny.e_onsite) < 1e-5);
  CHECK(std::abs(tiny.j_onsite - 0.5) < 1e-12);
  CHECK(coefficients_or_free_limit(0.0, lattice(1.0)).j_onsite == 0.5);
  CHECK(coefficients_or_free_limit(-3.0, lattice(1.0)).e_onsite == 0.0);
}

TEST_CASE("neighbour suppression") {
  CHECK(neighbour_suppression(1, 0.3) == 1.0);
  CHECK(neighbour_suppression(2, 0.5) == doctest::Approx(3.71987121969505624e-7).epsilon(1e-12));
  double last = 1.0;
  for (int ell = 2; ell < 8; ++ell) {
    const double r = neighbour_suppression(ell, 0.5);
    CHECK(r < last);
    last = r;
  }
}
