#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cavfermi/coefficients.hpp"
#include "cavfermi/fermisea.hpp"
#include "cavfermi/steadystate.hpp"

using namespace cavfermi;

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

SystemParams make(double u0, double delta_c, double eta, int n_atoms) {
  SystemParams p;
  p.u0 = u0;
  p.s = u0 < 0.0 ? -1 : 1;
  p.delta_c = delta_c;
  p.eta = eta;
  p.kappa = 1.0;
  p.n_sites = 50;
  p.n_atoms = n_atoms;
  return p;
}

SystemParams fig1a(int n) { return make(10.0, 10.0, 10.0, n); }
SystemParams fig1b(int n) { return make(-1.0, -20.0, 30.0, n); }
SystemParams fig3(int n, double eta) { return make(0.62, 5.0, eta, n); }

/// H1 and H2 expectations at photon number m, from the closed-form couplings.
AtomicExpectations atomic(double m, const FermiSeaSummary& f, const SystemParams& p) {
  return h1_h2_expectations(f, gaussian_coefficients(m, p), p);
}

/// Shift built from central differences of the atomic expectations.
double xi_by_differences(double n, const FermiSeaSummary& f, const SystemParams& p) {
  const double h = 1e-5 * n;
  const AtomicExpectations up = atomic(n + h, f, p);
  const AtomicExpectations down = atomic(n - h, f, p);
  const double d_h1 = (up.h1 - down.h1) / (2.0 * h);
  const double d_h2 = (up.h2 - down.h2) / (2.0 * h);
  return atomic(n, f, p).h2 + d_h1 + n * d_h2;
}

double lorentzian(double n, const FermiSeaSummary& f, const SystemParams& p, double xi) {
  (void)n;
  (void)f;
  const double d = p.delta_c - xi;
  return p.eta * p.eta / (p.kappa * p.kappa + d * d);
}

int count_roots(const SystemParams& p, const SolverOptions& o = {}) {
  return static_cast<int>(find_branches(fermi_sea_summary(p), p, o).size());
}

}  // namespace

TEST_CASE("shift: breakdown, closed form and finite differences agree") {
  for (const SystemParams& p : {fig1a(20), fig1b(18), fig3(10, 5.0)}) {
    const FermiSeaSummary f = fermi_sea_summary(p);
    for (double n : {0.8, 3.0, 30.0, 400.0}) {
      CAPTURE(p.u0);
      CAPTURE(n);
      const ShiftBreakdown b = xi_breakdown(n, f, p);
      CHECK(b.total == doctest::Approx(b.h2 + b.d_h1 + b.n_d_h2).epsilon(1e-15));
      CHECK(b.h2 == doctest::Approx(atomic(n, f, p).h2).epsilon(1e-14));
      CHECK(b.total == doctest::Approx(xi_by_differences(n, f, p)).epsilon(1e-7));

      const double y = photons_to_y(n, p.u0);
      const ShiftFunctions sf = shift_functions(y, p.s);
      const double closed =
          0.5 * p.u0 * f.n_atoms * (sf.f1 + f.b_tilde * std::exp(-kPi2 / (4.0 * y)) * sf.f2);
      CHECK(b.total == doctest::Approx(closed).epsilon(1e-12));
      CHECK(xi_shift(n, f, p) == b.total);
    }
  }
}

TEST_CASE("shift: limits and errors") {
  const SystemParams p = fig1a(0);
  const FermiSeaSummary empty = fermi_sea_summary(p);
  CHECK(xi_shift(5.0, empty, p) == 0.0);
  CHECK_THROWS_AS(xi_shift(0.0, fermi_sea_summary(fig1a(3)), fig1a(3)), std::domain_error);
  CHECK_THROWS_AS(xi_shift(-2.0, fermi_sea_summary(fig1a(3)), fig1a(3)), std::domain_error);

  // deep lattice: the derivative terms fade and the leading dispersive shift remains
  const SystemParams q = fig1b(20);
  const FermiSeaSummary f = fermi_sea_summary(q);
  const double n = 1e6;
  const ShiftBreakdown b = xi_breakdown(n, f, q);
  const LatticeCoefficients c = gaussian_coefficients(n, q);
  CHECK(b.h2 == doctest::Approx(q.u0 * c.j_onsite * 20 + q.u0 * c.j_hop * 20 * f.b_tilde)
                     .epsilon(1e-14));
  CHECK(std::abs(b.d_h1 + b.n_d_h2) < 1e-2 * std::abs(b.total));
}

TEST_CASE("residual in y matches the fixed point in n") {
  for (const SystemParams& p : {fig1a(20), fig1b(18)}) {
    const FermiSeaSummary f = fermi_sea_summary(p);
    for (double y : {0.05, 0.1, 0.3, 0.6}) {
      const double n = y_to_photons(y, p.u0);
      const double xi = xi_shift(n, f, p);
      const double d = p.delta_c - xi;
      const double expect = std::abs(p.u0) * p.eta * p.eta * y * y - p.kappa * p.kappa - d * d;
      CHECK(residual_y(y, f, p) == doctest::Approx(expect).epsilon(1e-12));
      CHECK(fixed_point_residual(n, f, p) ==
            doctest::Approx((n - lorentzian(n, f, p, xi)) / n).epsilon(1e-12));
    }
  }
}

TEST_CASE("empty cavity root is the Lorentzian") {
  for (double delta_c : {-20.0, 0.0, 3.0, 10.0}) {
    for (double eta : {0.1, 1.0, 30.0}) {
      SystemParams p = make(10.0, delta_c, eta, 0);
      const auto branches = find_branches(fermi_sea_summary(p), p);
      REQUIRE(branches.size() == 1);
      const double lorentz = eta * eta / (1.0 + delta_c * delta_c);
      CHECK(std::abs(branches[0].n_bar - lorentz) / lorentz < 1e-12);
    }
  }
  SystemParams dark = make(10.0, 10.0, 0.0, 0);
  CHECK(find_branches(fermi_sea_summary(dark), dark).empty());
  SystemParams no_lattice = make(0.0, 10.0, 3.0, 0);
  CHECK_THROWS_AS(find_branches(fermi_sea_summary(no_lattice), no_lattice), std::domain_error);
  SolverOptions coarse;
  coarse.n_scan = 50;
  CHECK_THROWS_AS(find_branches(fermi_sea_summary(dark), fig1a(0), coarse),
                  std::invalid_argument);
}

TEST_CASE("every branch satisfies the fixed point independently of the solver") {
  std::vector<SystemParams> cases;
  for (int n : {1, 8, 20, 42}) cases.push_back(fig1a(n));
  for (int n : {5, 18, 20, 40}) cases.push_back(fig1b(n));
  for (double eta : {2.0, 5.0, 9.0}) cases.push_back(fig3(20, eta));
  SolverOptions wide;
  wide.y_hi = 10.0;
  for (const SystemParams& p : cases) {
    const FermiSeaSummary f = fermi_sea_summary(p);
    const auto branches = find_branches(f, p, wide);
    CHECK_FALSE(branches.empty());
    double last_y = 0.0;
    for (const SteadyStateBranch& b : branches) {
      CAPTURE(p.n_atoms);
      CAPTURE(b.n_bar);
      CHECK(b.y > last_y);
      last_y = b.y;
      CHECK(b.valid_tb == (b.y <= p.y_max));
      CHECK(std::abs(fixed_point_residual(b.n_bar, f, p)) <= 1e-8);
      // against the shift assembled by finite differences
      const double target = lorentzian(b.n_bar, f, p, xi_by_differences(b.n_bar, f, p));
      CHECK(std::abs(b.n_bar - target) / b.n_bar < 1e-5);
    }
  }
}

TEST_CASE("Fig. 1 sets are multivalued / populated inside the valid region") {
  int multivalued = 0;
  for (int n = 1; n <= 50; ++n) {
    const SystemParams p = fig1a(n);
    int valid = 0;
    for (const auto& b : find_branches(fermi_sea_summary(p), p)) valid += b.valid_tb;
    multivalued += valid >= 2;
  }
  CHECK(multivalued > 0);

  int populated = 0;
  for (int n = 1; n <= 50; ++n) {
    const SystemParams p = fig1b(n);
    for (const auto& b : find_branches(fermi_sea_summary(p), p)) populated += b.valid_tb;
  }
  CHECK(populated > 0);
}

TEST_CASE("Fig. 3: S-curve with root count changing in pairs") {
  SolverOptions wide;
  wide.y_hi = 10.0;
  int last = -1;
  bool last_hi_positive = false;
  int max_roots = 0;
  int pair_changes = 0;
  for (int i = 0; i <= 120; ++i) {
    const SystemParams p = fig3(20, 0.5 + 0.1 * i);
    const int roots = count_roots(p, wide);
    // a root may also enter through the window edge; only folds are paired
    const bool hi_positive = residual_y(wide.y_hi, fermi_sea_summary(p), p) > 0.0;
    max_roots = std::max(max_roots, roots);
    if (last >= 0 && hi_positive == last_hi_positive) {
      CHECK((roots - last) % 2 == 0);
      pair_changes += roots != last;
    }
    last = roots;
    last_hi_positive = hi_positive;
  }
  CHECK(pair_changes >= 2);
  CHECK(max_roots >= 3);
}

TEST_CASE("stability classification") {
  SUBCASE("empty cavity is stable") {
    const SystemParams p = make(10.0, 2.0, 3.0, 0);
    const FermiSeaSummary f = fermi_sea_summary(p);
    const auto branches = find_branches(f, p);
    REQUIRE(branches.size() == 1);
    CHECK(classify_stability(branches[0], f, p).stability == Stability::stable);
  }
  SUBCASE("Fig. 1(a) double root at N = 20") {
    const SystemParams p = fig1a(20);
    const FermiSeaSummary f = fermi_sea_summary(p);
    const auto branches = find_branches(f, p);
    std::vector<SteadyStateBranch> valid;
    for (const auto& b : branches) {
      if (b.valid_tb) valid.push_back(b);
    }
    REQUIRE(valid.size() == 2);
    // ascending y: the larger photon number comes first
    CHECK(classify_stability(valid[0], f, p, {}, branches).stability == Stability::stable);
    CHECK(classify_stability(valid[1], f, p, {}, branches).stability == Stability::unstable);
  }
  SUBCASE("Fig. 3 middle branch is unstable") {
    const SystemParams p = fig3(20, 5.0);
    SolverOptions wide;
    wide.y_hi = 10.0;
    const FermiSeaSummary f = fermi_sea_summary(p);
    const auto branches = find_branches(f, p, wide);
    REQUIRE(branches.size() >= 3);
    CHECK(classify_stability(branches[0], f, p, {}, branches).stability == Stability::stable);
    CHECK(classify_stability(branches[1], f, p, {}, branches).stability == Stability::unstable);
  }
  SUBCASE("below the floor nothing can be decided") {
    const SystemParams p = fig1a(20);
    const FermiSeaSummary f = fermi_sea_summary(p);
    const auto branches = find_branches(f, p, {1e-3, 10.0, 2000});
    REQUIRE(branches.back().n_bar < 1.0);
    CHECK(classify_stability(branches.back(), f, p, {}, branches).stability ==
          Stability::undetermined);
  }
}

TEST_CASE("sweeps keep input order and report failures per point") {
  SweepOptions o;
  o.classify = false;
  const std::vector<int> atoms = {20, 0, 8};
  const auto rows = sweep_atoms(fig1a(0), atoms, o);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    CHECK(rows[i].parameter == atoms[i]);
    CHECK(rows[i].error.empty());
    const SystemParams p = fig1a(atoms[i]);
    CHECK(rows[i].branches.size() == find_branches(fermi_sea_summary(p), p).size());
  }

  const auto bad = sweep_atoms(fig1a(0), {51}, o);
  CHECK_FALSE(bad[0].error.empty());
  CHECK(bad[0].branches.empty());

  o.threads = 3;
  const auto pump = sweep_pump(fig3(20, 0.0), {9.0, 1.0, 5.0, 0.0}, o);
  o.threads = 1;
  const auto serial = sweep_pump(fig3(20, 0.0), {9.0, 1.0, 5.0, 0.0}, o);
  REQUIRE(pump.size() == 4);
  CHECK(pump[3].branches.empty());
  for (std::size_t i = 0; i < pump.size(); ++i) {
    REQUIRE(pump[i].branches.size() == serial[i].branches.size());
    for (std::size_t j = 0; j < pump[i].branches.size(); ++j) {
      CHECK(pump[i].branches[j].n_bar == serial[i].branches[j].n_bar);
    }
  }
  CHECK_THROWS_AS(sweep_pump(fig3(20, 0.0), {}, o), std::invalid_argument);
}
