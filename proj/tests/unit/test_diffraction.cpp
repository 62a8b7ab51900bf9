#include <cmath>
#include <sstream>

#include "doctest.h"
#include "modelset/diffraction.hpp"
#include "modelset/error.hpp"

using namespace modelset;

namespace {
const double kPi = std::acos(-1.0);
const double kSqrt2 = std::sqrt(2.0);

Eigen::VectorXd v1(double x) { return Eigen::VectorXd::Constant(1, x); }

double box_ft(double xi) { return xi == 0.0 ? 2.0 : std::sin(2 * kPi * xi) / (kPi * xi); }
}  // namespace

TEST_SUITE("diffraction") {
  TEST_CASE("Meyer peaks of the sqrt2 chain") {
    const PurePointMeasure pm = meyer_diffraction(Scheme::sqrt2_chain(), Window::interval(-1, 1), 4.0);
    CHECK(pm.intensity_at(v1(0.0)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(pm.intensity_at(v1(0.5)) < 1e-30);
    const double want = std::pow(box_ft(-kSqrt2 / 4), 2) / 8.0;
    CHECK(std::abs(pm.intensity_at(v1(kSqrt2 / 4)) - want) < 1e-15);
    CHECK(std::abs(want - 0.0641492450) < 1e-10);
    for (const auto& a : pm.atoms) {
      CHECK(a.intensity >= 0.0);
      CHECK(pm.intensity_at(-a.label.xi) == doctest::Approx(a.intensity).epsilon(1e-12));
    }
  }

  TEST_CASE("Meyer peaks do not depend on the basis") {
    const Scheme sc = Scheme::sqrt2_chain();
    Eigen::Matrix2d u;
    u << 1, 1, 0, 1;
    const Scheme other(1, 1, LatticeBasis(sc.gamma.columns() * u));
    const Window w = Window::interval(-0.8, 1.1);
    const PurePointMeasure a = meyer_diffraction(sc, w, 3.0), b = meyer_diffraction(other, w, 3.0);
    REQUIRE(a.atoms.size() == b.atoms.size());
    for (const auto& at : a.atoms) CHECK(std::abs(b.intensity_at(at.label.xi) - at.intensity) <= 1e-9);
  }

  TEST_CASE("shadow transform") {
    const Scheme sc = Scheme::sqrt2_chain();
    const TestFunction r = TestFunction::bspline(2, 1.0).translated(v1(0.3));
    const FourierFn rf = [&](const Eigen::VectorXd& xi) { return r.ft(xi); };
    const ShadowValue s1 = shadow_transform_va(sc, PointGroup::trivial(1), rf, v1(kSqrt2 / 4));
    CHECK(s1.partners.size() == 1);
    CHECK(std::abs(s1.value - std::norm(r.ft(v1(-kSqrt2 / 4)))) < 1e-15);
    const ShadowValue s2 = shadow_transform_va(sc, PointGroup::sign(1), rf, v1(kSqrt2 / 4));
    CHECK(s2.partners.size() == 2);
    CHECK(std::abs(s2.value - std::norm(r.ft(v1(-kSqrt2 / 4))) - std::norm(r.ft(v1(kSqrt2 / 4)))) < 1e-15);
    const FourierFn zero = [](const Eigen::VectorXd&) { return cplx(0.0); };
    CHECK(shadow_transform_va(sc, PointGroup::trivial(1), zero, v1(0.5)).value == 0.0);
    CHECK_THROWS_AS(shadow_transform_va(sc, PointGroup::trivial(1), rf, v1(0.1)), LabelNotInSpectrumError);
  }

  TEST_CASE("spherical diffraction") {
    const Scheme chain = Scheme::sqrt2_chain();
    const Window w = Window::interval(-1, 1);
    const PurePointMeasure meyer = meyer_diffraction(chain, w, 4.0);
    const PurePointMeasure triv = spherical_diffraction(chain, PointGroup::trivial(1), w, 4.0);
    REQUIRE(meyer.atoms.size() == triv.atoms.size());
    for (std::size_t i = 0; i < meyer.atoms.size(); ++i)
      CHECK(meyer.atoms[i].intensity == doctest::Approx(triv.atoms[i].intensity).epsilon(1e-14));

    const PurePointMeasure none = spherical_diffraction(chain, PointGroup::sign(1), Window::empty(1), 4.0);
    for (const auto& a : none.atoms) CHECK(a.intensity == 0.0);
  }

  TEST_CASE("D4 orbit intensity against direct dual enumeration") {
    const Scheme sc = Scheme::minkowski_sqrt2(2);
    const Window w = Window::box(Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1));
    const PointGroup d4 = PointGroup::dihedral(4);
    const PurePointMeasure pm = spherical_diffraction(sc, d4, w, 2.0);
    const Eigen::Vector2d xi1(kSqrt2 / 4, 0.0);

    const LatticeBasis dual = dual_lattice(sc.gamma);
    double direct = 0.0;
    int partners = 0;
    for (const auto& p : enumerate_points(dual, Region::cube(4, 1.0))) {
      const Eigen::Vector2d a = p.point.head(2);
      bool in_orbit = false;
      for (const auto& k : d4.elements()) in_orbit = in_orbit || (k * xi1 - a).norm() < 1e-9;
      if (!in_orbit) continue;
      const Eigen::Vector2d b = p.point.tail(2);
      direct += std::pow(box_ft(b[0]) * box_ft(b[1]), 2);
      ++partners;
    }
    CHECK(partners == 4);
    direct /= 64.0;
    CHECK(std::abs(pm.intensity_at(orbit_label(d4, xi1)) - direct) <= 1e-14);
    CHECK(pm.intensity_at(Eigen::Vector2d::Zero()) == doctest::Approx(std::pow(4.0 / 8.0, 2)));
  }

  TEST_CASE("Poisson triple check on Z^2 with tents") {
    const Scheme z2 = Scheme::integer(1, 1);
    const TestFunction tent = TestFunction::bspline(2, 1.0);
    TripleOptions opt;
    opt.check_tail = false;
    const TripleCheck tc = poisson_triple_check(z2, tent, tent, 40.0, opt);
    CHECK(std::abs(tc.lattice - 1.0) < 1e-14);
    CHECK(std::abs(tc.dual - 1.0) < 1e-9);
    CHECK(std::abs(tc.quadrature - 1.0) < 1e-9);

    const TripleCheck zero = poisson_triple_check(z2, TestFunction::zero(1), TestFunction::zero(1), 10.0);
    CHECK(zero.lattice == 0.0);
    CHECK(zero.dual == 0.0);
    CHECK(zero.quadrature == 0.0);
    CHECK(zero.max_rel_err == 0.0);
  }

  TEST_CASE("tail failures are reported") {
    TripleOptions opt;
    opt.with_quadrature = false;
    const TestFunction tent = TestFunction::bspline(2, 1.0);
    CHECK_THROWS_AS(poisson_triple_check(Scheme::integer(1, 1), tent, tent, 2.0, opt), TailBoundError);
  }

  TEST_CASE("calibration pins the covolume exponent") {
    const CalibrationReport c = calibrate_poisson_exponent(60.0);
    CHECK(c.exponent == kPoissonCovolumeExponent);
    CHECK(c.exponent == 1);
    CHECK(std::abs(c.scaled_lattice - c.scaled_dual / 4.0) <= 1e-6 * c.scaled_lattice);
    CHECK(std::abs(c.unit_lattice - c.unit_dual) <= 1e-6 * c.unit_lattice);
  }

  TEST_CASE("consistency harness degenerate inputs") {
    const Scheme sc = Scheme::sqrt2_chain();
    const Window w = Window::interval(-1, 1);
    const PurePointMeasure pm = meyer_diffraction(sc, w, 4.0);
    const ModelSet ms = cut_and_project(sc, w, Region::cube(1, 120));
    const auto r0 = consistency_harness(ms, Region::cube(1, 100), PointGroup::trivial(1), w, TestFunction::zero(1), pm);
    CHECK(r0.empirical == 0.0);
    CHECK(r0.theoretical == 0.0);
    const Window none = Window::empty(1);
    const ModelSet ems = cut_and_project(sc, none, Region::cube(1, 120));
    const auto r1 = consistency_harness(ems, Region::cube(1, 100), PointGroup::trivial(1), none,
                                        TestFunction::gaussian(0.4), meyer_diffraction(sc, none, 4.0));
    CHECK(r1.empirical == 0.0);
    CHECK(r1.theoretical == 0.0);
  }

  TEST_CASE("periodization norm bound") {
    const Scheme z2 = Scheme::integer(1, 1);
    const WeightedNormParams p = weighted_norm_params(z2.gamma, 1.0);
    const auto zero = periodization_norm_bound_check(TestFunction::zero(1), TestFunction::zero(1), p, z2);
    CHECK(zero.lhs == 0.0);
    CHECK(zero.pass);
    const TestFunction tent = TestFunction::bspline(2, 1.0);
    const auto t = periodization_norm_bound_check(tent, tent, p, z2);
    CHECK(t.lhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(t.pass);
  }

  TEST_CASE("plot data") {
    std::ostringstream empty;
    emit_plot_data(PurePointMeasure{}, empty);
    CHECK(empty.str() == "# frequency intensity\n");

    const PurePointMeasure pm = meyer_diffraction(Scheme::sqrt2_chain(), Window::interval(-1, 1), 3.0);
    std::stringstream ss;
    emit_plot_data(pm, ss);
    const auto rows = read_plot_data(ss);
    REQUIRE(rows.size() == pm.atoms.size());
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].first <= rows[i].first);
    for (const auto& [x, y] : rows) CHECK(std::abs(pm.intensity_at(v1(x)) - y) <= 1e-12);

    std::ostringstream csv;
    write_peaks_csv(pm, csv);
    CHECK(csv.str().rfind("branch,xi0,intensity,tail_bound\n", 0) == 0);
  }
}
