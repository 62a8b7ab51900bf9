#include <cmath>

#include "doctest.h"
#include "modelset/autocorr.hpp"
#include "modelset/error.hpp"
#include "modelset/point_group.hpp"

using namespace modelset;

namespace {
const double kPi = std::acos(-1.0);
const double kSqrt2 = std::sqrt(2.0);

Eigen::VectorXd v1(double x) { return Eigen::VectorXd::Constant(1, x); }

IntVector coords(std::initializer_list<std::int64_t> k) {
  IntVector v(static_cast<Eigen::Index>(k.size()));
  Eigen::Index i = 0;
  for (auto x : k) v[i++] = x;
  return v;
}

EmpiricalAutocorrelation integers(double t, double R) {
  const ModelSet ms = cut_and_project(Scheme::integer(1, 1), Window::interval(-0.4, 0.4), Region::cube(1, t + R + 1));
  return empirical_autocorr(ms, Region::cube(1, t), R);
}
}  // namespace

TEST_SUITE("autocorr") {
  TEST_CASE("integer lattice") {
    const auto ac = integers(100, 3);
    REQUIRE(ac.atoms.size() == 7);
    for (int z = -3; z <= 3; ++z) CHECK(std::abs(ac.coefficient_at(v1(z)) - 1.0) <= 1e-2);
  }

  TEST_CASE("identity coefficient is the counted density") {
    const ModelSet ms = cut_and_project(Scheme::sqrt2_chain(), Window::interval(-1, 1), Region::cube(1, 220));
    const Region F = Region::cube(1, 200);
    const auto ac = empirical_autocorr(ms, F, 5);
    int inside = 0;
    for (Eigen::Index i = 0; i < ms.size(); ++i) inside += F.contains(ms.physical.col(i));
    CHECK(std::abs(ac.coefficient_at(v1(0)) - inside / F.volume()) <= 1e-9 * ac.coefficient_at(v1(0)));
  }

  TEST_CASE("sqrt2 chain overlap coefficient") {
    const Scheme sc = Scheme::sqrt2_chain();
    const ModelSet ms = cut_and_project(sc, Window::interval(-1, 1), Region::cube(1, 1e4 + 10));
    const auto ac = empirical_autocorr(ms, Region::cube(1, 1e4), 5);
    CHECK(std::abs(ac.coefficient_at(v1(1.0)) - 1.0 / (2 * kSqrt2)) <= 5e-3);
    for (const auto& a : ac.atoms) {
      CHECK(std::abs(a.coefficient - ac.coefficient_at(-a.z)) <= 2.0 * 12 / ac.volume);
    }
  }

  TEST_CASE("empty model set and margin") {
    const ModelSet empty = cut_and_project(Scheme::sqrt2_chain(), Window::empty(1), Region::cube(1, 20));
    CHECK(empirical_autocorr(empty, Region::cube(1, 10), 5).atoms.empty());
    const ModelSet ms = cut_and_project(Scheme::sqrt2_chain(), Window::interval(-1, 1), Region::cube(1, 12));
    CHECK_THROWS_AS(empirical_autocorr(ms, Region::cube(1, 10), 5), InsufficientMarginError);
  }

  TEST_CASE("theoretical coefficients") {
    const Scheme sc = Scheme::sqrt2_chain();
    const Window w = Window::interval(-1, 1);
    CHECK(theoretical_autocorr_coeff(sc, w, coords({0, 0})).value == doctest::Approx(1.0 / kSqrt2));
    CHECK(theoretical_autocorr_coeff(sc, w, coords({1, 0})).value == doctest::Approx(1.0 / (2 * kSqrt2)));
    CHECK(theoretical_autocorr_coeff(sc, w, coords({0, 2})).value == 0.0);
  }

  TEST_CASE("radialization") {
    const auto ac = integers(100, 3);
    const auto same = radialize(ac, PointGroup::trivial(1));
    REQUIRE(same.atoms.size() == ac.atoms.size());
    for (std::size_t i = 0; i < ac.atoms.size(); ++i) CHECK(same.atoms[i].coefficient == ac.atoms[i].coefficient);

    const auto merged = radialize(ac, PointGroup::sign(1));
    CHECK(merged.atoms.size() == 4);
    CHECK(merged.coefficient_at(v1(-1)) == doctest::Approx(ac.coefficient_at(v1(1)) + ac.coefficient_at(v1(-1))));

    const ModelSet z2 = cut_and_project(Scheme::integer(2, 1), Window::interval(-0.4, 0.4), Region::cube(2, 14));
    const auto ac2 = empirical_autocorr(z2, Region::cube(2, 10), 2);
    const auto rad = radialize(ac2, PointGroup::dihedral(4));
    CHECK(rad.coefficient_at(Eigen::Vector2d(-1, 0)) == doctest::Approx(4 * ac2.coefficient_at(Eigen::Vector2d(1, 0))));
  }

  TEST_CASE("pairing against test functions") {
    const auto ac = integers(100, 3);
    CHECK(std::abs(pair_against_test_function(ac, TestFunction::bspline(2, 1.0)) - 1.0) <= 1e-2);
    CHECK(pair_against_test_function(ac, TestFunction::zero(1)) == 0.0);
    CHECK_THROWS_AS(pair_against_test_function(ac, TestFunction::bspline(2, 4.0)), SupportExceedsCutoffError);

    const ModelSet ms = cut_and_project(Scheme::sqrt2_chain(), Window::interval(-1, 1), Region::cube(1, 520));
    const auto chain = empirical_autocorr(ms, Region::cube(1, 500), 5);
    const double narrow = pair_against_test_function(chain, TestFunction::bspline(2, 0.5)).real();
    CHECK(narrow == doctest::Approx(2 * chain.coefficient_at(v1(0))).epsilon(1e-14));
  }

  TEST_CASE("positive-definiteness proxy and radial pairing") {
    const ModelSet ms = cut_and_project(Scheme::sqrt2_chain(), Window::interval(-1, 1), Region::cube(1, 520));
    const auto ac = empirical_autocorr(ms, Region::cube(1, 500), 5);
    const TestFunction fs[] = {TestFunction::bspline(2, 1.0), TestFunction::bspline(3, 2.0).translated(v1(0.4)),
                               TestFunction::box(0.6) + TestFunction::box(1.1) * cplx(-1.5, 0.0)};
    for (const auto& f : fs) CHECK(pair_against_test_function(ac, autoconvolution(f)).real() >= -1e-6);

    const TestFunction sym = TestFunction::bspline(4, 2.0);
    const cplx before = pair_against_test_function(ac, sym);
    const cplx after = pair_against_test_function(radialize(ac, PointGroup::sign(1)), sym);
    CHECK(std::abs(before - after) <= 1e-10);
  }

  TEST_CASE("stability under doubling") {
    const ModelSet ms = cut_and_project(Scheme::sqrt2_chain(), Window::interval(-1, 1), Region::cube(1, 2020));
    const auto a = empirical_autocorr(ms, Region::cube(1, 1000), 5);
    const auto b = empirical_autocorr(ms, Region::cube(1, 2000), 5);
    CHECK(stability_constant(a, b, 1000) < 5.0);
  }

  TEST_CASE("approximation-sequence diagnostic") {
    ApproxSequence seq{ApproxSequence::Family::Box, 1, {10.0}};
    CHECK(approx_sequence_diagnostic(seq, v1(1.0)).values[0] < 1e-14);
    CHECK(approx_sequence_diagnostic(seq, v1(0.25)).values[0] < 1e-14);
    const auto d = approx_sequence_diagnostic(seq, v1(kSqrt2 / 4));
    CHECK(d.bounds[0] == doctest::Approx(1.0 / (2 * kPi * kSqrt2 / 4 * 10)));
    CHECK(d.values[0] <= d.bounds[0]);
    CHECK_THROWS_AS(approx_sequence_diagnostic(seq, v1(0.0)), TrivialCharacterError);
    ApproxSequence bad{ApproxSequence::Family::Box, 1, {10.0, 5.0}};
    CHECK_THROWS(approx_sequence_diagnostic(bad, v1(1.0)));
    ApproxSequence ball{ApproxSequence::Family::Ball, 2, {10.0, 100.0, 1000.0}};
    const auto bd = approx_sequence_diagnostic(ball, Eigen::Vector2d(0.3, 0.1));
    for (std::size_t i = 0; i < 3; ++i) CHECK(bd.values[i] <= bd.bounds[i]);
  }
}
