#include <cmath>
#include <random>

#include "doctest.h"
#include "modelset/error.hpp"
#include "modelset/point_group.hpp"
#include "modelset/test_function.hpp"
#include "modelset/weighted_norm.hpp"

using namespace modelset;

namespace {
const double kPi = std::acos(-1.0);
const double kSqrt2 = std::sqrt(2.0);

Eigen::VectorXd v1(double x) { return Eigen::VectorXd::Constant(1, x); }

// Midpoint rule for int_a^b g(x) exp(-2 pi i xi x) dx.
template <class G>
cplx midpoint_ft(G g, double a, double b, double xi, int n = 1000000) {
  const double h = (b - a) / n;
  cplx s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = a + (i + 0.5) * h;
    s += g(x) * std::polar(1.0, -2.0 * kPi * xi * x);
  }
  return s * h;
}

Eigen::Matrix2d rot(double t) {
  Eigen::Matrix2d r;
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}
}  // namespace

TEST_SUITE("harmonic") {
  TEST_CASE("closed-form transforms") {
    const TestFunction tent = TestFunction::bspline(2, 1.0);
    CHECK(std::abs(tent.ft(v1(0.0)) - 1.0) < 1e-15);
    CHECK(std::abs(tent.ft(v1(1.0))) < 1e-15);
    CHECK(std::abs(tent(v1(0.25)) - 0.75) < 1e-15);

    const TestFunction box = TestFunction::box(1.0);
    const double xi = -kSqrt2 / 4;
    const cplx want = std::sin(2 * kPi * xi) / (kPi * xi);
    CHECK(std::abs(box.ft(v1(xi)) - want) < 1e-14);
    CHECK(std::abs(box.ft(v1(xi)).real() - 0.7163755720) < 1e-9);
    const cplx quad = midpoint_ft([](double) { return 1.0; }, -1.0, 1.0, xi);
    CHECK(std::abs(box.ft(v1(xi)) - quad) < 1e-9);
  }

  TEST_CASE("ft at zero is the integral") {
    const TestFunction fs[] = {TestFunction::bspline(3, 1.5), TestFunction::gaussian(0.7),
                               TestFunction::bspline(2, 1.0).translated(v1(0.3)).dilated(2.0)};
    for (const auto& f : fs) {
      const Region s = f.support();
      const cplx quad = midpoint_ft([&](double x) { return f(v1(x)); }, s.lower()[0], s.upper()[0], 0.0, 200000);
      CHECK(std::abs(f.ft(v1(0.0)) - quad) <= 1e-10 * std::abs(quad));
    }
    const double sigma = 0.7;
    CHECK(std::abs(TestFunction::gaussian(sigma).ft(v1(0.4)) -
                   sigma * std::sqrt(2 * kPi) * std::exp(-2 * kPi * kPi * sigma * sigma * 0.16)) < 1e-14);
  }

  TEST_CASE("convolution theorem and involution") {
    const TestFunction f = TestFunction::bspline(2, 1.0).translated(v1(0.2)) + TestFunction::gaussian(0.5) * cplx(0, 2);
    const TestFunction g = TestFunction::bspline(3, 0.7);
    const TestFunction fg = convolve(f, g);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
      const Eigen::VectorXd xi = v1(u(rng));
      CHECK(std::abs(fg.ft(xi) - f.ft(xi) * g.ft(xi)) <= 1e-8);
      CHECK(std::abs(f.involution().ft(xi) - std::conj(f.ft(xi))) <= 1e-12);
      CHECK(autoconvolution(f).ft(xi).real() >= -1e-12);
    }
    const Eigen::VectorXd x = v1(0.37);
    CHECK(std::abs(f.involution()(x) - std::conj(f(-x))) < 1e-14);
  }

  TEST_CASE("direct convolution value") {
    const TestFunction tent = TestFunction::bspline(2, 1.0);
    const TestFunction tt = convolve(tent, tent);
    // (tent * tent)(0) = int tent^2 = 2/3
    CHECK(std::abs(tt(v1(0.0)) - 2.0 / 3.0) < 1e-14);
  }

  TEST_CASE("orbits") {
    const PointGroup d4 = PointGroup::dihedral(4);
    CHECK(d4.order() == 8);
    CHECK(orbit(d4, Eigen::Vector2d(1, 0)).size() == 4);
    CHECK(orbit(d4, Eigen::Vector2d(0, 0)).size() == 1);
    const PointGroup c3 = PointGroup::cyclic(3);
    const auto o = orbit(c3, Eigen::Vector2d(1, 0));
    REQUIRE(o.size() == 3);
    CHECK(c3.order() % static_cast<int>(o.size()) == 0);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) CHECK(o[i].dot(o[j]) == doctest::Approx(-0.5));
    CHECK(orbit_label(d4, Eigen::Vector2d(0, 1)) == Eigen::Vector2d(-1, 0));
  }

  TEST_CASE("group axioms") {
    const PointGroup k = PointGroup::dihedral(6);
    for (int i = 0; i < k.order(); ++i) {
      CHECK((k[i] * k[i].transpose() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(k.product(i, k.inverse(i)) == k.identity());
      for (int j = 0; j < k.order(); ++j) CHECK((k[k.product(i, j)] - k[i] * k[j]).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  TEST_CASE("Bessel spherical functions") {
    const Eigen::VectorXd xi = Eigen::Vector2d(0.7, -0.2), x = Eigen::Vector2d(0.3, 0.4);
    CHECK(std::abs(bessel_spherical(PointGroup::trivial(2), xi, x) - std::polar(1.0, 2 * kPi * xi.dot(x))) < 1e-15);
    CHECK(std::abs(bessel_spherical(PointGroup::sign(1), v1(1.0), v1(0.25))) < 1e-15);

    cplx direct = 0.0;
    Eigen::Matrix2d flip;
    flip << 1, 0, 0, -1;
    for (int r = 0; r < 4; ++r)
      for (int f = 0; f < 2; ++f) {
        const Eigen::Matrix2d k = rot(r * kPi / 2) * (f ? flip : Eigen::Matrix2d::Identity());
        direct += std::polar(1.0, 2 * kPi * (k * Eigen::Vector2d(1, 0)).dot(x));
      }
    CHECK(std::abs(bessel_spherical(PointGroup::dihedral(4), Eigen::Vector2d(1, 0), x) - direct / 8.0) < 1e-14);
  }

  TEST_CASE("Bessel functional equation, symmetry and bound") {
    const PointGroup k = PointGroup::dihedral(4);
    const Eigen::VectorXd xi = Eigen::Vector2d(0.6, 0.25);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
      const Eigen::VectorXd x = Eigen::Vector2d(u(rng), u(rng)), y = Eigen::Vector2d(u(rng), u(rng));
      cplx avg = 0.0;
      for (const auto& g : k.elements()) avg += bessel_spherical(k, xi, x + g * y);
      avg /= static_cast<double>(k.order());
      CHECK(std::abs(avg - bessel_spherical(k, xi, x) * bessel_spherical(k, xi, y)) <= 1e-8);
      CHECK(std::abs(bessel_spherical(k, xi, -x) - std::conj(bessel_spherical(k, xi, x))) <= 1e-14);
      CHECK(std::abs(bessel_spherical(k, xi, x)) <= 1.0 + 1e-15);
    }
    CHECK(std::abs(bessel_spherical(k, xi, Eigen::Vector2d::Zero()) - 1.0) < 1e-15);
  }

  TEST_CASE("spherical transform") {
    const TestFunction tent = TestFunction::bspline(2, 1.0);
    const TestFunction tt = tensor(tent, tent);
    const PointGroup d4 = PointGroup::dihedral(4);
    CHECK(std::abs(spherical_ft(tt, d4, SphericalLabel::bessel(d4, Eigen::Vector2d::Zero())) - 1.0) < 1e-14);
    const cplx half = spherical_ft(tent, PointGroup::sign(1), SphericalLabel::bessel(PointGroup::sign(1), v1(0.5)));
    CHECK(std::abs(half - 4.0 / (kPi * kPi)) < 1e-14);
    const Eigen::VectorXd xi = Eigen::Vector2d(0.3, 0.8);
    CHECK(std::abs(spherical_ft(tt, d4, SphericalLabel::bessel(d4, xi)) - tt.ft(xi)) <= 1e-10);
    const TestFunction skew = tensor(tent.translated(v1(0.3)), tent);
    CHECK_THROWS_AS(spherical_ft(skew, d4, SphericalLabel::bessel(d4, xi)), InvariantViolationError);
  }

  TEST_CASE("weighted norms") {
    CHECK(weighted_norm(TestFunction::zero(1), 1.0) == 0.0);
    // int_{-1}^{1} e^{|x|} dx = 2 (e - 1)
    CHECK(std::abs(weighted_norm(TestFunction::box(1.0), 1.0) - std::sqrt(2.0 * (std::exp(1.0) - 1.0))) <= 1e-6);
    const TestFunction f = TestFunction::bspline(3, 1.2), r = TestFunction::gaussian(0.6);
    const double prod = weighted_norm(tensor(f, r), 0.8);
    CHECK(std::abs(prod - weighted_norm(f, 0.8) * weighted_norm(r, 0.8)) <= 1e-7 * prod);
    CHECK(std::abs(weighted_norm(tensor(f, r), 0.8, false) - prod) <= 1e-7 * prod);
    CHECK(std::abs(weighted_norm(f.involution(), 0.8) - weighted_norm(f, 0.8)) <= 1e-12);
  }

  TEST_CASE("weighted norm constant converges") {
    const WeightedNormParams p = weighted_norm_params(LatticeBasis(Eigen::MatrixXd::Identity(2, 2)), 1.0);
    CHECK(p.last_increment <= 1e-8);
    // sum over Z^2 of e^{-|k|_1 / 2} = (coth(1/4))^2
    const double coth = 1.0 / std::tanh(0.25);
    CHECK(std::abs(p.C * p.C - coth * coth) <= 1e-7 * coth * coth);
  }
}
