#include <cmath>
#include <random>

#include "doctest.h"
#include "modelset/error.hpp"
#include "modelset/lattice.hpp"
#include "modelset/scheme.hpp"

using namespace modelset;

namespace {
const double kSqrt2 = std::sqrt(2.0);

Eigen::MatrixXd chain_basis() {
  Eigen::MatrixXd b(2, 2);
  b << 1, kSqrt2, 1, -kSqrt2;
  return b;
}
}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("covolume") {
    CHECK(covolume(LatticeBasis(Eigen::MatrixXd::Identity(2, 2))) == doctest::Approx(1.0));
    CHECK(covolume(LatticeBasis(chain_basis())) == doctest::Approx(2.0 * kSqrt2).epsilon(1e-14));
    CHECK(covolume(LatticeBasis(Eigen::Vector2d(2.0, 0.5).asDiagonal().toDenseMatrix())) == doctest::Approx(1.0));
    Eigen::MatrixXd sing(2, 2);
    sing << 1, 2, 2, 4;
    CHECK_THROWS_AS(LatticeBasis{sing}, DegenerateLatticeError);
  }

  TEST_CASE("dual lattice examples") {
    const LatticeBasis d = dual_lattice(LatticeBasis(chain_basis()));
    Eigen::MatrixXd want(2, 2);
    want << 0.5, kSqrt2 / 4, 0.5, -kSqrt2 / 4;
    CHECK((d.columns() - want).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((d.columns().transpose() * chain_basis() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
    const LatticeBasis dd = dual_lattice(LatticeBasis(Eigen::Vector2d(2.0, 0.5).asDiagonal().toDenseMatrix()));
    CHECK(dd.columns()(0, 0) == doctest::Approx(0.5));
    CHECK(dd.columns()(1, 1) == doctest::Approx(2.0));
  }

  TEST_CASE("dual of dual and covolume product on random bases") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      const int d = 2 + trial % 3;
      Eigen::MatrixXd b = Eigen::MatrixXd::Identity(d, d) * 2.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) b(i, j) += 0.5 * u(rng);
      const LatticeBasis lb(b);
      const LatticeBasis dd = dual_lattice(dual_lattice(lb));
      CHECK((dd.columns() - b).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(std::abs(covolume(dual_lattice(lb)) * covolume(lb) - 1.0) <= 1e-10);
    }
  }

  TEST_CASE("exact basis matches the float basis") {
    const Scheme sc = Scheme::sqrt2_chain();
    REQUIRE(sc.gamma.has_exact());
    const QuadraticMatrix& e = *sc.gamma.exact();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::abs(e(i, j).to_double() - sc.gamma.columns()(i, j)) <= 1e-12);
  }

  TEST_CASE("enumeration examples") {
    const LatticeBasis z2(Eigen::MatrixXd::Identity(2, 2));
    CHECK(enumerate_points(z2, Region::cube(2, 1.5)).size() == 9);
    CHECK(enumerate_points(z2, Region::box(Eigen::Vector2d(0.2, 0.2), Eigen::Vector2d(0.8, 0.8))).empty());

    const LatticeBasis chain(chain_basis());
    const auto pts = enumerate_points(chain, Region::cube(2, 3.0));
    std::size_t naive = 0;
    for (int a = -10; a <= 10; ++a)
      for (int b = -10; b <= 10; ++b) {
        const double x = a + b * kSqrt2, y = a - b * kSqrt2;
        if (std::abs(x) <= 3.0 && std::abs(y) <= 3.0) ++naive;
      }
    CHECK(pts.size() == naive);
  }

  TEST_CASE("enumeration order, membership and symmetry") {
    const LatticeBasis chain(chain_basis());
    const Region reg = Region::ball(Eigen::Vector2d::Zero(), 4.0);
    const auto pts = enumerate_points(chain, reg);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(reg.contains(pts[i].point));
      if (i > 0) {
        const auto& p = pts[i - 1].coords;
        const auto& c = pts[i].coords;
        CHECK(std::lexicographical_compare(p.data(), p.data() + p.size(), c.data(), c.data() + c.size()));
      }
      bool has_negative = false;
      for (const auto& q : pts) has_negative = has_negative || (q.coords == -pts[i].coords);
      CHECK(has_negative);
    }
    const auto [lo, hi] = search_box(chain, Eigen::Vector2d(-4, -4), Eigen::Vector2d(4, 4));
    std::size_t inside = 0;
    for (std::int64_t a = lo[0]; a <= hi[0]; ++a)
      for (std::int64_t b = lo[1]; b <= hi[1]; ++b) {
        IntVector k(2);
        k << a, b;
        if (reg.contains(chain.point(k))) ++inside;
      }
    CHECK(inside == pts.size());
  }

  TEST_CASE("unbounded regions are rejected") {
    const LatticeBasis z2(Eigen::MatrixXd::Identity(2, 2));
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(enumerate_points(z2, Region::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(inf, 1))),
                    UnboundedRegionError);
  }
}
