#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "modelset/error.hpp"
#include "modelset/scheme.hpp"

using namespace modelset;

namespace {
const double kSqrt2 = std::sqrt(2.0);

Eigen::VectorXd v1(double x) { return Eigen::VectorXd::Constant(1, x); }
Region interval(double a, double b) { return Region::box(v1(a), v1(b)); }

std::vector<double> sorted_points(const ModelSet& ms) {
  std::vector<double> x(ms.physical.data(), ms.physical.data() + ms.size());
  std::sort(x.begin(), x.end());
  return x;
}
}  // namespace

TEST_SUITE("scheme") {
  TEST_CASE("integer scheme keeps the zero internal layer") {
    const ModelSet ms = cut_and_project(Scheme::integer(1, 1), Window::interval(-0.4, 0.4), interval(0, 5));
    CHECK(sorted_points(ms) == std::vector<double>{0, 1, 2, 3, 4, 5});
  }

  TEST_CASE("sqrt2 chain matches the naive double loop") {
    const ModelSet ms = cut_and_project(Scheme::sqrt2_chain(), Window::interval(-1, 1), interval(0, 10));
    std::vector<double> naive;
    for (int a = -20; a <= 20; ++a)
      for (int b = -20; b <= 20; ++b) {
        const double x = a + b * kSqrt2, y = a - b * kSqrt2;
        if (y >= -1 && y < 1 && x >= 0 && x <= 10) naive.push_back(x);
      }
    std::sort(naive.begin(), naive.end());
    const auto got = sorted_points(ms);
    REQUIRE(got.size() == naive.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(naive[i]).epsilon(1e-14));
  }

  TEST_CASE("empty window gives an empty model set") {
    const ModelSet ms = cut_and_project(Scheme::sqrt2_chain(), Window::empty(1), interval(0, 10));
    CHECK(ms.empty());
    CHECK(density(ms) == 0.0);
  }

  TEST_CASE("density") {
    const ModelSet z = cut_and_project(Scheme::integer(1, 1), Window::interval(-0.4, 0.4), interval(0, 1e4));
    CHECK(std::abs(density(z) - 1.0) <= 1e-3);
    const ModelSet c = cut_and_project(Scheme::sqrt2_chain(), Window::interval(-1, 1), interval(-1e4, 1e4));
    CHECK(std::abs(density(c) - 1.0 / kSqrt2) <= 5e-4);
  }

  TEST_CASE("density times covolume approaches the window volume") {
    const Scheme sc = Scheme::sqrt2_chain();
    const Window w = Window::interval(-0.7, 0.9);
    const double covol = covolume(sc.gamma);
    const double a = density(cut_and_project(sc, w, interval(-2e3, 2e3))) * covol;
    const double b = density(cut_and_project(sc, w, interval(-8e3, 8e3))) * covol;
    CHECK(std::abs(a - b) <= 1e-2);
    CHECK(std::abs(b - w.volume()) <= 1e-2);
  }

  TEST_CASE("finite local complexity report") {
    const ModelSet z = cut_and_project(Scheme::integer(1, 1), Window::interval(-0.4, 0.4), interval(0, 20));
    const FlcReport rz = flc_report(z, 1.5);
    CHECK(rz.min_distance == doctest::Approx(1.0));
    CHECK(rz.max_count_per_ball == 3);

    Eigen::MatrixXd b(2, 2);
    b << 2, 0, 0, 1;
    const Scheme two(1, 1, LatticeBasis(b));
    const FlcReport r2 = flc_report(cut_and_project(two, Window::interval(-0.4, 0.4), interval(0, 20)), 1.5);
    CHECK(r2.min_distance == doctest::Approx(2.0));
    CHECK(r2.max_count_per_ball == 1);

    const ModelSet c = cut_and_project(Scheme::sqrt2_chain(), Window::interval(-1, 1), interval(0, 300));
    double brute = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < c.size(); ++i)
      for (Eigen::Index j = i + 1; j < c.size(); ++j)
        brute = std::min(brute, std::abs(c.physical(0, i) - c.physical(0, j)));
    CHECK(flc_report(c, 2.0).min_distance == doctest::Approx(brute).epsilon(1e-14));
  }

  TEST_CASE("monotone in the window") {
    const Scheme sc = Scheme::sqrt2_chain();
    const auto small = sorted_points(cut_and_project(sc, Window::interval(-0.5, 0.5), interval(-50, 50)));
    const auto large = sorted_points(cut_and_project(sc, Window::interval(-1, 1), interval(-50, 50)));
    CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
  }

  TEST_CASE("translation by a lattice point") {
    const Scheme sc = Scheme::sqrt2_chain();
    const double phys = 1.0 + kSqrt2, internal = 1.0 - kSqrt2;
    const auto base = sorted_points(cut_and_project(sc, Window::interval(-1, 1), interval(0, 40)));
    const auto shifted = sorted_points(
        cut_and_project(sc, Window::interval(-1 + internal, 1 + internal), interval(phys, 40 + phys)));
    REQUIRE(base.size() == shifted.size());
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(shifted[i] == doctest::Approx(base[i] + phys).epsilon(1e-13));
  }

  TEST_CASE("count bound dominates actual counts") {
    const Scheme sc = Scheme::sqrt2_chain();
    const Window w = Window::interval(-1, 1);
    const ModelSet ms = cut_and_project(sc, w, interval(0, 500));
    for (double side : {1.0, 3.0, 10.0}) {
      const double bound = count_bound(sc, w, v1(side));
      for (double x0 = 0; x0 + side <= 500; x0 += side / 2) {
        int n = 0;
        for (Eigen::Index i = 0; i < ms.size(); ++i) n += ms.physical(0, i) >= x0 && ms.physical(0, i) <= x0 + side;
        CHECK(n <= bound);
      }
    }
  }

  TEST_CASE("scheme diagnostics") {
    const SchemeDiagnostics d = diagnose_scheme(Scheme::sqrt2_chain(), Window::interval(-1, 1));
    CHECK(d.injective);
    CHECK(d.dense);
    const SchemeDiagnostics z = diagnose_scheme(Scheme::integer(1, 1), Window::interval(-1, 1));
    CHECK_FALSE(z.injective);
  }

  TEST_CASE("csv export") {
    const ModelSet ms = cut_and_project(Scheme::integer(1, 1), Window::interval(-0.4, 0.4), interval(0, 2));
    std::ostringstream os;
    write_csv(ms, os);
    CHECK(os.str().rfind("k0,k1,x0,h0\n", 0) == 0);
  }
}
