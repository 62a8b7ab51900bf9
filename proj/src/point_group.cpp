#include "modelset/point_group.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "modelset/error.hpp"
#include "modelset/rng.hpp"

namespace modelset {

namespace {

constexpr double kPi = 3.14159265358979323846;

int find_element(const std::vector<Eigen::MatrixXd>& els, const Eigen::MatrixXd& g) {
  for (std::size_t i = 0; i < els.size(); ++i)
    if ((els[i] - g).cwiseAbs().maxCoeff() <= 1e-9) return static_cast<int>(i);
  return -1;
}

Eigen::MatrixXd rotation(double angle) {
  Eigen::MatrixXd r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

}  // namespace

PointGroup PointGroup::generated(int dim, const std::vector<Eigen::MatrixXd>& generators, int max_order) {
  PointGroup K;
  K.dim_ = dim;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
  for (const auto& g : generators) {
    if (g.rows() != dim || g.cols() != dim) throw Error("generator dimension mismatch");
    if ((g.transpose() * g - id).cwiseAbs().maxCoeff() > 1e-10) throw Error("point-group generator is not orthogonal");
  }
  K.elements_.push_back(id);
  for (std::size_t i = 0; i < K.elements_.size(); ++i) {
    for (const auto& g : generators) {
      Eigen::MatrixXd p = K.elements_[i] * g;
      if (find_element(K.elements_, p) < 0) {
        K.elements_.push_back(p);
        if (static_cast<int>(K.elements_.size()) > max_order) throw Error("point group is not finite");
      }
    }
  }
  // Snap near-integers so that signed permutations are represented exactly.
  for (auto& e : K.elements_) {
    Eigen::MatrixXd r = e.array().round();
    if ((r - e).cwiseAbs().maxCoeff() <= 1e-12) {
      e = r;
    } else {
      K.integral_ = false;
    }
  }
  const int n = K.order();
  K.table_.resize(static_cast<std::size_t>(n * n));
  K.inverse_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int p = find_element(K.elements_, K.elements_[static_cast<std::size_t>(i)] * K.elements_[static_cast<std::size_t>(j)]);
      if (p < 0) throw Error("point group is not closed");
      K.table_[static_cast<std::size_t>(i * n + j)] = p;
      if (p == 0) K.inverse_[static_cast<std::size_t>(i)] = j;
    }
  }
  K.identity_ = 0;
  return K;
}

PointGroup PointGroup::trivial(int dim) { return generated(dim, {}); }

PointGroup PointGroup::sign(int dim) { return generated(dim, {-Eigen::MatrixXd::Identity(dim, dim)}); }

PointGroup PointGroup::cyclic(int n) {
  if (n < 1) throw Error("cyclic order must be positive");
  return generated(2, {rotation(2.0 * kPi / n)});
}

PointGroup PointGroup::dihedral(int n) {
  if (n < 1) throw Error("dihedral order must be positive");
  Eigen::MatrixXd flip(2, 2);
  flip << 1, 0, 0, -1;
  return generated(2, {rotation(2.0 * kPi / n), flip});
}

bool tolerant_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol) {
  for (Eigen::Index i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] < b[i] - tol) return true;
    if (a[i] > b[i] + tol) return false;
  }
  return a.size() < b.size();
}

std::vector<Eigen::VectorXd> orbit(const PointGroup& K, const Eigen::VectorXd& xi) {
  if (xi.size() != K.dim()) throw Error("orbit vector dimension mismatch");
  std::vector<Eigen::VectorXd> out;
  for (const auto& k : K.elements()) {
    Eigen::VectorXd v = k * xi;
    bool dup = false;
    for (const auto& w : out) {
      if ((v - w).cwiseAbs().maxCoeff() <= kOrbitTolerance) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return tolerant_less(a, b); });
  return out;
}

Eigen::VectorXd orbit_label(const PointGroup& K, const Eigen::VectorXd& xi) { return orbit(K, xi).front(); }

std::complex<double> bessel_spherical(const PointGroup& K, const Eigen::VectorXd& xi, const Eigen::VectorXd& x) {
  std::complex<double> acc = 0.0;
  for (const auto& k : K.elements()) acc += std::polar(1.0, 2.0 * kPi * (k * xi).dot(x));
  return acc / static_cast<double>(K.order());
}

SphericalLabel SphericalLabel::bessel(const PointGroup& K, const Eigen::VectorXd& xi) {
  SphericalLabel l;
  l.branch = Branch::Bessel;
  l.xi = orbit_label(K, xi);
  return l;
}

SphericalLabel SphericalLabel::nilpotent(double lambda, int m) {
  if (lambda == 0.0) throw TrivialCharacterError("nilpotent label needs a nonzero central frequency");
  if (m < 0) throw Error("Laguerre index must be nonnegative");
  SphericalLabel l;
  l.branch = Branch::Nilpotent;
  l.lambda = lambda;
  l.m = m;
  return l;
}

std::string SphericalLabel::to_string() const {
  char buf[64];
  std::string s;
  if (branch == Branch::Nilpotent) {
    std::snprintf(buf, sizeof buf, "nilpotent(%.17g,%d)", lambda, m);
    return buf;
  }
  s = "bessel(";
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.17g", i ? "," : "", xi[i]);
    s += buf;
  }
  return s + ")";
}

double invariance_residual(const TestFunction& f, const PointGroup& K, int samples, std::uint64_t seed) {
  if (f.dim() != K.dim()) throw Error("test function and point group dimensions differ");
  if (f.is_zero()) return 0.0;
  Region box = f.support();
  CounterRng rng(seed, 11);
  double worst = 0.0, scale = std::abs(f(Eigen::VectorXd::Zero(f.dim())));
  Eigen::VectorXd x(f.dim());
  for (int s = 0; s < samples; ++s) {
    for (int d = 0; d < f.dim(); ++d) x[d] = rng.uniform(box.lower()[d], box.upper()[d]);
    std::complex<double> fx = f(x);
    scale = std::max(scale, std::abs(fx));
    for (const auto& k : K.elements()) worst = std::max(worst, std::abs(f(k * x) - fx));
  }
  return scale > 0.0 ? worst / scale : worst;
}

std::complex<double> spherical_ft(const TestFunction& f, const PointGroup& K, const SphericalLabel& label) {
  if (label.branch != SphericalLabel::Branch::Bessel) throw Error("spherical_ft expects a Bessel label");
  double res = invariance_residual(f, K);
  if (res > 1e-8) throw InvariantViolationError("test function is not invariant under the point group");
  std::complex<double> acc = 0.0;
  for (const auto& k : K.elements()) acc += f.ft(k * label.xi);
  return acc / static_cast<double>(K.order());
}

}  // namespace modelset
