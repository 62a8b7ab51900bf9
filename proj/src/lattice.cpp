#include "modelset/lattice.hpp"

#include <cmath>
#include <limits>

#include "modelset/error.hpp"

namespace modelset {

namespace {

Eigen::MatrixXd to_double(const QuadraticMatrix& m) {
  Eigen::MatrixXd out(m.dim, m.dim);
  for (int r = 0; r < m.dim; ++r)
    for (int c = 0; c < m.dim; ++c) out(r, c) = m(r, c).to_double();
  return out;
}

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw DegenerateLatticeError("basis must be square and nonempty");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  double scale = m.cwiseAbs().maxCoeff();
  if (!lu.isInvertible() || std::abs(lu.determinant()) <= 1e-14 * std::pow(scale, static_cast<double>(m.rows()))) {
    throw DegenerateLatticeError("singular lattice basis");
  }
  return lu.inverse();
}

constexpr double kSlack = 1e-9;

}  // namespace

LatticeBasis::LatticeBasis(Eigen::MatrixXd columns) : columns_(std::move(columns)) {
  inverse_ = checked_inverse(columns_);
}

LatticeBasis::LatticeBasis(QuadraticMatrix exact) : columns_(to_double(exact)) {
  if (determinant(exact).is_zero()) throw DegenerateLatticeError("singular exact lattice basis");
  inverse_ = checked_inverse(columns_);
  exact_ = std::move(exact);
}

QuadraticVector LatticeBasis::exact_point(const IntVector& k) const {
  if (!exact_) throw Error("lattice basis has no exact form");
  const int d = dim();
  QuadraticVector out(static_cast<std::size_t>(d));
  for (int r = 0; r < d; ++r) {
    QuadraticNumber acc;
    for (int c = 0; c < d; ++c) {
      if (k[c] != 0) acc += (*exact_)(r, c) * QuadraticNumber(k[c]);
    }
    out[static_cast<std::size_t>(r)] = acc;
  }
  return out;
}

Region Region::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  if (lower.size() != upper.size()) throw Error("region bound dimensions differ");
  Region r;
  r.kind_ = Kind::Box;
  r.center_ = 0.5 * (lower + upper);
  r.lower_ = std::move(lower);
  r.upper_ = std::move(upper);
  return r;
}

Region Region::half_open_box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  Region r = box(std::move(lower), std::move(upper));
  r.kind_ = Kind::HalfOpenBox;
  return r;
}

Region Region::ball(Eigen::VectorXd center, double radius) {
  Region r;
  r.kind_ = Kind::Ball;
  r.radius_ = radius;
  r.lower_ = center.array() - radius;
  r.upper_ = center.array() + radius;
  r.center_ = std::move(center);
  return r;
}

Region Region::cube(int dim, double half_width) {
  return box(Eigen::VectorXd::Constant(dim, -half_width), Eigen::VectorXd::Constant(dim, half_width));
}

bool Region::is_empty() const {
  if (kind_ == Kind::Ball) return !(radius_ >= 0.0);
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (kind_ == Kind::HalfOpenBox ? !(lower_[i] < upper_[i]) : !(lower_[i] <= upper_[i])) return true;
  }
  return false;
}

bool Region::is_bounded() const { return lower_.allFinite() && upper_.allFinite(); }

bool Region::contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  switch (kind_) {
    case Kind::Box:
      return (x.array() >= lower_.array()).all() && (x.array() <= upper_.array()).all();
    case Kind::HalfOpenBox:
      return (x.array() >= lower_.array()).all() && (x.array() < upper_.array()).all();
    case Kind::Ball:
      return (x - center_).squaredNorm() <= radius_ * radius_;
  }
  return false;
}

double Region::volume() const {
  if (is_empty()) return 0.0;
  if (kind_ == Kind::Ball) {
    const double d = static_cast<double>(dim());
    return std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0) * std::pow(radius_, d);
  }
  return (upper_ - lower_).prod();
}

bool Region::inflated_within(double margin, const Region& outer) const {
  if (outer.dim() != dim()) throw Error("region dimension mismatch");
  if (outer.kind_ == Kind::Ball) {
    if (kind_ == Kind::Ball) return (center_ - outer.center_).norm() + radius_ + margin <= outer.radius_;
    Eigen::VectorXd far = (lower_ - outer.center_).cwiseAbs().cwiseMax((upper_ - outer.center_).cwiseAbs());
    return far.norm() + margin <= outer.radius_;
  }
  // Box-like outer region: the inflated set lies in the inflated bounding box.
  bool lo_ok = ((lower_.array() - margin) >= outer.lower_.array()).all();
  bool hi_ok = outer.kind_ == Kind::HalfOpenBox ? ((upper_.array() + margin) < outer.upper_.array()).all()
                                                : ((upper_.array() + margin) <= outer.upper_.array()).all();
  return lo_ok && hi_ok;
}

double covolume(const LatticeBasis& basis) {
  if (basis.dim() == 0) throw DegenerateLatticeError("empty basis");
  return std::abs(basis.columns().determinant());
}

LatticeBasis dual_lattice(const LatticeBasis& basis) {
  if (basis.has_exact()) return LatticeBasis(transpose(inverse(*basis.exact())));
  return LatticeBasis(Eigen::MatrixXd(basis.inverse().transpose()));
}

std::pair<IntVector, IntVector> search_box(const LatticeBasis& basis, const Eigen::VectorXd& lower,
                                           const Eigen::VectorXd& upper) {
  if (!lower.allFinite() || !upper.allFinite()) throw UnboundedRegionError("region must be bounded");
  const Eigen::MatrixXd& inv = basis.inverse();
  Eigen::VectorXd mid = 0.5 * (lower + upper);
  Eigen::VectorXd half = 0.5 * (upper - lower);
  Eigen::VectorXd c = inv * mid;
  Eigen::VectorXd w = inv.cwiseAbs() * half;
  const int d = basis.dim();
  IntVector lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = static_cast<std::int64_t>(std::ceil(c[i] - w[i] - kSlack));
    hi[i] = static_cast<std::int64_t>(std::floor(c[i] + w[i] + kSlack));
  }
  return {lo, hi};
}

std::vector<LatticePoint> enumerate_points_in_box(
    const LatticeBasis& basis, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
    const std::function<bool(const Eigen::VectorXd&)>& accept) {
  const int d = basis.dim();
  if (lower.size() != d || upper.size() != d) throw Error("region dimension does not match lattice");
  if (!lower.allFinite() || !upper.allFinite()) throw UnboundedRegionError("region must be bounded");
  std::vector<LatticePoint> out;
  if ((lower.array() > upper.array()).any()) return out;

  auto [lo, hi] = search_box(basis, lower, upper);
  if ((lo.array() > hi.array()).any()) return out;

  const Eigen::MatrixXd& B = basis.columns();
  const Eigen::VectorXd last = B.col(d - 1);
  IntVector k = lo;
  Eigen::VectorXd partial(d);

  // Outer coordinates run over the inverse-image box; the last coordinate is
  // restricted to the exact interval where B k stays inside [lower, upper].
  while (true) {
    partial.setZero();
    for (int j = 0; j + 1 < d; ++j) partial += B.col(j) * static_cast<double>(k[j]);
    double tmin = static_cast<double>(lo[d - 1]);
    double tmax = static_cast<double>(hi[d - 1]);
    bool feasible = true;
    for (int r = 0; r < d && feasible; ++r) {
      double a = last[r];
      double l = lower[r] - partial[r];
      double u = upper[r] - partial[r];
      if (std::abs(a) < 1e-300) {
        if (l > kSlack || u < -kSlack) feasible = false;
        continue;
      }
      double t1 = l / a, t2 = u / a;
      if (t1 > t2) std::swap(t1, t2);
      tmin = std::max(tmin, t1);
      tmax = std::min(tmax, t2);
    }
    if (feasible) {
      auto t0 = static_cast<std::int64_t>(std::ceil(tmin - kSlack));
      auto t1 = static_cast<std::int64_t>(std::floor(tmax + kSlack));
      for (std::int64_t t = t0; t <= t1; ++t) {
        k[d - 1] = t;
        Eigen::VectorXd x = partial + last * static_cast<double>(t);
        if ((x.array() < lower.array()).any() || (x.array() > upper.array()).any()) continue;
        if (accept && !accept(x)) continue;
        out.push_back({k, std::move(x)});
      }
    }
    int j = d - 2;
    while (j >= 0 && k[j] == hi[j]) {
      k[j] = lo[j];
      --j;
    }
    if (j < 0) break;
    ++k[j];
  }
  return out;
}

std::vector<LatticePoint> enumerate_points(const LatticeBasis& basis, const Region& region) {
  if (!region.is_bounded()) throw UnboundedRegionError("region must be bounded");
  if (region.dim() != basis.dim()) throw Error("region dimension does not match lattice");
  if (region.is_empty()) return {};
  return enumerate_points_in_box(basis, region.lower(), region.upper(),
                                 [&region](const Eigen::VectorXd& x) { return region.contains(x); });
}

}  // namespace modelset
