#include "modelset/window.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modelset/error.hpp"
#include "modelset/rng.hpp"

namespace modelset {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Integral of exp(-2 pi i xi x) over an interval of width w centred at c.
cplx interval_ft(double xi, double c, double w) {
  double a = kPi * w * xi;
  double sinc = std::abs(a) < 1e-8 ? w * (1.0 - a * a / 6.0) : std::sin(a) / (kPi * xi);
  return std::polar(1.0, -2.0 * kPi * xi * c) * sinc;
}

double ball_ball_overlap(int d, double r1, double r2, double D) {
  if (D >= r1 + r2) return 0.0;
  double rmin = std::min(r1, r2);
  if (D <= std::abs(r1 - r2)) return ball_volume(d, rmin);
  switch (d) {
    case 1:
      return r1 + r2 - D;
    case 2: {
      double a1 = std::acos(std::clamp((D * D + r1 * r1 - r2 * r2) / (2 * D * r1), -1.0, 1.0));
      double a2 = std::acos(std::clamp((D * D + r2 * r2 - r1 * r1) / (2 * D * r2), -1.0, 1.0));
      double k = (-D + r1 + r2) * (D + r1 - r2) * (D - r1 + r2) * (D + r1 + r2);
      return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * std::sqrt(std::max(k, 0.0));
    }
    case 3: {
      double t = r1 + r2 - D;
      return kPi * t * t * (D * D + 2 * D * (r1 + r2) - 3 * (r1 - r2) * (r1 - r2)) / (12 * D);
    }
    default:
      return std::nan("");
  }
}

}  // namespace

double ball_volume(int d, double r) {
  double dd = static_cast<double>(d);
  return std::pow(kPi, dd / 2.0) / std::tgamma(dd / 2.0 + 1.0) * std::pow(r, dd);
}

WindowPiece WindowPiece::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  if (lower.size() != upper.size() || lower.size() == 0) throw Error("box piece bounds mismatch");
  if ((upper.array() < lower.array()).any()) throw Error("box piece with reversed bounds");
  WindowPiece p;
  p.kind = Kind::Box;
  p.center = 0.5 * (lower + upper);
  p.lower = std::move(lower);
  p.upper = std::move(upper);
  return p;
}

WindowPiece WindowPiece::ball(Eigen::VectorXd center, double radius) {
  if (!(radius >= 0.0) || center.size() == 0) throw Error("ball piece needs radius >= 0");
  WindowPiece p;
  p.kind = Kind::Ball;
  p.center = std::move(center);
  p.radius = radius;
  return p;
}

bool WindowPiece::contains(const Eigen::Ref<const Eigen::VectorXd>& h) const {
  if (kind == Kind::Box) return (h.array() >= lower.array()).all() && (h.array() < upper.array()).all();
  return (h - center).squaredNorm() <= radius * radius;
}

double WindowPiece::volume() const {
  if (kind == Kind::Box) return (upper - lower).prod();
  return ball_volume(dim(), radius);
}

Eigen::VectorXd WindowPiece::bbox_lower() const {
  return kind == Kind::Box ? lower : Eigen::VectorXd(center.array() - radius);
}

Eigen::VectorXd WindowPiece::bbox_upper() const {
  return kind == Kind::Box ? upper : Eigen::VectorXd(center.array() + radius);
}

cplx WindowPiece::ft(const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  if (kind == Kind::Box) {
    cplx acc = 1.0;
    for (int i = 0; i < dim(); ++i) acc *= interval_ft(xi[i], center[i], upper[i] - lower[i]);
    return acc;
  }
  double k = xi.norm();
  cplx phase = std::polar(1.0, -2.0 * kPi * xi.dot(center));
  if (k * radius < 1e-10) return phase * volume();
  double nu = dim() / 2.0;
  return phase * std::pow(radius / k, nu) * std::cyl_bessel_j(nu, 2.0 * kPi * radius * k);
}

bool WindowPiece::within(const WindowPiece& o) const {
  if (o.kind == Kind::Box) {
    return (bbox_lower().array() >= o.lower.array()).all() && (bbox_upper().array() <= o.upper.array()).all();
  }
  if (kind == Kind::Ball) return (center - o.center).norm() + radius <= o.radius;
  Eigen::VectorXd far = (lower - o.center).cwiseAbs().cwiseMax((upper - o.center).cwiseAbs());
  return far.norm() <= o.radius;
}

bool WindowPiece::disjoint_from(const WindowPiece& o) const {
  if (kind == Kind::Ball && o.kind == Kind::Ball) return (center - o.center).norm() > radius + o.radius;
  Eigen::VectorXd lo = bbox_lower().cwiseMax(o.bbox_lower());
  Eigen::VectorXd hi = bbox_upper().cwiseMin(o.bbox_upper());
  if ((hi.array() <= lo.array()).any()) return true;
  if (kind == Kind::Box && o.kind == Kind::Box) return false;
  // Box against ball: distance from the ball centre to the box.
  const WindowPiece& b = kind == Kind::Box ? *this : o;
  const WindowPiece& c = kind == Kind::Box ? o : *this;
  Eigen::VectorXd nearest = c.center.cwiseMax(b.lower).cwiseMin(b.upper);
  return (nearest - c.center).norm() > c.radius;
}

Window Window::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  Window w(static_cast<int>(lower.size()));
  w.unite(WindowPiece::box(std::move(lower), std::move(upper)));
  return w;
}

Window Window::ball(Eigen::VectorXd center, double radius) {
  Window w(static_cast<int>(center.size()));
  w.unite(WindowPiece::ball(std::move(center), radius));
  return w;
}

Window Window::interval(double lo, double hi) {
  return box(Eigen::VectorXd::Constant(1, lo), Eigen::VectorXd::Constant(1, hi));
}

Window& Window::unite(const WindowPiece& piece) {
  if (piece.dim() != dim_) throw Error("window piece dimension mismatch");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (signs_[i] > 0 && !piece.disjoint_from(pieces_[i])) throw Error("window pieces must be disjoint");
  }
  pieces_.push_back(piece);
  signs_.push_back(+1);
  return *this;
}

Window& Window::subtract(const WindowPiece& piece) {
  if (piece.dim() != dim_) throw Error("window piece dimension mismatch");
  bool inside = false;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (signs_[i] > 0 && piece.within(pieces_[i])) inside = true;
    if (signs_[i] < 0 && !piece.disjoint_from(pieces_[i])) throw Error("window holes must be disjoint");
  }
  if (!inside) throw Error("window hole must lie inside one positive piece");
  pieces_.push_back(piece);
  signs_.push_back(-1);
  return *this;
}

bool Window::contains(const Eigen::Ref<const Eigen::VectorXd>& h) const {
  bool in = false;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (!pieces_[i].contains(h)) continue;
    if (signs_[i] < 0) return false;
    in = true;
  }
  return in;
}

double Window::volume() const {
  double v = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) v += signs_[i] * pieces_[i].volume();
  return v;
}

Eigen::VectorXd Window::bbox_lower() const {
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(dim_, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (signs_[i] > 0) lo = lo.cwiseMin(pieces_[i].bbox_lower());
  return lo;
}

Eigen::VectorXd Window::bbox_upper() const {
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(dim_, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (signs_[i] > 0) hi = hi.cwiseMax(pieces_[i].bbox_upper());
  return hi;
}

double Window::diameter() const {
  if (pieces_.empty()) return 0.0;
  return (bbox_upper() - bbox_lower()).norm();
}

cplx Window::ft(const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) acc += static_cast<double>(signs_[i]) * pieces_[i].ft(xi);
  return acc;
}

OverlapVolume Window::overlap_volume(const Eigen::Ref<const Eigen::VectorXd>& s, std::uint64_t seed,
                                     std::int64_t samples) const {
  if (s.size() != dim_) throw Error("shift dimension mismatch");
  OverlapVolume out;
  if (pieces_.empty()) return out;

  // The indicator is sum(sign_i 1_{P_i}), so the overlap is the bilinear sum
  // over piece pairs of vol(P_i ∩ (P_j - s)).
  bool closed = true;
  double total = 0.0;
  for (std::size_t i = 0; i < pieces_.size() && closed; ++i) {
    for (std::size_t j = 0; j < pieces_.size() && closed; ++j) {
      const WindowPiece& a = pieces_[i];
      const WindowPiece& b = pieces_[j];
      double v = 0.0;
      if (a.kind == WindowPiece::Kind::Box && b.kind == WindowPiece::Kind::Box) {
        v = 1.0;
        for (int k = 0; k < dim_; ++k) {
          double lo = std::max(a.lower[k], b.lower[k] - s[k]);
          double hi = std::min(a.upper[k], b.upper[k] - s[k]);
          v *= std::max(0.0, hi - lo);
        }
      } else if (a.kind == WindowPiece::Kind::Ball && b.kind == WindowPiece::Kind::Ball && dim_ <= 3) {
        v = ball_ball_overlap(dim_, a.radius, b.radius, (a.center - (b.center - s)).norm());
      } else {
        closed = false;
      }
      total += signs_[i] * signs_[j] * v;
    }
  }
  if (closed) {
    out.value = std::max(0.0, total);
    return out;
  }

  Eigen::VectorXd lo = bbox_lower().cwiseMax(bbox_lower() - s);
  Eigen::VectorXd hi = bbox_upper().cwiseMin(bbox_upper() - s);
  if ((hi.array() <= lo.array()).any()) return out;
  double box_vol = (hi - lo).prod();
  CounterRng rng(seed, 0x5eed);
  std::int64_t hits = 0;
  Eigen::VectorXd h(dim_);
  for (std::int64_t n = 0; n < samples; ++n) {
    for (int k = 0; k < dim_; ++k) h[k] = rng.uniform(lo[k], hi[k]);
    if (contains(h) && contains(h + s)) ++hits;
  }
  double p = static_cast<double>(hits) / static_cast<double>(samples);
  out.value = box_vol * p;
  out.stderr_ = box_vol * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  out.exact = false;
  return out;
}

}  // namespace modelset
