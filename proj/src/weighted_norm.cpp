#include "modelset/weighted_norm.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "modelset/error.hpp"
#include "modelset/quadrature.hpp"

namespace modelset {

WeightedNormParams weighted_norm_params(const LatticeBasis& gamma, double alpha, double tol) {
  if (!(alpha > 0.0)) throw Error("alpha must be positive");
  const int d = gamma.dim();
  const double step = std::max(1.0, 2.0 * std::pow(std::abs(gamma.columns().determinant()), 1.0 / d));
  WeightedNormParams p;
  p.alpha = alpha;
  double sum = 0.0;
  double inner = -1.0;
  double outer = step;
  for (int iter = 0; iter < 10000; ++iter) {
    double shell = 0.0;
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(d, -outer);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(d, outer);
    for (const auto& pt : enumerate_points_in_box(gamma, lo, hi, [&](const Eigen::VectorXd& x) {
           double r = x.lpNorm<1>();
           return r > inner && r <= outer;
         })) {
      shell += std::exp(-0.5 * alpha * pt.point.lpNorm<1>());
    }
    sum += shell;
    p.last_increment = shell;
    p.radius = outer;
    // A shell far beyond the decay scale with a tiny sum means the tail has settled.
    if (iter > 0 && shell <= tol && outer * alpha > 2.0) break;
    inner = outer;
    outer += step;
  }
  p.C = std::sqrt(sum);
  return p;
}

namespace {

// Points where a box-convolution atom can fail to be smooth: shift + sum of +-h/2.
void add_knots(const Atom1D& a, std::vector<double>& out) {
  if (a.gauss_var > 0.0 || a.boxes.size() > 10) return;
  const std::size_t k = a.boxes.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    double x = a.shift;
    for (std::size_t i = 0; i < k; ++i) x += ((mask >> i) & 1 ? 0.5 : -0.5) * a.boxes[i];
    out.push_back(x);
  }
}

// Sorted breakpoints in [lo, hi]: the ends, 0 and the knots of every factor in dimension d.
std::vector<double> breakpoints(const TestFunction& f, int d, double lo, double hi) {
  std::vector<double> pts{lo, 0.0, hi};
  for (const auto& t : f.terms()) add_knots(t.factors[static_cast<std::size_t>(d)], pts);
  std::vector<double> out;
  for (double x : pts)
    if (x >= lo && x <= hi) out.push_back(x);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) <= 1e-14; }), out.end());
  return out;
}

template <class F>
double piecewise(F&& f, const std::vector<double>& pts, const QuadOptions& opt) {
  double v = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) v += integrate<double>(f, pts[i], pts[i + 1], opt).value;
  return v;
}

double atom_pair_integral(const Atom1D& a, const Atom1D& b, double alpha) {
  double lo = std::max(a.shift - a.half_width(), b.shift - b.half_width());
  double hi = std::min(a.shift + a.half_width(), b.shift + b.half_width());
  if (lo >= hi) return 0.0;
  auto f = [&](double x) { return a.value(x) * b.value(x) * std::exp(alpha * std::abs(x)); };
  std::vector<double> pts{lo, 0.0, hi};
  add_knots(a, pts);
  add_knots(b, pts);
  std::sort(pts.begin(), pts.end());
  std::vector<double> inside;
  for (double x : pts)
    if (x >= lo && x <= hi && (inside.empty() || x > inside.back())) inside.push_back(x);
  return piecewise(f, inside, QuadOptions{1e-15, 1e-12, 5000, true});
}

}  // namespace

double weighted_norm(const TestFunction& f, double alpha, bool factorize) {
  if (f.is_zero()) return 0.0;
  if (factorize) {
    std::complex<double> total = 0.0;
    for (const auto& s : f.terms()) {
      for (const auto& t : f.terms()) {
        std::complex<double> v = s.coef * std::conj(t.coef);
        for (int d = 0; d < f.dim() && v != 0.0; ++d)
          v *= atom_pair_integral(s.factors[static_cast<std::size_t>(d)], t.factors[static_cast<std::size_t>(d)], alpha);
        total += v;
      }
    }
    return std::sqrt(std::max(0.0, total.real()));
  }
  Region box = f.support();
  QuadOptions opt{1e-13, 1e-10, 200000, true};
  if (f.dim() == 1) {
    auto g = [&](double x) { return std::norm(f(Eigen::VectorXd::Constant(1, x))) * std::exp(alpha * std::abs(x)); };
    return std::sqrt(piecewise(g, breakpoints(f, 0, box.lower()[0], box.upper()[0]), opt));
  }
  if (f.dim() == 2) {
    Eigen::VectorXd x(2);
    auto g = [&](double a, double b) {
      x << a, b;
      return std::norm(f(x)) * std::exp(alpha * (std::abs(a) + std::abs(b)));
    };
    // Cells between the kinks of the weight and of the factors are smooth.
    const std::vector<double> xs = breakpoints(f, 0, box.lower()[0], box.upper()[0]);
    const std::vector<double> ys = breakpoints(f, 1, box.lower()[1], box.upper()[1]);
    double v = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      for (std::size_t j = 0; j + 1 < ys.size(); ++j) v += integrate_2d<double>(g, xs[i], xs[i + 1], ys[j], ys[j + 1], opt).value;
    return std::sqrt(v);
  }
  throw Error("direct weighted-norm quadrature supports dimensions 1 and 2");
}

}  // namespace modelset
