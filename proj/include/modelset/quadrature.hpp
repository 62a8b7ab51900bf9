#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <vector>

#include "modelset/error.hpp"

namespace modelset {

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  long evaluations = 0;
};

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 20000;
  bool throw_on_failure = true;
};

namespace quad_detail {

// Gauss-Kronrod G7/K15 on [-1, 1].
inline constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                                0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                                0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                                0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                                0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                                0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                                0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                               0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& x) { return std::abs(x); }

/// 15 nodes on [-1,1] in order, with Kronrod and Gauss weights (Gauss weight 0 on Kronrod-only nodes).
struct Rule15 {
  std::array<double, 15> x{};
  std::array<double, 15> wk{};
  std::array<double, 15> wg{};
  constexpr Rule15() {
    for (int i = 0; i < 7; ++i) {
      x[i] = -kXgk[i];
      x[14 - i] = kXgk[i];
      wk[i] = wk[14 - i] = kWgk[i];
      double g = (i % 2 == 1) ? kWg[i / 2] : 0.0;
      wg[i] = wg[14 - i] = g;
    }
    x[7] = 0.0;
    wk[7] = kWgk[7];
    wg[7] = kWg[3];
  }
};
inline constexpr Rule15 kRule15{};

/// QUADPACK error scaling: the raw Kronrod-Gauss difference overstates the Kronrod error.
inline double scaled_error(double diff, double asc) {
  if (asc == 0.0 || diff == 0.0) return diff;
  return asc * std::min(1.0, std::pow(200.0 * diff / asc, 1.5));
}

template <class T, class F>
void gk15(F& f, double a, double b, T& kr, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T k{}, g{};
  std::array<T, 15> v{};
  for (int i = 0; i < 15; ++i) {
    v[i] = f(c + h * kRule15.x[i]);
    k += kRule15.wk[i] * v[i];
    g += kRule15.wg[i] * v[i];
  }
  double asc = 0.0;
  for (int i = 0; i < 15; ++i) asc += kRule15.wk[i] * magnitude(T(v[i] - k * 0.5));
  kr = k * h;
  err = scaled_error(magnitude(T(k - g)), asc) * std::abs(h);
}

}  // namespace quad_detail

/// Adaptive Gauss-Kronrod on [a, b]; splits the interval with the largest error estimate.
template <class T, class F>
QuadResult<T> integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  struct Seg {
    double a, b;
    T value;
    double err;
    bool operator<(const Seg& o) const { return err < o.err; }
  };
  QuadResult<T> res;
  if (a == b) return res;
  std::priority_queue<Seg> heap;
  Seg s{a, b, T{}, 0.0};
  quad_detail::gk15<T>(f, a, b, s.value, s.err);
  res.evaluations += 15;
  heap.push(s);
  T total = s.value;
  double err = s.err;
  int splits = 0;
  while (err > std::max(opt.abs_tol, opt.rel_tol * quad_detail::magnitude(total))) {
    if (splits++ >= opt.max_subdivisions) {
      if (opt.throw_on_failure) throw QuadratureError("adaptive quadrature did not converge");
      break;
    }
    Seg top = heap.top();
    heap.pop();
    double mid = 0.5 * (top.a + top.b);
    Seg l{top.a, mid, T{}, 0.0}, r{mid, top.b, T{}, 0.0};
    quad_detail::gk15<T>(f, l.a, l.b, l.value, l.err);
    quad_detail::gk15<T>(f, r.a, r.b, r.value, r.err);
    res.evaluations += 30;
    total += l.value + r.value - top.value;
    err += l.err + r.err - top.err;
    heap.push(l);
    heap.push(r);
  }
  // Re-sum to limit drift from the incremental updates.
  T sum{};
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().err;
    heap.pop();
  }
  res.value = sum;
  res.error = esum;
  return res;
}

/// Integral over [a, inf) via x = a + t / (1 - t).
template <class T, class F>
QuadResult<T> integrate_to_infinity(F&& f, double a, const QuadOptions& opt = {}) {
  auto g = [&](double t) -> T {
    if (t >= 1.0) return T{};
    double u = 1.0 - t;
    return f(a + t / u) * (1.0 / (u * u));
  };
  return integrate<T>(g, 0.0, 1.0, opt);
}

/// Adaptive tensor Gauss-Kronrod cubature over the rectangle [ax, bx] x [ay, by];
/// the cell with the largest error is split along its longer side.
template <class T, class F>
QuadResult<T> integrate_2d(F&& f, double ax, double bx, double ay, double by, const QuadOptions& opt = {}) {
  struct Cell {
    double ax, bx, ay, by;
    T value;
    double err;
    bool operator<(const Cell& o) const { return err < o.err; }
  };
  const auto& R = quad_detail::kRule15;
  auto eval = [&](Cell& c) {
    const double cx = 0.5 * (c.ax + c.bx), hx = 0.5 * (c.bx - c.ax);
    const double cy = 0.5 * (c.ay + c.by), hy = 0.5 * (c.by - c.ay);
    T k{}, g{};
    std::array<T, 225> v{};
    for (int i = 0; i < 15; ++i) {
      T row_k{}, row_g{};
      const double x = cx + hx * R.x[i];
      for (int j = 0; j < 15; ++j) {
        T& vij = v[static_cast<std::size_t>(15 * i + j)];
        vij = f(x, cy + hy * R.x[j]);
        row_k += R.wk[j] * vij;
        if (R.wg[i] != 0.0) row_g += R.wg[j] * vij;
      }
      k += R.wk[i] * row_k;
      g += R.wg[i] * row_g;
    }
    double asc = 0.0;
    for (int i = 0; i < 15; ++i)
      for (int j = 0; j < 15; ++j)
        asc += R.wk[i] * R.wk[j] * quad_detail::magnitude(T(v[static_cast<std::size_t>(15 * i + j)] - k * 0.25));
    c.value = k * (hx * hy);
    c.err = quad_detail::scaled_error(quad_detail::magnitude(T(k - g)), asc) * std::abs(hx * hy);
  };
  QuadResult<T> res;
  if (ax == bx || ay == by) return res;
  std::priority_queue<Cell> heap;
  Cell c0{ax, bx, ay, by, T{}, 0.0};
  eval(c0);
  res.evaluations += 225;
  heap.push(c0);
  T total = c0.value;
  double err = c0.err;
  int splits = 0;
  while (err > std::max(opt.abs_tol, opt.rel_tol * quad_detail::magnitude(total))) {
    if (splits++ >= opt.max_subdivisions) {
      if (opt.throw_on_failure) throw QuadratureError("adaptive cubature did not converge");
      break;
    }
    Cell top = heap.top();
    heap.pop();
    Cell l = top, r = top;
    if (top.bx - top.ax >= top.by - top.ay) {
      l.bx = r.ax = 0.5 * (top.ax + top.bx);
    } else {
      l.by = r.ay = 0.5 * (top.ay + top.by);
    }
    eval(l);
    eval(r);
    res.evaluations += 450;
    total += l.value + r.value - top.value;
    err += l.err + r.err - top.err;
    heap.push(l);
    heap.push(r);
  }
  T sum{};
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().err;
    heap.pop();
  }
  res.value = sum;
  res.error = esum;
  return res;
}

/// n-point Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Trapezoid rule on [0, period) with n equispaced nodes; spectrally accurate for smooth periodic f.
template <class T, class F>
T periodic_trapezoid(F&& f, double period, int n) {
  T acc{};
  for (int i = 0; i < n; ++i) acc += f(period * i / n);
  return acc * (period / n);
}

}  // namespace modelset
