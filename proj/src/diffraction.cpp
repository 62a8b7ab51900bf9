#include "modelset/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "modelset/error.hpp"
#include "modelset/quadrature.hpp"

namespace modelset {

namespace {

constexpr double kPi = 3.14159265358979323846;

double rel_diff(double a, double b) {
  double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// Upper bound on |ft 1_W (xi)| over |xi| >= R.
double window_ft_envelope(const Window& w, double R) {
  double total = 0.0;
  const int m = w.dim();
  for (const auto& p : w.pieces()) {
    if (p.kind == WindowPiece::Kind::Box) {
      Eigen::VectorXd widths = p.upper - p.lower;
      double best = 0.0;
      // Some coordinate has |xi_i| >= R / sqrt(m).
      for (int i = 0; i < m; ++i) {
        double v = std::min(widths[i], std::sqrt(static_cast<double>(m)) / (kPi * R));
        for (int j = 0; j < m; ++j)
          if (j != i) v *= widths[j];
        best = std::max(best, v);
      }
      total += best;
    } else {
      double nu = m / 2.0;
      total += std::min(p.volume(), std::pow(p.radius / R, nu) * std::sqrt(2.0 / (kPi * 2.0 * kPi * p.radius * R)));
    }
  }
  return total;
}

bool atom_less(const PeakAtom& a, const PeakAtom& b) { return tolerant_less(a.label.xi, b.label.xi); }

double l2_norm_squared(const TestFunction& f) {
  double n = weighted_norm(f, 0.0);
  return n * n;
}

}  // namespace

double PurePointMeasure::intensity_at(const Eigen::VectorXd& xi1, double tol) const {
  double s = 0.0;
  for (const auto& a : atoms)
    if (a.label.xi.size() == xi1.size() && (a.label.xi - xi1).cwiseAbs().maxCoeff() <= tol) s += a.intensity;
  return s;
}

std::vector<LatticePoint> dual_points(const Scheme& scheme, double R) {
  LatticeBasis dual = dual_lattice(scheme.gamma);
  const int n = scheme.n, m = scheme.m;
  // Points on the sphere |xi| = R are kept whatever the rounding in the chosen basis.
  const double Rs = R * (1.0 + 1e-12);
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(n + m, -Rs);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(n + m, Rs);
  return enumerate_points_in_box(dual, lo, hi, [&](const Eigen::VectorXd& x) {
    return x.head(n).squaredNorm() <= Rs * Rs && x.tail(m).squaredNorm() <= Rs * Rs;
  });
}

PurePointMeasure meyer_diffraction(const Scheme& scheme, const Window& window, double dual_radius) {
  return spherical_diffraction(scheme, PointGroup::trivial(scheme.n), window, dual_radius);
}

ShadowValue shadow_transform_va(const Scheme& scheme, const PointGroup& K, const FourierFn& r_ft,
                                const Eigen::VectorXd& xi1, double internal_radius) {
  if (xi1.size() != scheme.n || K.dim() != scheme.n) throw Error("shadow transform dimension mismatch");
  LatticeBasis dual = dual_lattice(scheme.gamma);
  const int n = scheme.n, m = scheme.m;
  ShadowValue out;
  out.label = SphericalLabel::bessel(K, xi1);
  constexpr double tol = 1e-9;
  for (const auto& eta : orbit(K, xi1)) {
    Eigen::VectorXd lo(n + m), hi(n + m);
    lo << eta.array() - tol, Eigen::VectorXd::Constant(m, -internal_radius);
    hi << eta.array() + tol, Eigen::VectorXd::Constant(m, internal_radius);
    for (const auto& p : enumerate_points_in_box(dual, lo, hi, nullptr)) {
      Eigen::VectorXd xi2 = p.point.tail(m);
      out.value += std::norm(r_ft(xi2));
      out.partners.push_back(std::move(xi2));
    }
  }
  if (out.partners.empty()) throw LabelNotInSpectrumError("orbit does not meet the projection of the dual lattice");
  return out;
}

PurePointMeasure spherical_diffraction(const Scheme& scheme, const PointGroup& K, const Window& window,
                                       double dual_radius) {
  if (K.dim() != scheme.n) throw Error("point group must act on physical space");
  const double covol = covolume(scheme.gamma);
  const double c2 = covol * covol;
  PurePointMeasure pm;
  pm.dual_radius = dual_radius;
  double env = window.pieces().empty() ? 0.0 : window_ft_envelope(window, dual_radius);
  pm.tail_bound = env * env / c2;

  const bool trivial = K.order() == 1;
  std::vector<PeakAtom> raw;
  for (auto& p : dual_points(scheme, dual_radius)) {
    PeakAtom a;
    Eigen::VectorXd xi1 = p.point.head(scheme.n);
    a.label.branch = SphericalLabel::Branch::Bessel;
    a.label.xi = trivial ? xi1 : orbit_label(K, xi1);
    a.xi2 = p.point.tail(scheme.m);
    a.dual_coords = p.coords;
    a.intensity = window.pieces().empty() ? 0.0 : std::norm(window.ft(a.xi2)) / c2;
    raw.push_back(std::move(a));
  }
  std::stable_sort(raw.begin(), raw.end(), atom_less);
  for (auto& a : raw) {
    if (!pm.atoms.empty() && !atom_less(pm.atoms.back(), a) && !atom_less(a, pm.atoms.back())) {
      pm.atoms.back().intensity += a.intensity;
      pm.atoms.back().multiplicity += 1;
    } else {
      pm.atoms.push_back(std::move(a));
    }
  }
  return pm;
}

double l2_mass_outside(const FourierFn& ft, int dim, double total_mass, double R) {
  QuadOptions opt{1e-15 * std::max(total_mass, 1e-300), 1e-13, 200000, false};
  double inner = 0.0;
  if (dim == 1) {
    Eigen::VectorXd x(1);
    auto g = [&](double t) {
      x[0] = t;
      return std::norm(ft(x));
    };
    // Split into unit pieces so oscillations are resolved uniformly.
    const int pieces = std::max(1, static_cast<int>(std::ceil(2.0 * R)));
    for (int i = 0; i < pieces; ++i) {
      double a = -R + 2.0 * R * i / pieces, b = -R + 2.0 * R * (i + 1) / pieces;
      inner += integrate<double>(g, a, b, opt).value;
    }
  } else if (dim == 2) {
    Eigen::VectorXd x(2);
    auto g = [&](double rho, double th) {
      x << rho * std::cos(th), rho * std::sin(th);
      return rho * std::norm(ft(x));
    };
    const int pieces = std::max(1, static_cast<int>(std::ceil(R)));
    for (int i = 0; i < pieces; ++i) {
      double a = R * i / pieces, b = R * (i + 1) / pieces;
      for (int q = 0; q < 4; ++q) inner += integrate_2d<double>(g, a, b, q * kPi / 2, (q + 1) * kPi / 2, opt).value;
    }
  } else {
    throw Error("l2_mass_outside supports dimensions 1 and 2");
  }
  return std::max(0.0, total_mass - inner);
}

double periodization_norm_squared(const Scheme& scheme, const TestFunction& f, const TestFunction& r, int grid) {
  if (f.dim() != scheme.n || r.dim() != scheme.m) throw Error("test function dimensions do not match the scheme");
  if (f.is_zero() || r.is_zero()) return 0.0;
  const int n = scheme.n, m = scheme.m, d = n + m;
  const Eigen::MatrixXd& B = scheme.gamma.columns();
  if (grid <= 0) grid = (f.is_gaussian_class() && r.is_gaussian_class()) ? 96 : 192;

  Region sf = f.support(), sr = r.support();
  Eigen::VectorXd slo(d), shi(d);
  slo << sf.lower(), sr.lower();
  shi << sf.upper(), sr.upper();
  // x = B u with u in [0,1]^d spans the box [cmin, cmax].
  Eigen::VectorXd cmin = B.cwiseMin(0.0).rowwise().sum();
  Eigen::VectorXd cmax = B.cwiseMax(0.0).rowwise().sum();
  auto shifts = enumerate_points_in_box(scheme.gamma, slo - cmax, shi - cmin, nullptr);

  const long total = static_cast<long>(std::pow(grid, d));
  double acc = 0.0;
  Eigen::VectorXd u(d), x(d);
#pragma omp parallel for reduction(+ : acc) firstprivate(u, x) schedule(static)
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    for (int i = 0; i < d; ++i) {
      u[i] = static_cast<double>(rem % grid) / grid;
      rem /= grid;
    }
    x = B * u;
    cplx p = 0.0;
    for (const auto& s : shifts) {
      Eigen::VectorXd y = x + s.point;
      if ((y.array() < slo.array()).any() || (y.array() > shi.array()).any()) continue;
      cplx fv = f(y.head(n));
      if (fv == 0.0) continue;
      p += fv * r(y.tail(m));
    }
    acc += std::norm(p);
  }
  return acc / static_cast<double>(total) * covolume(scheme.gamma);
}

TripleCheck poisson_triple_check(const Scheme& scheme, const TestFunction& f, const TestFunction& r, double dual_radius,
                                 const TripleOptions& opt) {
  if (f.dim() != scheme.n || r.dim() != scheme.m) throw Error("test function dimensions do not match the scheme");
  TripleCheck tc;
  if (f.is_zero() || r.is_zero()) return tc;
  const int n = scheme.n, m = scheme.m;
  const double covol = covolume(scheme.gamma);

  TestFunction F = autoconvolution(f);
  TestFunction Rr = autoconvolution(r);
  Region sF = F.support(), sR = Rr.support();
  Eigen::VectorXd lo(n + m), hi(n + m);
  lo << sF.lower(), sR.lower();
  hi << sF.upper(), sR.upper();
  cplx lat = 0.0;
  for (const auto& p : enumerate_points_in_box(scheme.gamma, lo, hi, nullptr)) {
    cplx a = F(p.point.head(n));
    if (a != 0.0) lat += a * Rr(p.point.tail(m));
  }
  tc.lattice = lat.real();

  double dual = 0.0;
  for (const auto& p : dual_points(scheme, dual_radius)) {
    double a = std::norm(f.ft(p.point.head(n)));
    if (a != 0.0) dual += a * std::norm(r.ft(p.point.tail(m)));
    ++tc.dual_terms;
  }
  tc.dual = dual * std::pow(covol, -opt.exponent);

  double f2 = l2_norm_squared(f), r2 = l2_norm_squared(r);
  double tf = n <= 2 ? l2_mass_outside([&](const Eigen::VectorXd& xi) { return f.ft(xi); }, n, f2, dual_radius) : 0.0;
  double tr = m <= 2 ? l2_mass_outside([&](const Eigen::VectorXd& xi) { return r.ft(xi); }, m, r2, dual_radius) : 0.0;
  tc.tail_estimate = tf * r2 + f2 * tr - tf * tr;
  if (opt.check_tail && tc.tail_estimate > opt.tail_tolerance * std::max(std::abs(tc.dual), 1e-300)) {
    throw TailBoundError("dual-sum tail estimate exceeds tolerance; increase dual_radius");
  }

  tc.max_rel_err = rel_diff(tc.lattice, tc.dual);
  if (opt.with_quadrature) {
    tc.quadrature = periodization_norm_squared(scheme, f, r, opt.grid);
    tc.max_rel_err = std::max({tc.max_rel_err, rel_diff(tc.lattice, tc.quadrature), rel_diff(tc.dual, tc.quadrature)});
  }
  return tc;
}

CalibrationReport calibrate_poisson_exponent(double dual_radius) {
  TestFunction tent = TestFunction::bspline(2, 1.0);
  TripleOptions opt;
  opt.exponent = 0;
  opt.check_tail = false;
  opt.with_quadrature = false;

  CalibrationReport rep;
  Scheme unit = Scheme::integer(1, 1);
  TripleCheck a = poisson_triple_check(unit, tent, tent, dual_radius, opt);
  rep.unit_lattice = a.lattice;
  rep.unit_dual = a.dual;

  QuadraticMatrix two{2, {QuadraticNumber(2), QuadraticNumber(0), QuadraticNumber(0), QuadraticNumber(2)}};
  Scheme scaled(1, 1, LatticeBasis(two));
  TripleCheck b = poisson_triple_check(scaled, tent, tent, dual_radius, opt);
  rep.scaled_lattice = b.lattice;
  rep.scaled_dual = b.dual;
  // dual / lattice = covol^p with covol = 4.
  rep.exponent = static_cast<int>(std::lround(std::log(b.dual / b.lattice) / std::log(covolume(scaled.gamma))));
  return rep;
}

ConsistencyReport consistency_harness(const EmpiricalAutocorrelation& ac, const PointGroup& K, const Window& window,
                                      const TestFunction& f, const PurePointMeasure& diffraction,
                                      const Scheme& scheme) {
  ConsistencyReport rep;
  if (f.is_zero()) return rep;
  if (K.dim() != f.dim()) throw Error("point group and test function dimensions differ");
  TestFunction F = autoconvolution(f);
  const bool trivial = K.order() == 1;
  if (!trivial && invariance_residual(f, K) > 1e-8) {
    throw InvariantViolationError("test function is not invariant under the point group");
  }
  EmpiricalAutocorrelation rad = (trivial || ac.radialized) ? ac : radialize(ac, K);
  rep.empirical = pair_against_test_function(rad, F).real();

  double theo = 0.0;
  for (const auto& a : diffraction.atoms) {
    if (a.intensity == 0.0) continue;
    cplx v = 0.0;
    if (trivial) {
      v = f.ft(a.label.xi);
    } else {
      for (const auto& k : K.elements()) v += f.ft(k * a.label.xi);
      v /= static_cast<double>(K.order());
    }
    theo += a.intensity * std::norm(v);
  }
  rep.theoretical = theo;
  rep.abs_gap = std::abs(rep.empirical - rep.theoretical);
  rep.rel_gap = rel_diff(rep.empirical, rep.theoretical);

  if (!window.pieces().empty() && f.dim() <= 2 && window.dim() <= 2) {
    const double R = diffraction.dual_radius;
    const double covol = covolume(scheme.gamma);
    double f2 = l2_norm_squared(f);
    double vw = window.volume();
    double tf = l2_mass_outside([&](const Eigen::VectorXd& xi) { return f.ft(xi); }, f.dim(), f2, R);
    double tw = l2_mass_outside([&](const Eigen::VectorXd& xi) { return window.ft(xi); }, window.dim(), vw, R);
    rep.tail_estimate = (tf * vw + f2 * tw - tf * tw) / covol;
  }
  return rep;
}

ConsistencyReport consistency_harness(const ModelSet& ms, const Region& F_t, const PointGroup& K, const Window& window,
                                      const TestFunction& f, const PurePointMeasure& diffraction) {
  if (f.is_zero() || ms.empty()) {
    ConsistencyReport rep;
    if (!f.is_zero()) {
      double theo = 0.0;
      for (const auto& a : diffraction.atoms) theo += a.intensity * std::norm(f.ft(a.label.xi));
      rep.theoretical = theo;
      rep.abs_gap = rep.rel_gap = theo == 0.0 ? 0.0 : theo;
      if (theo != 0.0) rep.rel_gap = 1.0;
    }
    return rep;
  }
  double R = autoconvolution(f).support_radius();
  EmpiricalAutocorrelation ac = empirical_autocorr(ms, F_t, R);
  return consistency_harness(ac, K, window, f, diffraction, ms.scheme);
}

NormBoundCheck periodization_norm_bound_check(const TestFunction& f, const TestFunction& r,
                                              const WeightedNormParams& params, const Scheme& scheme, int grid) {
  NormBoundCheck out;
  out.lhs = std::sqrt(periodization_norm_squared(scheme, f, r, grid));
  out.rhs = params.C * weighted_norm(f, params.alpha) * weighted_norm(r, params.alpha);
  out.pass = out.lhs <= out.rhs * (1.0 + 1e-6);
  return out;
}

void write_peaks_csv(const PurePointMeasure& peaks, std::ostream& os) {
  const Eigen::Index d = peaks.atoms.empty() ? 1 : peaks.atoms.front().label.xi.size();
  os << "branch";
  for (Eigen::Index i = 0; i < d; ++i) os << ",xi" << i;
  os << ",intensity,tail_bound\n";
  char buf[40];
  for (const auto& a : peaks.atoms) {
    os << (a.label.branch == SphericalLabel::Branch::Bessel ? "bessel" : "nilpotent");
    for (Eigen::Index i = 0; i < a.label.xi.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", a.label.xi[i]);
      os << "," << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", a.intensity);
    os << "," << buf;
    std::snprintf(buf, sizeof buf, "%.17g", peaks.tail_bound);
    os << "," << buf << "\n";
  }
}

void emit_plot_data(const PurePointMeasure& peaks, std::ostream& os) {
  std::vector<const PeakAtom*> order;
  for (const auto& a : peaks.atoms) order.push_back(&a);
  std::stable_sort(order.begin(), order.end(), [](const PeakAtom* a, const PeakAtom* b) { return atom_less(*a, *b); });
  os << "# frequency intensity\n";
  char buf[80];
  for (const auto* a : order) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", a->label.xi.size() ? a->label.xi[0] : 0.0, a->intensity);
    os << buf;
  }
}

std::vector<std::pair<double, double>> read_plot_data(std::istream& is) {
  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double a = 0.0, b = 0.0;
    if (!(ls >> a >> b)) throw Error("malformed plot-data row: " + line);
    rows.emplace_back(a, b);
  }
  return rows;
}

}  // namespace modelset
