#include "modelset/heisenberg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <unordered_map>

#include "cell_grid.hpp"
#include "modelset/error.hpp"
#include "modelset/point_group.hpp"
#include "modelset/quadrature.hpp"
#include "modelset/rng.hpp"
#include "modelset/weighted_norm.hpp"

namespace modelset {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrt2 = std::sqrt(2.0);

// Calls fn(a, b) for integers with a + b sqrt2 in [lo1, hi1] and a - b sqrt2 in [lo2, hi2].
template <class Fn>
void for_each_sqrt2_pair(double lo1, double hi1, double lo2, double hi2, Fn&& fn) {
  if (lo1 > hi1 || lo2 > hi2) return;
  const double eps = 1e-12;
  const auto a_lo = static_cast<std::int64_t>(std::ceil((lo1 + lo2) / 2 - eps));
  const auto a_hi = static_cast<std::int64_t>(std::floor((hi1 + hi2) / 2 + eps));
  for (std::int64_t a = a_lo; a <= a_hi; ++a) {
    const double ad = static_cast<double>(a);
    double lo = std::max(lo1 - ad, ad - hi2), hi = std::min(hi1 - ad, ad - lo2);
    const auto b_lo = static_cast<std::int64_t>(std::ceil(lo / kSqrt2 - eps));
    const auto b_hi = static_cast<std::int64_t>(std::floor(hi / kSqrt2 + eps));
    for (std::int64_t b = b_lo; b <= b_hi; ++b) fn(a, b);
  }
}

std::int64_t im_conj_mul(const GaussInt& x, const GaussInt& y) { return x.re * y.im - x.im * y.re; }

GaussInt operator+(const GaussInt& x, const GaussInt& y) { return {x.re + y.re, x.im + y.im}; }

cplx gauss(const GaussInt& x) { return {static_cast<double>(x.re), static_cast<double>(x.im)}; }

// Effective support [shift - w, shift + w] of a one-dimensional atom at relative level eps.
double effective_half_width(const Atom1D& a, double eps) {
  double w = 0.0;
  for (double h : a.boxes) w += h / 2;
  if (a.gauss_var > 0.0) w += std::sqrt(2.0 * a.gauss_var * std::log(1.0 / eps));
  return w;
}

struct Box3 {
  Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector3d hi = Eigen::Vector3d::Constant(-std::numeric_limits<double>::infinity());
};

Box3 effective_box(const TestFunction& f, double eps) {
  Box3 b;
  for (const auto& t : f.terms())
    for (int d = 0; d < 3; ++d) {
      const Atom1D& a = t.factors[static_cast<std::size_t>(d)];
      double w = effective_half_width(a, eps);
      b.lo[d] = std::min(b.lo[d], a.shift - w);
      b.hi[d] = std::max(b.hi[d], a.shift + w);
    }
  return b;
}

void require_h3(const TestFunction& f, const char* what) {
  if (f.dim() != 3) throw Error(std::string(what) + " must be a function of (Re q, Im q, z)");
}

TestFunction single_atom(const Atom1D& a) {
  TestFunction f(1);
  f.add_term(1.0, {a});
  return f;
}

}  // namespace

HPoint h_mul(const HPoint& a, const HPoint& b) { return {a.q + b.q, a.z + b.z + h_beta(a.q, b.q)}; }

HPoint h_inv(const HPoint& a) { return {-a.q, -a.z}; }

std::pair<std::int64_t, std::int64_t> HScheme::cocycle(const GaussInt& a, const GaussInt& b, const GaussInt& a2,
                                                       const GaussInt& b2) {
  return {im_conj_mul(a, a2) + 2 * im_conj_mul(b, b2), im_conj_mul(a, b2) + im_conj_mul(b, a2)};
}

HLatticeElement HScheme::mul(const HLatticeElement& x, const HLatticeElement& y) {
  auto [c, d] = cocycle(x.a, x.b, y.a, y.b);
  return {x.a + y.a, x.b + y.b, x.c + y.c + c, x.d + y.d + d};
}

HLatticeElement HScheme::inv(const HLatticeElement& x) {
  return {{-x.a.re, -x.a.im}, {-x.b.re, -x.b.im}, -x.c, -x.d};
}

HPoint HScheme::physical(const HLatticeElement& x) {
  return {gauss(x.a) + kSqrt2 * gauss(x.b), static_cast<double>(x.c) + kSqrt2 * static_cast<double>(x.d)};
}

HPoint HScheme::internal(const HLatticeElement& x) {
  return {gauss(x.a) - kSqrt2 * gauss(x.b), static_cast<double>(x.c) - kSqrt2 * static_cast<double>(x.d)};
}

IntVector HScheme::to_coords(const HLatticeElement& x) {
  IntVector k(6);
  k << x.a.re, x.b.re, x.a.im, x.b.im, x.c, x.d;
  return k;
}

HLatticeElement HScheme::from_coords(const IntVector& k) {
  if (k.size() != 6) throw Error("Heisenberg lattice coordinates have six entries");
  return {{k[0], k[2]}, {k[1], k[3]}, k[4], k[5]};
}

double HScheme::covolume() { return 16.0 * kSqrt2; }

CocycleReport cocycle_closure_check(int bound) {
  std::vector<GaussInt> disk;
  for (std::int64_t x = -bound; x <= bound; ++x)
    for (std::int64_t y = -bound; y <= bound; ++y)
      if (x * x + y * y <= static_cast<std::int64_t>(bound) * bound) disk.push_back({x, y});
  CocycleReport rep;
  for (const auto& a : disk)
    for (const auto& b : disk) {
      const cplx d1 = gauss(a) + kSqrt2 * gauss(b), d2 = gauss(a) - kSqrt2 * gauss(b);
      for (const auto& a2 : disk)
        for (const auto& b2 : disk) {
          ++rep.pairs;
          auto [c, d] = HScheme::cocycle(a, b, a2, b2);
          // Expansion of Re(q) Im(q') - Im(q) Re(q') in real coordinates, basis (1, sqrt2).
          const std::int64_t r1 = a.re * a2.im + 2 * b.re * b2.im - a.im * a2.re - 2 * b.im * b2.re;
          const std::int64_t s1 = a.re * b2.im + b.re * a2.im - a.im * b2.re - b.im * a2.re;
          // beta_2 is the Galois conjugate: same rational part, negated sqrt2 part.
          const std::int64_t r2 = r1, s2 = -s1;
          if (r1 != c || s1 != d || r2 != c || s2 != -d) ++rep.failures;
          const cplx e1 = gauss(a2) + kSqrt2 * gauss(b2), e2 = gauss(a2) - kSqrt2 * gauss(b2);
          double res = std::max(std::abs(h_beta(d1, e1) - (c + kSqrt2 * d)), std::abs(h_beta(d2, e2) - (c - kSqrt2 * d)));
          rep.max_float_residual = std::max(rep.max_float_residual, res);
        }
    }
  return rep;
}

ModelSet h_model_set(const Window& window, const Region& region) {
  if (window.dim() != 3 || region.dim() != 3) throw Error("Heisenberg windows and regions live in (Re q, Im q, z)");
  return cut_and_project(HScheme::euclidean(), window, region);
}

HPoint h_point(const ModelSet& ms, Eigen::Index i) {
  return {{ms.physical(0, i), ms.physical(1, i)}, ms.physical(2, i)};
}

EmpiricalAutocorrelation h_empirical_autocorr(const ModelSet& ms, const Region& F_t, double R) {
  if (ms.scheme.n != 3 || ms.scheme.m != 3) throw Error("not a Heisenberg model set");
  if (F_t.dim() != 3 || F_t.kind() == Region::Kind::Ball) throw Error("averaging region must be a box in H_3");
  if (!(R > 0.0)) throw Error("cutoff radius must be positive");
  // x B(R) for x in F_t moves q by R and z by R (1 + |q_x|).
  double qmax = 0.0;
  for (double a : {F_t.lower()[0], F_t.upper()[0]})
    for (double b : {F_t.lower()[1], F_t.upper()[1]}) qmax = std::max(qmax, std::hypot(a, b));
  Eigen::Vector3d need_lo = F_t.lower(), need_hi = F_t.upper();
  need_lo.head<2>().array() -= R;
  need_hi.head<2>().array() += R;
  need_lo[2] -= R * (1.0 + qmax);
  need_hi[2] += R * (1.0 + qmax);
  if ((need_lo.array() < ms.region.lower().array()).any() || (need_hi.array() > ms.region.upper().array()).any()) {
    throw InsufficientMarginError("sample region does not contain the R-neighbourhood of F_t");
  }
  EmpiricalAutocorrelation ac;
  ac.cutoff = R;
  ac.volume = F_t.volume();
  if (!(ac.volume > 0.0)) throw Error("averaging region has zero volume");
  if (ms.empty()) return ac;

  const std::int64_t half = 1 << 9;
  auto pack = [&](const IntVector& k) {
    std::uint64_t key = 0;
    for (int i = 0; i < 6; ++i) {
      if (k[i] <= -half || k[i] >= half) throw Error("lattice difference too large to index");
      key = (key << 10) | static_cast<std::uint64_t>(k[i] + half);
    }
    return key;
  };
  auto unpack = [&](std::uint64_t key) {
    IntVector k(6);
    for (int i = 5; i >= 0; --i) {
      k[i] = static_cast<std::int64_t>(key & 1023u) - half;
      key >>= 10;
    }
    return k;
  };

  std::vector<Eigen::Index> centres;
  for (Eigen::Index i = 0; i < ms.size(); ++i)
    if (F_t.contains(ms.physical.col(i))) centres.push_back(i);
  const Eigen::MatrixXd qpts = ms.physical.topRows(2);
  detail::CellGrid grid(qpts, R);
  std::unordered_map<std::uint64_t, std::int64_t> counts;
#pragma omp parallel
  {
    std::unordered_map<std::uint64_t, std::int64_t> local;
#pragma omp for schedule(static) nowait
    for (std::size_t c = 0; c < centres.size(); ++c) {
      const Eigen::Index x = centres[c];
      const HPoint px = h_point(ms, x);
      const HLatticeElement ex_inv = HScheme::inv(HScheme::from_coords(ms.coords.col(x)));
      grid.for_each_near(qpts.col(x), R, [&](Eigen::Index y) {
        HPoint d = h_mul(h_inv(px), h_point(ms, y));
        if (std::norm(d.q) + d.z * d.z > R * R) return;
        ++local[pack(HScheme::to_coords(HScheme::mul(ex_inv, HScheme::from_coords(ms.coords.col(y)))))];
      });
    }
#pragma omp critical
    for (const auto& [k, v] : local) counts[k] += v;
  }
  for (const auto& [k, v] : counts) {
    AutocorrAtom a;
    a.key = unpack(k);
    HPoint p = HScheme::physical(HScheme::from_coords(a.key));
    a.z = Eigen::Vector3d(p.q.real(), p.q.imag(), p.z);
    a.count = v;
    a.coefficient = static_cast<double>(v) / ac.volume;
    ac.atoms.push_back(std::move(a));
  }
  std::sort(ac.atoms.begin(), ac.atoms.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.key.data(), a.key.data() + 6, b.key.data(), b.key.data() + 6);
  });
  return ac;
}

EmpiricalAutocorrelation h_radialize(const EmpiricalAutocorrelation& ac) {
  EmpiricalAutocorrelation out;
  out.cutoff = ac.cutoff;
  out.volume = ac.volume;
  out.radialized = true;
  auto cmp = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return tolerant_less(a, b); };
  std::map<Eigen::VectorXd, std::pair<std::int64_t, double>, decltype(cmp)> merged(cmp);
  for (const auto& a : ac.atoms) {
    Eigen::VectorXd label(2);
    label << std::hypot(a.z[0], a.z[1]), a.z[2];
    auto& slot = merged[label];
    slot.first += a.count;
    slot.second += a.coefficient;
  }
  for (const auto& [label, v] : merged) {
    AutocorrAtom a;
    a.z = label;
    a.count = v.first;
    a.coefficient = v.second;
    out.atoms.push_back(std::move(a));
  }
  return out;
}

PlaneFn plane_fn(const TestFunction& f) {
  if (f.dim() != 2) throw Error("plane functions have dimension 2");
  PlaneFn p;
  p.eval = [f](cplx x) { return f(Eigen::Vector2d(x.real(), x.imag())); };
  // Gaussian tails are cut where they fall below 1e-17 of the peak.
  p.lower = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
  p.upper = -p.lower;
  for (const auto& t : f.terms())
    for (int d = 0; d < 2; ++d) {
      const Atom1D& a = t.factors[static_cast<std::size_t>(d)];
      const double w = effective_half_width(a, 1e-17);
      p.lower[d] = std::min(p.lower[d], a.shift - w);
      p.upper[d] = std::max(p.upper[d], a.shift + w);
    }
  if (f.is_zero()) p.lower = p.upper = Eigen::Vector2d::Zero();
  return p;
}

PlaneFn twisted_convolution(const PlaneFn& h1, const PlaneFn& h2, double lambda, double tol, int nodes) {
  PlaneFn out;
  out.lower = h1.lower + h2.lower;
  out.upper = h1.upper + h2.upper;
  if (nodes > 0) {
    auto gx = std::make_shared<Eigen::VectorXd>(), gw = std::make_shared<Eigen::VectorXd>();
    gauss_legendre(nodes, *gx, *gw);
    out.eval = [h1, h2, lambda, gx, gw](cplx x) -> cplx {
      const double ax = std::max(h2.lower[0], x.real() - h1.upper[0]);
      const double bx = std::min(h2.upper[0], x.real() - h1.lower[0]);
      const double ay = std::max(h2.lower[1], x.imag() - h1.upper[1]);
      const double by = std::min(h2.upper[1], x.imag() - h1.lower[1]);
      if (!(ax < bx) || !(ay < by)) return 0.0;
      const double cx = (ax + bx) / 2, hx = (bx - ax) / 2, cy = (ay + by) / 2, hy = (by - ay) / 2;
      cplx acc = 0.0;
      for (Eigen::Index i = 0; i < gx->size(); ++i)
        for (Eigen::Index j = 0; j < gx->size(); ++j) {
          const cplx y(cx + hx * (*gx)[i], cy + hy * (*gx)[j]);
          acc += (*gw)[i] * (*gw)[j] * h1(x - y) * h2(y) * std::polar(1.0, 2.0 * kPi * lambda * h_beta(y, x));
        }
      return acc * hx * hy;
    };
    return out;
  }
  out.eval = [h1, h2, lambda, tol](cplx x) -> cplx {
    const double ax = std::max(h2.lower[0], x.real() - h1.upper[0]);
    const double bx = std::min(h2.upper[0], x.real() - h1.lower[0]);
    const double ay = std::max(h2.lower[1], x.imag() - h1.upper[1]);
    const double by = std::min(h2.upper[1], x.imag() - h1.lower[1]);
    if (!(ax < bx) || !(ay < by)) return 0.0;
    auto g = [&](double yr, double yi) {
      const cplx y(yr, yi);
      return h1(x - y) * h2(y) * std::polar(1.0, 2.0 * kPi * lambda * h_beta(y, x));
    };
    QuadOptions opt{tol * 1e-2, tol, 200000, true};
    return integrate_2d<cplx>(g, ax, bx, ay, by, opt).value;
  };
  return out;
}

PlaneFn twisted_convolution_alt(const PlaneFn& h1, const PlaneFn& h2, double lambda, double tol, int nodes) {
  return twisted_convolution(h2, h1, lambda, tol, nodes);
}

TestFunction partial_central_transform(const TestFunction& r, double lambda) {
  require_h3(r, "r");
  TestFunction out(2);
  for (const auto& t : r.terms()) {
    cplx c = t.coef * t.factors[2].ft(lambda);
    if (c != 0.0) out.add_term(c, {t.factors[0], t.factors[1]});
  }
  return out;
}

TestFunction window_test_function(const Window& window) {
  if (window.dim() != 3) throw Error("Heisenberg windows live in (Re q, Im q, z)");
  TestFunction out(3);
  for (std::size_t i = 0; i < window.pieces().size(); ++i) {
    const WindowPiece& p = window.pieces()[i];
    if (p.kind != WindowPiece::Kind::Box) throw Error("Heisenberg windows must be unions of boxes");
    std::vector<Atom1D> atoms(3);
    for (int d = 0; d < 3; ++d) {
      atoms[static_cast<std::size_t>(d)].shift = (p.lower[d] + p.upper[d]) / 2;
      atoms[static_cast<std::size_t>(d)].boxes = {p.upper[d] - p.lower[d]};
    }
    out.add_term(static_cast<double>(window.signs()[i]), std::move(atoms));
  }
  return out;
}

namespace {

// Per term pair (t, u): the spatial factors and the exact central correlation.
struct GroupConvPlan {
  struct Pair {
    cplx coef;
    Atom1D at_r, at_i, au_r, au_i;
    TestFunction cc{1};
    double cc_bound = 0.0;
  };
  std::vector<Pair> pairs;
  Box3 box;
};

GroupConvPlan make_plan(const TestFunction& f, double eps) {
  GroupConvPlan plan;
  plan.box = effective_box(f, eps);
  for (const auto& t : f.terms())
    for (const auto& u : f.terms()) {
      GroupConvPlan::Pair p;
      p.coef = std::conj(t.coef) * u.coef;
      p.at_r = t.factors[0];
      p.at_i = t.factors[1];
      p.au_r = u.factors[0];
      p.au_i = u.factors[1];
      TestFunction ct = single_atom(t.factors[2]), cu = single_atom(u.factors[2]);
      p.cc = convolve(ct.involution(), cu);
      p.cc_bound = weighted_norm(ct, 0.0) * weighted_norm(cu, 0.0);
      plan.pairs.push_back(std::move(p));
    }
  return plan;
}

double plan_value(const GroupConvPlan& plan, cplx q, double z) {
  const Box3& b = plan.box;
  const double ax = std::max(b.lo[0], b.lo[0] - q.real()), bx = std::min(b.hi[0], b.hi[0] - q.real());
  const double ay = std::max(b.lo[1], b.lo[1] - q.imag()), by = std::min(b.hi[1], b.hi[1] - q.imag());
  if (!(ax < bx) || !(ay < by)) return 0.0;
  cplx total = 0.0;
  Eigen::VectorXd tau(1);
  for (const auto& p : plan.pairs) {
    auto g = [&](double pr, double pi) -> cplx {
      double s = p.at_r.value(pr) * p.at_i.value(pi);
      if (s == 0.0) return 0.0;
      s *= p.au_r.value(pr + q.real()) * p.au_i.value(pi + q.imag());
      if (s == 0.0) return 0.0;
      tau[0] = z + h_beta(cplx(pr, pi), q);
      return s * p.cc(tau);
    };
    QuadOptions opt{1e-14, 1e-11, 200000, true};
    total += p.coef * integrate_2d<cplx>(g, ax, bx, ay, by, opt).value;
  }
  return total.real();
}

// Upper bound for |(f* * f)(q, .)| uniformly in z.
double plan_bound(const GroupConvPlan& plan, cplx q) {
  double total = 0.0;
  QuadOptions opt{1e-16, 1e-6, 2000, false};
  for (const auto& p : plan.pairs) {
    auto ir = [&](double x) { return std::abs(p.at_r.value(x) * p.au_r.value(x + q.real())); };
    auto ii = [&](double x) { return std::abs(p.at_i.value(x) * p.au_i.value(x + q.imag())); };
    const Box3& b = plan.box;
    double vr = integrate<double>(ir, b.lo[0], b.hi[0], opt).value;
    double vi = integrate<double>(ii, b.lo[1], b.hi[1], opt).value;
    total += std::abs(p.coef) * vr * vi * p.cc_bound;
  }
  return total * 1.01;
}

void check_u1_invariance(const TestFunction& f) {
  CounterRng rng(11, 0);
  Eigen::Vector3d x, y;
  const Box3 b = effective_box(f, 1e-6);
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < 256; ++i) {
    for (int d = 0; d < 3; ++d) x[d] = rng.uniform(b.lo[d], b.hi[d]);
    const cplx q(x[0], x[1]);
    const cplx kq = q * std::polar(1.0, rng.uniform(0.0, 2.0 * kPi));
    y << kq.real(), kq.imag(), x[2];
    worst = std::max(worst, std::abs(f(x) - f(y)));
    scale = std::max(scale, std::abs(f(x)));
  }
  if (worst > 1e-8 * std::max(scale, 1.0)) throw InvariantViolationError("f is not U(1)-invariant in q");
}

struct TermAtoms {
  cplx coef;
  Atom1D ar, ai, az;
};

std::vector<TermAtoms> term_atoms(const TestFunction& f) {
  std::vector<TermAtoms> out;
  for (const auto& t : f.terms()) out.push_back({t.coef, t.factors[0], t.factors[1], t.factors[2]});
  return out;
}

}  // namespace

double h_autoconvolution(const TestFunction& f, cplx q, double z) {
  require_h3(f, "f");
  if (f.is_zero()) return 0.0;
  return plan_value(make_plan(f, 1e-16), q, z);
}

LatticeSumReport lattice_sum_identity_check(const TestFunction& f, const TestFunction& r,
                                            const LatticeSumOptions& opt) {
  require_h3(f, "f");
  require_h3(r, "r");
  LatticeSumReport rep;
  if (f.is_zero() || r.is_zero()) return rep;
  check_u1_invariance(f);

  // Lattice side.
  const GroupConvPlan pf = make_plan(f, opt.envelope), pr = make_plan(r, opt.envelope);
  const double g0 = plan_value(pf, 0.0, 0.0) * plan_value(pr, 0.0, 0.0);
  const double cut = opt.envelope * 1e-2 * std::abs(g0);
  auto span = [](const Box3& b, int d) { return b.hi[d] - b.lo[d]; };
  auto pmax = [](const Box3& b) {
    return std::hypot(std::max(std::abs(b.lo[0]), std::abs(b.hi[0])), std::max(std::abs(b.lo[1]), std::abs(b.hi[1])));
  };
  std::vector<std::pair<std::int64_t, std::int64_t>> re_pairs, im_pairs;
  for_each_sqrt2_pair(-span(pf.box, 0), span(pf.box, 0), -span(pr.box, 0), span(pr.box, 0),
                      [&](std::int64_t a, std::int64_t b) { re_pairs.emplace_back(a, b); });
  for_each_sqrt2_pair(-span(pf.box, 1), span(pf.box, 1), -span(pr.box, 1), span(pr.box, 1),
                      [&](std::int64_t a, std::int64_t b) { im_pairs.emplace_back(a, b); });
  struct DeltaJob {
    cplx d1, d2;
  };
  std::vector<DeltaJob> jobs;
  for (const auto& [ar, br] : re_pairs)
    for (const auto& [ai, bi] : im_pairs) {
      GaussInt a{ar, ai}, b{br, bi};
      jobs.push_back({gauss(a) + kSqrt2 * gauss(b), gauss(a) - kSqrt2 * gauss(b)});
    }
  std::vector<double> partial(jobs.size(), 0.0);
  std::vector<long> terms(jobs.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const cplx d1 = jobs[j].d1, d2 = jobs[j].d2;
    if (plan_bound(pf, d1) * plan_bound(pr, d2) < cut) continue;
    const double w1 = span(pf.box, 2) + pmax(pf.box) * std::abs(d1);
    const double w2 = span(pr.box, 2) + pmax(pr.box) * std::abs(d2);
    double acc = 0.0;
    for_each_sqrt2_pair(-w1, w1, -w2, w2, [&](std::int64_t c, std::int64_t d) {
      const double z1 = c + kSqrt2 * d, z2 = c - kSqrt2 * d;
      double a = plan_value(pf, d1, z1);
      if (a == 0.0) return;
      acc += a * plan_value(pr, d2, z2);
      ++terms[j];
    });
    partial[j] = acc;
  }
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    rep.lattice_sum += partial[j];
    rep.lattice_terms += terms[j];
  }

  // Monte Carlo side over the fundamental domain FD(Delta) x FD(Xi).
  const Box3 bf = effective_box(f, opt.envelope), br = effective_box(r, opt.envelope);
  const auto tf = term_atoms(f), tr = term_atoms(r);
  double skip = 1e-14;
  {
    double cf = 0.0, cr = 0.0;
    for (const auto& t : tf) cf += std::abs(t.coef);
    for (const auto& t : tr) cr += std::abs(t.coef);
    skip *= cf * cr;
  }
  const std::int64_t block = 1 << 16;
  const std::int64_t nblocks = (opt.samples + block - 1) / block;
  std::vector<double> bsum(static_cast<std::size_t>(nblocks), 0.0), bsq(static_cast<std::size_t>(nblocks), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t blk = 0; blk < nblocks; ++blk) {
    CounterRng rng(opt.seed, static_cast<std::uint64_t>(blk));
    const std::int64_t n = std::min(block, opt.samples - blk * block);
    std::vector<std::pair<std::int64_t, std::int64_t>> rp, ip;
    std::vector<cplx> fa(tf.size()), ra(tr.size());
    std::vector<double> far, fai, rar, rai;
    double s1 = 0.0, s2 = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      // u in [0,1)^4 for (a.re, a.im, b.re, b.im); v in [0,1)^2 for (c, d).
      const double ur = rng.uniform(), ui = rng.uniform(), vr = rng.uniform(), vi = rng.uniform();
      const double wc = rng.uniform(), wd = rng.uniform();
      const cplx q1(ur + kSqrt2 * vr, ui + kSqrt2 * vi), q2(ur - kSqrt2 * vr, ui - kSqrt2 * vi);
      const double z1 = wc + kSqrt2 * wd, z2 = wc - kSqrt2 * wd;
      rp.clear();
      ip.clear();
      for_each_sqrt2_pair(bf.lo[0] - q1.real(), bf.hi[0] - q1.real(), br.lo[0] - q2.real(), br.hi[0] - q2.real(),
                          [&](std::int64_t a, std::int64_t b) { rp.emplace_back(a, b); });
      for_each_sqrt2_pair(bf.lo[1] - q1.imag(), bf.hi[1] - q1.imag(), br.lo[1] - q2.imag(), br.hi[1] - q2.imag(),
                          [&](std::int64_t a, std::int64_t b) { ip.emplace_back(a, b); });
      // Per-axis factor values, reused across the rp x ip grid.
      const std::size_t nr = rp.size(), ni = ip.size();
      far.assign(tf.size() * nr, 0.0);
      fai.assign(tf.size() * ni, 0.0);
      rar.assign(tr.size() * nr, 0.0);
      rai.assign(tr.size() * ni, 0.0);
      for (std::size_t k = 0; k < nr; ++k) {
        const double x1 = q1.real() + rp[k].first + kSqrt2 * rp[k].second;
        const double x2 = q2.real() + rp[k].first - kSqrt2 * rp[k].second;
        for (std::size_t t = 0; t < tf.size(); ++t) far[t * nr + k] = tf[t].ar.value(x1);
        for (std::size_t t = 0; t < tr.size(); ++t) rar[t * nr + k] = tr[t].ar.value(x2);
      }
      for (std::size_t k = 0; k < ni; ++k) {
        const double x1 = q1.imag() + ip[k].first + kSqrt2 * ip[k].second;
        const double x2 = q2.imag() + ip[k].first - kSqrt2 * ip[k].second;
        for (std::size_t t = 0; t < tf.size(); ++t) fai[t * ni + k] = tf[t].ai.value(x1);
        for (std::size_t t = 0; t < tr.size(); ++t) rai[t * ni + k] = tr[t].ai.value(x2);
      }
      cplx P = 0.0;
      for (std::size_t kr = 0; kr < nr; ++kr)
        for (std::size_t ki = 0; ki < ni; ++ki) {
          const auto [a_r, b_r] = rp[kr];
          const auto [a_i, b_i] = ip[ki];
          const cplx d1(a_r + kSqrt2 * b_r, a_i + kSqrt2 * b_i), d2(a_r - kSqrt2 * b_r, a_i - kSqrt2 * b_i);
          bool any_f = false, any_r = false;
          for (std::size_t t = 0; t < tf.size(); ++t) {
            fa[t] = tf[t].coef * far[t * nr + kr] * fai[t * ni + ki];
            any_f = any_f || fa[t] != 0.0;
          }
          if (!any_f) continue;
          for (std::size_t t = 0; t < tr.size(); ++t) {
            ra[t] = tr[t].coef * rar[t * nr + kr] * rai[t * ni + ki];
            any_r = any_r || ra[t] != 0.0;
          }
          if (!any_r) continue;
          double mf = 0.0, mr = 0.0;
          for (const auto& v : fa) mf += std::abs(v);
          for (const auto& v : ra) mr += std::abs(v);
          if (mf * mr < skip) continue;
          const double s1z = z1 + h_beta(q1, d1), s2z = z2 + h_beta(q2, d2);
          for_each_sqrt2_pair(bf.lo[2] - s1z, bf.hi[2] - s1z, br.lo[2] - s2z, br.hi[2] - s2z,
                              [&](std::int64_t c, std::int64_t d) {
                                const double y1 = s1z + c + kSqrt2 * d, y2 = s2z + c - kSqrt2 * d;
                                cplx fv = 0.0, rv = 0.0;
                                for (std::size_t t = 0; t < tf.size(); ++t) fv += fa[t] * tf[t].az.value(y1);
                                for (std::size_t t = 0; t < tr.size(); ++t) rv += ra[t] * tr[t].az.value(y2);
                                P += fv * rv;
                              });
        }
      const double p2 = std::norm(P);
      s1 += p2;
      s2 += p2 * p2;
    }
    bsum[static_cast<std::size_t>(blk)] = s1;
    bsq[static_cast<std::size_t>(blk)] = s2;
  }
  double s1 = 0.0, s2 = 0.0;
  for (std::int64_t b = 0; b < nblocks; ++b) {
    s1 += bsum[static_cast<std::size_t>(b)];
    s2 += bsq[static_cast<std::size_t>(b)];
  }
  const double N = static_cast<double>(opt.samples);
  const double mean = s1 / N;
  const double var = std::max(0.0, s2 / N - mean * mean);
  const double vol = HScheme::covolume();
  rep.mc_norm = vol * mean;
  rep.mc_stderr = vol * std::sqrt(var / N);
  rep.rel_gap = std::abs(rep.mc_norm - rep.lattice_sum) / std::max(std::abs(rep.lattice_sum), 1e-300);
  if (rep.mc_stderr > opt.max_rel_stderr * std::abs(rep.mc_norm)) {
    throw MonteCarloToleranceError("Monte Carlo standard error above the requested tolerance");
  }
  return rep;
}

LaguerreSpherical::LaguerreSpherical(double lambda, int m) : lambda_(lambda), m_(m) {
  if (lambda == 0.0) throw TrivialCharacterError("Laguerre spherical functions need a nontrivial central character");
  if (m < 0) throw Error("Laguerre index must be nonnegative");
}

double LaguerreSpherical::operator()(cplx q) const {
  const double s = kPi * std::abs(lambda_) * std::norm(q);
  return std::exp(-s) * std::laguerre(static_cast<unsigned>(m_), 2.0 * s);
}

double LaguerreSpherical::functional_residual(cplx x, cplx y, int nodes) const {
  auto g = [&](double t) {
    const cplx ky = std::polar(1.0, t) * y;
    return (*this)(x + ky) * std::polar(1.0, 2.0 * kPi * lambda_ * h_beta(x, ky));
  };
  cplx avg = periodic_trapezoid<cplx>(g, 2.0 * kPi, nodes) / (2.0 * kPi);
  return std::abs(avg - (*this)(x) * (*this)(y));
}

double LaguerreSpherical::decay_radius(double eps) const {
  const double a = kPi * std::abs(lambda_);
  const double hi = std::sqrt((std::log(1.0 / eps) + 10.0 * (m_ + 1)) / a) * 1.5;
  const int steps = 20000;
  for (int i = steps; i >= 0; --i) {
    const double r = hi * i / steps;
    if (std::abs((*this)(cplx(r, 0.0))) > eps) return r + hi / steps;
  }
  return 0.0;
}

double functional_equation_residual(const LaguerreSpherical& w, int pairs, std::uint64_t seed, double radius) {
  CounterRng rng(seed, 0);
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    cplx x(rng.uniform(-radius, radius), rng.uniform(-radius, radius));
    cplx y(rng.uniform(-radius, radius), rng.uniform(-radius, radius));
    worst = std::max(worst, w.functional_residual(x, y));
  }
  return worst;
}

EdcReport edc_check(const LaguerreSpherical& w, double qmax, int samples) {
  EdcReport rep;
  const double a = kPi * std::abs(w.lambda());
  rep.c = a / 2;
  // |L_m(x)| <= sum_k C(m,k) x^k / k! with x = 2 a s.
  double binom = 1.0, fact = 1.0;
  for (int k = 0; k <= w.m(); ++k) {
    if (k > 0) {
      binom *= static_cast<double>(w.m() - k + 1) / k;
      fact *= k;
    }
    rep.poly.push_back(binom / fact * std::pow(2.0 * a, k));
  }
  for (int i = 0; i <= samples; ++i) {
    const double r = qmax * i / samples, s = r * r;
    double L = 0.0;
    for (std::size_t k = rep.poly.size(); k-- > 0;) L = L * s + rep.poly[k];
    rep.max_ratio = std::max(rep.max_ratio, std::abs(w(cplx(r, 0.0))) / (L * std::exp(-rep.c * s)));
  }
  rep.pass = rep.max_ratio <= 1.0;
  return rep;
}

cplx HDualPoint::eta1() const {
  return {er / 2.0 + fr * kSqrt2 / 4.0, ei / 2.0 + fi * kSqrt2 / 4.0};
}

cplx HDualPoint::eta2() const {
  return {er / 2.0 - fr * kSqrt2 / 4.0, ei / 2.0 - fi * kSqrt2 / 4.0};
}

BesselCoefficient bessel_branch_coefficient(const Window& window, const HDualPoint& eta) {
  if (window.dim() != 3) throw Error("Heisenberg windows live in (Re q, Im q, z)");
  // 16 |eta1|^2 = N0 + N1 sqrt2 exactly.
  const std::int64_t N0 = 4 * (eta.er * eta.er + eta.ei * eta.ei) + 2 * (eta.fr * eta.fr + eta.fi * eta.fi);
  const std::int64_t N1 = 4 * (eta.er * eta.fr + eta.ei * eta.fi);
  BesselCoefficient out;
  const auto emax = static_cast<std::int64_t>(std::sqrt(N0 / 4.0)) + 1;
  const auto fmax = static_cast<std::int64_t>(std::sqrt(N0 / 2.0)) + 1;
  for (std::int64_t er = -emax; er <= emax; ++er)
    for (std::int64_t fr = -fmax; fr <= fmax; ++fr)
      for (std::int64_t ei = -emax; ei <= emax; ++ei) {
        const std::int64_t rest = N0 - 4 * (er * er + ei * ei) - 2 * fr * fr;
        if (rest < 0 || rest % 2 != 0) continue;
        const auto f2 = rest / 2;
        const auto fi0 = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(f2))));
        if (fi0 * fi0 != f2) continue;
        for (std::int64_t fi : {fi0, -fi0}) {
          if (4 * (er * fr + ei * fi) == N1) out.partners.push_back({er, fr, ei, fi});
          if (fi0 == 0) break;
        }
      }
  const double covol = HScheme::covolume();
  for (const auto& p : out.partners) {
    const cplx e2 = p.eta2();
    const Eigen::Vector2d xi(e2.real(), e2.imag());
    cplx v = 0.0;
    for (std::size_t i = 0; i < window.pieces().size(); ++i) {
      const WindowPiece& w = window.pieces()[i];
      if (w.kind != WindowPiece::Kind::Box) throw Error("Heisenberg windows must be unions of boxes");
      WindowPiece q = WindowPiece::box(w.lower.head(2), w.upper.head(2));
      v += static_cast<double>(window.signs()[i]) * (w.upper[2] - w.lower[2]) * q.ft(xi);
    }
    out.raw += std::norm(v);
  }
  out.intensity = out.raw / (covol * covol);
  return out;
}

double CentralCharacter::lambda1() const { return g / 2.0 + h * kSqrt2 / 4.0; }
double CentralCharacter::lambda2() const { return g / 2.0 - h * kSqrt2 / 4.0; }

namespace {

std::pair<int, int> hermite_index(int j) {
  int d = 0;
  while ((d + 1) * (d + 2) / 2 <= j) ++d;
  const int a = j - d * (d + 1) / 2;
  return {a, d - a};
}

void hermite_functions(int nmax, double t, double* out) {
  out[0] = std::pow(kPi, -0.25) * std::exp(-t * t / 2);
  if (nmax >= 1) out[1] = kSqrt2 * t * out[0];
  for (int n = 1; n < nmax; ++n)
    out[n + 1] = std::sqrt(2.0 / (n + 1)) * t * out[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * out[n - 1];
}

struct HermiteBasis {
  int n;
  double scale;
  std::vector<std::pair<int, int>> idx;
  int maxdeg = 0;
  HermiteBasis(int n_, double s) : n(n_), scale(s) {
    for (int j = 0; j < n; ++j) {
      idx.push_back(hermite_index(j));
      maxdeg = std::max({maxdeg, idx.back().first, idx.back().second});
    }
  }
  // Writes phi_j(y) for all j into row `row` of `m`.
  void eval(cplx y, Eigen::MatrixXcd& m, Eigen::Index row) const {
    double hr[64], hi[64];
    hermite_functions(maxdeg, y.real() / scale, hr);
    hermite_functions(maxdeg, y.imag() / scale, hi);
    for (int j = 0; j < n; ++j) m(row, j) = hr[idx[static_cast<std::size_t>(j)].first] * hi[idx[static_cast<std::size_t>(j)].second] / scale;
  }
};

}  // namespace

cplx hermite_gaussian(int j, double scale, cplx y) {
  HermiteBasis b(j + 1, scale);
  Eigen::MatrixXcd m(1, j + 1);
  b.eval(y, m, 0);
  return m(0, j);
}

NilpotentCoefficient nilpotent_branch_coefficient(const Window& window, const CentralCharacter& chi, int m,
                                                  const NilpotentOptions& opt) {
  if (window.dim() != 3) throw Error("Heisenberg windows live in (Re q, Im q, z)");
  if (chi.g == 0 && chi.h == 0) throw TrivialCharacterError("nilpotent branch needs a nontrivial central character");
  if (opt.ansatz_dim < 1 || opt.ansatz_dim > 120) throw Error("ansatz dimension must lie in 1..120");
  if (opt.nodes < 8) throw Error("too few quadrature nodes");
  const double l1 = chi.lambda1(), l2 = chi.lambda2();
  const LaguerreSpherical omega(l1, m);
  const double s = opt.scale > 0.0 ? opt.scale : 0.75 / std::sqrt(2.0 * kPi * std::abs(l2));
  const int n = opt.ansatz_dim;
  const HermiteBasis basis(n, s);
  const int D = basis.maxdeg + 1;

  struct BoxPiece {
    Eigen::Vector2d lo, hi;
    cplx weight;  // sign * ft of the central interval at lambda2
  };
  std::vector<BoxPiece> pieces;
  for (std::size_t i = 0; i < window.pieces().size(); ++i) {
    const WindowPiece& w = window.pieces()[i];
    if (w.kind != WindowPiece::Kind::Box) throw Error("Heisenberg windows must be unions of boxes");
    Atom1D zi;
    zi.shift = (w.lower[2] + w.upper[2]) / 2;
    zi.boxes = {w.upper[2] - w.lower[2]};
    pieces.push_back({w.lower.head(2), w.upper.head(2), static_cast<double>(window.signs()[i]) * zi.ft(l2)});
  }

  Eigen::VectorXd gx, gw;
  gauss_legendre(opt.nodes, gx, gw);
  const int N = opt.nodes;
  const double spread = std::sqrt(2.0 * basis.maxdeg + 1.0);
  const double reach = s * (std::sqrt(2.0 * std::log(1e17)) + spread);
  const double R1 = omega.decay_radius(1e-17);
  const double R2 = 2.0 * reach;
  Eigen::Vector2d wlo = Eigen::Vector2d::Zero(), whi = Eigen::Vector2d::Zero();
  for (const auto& p : pieces) {
    wlo = wlo.cwiseMin(p.lo);
    whi = whi.cwiseMax(p.hi);
  }
  const double lo2r = std::min(-R2, wlo[0] - reach), hi2r = std::max(R2, whi[0] + reach);
  const double lo2i = std::min(-R2, wlo[1] - reach), hi2i = std::max(R2, whi[1] + reach);

  std::vector<std::pair<cplx, cplx>> deltas;
  std::vector<std::pair<std::int64_t, std::int64_t>> rp, ip;
  for_each_sqrt2_pair(-R1, R1, lo2r, hi2r, [&](std::int64_t a, std::int64_t b) { rp.emplace_back(a, b); });
  for_each_sqrt2_pair(-R1, R1, lo2i, hi2i, [&](std::int64_t a, std::int64_t b) { ip.emplace_back(a, b); });
  for (const auto& [ar, br] : rp)
    for (const auto& [ai, bi] : ip) {
      const cplx d1(ar + kSqrt2 * br, ai + kSqrt2 * bi), d2(ar - kSqrt2 * br, ai - kSqrt2 * bi);
      if (std::abs(d1) <= R1) deltas.emplace_back(d1, d2);
    }

  // The twist exp(2 pi i l2 Im(conj(y) x)) = exp(i (wr y_r + wi y_i)) with wr = 2 pi l2 x_i, wi = -2 pi l2 x_r,
  // so every integral below factors over the real and imaginary axes.
  // A(a, b) = int h_a((t - x) / s) h_b(t / s) exp(i w t) dt.
  auto pair_table = [&](double x, double w, Eigen::MatrixXcd& A) {
    A.setZero(D, D);
    const double c = x / 2, L = s * (6.5 + spread);
    double ha[64], hb[64];
    for (int i = 0; i < N; ++i) {
      const double t = c + L * gx[i];
      hermite_functions(basis.maxdeg, (t - x) / s, ha);
      hermite_functions(basis.maxdeg, t / s, hb);
      const cplx e = L * gw[i] * std::polar(1.0, w * t);
      for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b) A(a, b) += e * ha[a] * hb[b];
    }
  };
  // B(a) = int_lo^hi h_a((t - x) / s) exp(i w t) dt.
  auto line_table = [&](double x, double w, double lo, double hi, Eigen::VectorXcd& B) {
    B.setZero(D);
    lo = std::max(lo, x - reach);
    hi = std::min(hi, x + reach);
    if (!(lo < hi)) return;
    const double c = (lo + hi) / 2, L = (hi - lo) / 2;
    double ha[64];
    for (int i = 0; i < N; ++i) {
      const double t = c + L * gx[i];
      hermite_functions(basis.maxdeg, (t - x) / s, ha);
      const cplx e = L * gw[i] * std::polar(1.0, w * t);
      for (int a = 0; a < D; ++a) B[a] += e * ha[a];
    }
  };

  std::vector<Eigen::MatrixXcd> Mpart(deltas.size());
  std::vector<Eigen::VectorXcd> vpart(deltas.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    const cplx x = deltas[k].second;
    const double w0 = omega(deltas[k].first);
    Mpart[k] = Eigen::MatrixXcd::Zero(n, n);
    vpart[k] = Eigen::VectorXcd::Zero(n);
    if (w0 == 0.0) continue;
    const double wr = 2.0 * kPi * l2 * x.imag(), wi = -2.0 * kPi * l2 * x.real();
    if (std::abs(x) <= R2) {
      Eigen::MatrixXcd Ar, Ai;
      pair_table(x.real(), wr, Ar);
      pair_table(x.imag(), wi, Ai);
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          const auto [aj, bj] = basis.idx[static_cast<std::size_t>(j)];
          const auto [al, bl] = basis.idx[static_cast<std::size_t>(l)];
          Mpart[k](j, l) = w0 * Ar(aj, al) * Ai(bj, bl) / (s * s);
        }
    }
    for (const auto& p : pieces) {
      Eigen::VectorXcd Br, Bi;
      line_table(x.real(), wr, p.lo[0], p.hi[0], Br);
      line_table(x.imag(), wi, p.lo[1], p.hi[1], Bi);
      for (int j = 0; j < n; ++j) {
        const auto [aj, bj] = basis.idx[static_cast<std::size_t>(j)];
        vpart[k][j] += w0 * p.weight * Br[aj] * Bi[bj] / s;
      }
    }
  }

  NilpotentCoefficient out;
  out.M = Eigen::MatrixXcd::Zero(n, n);
  out.v = Eigen::VectorXcd::Zero(n);
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    out.M += Mpart[k];
    out.v += vpart[k];
  }
  out.delta_terms = static_cast<long>(deltas.size());
  out.omega_norm_squared = omega.norm_squared();
  const double scale = out.M.cwiseAbs().maxCoeff();
  out.hermitian_residual = (out.M - out.M.adjoint()).cwiseAbs().maxCoeff() / std::max(scale, 1e-300);
  const Eigen::MatrixXcd H = (out.M + out.M.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  if (out.hermitian_residual > 1e-8) throw AnsatzDegenerateError("constraint matrix is not Hermitian");
  const double top = es.eigenvalues().maxCoeff();
  if (!(top > 0.0) || out.min_eigenvalue < -1e-9 * top) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "constraint matrix is indefinite on the ansatz (eigenvalues %.3g..%.3g)",
                  out.min_eigenvalue, top);
    throw AnsatzDegenerateError(msg);
  }
  // Row-by-row Cholesky; prefix j solves the problem on the first j functions, so the values are monotone.
  // Functions dependent on earlier ones under H add nothing and are skipped.
  const double pivot_floor = 1e-10 * H.diagonal().real().maxCoeff();
  const double vnorm = std::max(out.v.norm(), 1e-300);
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(n, n);
  std::vector<int> kept;
  std::vector<cplx> y;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const int r = static_cast<int>(kept.size());
    for (int p = 0; p < r; ++p) {
      cplx t = H(j, kept[static_cast<std::size_t>(p)]);
      for (int q = 0; q < p; ++q) t -= L(j, q) * std::conj(L(kept[static_cast<std::size_t>(p)], q));
      L(j, p) = t / L(kept[static_cast<std::size_t>(p)], p).real();
    }
    double d = H(j, j).real();
    cplx rhs = out.v[j];
    for (int p = 0; p < r; ++p) {
      d -= std::norm(L(j, p));
      rhs -= L(j, p) * y[static_cast<std::size_t>(p)];
    }
    if (d > pivot_floor) {
      L(j, r) = std::sqrt(d);
      y.push_back(rhs / std::sqrt(d));
      kept.push_back(j);
      acc += std::norm(y.back()) / out.omega_norm_squared;
    } else {
      out.null_leak = std::max(out.null_leak, std::abs(rhs) / vnorm);
    }
    out.values.push_back(acc);
  }
  out.rank = static_cast<int>(kept.size());
  if (out.rank == 0) throw AnsatzDegenerateError("constraint matrix vanishes on the ansatz");
  if (out.null_leak > 1e-6) throw AnsatzDegenerateError("target does not vanish on the null space of the constraint");
  out.raw = out.values.back();
  const double covol = HScheme::covolume();
  out.intensity = out.raw / (covol * covol);
  return out;
}

void write_heisenberg_csv(const std::vector<HPeakRow>& rows, std::ostream& os) {
  os << "branch,label,intensity,lower_bound,ansatz_dim,tail\n";
  char a[40], b[40];
  for (const auto& r : rows) {
    std::snprintf(a, sizeof a, "%.17g", r.intensity);
    std::snprintf(b, sizeof b, "%.17g", r.tail);
    os << r.branch << "," << r.label << "," << a << "," << (r.lower_bound ? 1 : 0) << "," << r.ansatz_dim << "," << b
       << "\n";
  }
}

}  // namespace modelset
