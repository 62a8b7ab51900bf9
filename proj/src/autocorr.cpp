#include "modelset/autocorr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <unordered_map>

#include "cell_grid.hpp"
#include "modelset/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace modelset {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct KeyPacker {
  int dim;
  int bits;
  std::int64_t half;
  explicit KeyPacker(int d) : dim(d), bits(std::min(64 / d, 62)), half(std::int64_t{1} << (bits - 2)) {}

  std::uint64_t pack(const IntMatrix& coords, Eigen::Index y, Eigen::Index x) const {
    std::uint64_t key = 0;
    for (int i = 0; i < dim; ++i) {
      std::int64_t v = coords(i, y) - coords(i, x);
      if (v <= -half || v >= half) throw Error("lattice difference too large to index");
      key = (key << bits) | static_cast<std::uint64_t>(v + half);
    }
    return key;
  }

  IntVector unpack(std::uint64_t key) const {
    IntVector v(dim);
    const std::uint64_t mask = bits == 64 ? ~0ULL : ((1ULL << bits) - 1);
    for (int i = dim - 1; i >= 0; --i) {
      v[i] = static_cast<std::int64_t>(key & mask) - half;
      key >>= bits;
    }
    return v;
  }
};

bool key_less(const IntVector& a, const IntVector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace

double EmpiricalAutocorrelation::coefficient_at(const Eigen::VectorXd& z, double tol) const {
  double c = 0.0;
  for (const auto& a : atoms)
    if (a.z.size() == z.size() && (a.z - z).cwiseAbs().maxCoeff() <= tol) c += a.coefficient;
  return c;
}

EmpiricalAutocorrelation empirical_autocorr(const ModelSet& ms, const Region& F_t, double R) {
  const Scheme& sc = ms.scheme;
  if (F_t.dim() != sc.n) throw Error("averaging region must live in physical space");
  if (!(R > 0.0)) throw Error("cutoff radius must be positive");
  if (!F_t.inflated_within(R, ms.region)) {
    throw InsufficientMarginError("sample region does not contain the R-neighbourhood of F_t");
  }
  EmpiricalAutocorrelation ac;
  ac.cutoff = R;
  ac.volume = F_t.volume();
  if (!(ac.volume > 0.0)) throw Error("averaging region has zero volume");
  if (ms.empty()) return ac;

  const KeyPacker packer(sc.dim());
  std::vector<Eigen::Index> centres;
  for (Eigen::Index i = 0; i < ms.size(); ++i)
    if (F_t.contains(ms.physical.col(i))) centres.push_back(i);

  detail::CellGrid grid(ms.physical, R);
  std::unordered_map<std::uint64_t, std::int64_t> counts;
#pragma omp parallel
  {
    std::unordered_map<std::uint64_t, std::int64_t> local;
#pragma omp for schedule(static) nowait
    for (std::size_t c = 0; c < centres.size(); ++c) {
      const Eigen::Index x = centres[c];
      grid.for_each_near(ms.physical.col(x), R, [&](Eigen::Index y) { ++local[packer.pack(ms.coords, y, x)]; });
    }
#pragma omp critical
    for (const auto& [k, v] : local) counts[k] += v;
  }

  const Eigen::MatrixXd Bphys = sc.gamma.columns().topRows(sc.n);
  ac.atoms.reserve(counts.size());
  for (const auto& [k, v] : counts) {
    AutocorrAtom a;
    a.key = packer.unpack(k);
    a.z = Bphys * a.key.cast<double>();
    a.count = v;
    a.coefficient = static_cast<double>(v) / ac.volume;
    ac.atoms.push_back(std::move(a));
  }
  std::sort(ac.atoms.begin(), ac.atoms.end(), [](const auto& a, const auto& b) { return key_less(a.key, b.key); });
  return ac;
}

OverlapVolume theoretical_autocorr_coeff(const Scheme& scheme, const Window& window, const IntVector& k) {
  if (k.size() != scheme.dim()) throw Error("lattice coordinate dimension mismatch");
  Eigen::VectorXd zstar = scheme.gamma.point(k).tail(scheme.m);
  OverlapVolume ov = window.overlap_volume(zstar);
  double covol = covolume(scheme.gamma);
  ov.value /= covol;
  ov.stderr_ /= covol;
  return ov;
}

EmpiricalAutocorrelation radialize(const EmpiricalAutocorrelation& ac, const PointGroup& K) {
  EmpiricalAutocorrelation out;
  out.cutoff = ac.cutoff;
  out.volume = ac.volume;
  out.radialized = true;
  auto cmp = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return tolerant_less(a, b); };
  std::map<Eigen::VectorXd, std::pair<std::int64_t, double>, decltype(cmp)> merged(cmp);
  for (const auto& a : ac.atoms) {
    auto& slot = merged[orbit_label(K, a.z)];
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

std::complex<double> pair_against_test_function(const EmpiricalAutocorrelation& ac, const TestFunction& f) {
  if (f.is_zero()) return 0.0;
  if (f.support_radius() > ac.cutoff * (1.0 + 1e-12)) {
    throw SupportExceedsCutoffError("test function support exceeds the autocorrelation cutoff");
  }
  std::complex<double> acc = 0.0;
  for (const auto& a : ac.atoms) acc += a.coefficient * f(a.z);
  return acc;
}

double stability_constant(const EmpiricalAutocorrelation& at_t, const EmpiricalAutocorrelation& at_2t, double t) {
  double worst = 0.0;
  for (const auto& a : at_t.atoms) worst = std::max(worst, std::abs(a.coefficient - at_2t.coefficient_at(a.z)));
  for (const auto& a : at_2t.atoms) worst = std::max(worst, std::abs(a.coefficient - at_t.coefficient_at(a.z)));
  return worst * t;
}

ApproxDiagnostic approx_sequence_diagnostic(const ApproxSequence& seq, const Eigen::VectorXd& xi, double threshold) {
  if (xi.size() != seq.dim) throw Error("frequency dimension mismatch");
  if (xi.cwiseAbs().maxCoeff() == 0.0) throw TrivialCharacterError("approximation diagnostic needs xi != 0");
  for (std::size_t i = 1; i < seq.scales.size(); ++i)
    if (!(seq.scales[i] > seq.scales[i - 1])) throw Error("scales must be strictly increasing");

  ApproxDiagnostic out;
  for (double t : seq.scales) {
    double v = 1.0, bound = 0.0;
    if (seq.family == ApproxSequence::Family::Box) {
      for (Eigen::Index i = 0; i < xi.size(); ++i) {
        double u = 2.0 * kPi * xi[i] * t;
        if (u != 0.0) v *= std::sin(u) / u;
      }
      bound = 1.0 / (2.0 * kPi * xi.cwiseAbs().maxCoeff() * t);
    } else {
      const double nu = seq.dim / 2.0;
      const double k = xi.norm();
      const double x = 2.0 * kPi * t * k;
      const double vol = std::pow(kPi, nu) * std::pow(t, seq.dim) / std::tgamma(nu + 1.0);
      const double pre = std::pow(t / k, nu) / vol;
      v = pre * std::cyl_bessel_j(nu, x);
      bound = pre * std::sqrt(2.0 / (kPi * x));
    }
    out.values.push_back(std::abs(v));
    out.bounds.push_back(bound);
  }
  for (std::size_t i = out.values.size() / 2; i < out.values.size(); ++i) out.tail_max = std::max(out.tail_max, out.values[i]);
  out.pass = out.tail_max <= threshold;
  return out;
}

void write_csv(const EmpiricalAutocorrelation& ac, std::ostream& os) {
  const Eigen::Index d = ac.atoms.empty() ? 0 : ac.atoms.front().z.size();
  for (Eigen::Index i = 0; i < d; ++i) os << "z" << i << ",";
  os << "orbit_label,coefficient\n";
  char buf[40];
  for (const auto& a : ac.atoms) {
    std::string label;
    for (Eigen::Index i = 0; i < a.z.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", a.z[i]);
      os << buf << ",";
      label += (i ? " " : "") + std::string(buf);
    }
    std::snprintf(buf, sizeof buf, "%.17g", a.coefficient);
    os << (ac.radialized ? label : std::string("-")) << "," << buf << "\n";
  }
}

}  // namespace modelset
