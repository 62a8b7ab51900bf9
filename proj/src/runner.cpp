#include "modelset/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "modelset/autocorr.hpp"
#include "modelset/diffraction.hpp"
#include "modelset/heisenberg.hpp"

namespace modelset {

using nlohmann::ordered_json;

namespace {

struct Context {
  const ExperimentConfig& cfg;
  std::filesystem::path dir;
  RunResult result;
  ordered_json metrics = ordered_json::object();

  std::ofstream open(const std::string& name) {
    std::ofstream os(dir / name);
    if (!os) throw Error("cannot write '" + (dir / name).string() + "'");
    result.files.push_back(name);
    return os;
  }

  void check(const char* name, double value, double tol) {
    metrics[name] = value;
    if (!(value <= tol)) result.pass = false;
  }
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

TestFunction test_function(const ExperimentConfig& cfg, std::size_t i, int dim) {
  if (cfg.test_functions.empty()) throw ConfigError("at least one test function is required");
  TestFunctionSpec spec = cfg.test_functions[std::min(i, cfg.test_functions.size() - 1)];
  spec.dim = dim;
  return spec.build();
}

void require_abelian_family(const ExperimentConfig& cfg) {
  if (cfg.scheme.kind == "heisenberg") throw ConfigError("pipeline '" + cfg.pipeline + "' needs an abelian scheme");
}

PurePointMeasure diffraction(const ExperimentConfig& cfg, const Scheme& sc, const Window& w) {
  if (cfg.scheme.kind == "virtually-abelian") return spherical_diffraction(sc, cfg.scheme.build_group(), w, cfg.dual_radius);
  return meyer_diffraction(sc, w, cfg.dual_radius);
}

void run_autocorr(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  require_abelian_family(cfg);
  const Scheme sc = cfg.scheme.build();
  const Window w = cfg.window.build();
  const PointGroup K = cfg.scheme.build_group();
  double worst = 0.0;
  for (double t : cfg.scales) {
    const ModelSet ms = cut_and_project(sc, w, Region::cube(sc.n, t + cfg.cutoff + 1.0));
    const EmpiricalAutocorrelation ac = empirical_autocorr(ms, Region::cube(sc.n, t), cfg.cutoff);
    {
      auto os = ctx.open("autocorr_t" + num(t) + ".csv");
      write_csv(cfg.scheme.kind == "virtually-abelian" ? radialize(ac, K) : ac, os);
    }
    worst = 0.0;
    for (const auto& a : ac.atoms) {
      if (a.z.norm() > cfg.cutoff) continue;
      worst = std::max(worst, std::abs(a.coefficient - theoretical_autocorr_coeff(sc, w, a.key).value));
    }
  }
  ctx.check("max_coefficient_error", worst, cfg.tolerances.autocorr);
}

void run_peaks(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  require_abelian_family(cfg);
  const Scheme sc = cfg.scheme.build();
  const PurePointMeasure pm = diffraction(cfg, sc, cfg.window.build());
  {
    auto os = ctx.open("peaks.csv");
    write_peaks_csv(pm, os);
  }
  {
    auto os = ctx.open("peaks_plot.txt");
    emit_plot_data(pm, os);
  }
  ctx.metrics["atoms"] = pm.atoms.size();
  ctx.metrics["trivial_peak"] = pm.intensity_at(Eigen::VectorXd::Zero(sc.n));
  ctx.metrics["tail_bound"] = pm.tail_bound;
}

void run_verify_poisson(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  require_abelian_family(cfg);
  const Scheme sc = cfg.scheme.build();
  const TestFunction f = test_function(cfg, 0, sc.n), r = test_function(cfg, 1, sc.m);
  TripleOptions opt;
  opt.tail_tolerance = cfg.tolerances.poisson;
  try {
    const TripleCheck tc = poisson_triple_check(sc, f, r, cfg.dual_radius, opt);
    ctx.metrics["lattice"] = tc.lattice;
    ctx.metrics["dual"] = tc.dual;
    ctx.metrics["quadrature"] = tc.quadrature;
    ctx.metrics["tail_estimate"] = tc.tail_estimate;
    ctx.metrics["dual_terms"] = tc.dual_terms;
    ctx.check("max_rel_err", tc.max_rel_err, cfg.tolerances.poisson);
  } catch (const TailBoundError& e) {
    ctx.metrics["tail_error"] = e.what();
    ctx.result.pass = false;
  }
}

void run_consistency(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  require_abelian_family(cfg);
  const Scheme sc = cfg.scheme.build();
  const Window w = cfg.window.build();
  const TestFunction f = test_function(cfg, 0, sc.n);
  const PurePointMeasure pm = diffraction(cfg, sc, w);
  const double t = cfg.scales.back();
  const double R = autoconvolution(f).support_radius();
  const ModelSet ms = cut_and_project(sc, w, Region::cube(sc.n, t + R + 1.0));
  const ConsistencyReport rep = consistency_harness(ms, Region::cube(sc.n, t), cfg.scheme.build_group(), w, f, pm);
  ctx.metrics["empirical"] = rep.empirical;
  ctx.metrics["theoretical"] = rep.theoretical;
  ctx.metrics["tail_estimate"] = rep.tail_estimate;
  ctx.check("rel_gap", rep.rel_gap, cfg.tolerances.consistency);
}

void run_heisenberg(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  if (cfg.scheme.kind != "heisenberg") throw ConfigError("the heisenberg pipeline needs scheme kind 'heisenberg'");
  const Window w = cfg.window.build();
  const HeisenbergSpec& hs = cfg.heisenberg;

  const CocycleReport cr = cocycle_closure_check(5);
  ctx.metrics["cocycle_pairs"] = cr.pairs;
  ctx.check("cocycle_failures", static_cast<double>(cr.failures), 0.0);

  std::vector<HPeakRow> rows;
  for (const auto& e : hs.bessel) {
    const HDualPoint eta{e[0], e[1], e[2], e[3]};
    const BesselCoefficient bc = bessel_branch_coefficient(w, eta);
    rows.push_back({"bessel", num(eta.eta1().real()) + " " + num(eta.eta1().imag()), bc.intensity, false, 0, 0.0});
  }
  double functional = 0.0, psd = 0.0;
  bool edc = true, monotone = true;
  for (const auto& c : hs.characters) {
    const CentralCharacter chi{c[0], c[1]};
    for (int m : hs.laguerre) {
      const LaguerreSpherical omega(chi.lambda1(), m);
      functional = std::max(functional, functional_equation_residual(omega, 25, cfg.seed));
      edc = edc && edc_check(omega).pass;
      NilpotentOptions opt;
      opt.ansatz_dim = hs.ansatz_dim;
      const NilpotentCoefficient nc = nilpotent_branch_coefficient(w, chi, m, opt);
      psd = std::max(psd, std::max(0.0, -nc.min_eigenvalue));
      for (std::size_t i = 1; i < nc.values.size(); ++i) monotone = monotone && nc.values[i] >= nc.values[i - 1];
      rows.push_back({"nilpotent", num(chi.lambda1()) + " " + std::to_string(m), nc.intensity, true, hs.ansatz_dim,
                      0.0});
    }
  }
  ctx.check("functional_residual", functional, cfg.tolerances.functional);
  ctx.check("psd_violation", psd, cfg.tolerances.psd);
  ctx.metrics["edc_pass"] = edc;
  ctx.metrics["monotone"] = monotone;
  if (!edc || !monotone) ctx.result.pass = false;

  if (hs.samples > 0) {
    LatticeSumOptions lo;
    lo.samples = hs.samples;
    lo.seed = cfg.seed;
    lo.max_rel_stderr = cfg.tolerances.monte_carlo;
    const LatticeSumReport ls = lattice_sum_identity_check(test_function(cfg, 0, 3), test_function(cfg, 1, 3), lo);
    ctx.metrics["lattice_sum"] = ls.lattice_sum;
    ctx.metrics["mc_norm"] = ls.mc_norm;
    ctx.metrics["mc_stderr"] = ls.mc_stderr;
    ctx.check("mc_rel_gap", ls.rel_gap, cfg.tolerances.monte_carlo);
    if (std::abs(ls.mc_norm - ls.lattice_sum) > 3.0 * ls.mc_stderr) ctx.result.pass = false;
  }
  auto os = ctx.open("heisenberg_peaks.csv");
  write_heisenberg_csv(rows, os);
}

void run_diagnose_sequence(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  ApproxSequence seq;
  seq.family = cfg.sequence == "ball" ? ApproxSequence::Family::Ball : ApproxSequence::Family::Box;
  seq.dim = static_cast<int>(cfg.frequency.size());
  seq.scales = cfg.scales;
  const Eigen::VectorXd xi = Eigen::Map<const Eigen::VectorXd>(cfg.frequency.data(), seq.dim);
  const ApproxDiagnostic d = approx_sequence_diagnostic(seq, xi, cfg.tolerances.diagnostic);
  auto os = ctx.open("sequence.csv");
  os << "scale,value,bound\n";
  bool within = true;
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    os << num(seq.scales[i]) << "," << num(d.values[i]) << "," << num(d.bounds[i]) << "\n";
    within = within && d.values[i] <= d.bounds[i];
  }
  ctx.metrics["within_envelope"] = within;
  ctx.check("tail_max", d.tail_max, cfg.tolerances.diagnostic);
  if (!within) ctx.result.pass = false;
}

}  // namespace

RunResult run(const ExperimentConfig& cfg) {
  cfg.validate();
  Context ctx{cfg, std::filesystem::path(cfg.out_dir), {}};
  std::filesystem::create_directories(ctx.dir);
  if (cfg.pipeline == "autocorr") run_autocorr(ctx);
  else if (cfg.pipeline == "peaks") run_peaks(ctx);
  else if (cfg.pipeline == "verify-poisson") run_verify_poisson(ctx);
  else if (cfg.pipeline == "consistency") run_consistency(ctx);
  else if (cfg.pipeline == "heisenberg") run_heisenberg(ctx);
  else run_diagnose_sequence(ctx);

  ordered_json report;
  report["pipeline"] = cfg.pipeline;
  report["pass"] = ctx.result.pass;
  report["metrics"] = ctx.metrics;
  report["files"] = ctx.result.files;
  ctx.result.report_json = report.dump(2) + "\n";
  std::ofstream os(ctx.dir / "report.json");
  if (!os) throw Error("cannot write report.json");
  os << ctx.result.report_json;
  return ctx.result;
}

}  // namespace modelset
