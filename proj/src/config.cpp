#include "modelset/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "modelset/heisenberg.hpp"

namespace modelset {

using nlohmann::json;

namespace {

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

}  // namespace

bool operator==(const SchemeSpec& a, const SchemeSpec& b) {
  return a.kind == b.kind && a.preset == b.preset && a.n == b.n && a.m == b.m && a.k == b.k &&
         a.point_group == b.point_group && a.group_order == b.group_order && a.basis.rows() == b.basis.rows() &&
         a.basis.cols() == b.basis.cols() && (a.basis.size() == 0 || a.basis == b.basis);
}

void to_json(json& j, const SchemeSpec& s) {
  j = json{{"kind", s.kind}, {"preset", s.preset}, {"n", s.n}, {"m", s.m}, {"k", s.k},
           {"point_group", s.point_group}, {"group_order", s.group_order}};
  if (s.basis.size() > 0) {
    json cols = json::array();
    for (Eigen::Index c = 0; c < s.basis.cols(); ++c)
      cols.push_back(std::vector<double>(s.basis.col(c).data(), s.basis.col(c).data() + s.basis.rows()));
    j["basis"] = cols;
  }
}

void from_json(const json& j, SchemeSpec& s) {
  read_opt(j, "kind", s.kind);
  read_opt(j, "preset", s.preset);
  read_opt(j, "n", s.n);
  read_opt(j, "m", s.m);
  read_opt(j, "k", s.k);
  read_opt(j, "point_group", s.point_group);
  read_opt(j, "group_order", s.group_order);
  if (j.contains("basis")) {
    const auto cols = j.at("basis").get<std::vector<std::vector<double>>>();
    if (cols.empty()) throw ConfigError("basis must list at least one column");
    s.basis.resize(static_cast<Eigen::Index>(cols.front().size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (cols[c].size() != cols.front().size()) throw ConfigError("basis columns differ in length");
      s.basis.col(static_cast<Eigen::Index>(c)) = to_vector(cols[c]);
    }
  }
}

void to_json(json& j, const WindowSpec& w) {
  j = json{{"kind", w.kind}, {"lower", w.lower}, {"upper", w.upper}, {"center", w.center},
           {"radius", w.radius}, {"dim", w.dim}};
}

void from_json(const json& j, WindowSpec& w) {
  read_opt(j, "kind", w.kind);
  read_opt(j, "lower", w.lower);
  read_opt(j, "upper", w.upper);
  read_opt(j, "center", w.center);
  read_opt(j, "radius", w.radius);
  read_opt(j, "dim", w.dim);
}

void to_json(json& j, const TestFunctionSpec& f) {
  j = json{{"kind", f.kind}, {"dim", f.dim}, {"width", f.width}, {"order", f.order}};
}

void from_json(const json& j, TestFunctionSpec& f) {
  read_opt(j, "kind", f.kind);
  read_opt(j, "dim", f.dim);
  read_opt(j, "width", f.width);
  read_opt(j, "order", f.order);
}

void to_json(json& j, const Tolerances& t) {
  j = json{{"poisson", t.poisson},         {"autocorr", t.autocorr}, {"consistency", t.consistency},
           {"monte_carlo", t.monte_carlo}, {"functional", t.functional}, {"psd", t.psd},
           {"diagnostic", t.diagnostic}};
}

void from_json(const json& j, Tolerances& t) {
  read_opt(j, "poisson", t.poisson);
  read_opt(j, "autocorr", t.autocorr);
  read_opt(j, "consistency", t.consistency);
  read_opt(j, "monte_carlo", t.monte_carlo);
  read_opt(j, "functional", t.functional);
  read_opt(j, "psd", t.psd);
  read_opt(j, "diagnostic", t.diagnostic);
}

void to_json(json& j, const HeisenbergSpec& h) {
  j = json{{"characters", h.characters}, {"laguerre", h.laguerre}, {"bessel", h.bessel},
           {"ansatz_dim", h.ansatz_dim}, {"samples", h.samples}};
}

void from_json(const json& j, HeisenbergSpec& h) {
  read_opt(j, "characters", h.characters);
  read_opt(j, "laguerre", h.laguerre);
  read_opt(j, "bessel", h.bessel);
  read_opt(j, "ansatz_dim", h.ansatz_dim);
  read_opt(j, "samples", h.samples);
}

void to_json(json& j, const ExperimentConfig& c) {
  j = json{{"pipeline", c.pipeline},
           {"scheme", c.scheme},
           {"window", c.window},
           {"scales", c.scales},
           {"cutoff", c.cutoff},
           {"test_functions", c.test_functions},
           {"dual_radius", c.dual_radius},
           {"frequency", c.frequency},
           {"sequence", c.sequence},
           {"tolerances", c.tolerances},
           {"heisenberg", c.heisenberg},
           {"out_dir", c.out_dir},
           {"seed", c.seed}};
}

void from_json(const json& j, ExperimentConfig& c) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  read_opt(j, "pipeline", c.pipeline);
  read_opt(j, "scheme", c.scheme);
  read_opt(j, "window", c.window);
  read_opt(j, "scales", c.scales);
  read_opt(j, "cutoff", c.cutoff);
  read_opt(j, "test_functions", c.test_functions);
  read_opt(j, "dual_radius", c.dual_radius);
  read_opt(j, "frequency", c.frequency);
  read_opt(j, "sequence", c.sequence);
  read_opt(j, "tolerances", c.tolerances);
  read_opt(j, "heisenberg", c.heisenberg);
  read_opt(j, "out_dir", c.out_dir);
  read_opt(j, "seed", c.seed);
}

Scheme SchemeSpec::build() const {
  if (kind == "heisenberg") return HScheme::euclidean();
  if (preset == "sqrt2_chain") return Scheme::sqrt2_chain();
  if (preset == "integer") return Scheme::integer(n, m);
  if (preset == "minkowski_sqrt2") return Scheme::minkowski_sqrt2(k);
  if (preset == "custom") {
    if (basis.rows() != n + m || basis.cols() != n + m) throw ConfigError("custom basis must be (n + m) x (n + m)");
    return Scheme(n, m, LatticeBasis(basis));
  }
  throw ConfigError("unknown scheme preset '" + preset + "'");
}

PointGroup SchemeSpec::build_group() const {
  const Scheme sc = build();
  if (point_group == "trivial") return PointGroup::trivial(sc.n);
  if (point_group == "sign") return PointGroup::sign(sc.n);
  if (point_group == "cyclic" || point_group == "dihedral") {
    if (sc.n != 2) throw ConfigError("cyclic and dihedral groups act on a 2-dimensional physical space");
    return point_group == "cyclic" ? PointGroup::cyclic(group_order) : PointGroup::dihedral(group_order);
  }
  throw ConfigError("unknown point group '" + point_group + "'");
}

Window WindowSpec::build() const {
  if (kind == "empty") return Window::empty(dim);
  if (kind == "box") {
    if (lower.empty() || lower.size() != upper.size()) throw ConfigError("box window needs lower and upper of equal length");
    return Window::box(to_vector(lower), to_vector(upper));
  }
  if (kind == "ball") {
    if (center.empty() || !(radius > 0.0)) throw ConfigError("ball window needs a center and a positive radius");
    return Window::ball(to_vector(center), radius);
  }
  throw ConfigError("unknown window kind '" + kind + "'");
}

TestFunction TestFunctionSpec::build() const {
  if (!(width > 0.0)) throw ConfigError("test function width must be positive");
  if (dim < 1) throw ConfigError("test function dimension must be positive");
  TestFunction one(1);
  if (kind == "gaussian") {
    one = TestFunction::gaussian(width);
  } else if (kind == "bspline") {
    one = TestFunction::bspline(order, width);
  } else if (kind == "box") {
    one = TestFunction::box(width);
  } else {
    throw ConfigError("unknown test function kind '" + kind + "'");
  }
  TestFunction out = one;
  for (int d = 1; d < dim; ++d) out = tensor(out, one);
  return out;
}

void ExperimentConfig::validate() const {
  static const char* pipelines[] = {"autocorr", "peaks", "verify-poisson", "consistency", "heisenberg",
                                    "diagnose-sequence"};
  bool known = false;
  for (const char* p : pipelines) known = known || pipeline == p;
  if (!known) throw ConfigError("unknown pipeline '" + pipeline + "'");
  if (scheme.kind != "abelian" && scheme.kind != "virtually-abelian" && scheme.kind != "heisenberg")
    throw ConfigError("unknown scheme kind '" + scheme.kind + "'");
  const double tols[] = {tolerances.poisson,    tolerances.autocorr, tolerances.consistency, tolerances.monte_carlo,
                         tolerances.functional, tolerances.psd,      tolerances.diagnostic};
  for (double t : tols)
    if (!(t > 0.0)) throw ConfigError("tolerances must be positive");
  if (scales.empty()) throw ConfigError("scales must not be empty");
  for (double t : scales)
    if (!(t > 0.0)) throw ConfigError("scales must be positive");
  if (!(cutoff > 0.0)) throw ConfigError("cutoff must be positive");
  if (!(dual_radius > 0.0)) throw ConfigError("dual_radius must be positive");
  if (sequence != "box" && sequence != "ball") throw ConfigError("sequence must be box or ball");
  if (heisenberg.ansatz_dim < 1) throw ConfigError("ansatz_dim must be positive");
}

ExperimentConfig parse_config(const std::string& json_text) {
  ExperimentConfig cfg;
  try {
    json::parse(json_text).get_to(cfg);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const ExperimentConfig& cfg) { return json(cfg).dump(2) + "\n"; }

}  // namespace modelset
