#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "modelset/error.hpp"
#include "modelset/point_group.hpp"
#include "modelset/scheme.hpp"
#include "modelset/test_function.hpp"
#include "modelset/window.hpp"

namespace modelset {

/// Thrown for malformed or invalid configurations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct SchemeSpec {
  std::string kind = "abelian";  // abelian | virtually-abelian | heisenberg
  std::string preset = "sqrt2_chain";  // sqrt2_chain | integer | minkowski_sqrt2 | custom
  int n = 1;
  int m = 1;
  int k = 1;                       // minkowski_sqrt2 rank
  Eigen::MatrixXd basis;           // custom generators as columns, (n + m) x (n + m)
  std::string point_group = "trivial";  // trivial | sign | cyclic | dihedral
  int group_order = 1;             // n of C_n or D_n

  Scheme build() const;
  PointGroup build_group() const;
  friend bool operator==(const SchemeSpec&, const SchemeSpec&);
};

struct WindowSpec {
  std::string kind = "box";  // box | ball | empty
  std::vector<double> lower{-1.0};
  std::vector<double> upper{1.0};
  std::vector<double> center;
  double radius = 0.0;
  int dim = 1;  // used by empty

  Window build() const;
  friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

struct TestFunctionSpec {
  std::string kind = "gaussian";  // gaussian | bspline | box
  int dim = 1;
  double width = 0.5;  // sigma for gaussian, half-width a otherwise
  int order = 2;       // bspline order

  TestFunction build() const;
  friend bool operator==(const TestFunctionSpec&, const TestFunctionSpec&) = default;
};

struct Tolerances {
  double poisson = 1e-6;
  double autocorr = 5e-3;
  double consistency = 1e-2;
  double monte_carlo = 5e-2;
  double functional = 1e-6;
  double psd = 1e-8;
  double diagnostic = 1e-2;
  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct HeisenbergSpec {
  std::vector<std::array<std::int64_t, 2>> characters{{1, 1}};  // (g, h) central frequencies
  std::vector<int> laguerre{0, 1};                                // m values
  std::vector<std::array<std::int64_t, 4>> bessel{{0, 0, 0, 0}};  // (er, fr, ei, fi)
  int ansatz_dim = 12;
  std::int64_t samples = 0;  // Monte Carlo samples for the lattice-sum check; 0 skips it
  friend bool operator==(const HeisenbergSpec&, const HeisenbergSpec&) = default;
};

struct ExperimentConfig {
  std::string pipeline = "peaks";  // autocorr | peaks | verify-poisson | consistency | heisenberg | diagnose-sequence
  SchemeSpec scheme;
  WindowSpec window;
  std::vector<double> scales{100.0};  // averaging half-widths t
  double cutoff = 5.0;                // autocorrelation radius R
  std::vector<TestFunctionSpec> test_functions{TestFunctionSpec{}};
  double dual_radius = 8.0;
  std::vector<double> frequency{0.35355339059327379};  // diagnose-sequence xi
  std::string sequence = "box";                         // box | ball
  Tolerances tolerances;
  HeisenbergSpec heisenberg;
  std::string out_dir = "out";
  std::uint64_t seed = 1;

  /// Throws ConfigError on inconsistent fields.
  void validate() const;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string emit_config(const ExperimentConfig& cfg);

}  // namespace modelset
