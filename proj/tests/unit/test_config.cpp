#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "modelset/config.hpp"
#include "modelset/diffraction.hpp"
#include "modelset/runner.hpp"

using namespace modelset;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("modelset_test_" + name);
}

std::vector<std::pair<double, double>> plot_rows(const std::filesystem::path& dir) {
  std::ifstream in(dir / "peaks_plot.txt");
  return read_plot_data(in);
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("round trip") {
    ExperimentConfig cfg;
    cfg.pipeline = "consistency";
    cfg.scheme.preset = "custom";
    cfg.scheme.basis = Eigen::Matrix2d{{1.0, 1.0}, {1.4142135623730951, -1.4142135623730951}};
    cfg.window.lower = {-0.5};
    cfg.scales = {10.0, 100.0};
    cfg.test_functions = {{"bspline", 1, 0.7, 3}, {"gaussian", 1, 0.3, 2}};
    cfg.tolerances.consistency = 2e-2;
    cfg.heisenberg.laguerre = {0, 2, 4};
    cfg.seed = 42;
    const ExperimentConfig back = parse_config(emit_config(cfg));
    CHECK(back == cfg);
    CHECK(emit_config(back) == emit_config(cfg));
    CHECK(parse_config("{}") == ExperimentConfig{});
  }

  TEST_CASE("invalid configurations") {
    CHECK_THROWS_AS(parse_config("{\"pipeline\": \"peaks\", "), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"tolerances\": {\"poisson\": 0}}"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"tolerances\": {\"psd\": -1e-8}}"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"pipeline\": \"fit\"}"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"scales\": []}"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"cutoff\": \"five\"}"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
    ExperimentConfig cfg;
    cfg.window.kind = "ball";
    CHECK_THROWS_AS(cfg.window.build(), ConfigError);
    cfg.scheme.preset = "custom";
    CHECK_THROWS_AS(cfg.scheme.build(), ConfigError);
  }

  TEST_CASE("bundled peaks config") {
    ExperimentConfig cfg = load_config(std::string(MODELSET_CONFIG_DIR) + "/sqrt2_chain.json");
    cfg.out_dir = scratch("peaks_a").string();
    const RunResult a = run(cfg);
    CHECK(a.pass);
    CHECK(exit_code(a) == 0);
    bool found = false;
    for (const auto& [x, y] : plot_rows(cfg.out_dir)) {
      if (x != 0.0) continue;
      found = true;
      CHECK(std::abs(y - 0.5) <= 1e-6);
    }
    CHECK(found);

    const std::string first = slurp(std::filesystem::path(cfg.out_dir) / "peaks.csv");
    cfg.out_dir = scratch("peaks_b").string();
    const RunResult b = run(cfg);
    CHECK(slurp(std::filesystem::path(cfg.out_dir) / "peaks.csv") == first);
    CHECK(b.report_json == a.report_json);
  }

  TEST_CASE("empty window gives a zero spectrum") {
    ExperimentConfig cfg = load_config(std::string(MODELSET_CONFIG_DIR) + "/empty_window.json");
    cfg.out_dir = scratch("empty").string();
    const RunResult r = run(cfg);
    CHECK(r.pass);
    const auto rows = plot_rows(cfg.out_dir);
    for (const auto& row : rows) CHECK(row.second == 0.0);
  }

  TEST_CASE("plot data is sorted and parseable") {
    const PurePointMeasure pm = meyer_diffraction(Scheme::sqrt2_chain(), Window::interval(-1, 1), 4.0);
    std::stringstream ss;
    emit_plot_data(pm, ss);
    const auto rows = read_plot_data(ss);
    REQUIRE(rows.size() == pm.atoms.size());
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].first <= rows[i].first);
    for (const auto& [x, y] : rows) CHECK(y == doctest::Approx(pm.intensity_at(Eigen::VectorXd::Constant(1, x))));
  }

  TEST_CASE("diagnose-sequence pipeline") {
    ExperimentConfig cfg;
    cfg.pipeline = "diagnose-sequence";
    cfg.scales = {10.0, 100.0, 1000.0};
    cfg.out_dir = scratch("sequence").string();
    const RunResult r = run(cfg);
    CHECK(r.pass);
    const std::string csv = slurp(std::filesystem::path(cfg.out_dir) / "sequence.csv");
    CHECK(csv.rfind("scale,value,bound\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  }
}
