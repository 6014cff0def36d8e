#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "chdg/config.hpp"
#include "chdg/io.hpp"

using namespace chdg;
namespace fs = std::filesystem;

namespace {

std::shared_ptr<const DGSpace> make_space(int n, int degree = 1) {
  return std::make_shared<const DGSpace>(
      std::make_shared<const Mesh>(build_uniform_mesh(n)), degree);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "chdg_test_io") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("minimal config applies the documented defaults") {
  const Config c = parse_config_text(
      R"({"epsilon": 0.1, "n": 20, "k": 1e-5, "T": 1e-4, "scheme": "splitting", "test_case": 1})",
      {}, false);
  CHECK(c.params.sigma0 == 20.0);  // 10 r (r+1) with r = 1
  CHECK(c.params.degree == 1);
  CHECK(c.params.newton_tol == 1e-10);
  CHECK(c.params.newton_max_iter == 50);
  CHECK(c.params.init_projection == InitProjection::l2_continuous);
  CHECK(c.dump_every == 10);
  CHECK(c.output_dir == "out");
}

TEST_CASE("unknown keys are rejected by name") {
  try {
    parse_config_text(R"({"epsilonn": 0.1})", {}, false);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.errors.size() == 1);
    CHECK(e.errors[0].find("epsilonn") != std::string::npos);
  }
}

TEST_CASE("all validation errors are collected, not just the first") {
  try {
    parse_config_text(R"({"epsilon": -1, "k": 0, "test_case": 9, "dump_every": 0})", {}, false);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.errors.size() == 4);
  }
}

TEST_CASE("implicit scheme with a large step warns, and fails under strict") {
  std::vector<std::string> warnings;
  const Config c = parse_config_text(R"({"scheme": "implicit", "epsilon": 0.1, "k": 1e-2})", {},
                                     false, &warnings);
  CHECK(c.params.scheme == NonlinearVariant::implicit);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("epsilon^3") != std::string::npos);

  CHECK_THROWS_AS(
      parse_config_text(R"({"scheme": "implicit", "epsilon": 0.1, "k": 1e-2})", {}, true),
      ConfigError);
  // no warning when the step satisfies the restriction
  warnings.clear();
  parse_config_text(R"({"scheme": "implicit", "epsilon": 0.1, "k": 1e-5})", {}, true, &warnings);
  CHECK(warnings.empty());
}

TEST_CASE("flag overrides take precedence over file values") {
  const Config c = parse_config_text(R"({"epsilon": 0.1, "n": 20})",
                                     {"epsilon=0.05", "n=40", "output_dir=elsewhere"}, false);
  CHECK(c.params.epsilon == 0.05);
  CHECK(c.n == 40);
  CHECK(c.output_dir == "elsewhere");
  CHECK_THROWS_AS(parse_config_text("{}", {"garbage"}, false), ConfigError);
}

TEST_CASE("config round-trips through emit and parse") {
  Config c = parse_config_text(
      R"({"epsilon": 0.05, "k": 2e-6, "T": 4e-4, "sigma0": 33.5, "degree": 2,
          "scheme": "implicit", "n": 16, "test_case": 3, "dump_every": 7,
          "output_dir": "runs/a", "n_list": [5, 10, 20], "reference_n": 40,
          "snapshot_time": 1e-5, "init_projection": "elliptic_continuous"})",
      {}, false);
  const Config back = parse_config_text(emit_config(c), {}, false);
  CHECK(back == c);
}

TEST_CASE("malformed JSON is reported as a config error") {
  CHECK_THROWS_AS(parse_config_text("{not json", {}, false), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[1,2]", {}, false), ConfigError);
  CHECK_THROWS_AS(parse_config("does_not_exist.json", {}, false), ConfigError);
}

TEST_CASE("field dumps round-trip bit-exactly") {
  TempDir tmp;
  const auto space = make_space(3);
  DGField u = DGField::zero(space);
  for (int i = 0; i < space->dof_count(); ++i) u.coeffs(i) = std::sin(1000.0 * i) / 3.0;

  const fs::path p = tmp.path / "field.csv";
  write_field_dump(p, u, "U", 0.125);
  const FieldDump d = read_field_dump(p);
  CHECK(d.n == 3);
  CHECK(d.degree == 1);
  CHECK(d.name == "U");
  CHECK(d.time == 0.125);
  REQUIRE(d.coeffs.size() == u.coeffs.size());
  for (int i = 0; i < u.coeffs.size(); ++i) CHECK(d.coeffs(i) == u.coeffs(i));

  const std::string first = slurp(p);
  write_field_dump(p, u, "U", 0.125);
  CHECK(slurp(p) == first);  // byte-identical rewrite
}

TEST_CASE("truncated or alien dumps are rejected") {
  TempDir tmp;
  const fs::path p = tmp.path / "bad.csv";
  {
    std::ofstream out(p);
    out << "# chdg-field v1, n=2, r=1, field=U, t=0\n0,1.0,2.0,3.0\n";
  }
  CHECK_THROWS(read_field_dump(p));  // 8 cells expected, 1 present
  {
    std::ofstream out(p);
    out << "just,a,csv\n";
  }
  CHECK_THROWS(read_field_dump(p));
  CHECK_THROWS(read_field_dump(tmp.path / "missing.csv"));
}

TEST_CASE("CSV writers emit the documented headers deterministically") {
  TempDir tmp;

  TimeSeriesRecord series;
  series.rows.push_back({0, 0.0, 2.5, 3.1, 0, 0.0, 0.0});
  series.rows.push_back({1, 1e-5, 2.4, 3.1, 3, 1e-12, 1e-13});
  const fs::path ts = tmp.path / "ts.csv";
  write_timeseries_csv(ts, series);
  const std::string body = slurp(ts);
  CHECK(body.rfind("step,time,energy,mass,newton_iters,residual,energy_law_residual\n", 0) == 0);
  write_timeseries_csv(ts, series);
  CHECK(slurp(ts) == body);

  InterfacePolyline poly;
  poly.time = 0.5;
  poly.segments.push_back({{0.0, 0.1}, {0.2, 0.3}});
  const fs::path ip = tmp.path / "interface.csv";
  write_interface_csv(ip, poly);
  CHECK(slurp(ip).rfind("time,segment,x0,y0,x1,y1\n", 0) == 0);

  ConvergenceReport report;
  report.rows.push_back({5, 0.565, 0.4, std::nan(""), 0.05, std::nan("")});
  report.rows.push_back({10, 0.282, 0.1, 2.0, 0.025, 1.0});
  const fs::path cp = tmp.path / "conv.csv";
  write_convergence_csv(cp, report);
  const std::string conv = slurp(cp);
  CHECK(conv.rfind("n,h,err_linf_l2,order_l2,err_l2_h1,order_h1\n", 0) == 0);
  CHECK(conv.find(",,") != std::string::npos);  // blank order columns on the first row

  const fs::path sp = tmp.path / "spec.csv";
  write_spectrum_csv(sp, {{5.0, 0.1, 12.5}});
  CHECK(slurp(sp).rfind("n,epsilon,lambda_min\n", 0) == 0);
}

TEST_CASE("writers leave no temp files behind") {
  TempDir tmp;
  TimeSeriesRecord series;
  series.rows.push_back({0, 0.0, 1.0, 1.0, 0, 0.0, 0.0});
  write_timeseries_csv(tmp.path / "a.csv", series);
  int count = 0;
  for (const auto& e : fs::directory_iterator(tmp.path)) {
    ++count;
    CHECK(e.path().extension() == ".csv");
  }
  CHECK(count == 1);
}
