#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chdg/config.hpp"
#include "chdg/diagnostics.hpp"
#include "chdg/interface.hpp"
#include "chdg/io.hpp"
#include "chdg/operators.hpp"
#include "chdg/time_stepper.hpp"

namespace fs = std::filesystem;

namespace {

int worker_threads() {
  const char* env = std::getenv("CHDG_THREADS");
  if (!env) return 1;
  const int v = std::atoi(env);
  return v >= 1 ? v : 1;
}

chdg::Config load_config(const std::string& path, const std::vector<std::string>& overrides,
                         bool strict, const std::string& out_dir) {
  std::vector<std::string> warnings;
  chdg::Config cfg = path.empty()
                         ? chdg::parse_config_text("", overrides, strict, &warnings)
                         : chdg::parse_config(path, overrides, strict, &warnings);
  for (const auto& w : warnings) std::cerr << "chdg-warning: " << w << '\n';
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  return cfg;
}

std::shared_ptr<const chdg::DGSpace> make_space(int n, int degree) {
  return std::make_shared<const chdg::DGSpace>(
      std::make_shared<const chdg::Mesh>(chdg::build_uniform_mesh(n)), degree);
}

int cmd_run(const chdg::Config& cfg) {
  const auto space = make_space(cfg.n, cfg.params.degree);
  const chdg::InitialCondition ic = chdg::make_initial(cfg.test_case, cfg.params.epsilon);

  const fs::path out(cfg.output_dir);
  fs::create_directories(out);
  const int num_steps = static_cast<int>(std::llround(cfg.params.T / cfg.params.k));

  chdg::SimulationOptions opts;
  opts.keep_history = false;
  opts.on_step = [&](const chdg::StepRecord& row, const chdg::DGField& U,
                     const chdg::DGField& W) {
    if (row.step % cfg.dump_every != 0 && row.step != num_steps) return;
    std::ostringstream tag;
    tag << row.step;
    chdg::write_field_dump(out / ("field_U_" + tag.str() + ".csv"), U, "U", row.time);
    chdg::write_field_dump(out / ("field_W_" + tag.str() + ".csv"), W, "W", row.time);
  };

  const chdg::SimulationResult result =
      chdg::run_simulation(space, cfg.params, [&](chdg::Point2 x) { return ic.value(x); }, opts);
  chdg::write_timeseries_csv(out / "timeseries.csv", result.series);
  std::cout << "wrote " << (out / "timeseries.csv").string() << " (" << result.series.rows.size()
            << " records)\n";
  return 0;
}

int cmd_converge(const chdg::Config& cfg) {
  if (cfg.n_list.empty()) throw chdg::ConfigError({"converge requires n_list"});
  if (cfg.reference_n != 2 * cfg.n_list.back())
    throw chdg::ConfigError({"reference_n must be 2 * max(n_list)"});

  const chdg::InitialCondition ic = chdg::make_initial(cfg.test_case, cfg.params.epsilon);
  const chdg::ConvergenceReport report = chdg::convergence_study(
      cfg.params, [&](chdg::Point2 x) { return ic.value(x); }, cfg.n_list, cfg.reference_n,
      worker_threads());

  const fs::path out(cfg.output_dir);
  chdg::write_convergence_csv(out / "convergence.csv", report);
  for (const auto& row : report.rows) {
    std::cout << "n=" << row.n << " errL2=" << row.err_linf_l2 << " order=" << row.order_l2
              << " errH1=" << row.err_l2_h1 << " order=" << row.order_h1 << '\n';
  }
  return 0;
}

int cmd_spectrum(const chdg::Config& cfg) {
  const std::vector<int> n_values = cfg.n_list.empty() ? std::vector<int>{cfg.n} : cfg.n_list;
  const chdg::InitialCondition ic = chdg::make_initial(cfg.test_case, cfg.params.epsilon);

  std::vector<std::array<double, 3>> rows;
  for (int n : n_values) {
    const auto space = make_space(n, cfg.params.degree);
    chdg::DGField snapshot =
        chdg::project_initial(space, [&](chdg::Point2 x) { return ic.value(x); },
                              cfg.params.init_projection, cfg.params.sigma0);
    if (cfg.snapshot_time > 0.0) {
      chdg::ModelParams params = cfg.params;
      params.T = cfg.snapshot_time;
      chdg::SimulationOptions opts;
      opts.keep_history = false;
      opts.compute_energy_law = false;
      chdg::TimeStepper stepper(space, params);
      stepper.set_initial(snapshot);
      const int steps = static_cast<int>(std::llround(params.T / params.k));
      for (int m = 0; m < steps; ++m) stepper.step();
      snapshot = stepper.U();
    }
    const double lambda =
        chdg::spectrum_estimate(snapshot, cfg.params.epsilon, cfg.params.sigma0);
    rows.push_back({static_cast<double>(n), cfg.params.epsilon, lambda});
    std::cout << "n=" << n << " lambda_min=" << lambda << '\n';
  }
  chdg::write_spectrum_csv(fs::path(cfg.output_dir) / "spectrum.csv", rows);
  return 0;
}

std::vector<chdg::Point2> parse_reference(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  std::vector<double> vals;
  if (colon != std::string::npos) {
    std::istringstream ss(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
  }
  if (kind == "ellipse" && vals.size() == 2) return chdg::sample_ellipse(vals[0], vals[1], 4096);
  if (kind == "circle" && vals.size() == 3)
    return chdg::sample_circle({vals[0], vals[1]}, vals[2], 4096);
  throw chdg::ConfigError({"unrecognized reference '" + spec +
                           "' (expected ellipse:a,b or circle:cx,cy,r)"});
}

int cmd_interface(const std::string& dump_path, const std::string& reference,
                  const std::string& out_dir) {
  const chdg::FieldDump dump = chdg::read_field_dump(dump_path);
  const auto space = make_space(dump.n, dump.degree);
  chdg::DGField field{space, dump.coeffs, chdg::DGField::Tag::broken};
  const chdg::DGField averaged = chdg::node_average(field);
  const chdg::InterfacePolyline poly = chdg::extract_zero_level_set(averaged, dump.time);

  const fs::path out(out_dir.empty() ? "." : out_dir);
  chdg::write_interface_csv(out / "interface.csv", poly);
  std::cout << "interface segments: " << poly.segments.size()
            << " length: " << chdg::polyline_length(poly) << '\n';

  if (!reference.empty()) {
    const auto ref = parse_reference(reference);
    const auto dist = chdg::interface_distance(poly, ref);
    if (!dist) {
      std::cout << "interface is empty; no distance computed\n";
    } else {
      std::cout << "distance to reference: " << dist->value << " (accuracy " << dist->accuracy
                << ")\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed interior-penalty DG solver for the Cahn-Hilliard equation"};
  app.require_subcommand(1);

  std::string config_path, out_dir, dump_path, reference;
  std::vector<std::string> overrides;
  bool strict = false;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "JSON config file");
    if (config_required) opt->required();
    sub->add_option("--set", overrides, "key=value override (repeatable)");
    sub->add_flag("--strict", strict, "treat validation warnings as errors");
    sub->add_option("--out", out_dir, "output directory override");
  };

  auto* run = app.add_subcommand("run", "advance a simulation and write timeseries + dumps");
  add_common(run, true);
  auto* converge = app.add_subcommand("converge", "nested-mesh convergence study");
  add_common(converge, true);
  auto* spectrum = app.add_subcommand("spectrum", "discrete spectrum diagnostic");
  add_common(spectrum, true);
  auto* interface_cmd =
      app.add_subcommand("interface", "extract the zero level set from a field dump");
  add_common(interface_cmd, false);
  interface_cmd->add_option("--dump", dump_path, "field dump file")->required();
  interface_cmd->add_option("--reference", reference,
                            "reference curve: ellipse:a,b or circle:cx,cy,r");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(load_config(config_path, overrides, strict, out_dir));
    if (converge->parsed())
      return cmd_converge(load_config(config_path, overrides, strict, out_dir));
    if (spectrum->parsed())
      return cmd_spectrum(load_config(config_path, overrides, strict, out_dir));
    if (interface_cmd->parsed()) return cmd_interface(dump_path, reference, out_dir);
  } catch (const chdg::ConfigError& e) {
    for (const auto& msg : e.errors) std::cerr << "chdg-error: " << msg << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "chdg-error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "chdg-error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
