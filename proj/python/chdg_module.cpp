#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "chdg/config.hpp"
#include "chdg/diagnostics.hpp"
#include "chdg/interface.hpp"
#include "chdg/operators.hpp"
#include "chdg/time_stepper.hpp"

namespace py = pybind11;
using namespace chdg;

namespace {

std::shared_ptr<const DGSpace> make_space(int n, int degree) {
  return std::make_shared<const DGSpace>(
      std::make_shared<const Mesh>(build_uniform_mesh(n)), degree);
}

ModelParams params_from_kwargs(double epsilon, double k, double T, double sigma0, int degree,
                               const std::string& scheme, const std::string& init_projection) {
  ModelParams p;
  p.epsilon = epsilon;
  p.k = k;
  p.T = T;
  p.sigma0 = sigma0 > 0.0 ? sigma0 : 10.0 * degree * (degree + 1);
  p.degree = degree;
  if (scheme == "splitting")
    p.scheme = NonlinearVariant::splitting;
  else if (scheme == "implicit")
    p.scheme = NonlinearVariant::implicit;
  else
    throw std::invalid_argument("scheme must be 'splitting' or 'implicit'");
  if (init_projection == "l2_continuous")
    p.init_projection = InitProjection::l2_continuous;
  else if (init_projection == "elliptic_continuous")
    p.init_projection = InitProjection::elliptic_continuous;
  else
    throw std::invalid_argument(
        "init_projection must be 'l2_continuous' or 'elliptic_continuous'");
  return p;
}

py::dict simulate(int n, int test_case, double epsilon, double k, double T, double sigma0,
                  int degree, const std::string& scheme, const std::string& init_projection,
                  bool energy_law) {
  const ModelParams p =
      params_from_kwargs(epsilon, k, T, sigma0, degree, scheme, init_projection);
  const auto space = make_space(n, degree);
  const InitialCondition ic = make_initial(test_case, epsilon);
  SimulationOptions opts;
  opts.keep_history = false;
  opts.compute_energy_law = energy_law;
  const SimulationResult r =
      run_simulation(space, p, [ic](Point2 x) { return ic.value(x); }, opts);

  py::list steps, time, energy, mass, newton_iters, residual, law_residual;
  for (const auto& row : r.series.rows) {
    steps.append(row.step);
    time.append(row.time);
    energy.append(row.energy);
    mass.append(row.mass);
    newton_iters.append(row.newton_iters);
    residual.append(row.residual);
    law_residual.append(row.energy_law_residual);
  }
  py::dict out;
  out["step"] = steps;
  out["time"] = time;
  out["energy"] = energy;
  out["mass"] = mass;
  out["newton_iters"] = newton_iters;
  out["residual"] = residual;
  out["energy_law_residual"] = law_residual;
  return out;
}

py::list convergence(int test_case, const std::vector<int>& n_list, int reference_n,
                     double epsilon, double k, double T, const std::string& scheme,
                     int threads) {
  ModelParams p = params_from_kwargs(epsilon, k, T, -1.0, 1, scheme, "l2_continuous");
  const InitialCondition ic = make_initial(test_case, epsilon);
  const ConvergenceReport r = convergence_study(
      p, [ic](Point2 x) { return ic.value(x); }, n_list, reference_n, threads);
  py::list rows;
  for (const auto& row : r.rows) {
    py::dict d;
    d["n"] = row.n;
    d["h"] = row.h;
    d["err_linf_l2"] = row.err_linf_l2;
    d["order_l2"] = row.order_l2;
    d["err_l2_h1"] = row.err_l2_h1;
    d["order_h1"] = row.order_h1;
    rows.append(d);
  }
  return rows;
}

double spectrum(int n, int test_case, double epsilon, double sigma0,
                const std::function<double(double)>& fprime) {
  const auto space = make_space(n, 1);
  const InitialCondition ic = make_initial(test_case, epsilon);
  DGField U = project_initial(space, [ic](Point2 x) { return ic.value(x); },
                              InitProjection::l2_continuous, sigma0);
  return spectrum_estimate(U, epsilon, sigma0, fprime);
}

py::list zero_level_set(int n, int test_case, double epsilon, double sigma0) {
  const auto space = make_space(n, 1);
  const InitialCondition ic = make_initial(test_case, epsilon);
  const DGField u = project_initial(space, [ic](Point2 x) { return ic.value(x); },
                                    InitProjection::l2_continuous, sigma0);
  const InterfacePolyline poly = extract_zero_level_set(node_average(u), 0.0);
  py::list segments;
  for (const auto& s : poly.segments)
    segments.append(py::make_tuple(s.a[0], s.a[1], s.b[0], s.b[1]));
  return segments;
}

}  // namespace

PYBIND11_MODULE(_chdg, m) {
  m.doc() = "mixed interior-penalty DG solver for the Cahn-Hilliard equation";

  m.def("simulate", &simulate, py::arg("n"), py::arg("test_case") = 1,
        py::arg("epsilon") = 0.1, py::arg("k") = 1e-5, py::arg("T") = 1e-4,
        py::arg("sigma0") = -1.0, py::arg("degree") = 1, py::arg("scheme") = "splitting",
        py::arg("init_projection") = "l2_continuous", py::arg("energy_law") = true,
        "Run the coupled (U, W) backward-Euler solver; returns the per-step "
        "time series as a dict of lists.");

  m.def("convergence_study", &convergence, py::arg("test_case"), py::arg("n_list"),
        py::arg("reference_n"), py::arg("epsilon") = 0.1, py::arg("k") = 1e-5,
        py::arg("T") = 2e-4, py::arg("scheme") = "splitting", py::arg("threads") = 1,
        "Nested-mesh errors and orders against the doubly refined reference.");

  m.def("spectrum_estimate", &spectrum, py::arg("n"), py::arg("test_case") = 1,
        py::arg("epsilon") = 0.1, py::arg("sigma0") = 20.0,
        py::arg("fprime") = std::function<double(double)>(),
        "Smallest eigenvalue of the linearized operator over mean-zero fields.");

  m.def("zero_level_set", &zero_level_set, py::arg("n"), py::arg("test_case") = 1,
        py::arg("epsilon") = 0.1, py::arg("sigma0") = 20.0,
        "Zero level set of the node-averaged initial projection as a list of "
        "(x0, y0, x1, y1) segments.");

  m.def("ellipse_signed_distance",
        [](double x, double y, double a, double b) {
          return ellipse_signed_distance({x, y}, a, b);
        },
        py::arg("x"), py::arg("y"), py::arg("a"), py::arg("b"),
        "Signed distance to the axis-aligned ellipse, positive outside.");

  m.def("gronwall_bound",
        [](double S1, const std::vector<double>& b, const std::vector<double>& k, double p) {
          GronwallInput in;
          in.S1 = S1;
          in.b = b;
          in.k = k;
          in.p = p;
          return gronwall_bound(in);
        },
        py::arg("S1"), py::arg("b"), py::arg("k"), py::arg("p") = 2.0,
        "Upper bounds from the nonlinear discrete Gronwall lemma.");
}
