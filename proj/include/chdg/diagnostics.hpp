#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "chdg/dg_space.hpp"
#include "chdg/time_stepper.hpp"

namespace chdg {

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  double err_linf_l2 = 0.0;
  double order_l2 = 0.0;  // NaN on the first row
  double err_l2_h1 = 0.0;
  double order_h1 = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double epsilon = 0.0;
  double k = 0.0;
  double T = 0.0;
  NonlinearVariant scheme = NonlinearVariant::splitting;
  int reference_n = 0;
};

/// Errors of each run in `n_list` against the run on the doubly refined
/// nested reference mesh (reference_n = 2 * max n). L^inf(L^2) over shared
/// time steps, L^2(H^1) as sqrt(k * sum of squared broken seminorms), both
/// integrated with fine-mesh quadrature.
ConvergenceReport convergence_study(const ModelParams& params,
                                    const std::function<double(Point2)>& u0,
                                    const std::vector<int>& n_list, int reference_n,
                                    int max_threads = 1);

/// L^inf(L^2) and L^2(H^1) errors of a coarse trajectory against a fine one
/// on nested meshes sharing the time grid.
std::pair<double, double> nested_trajectory_errors(const SimulationResult& coarse,
                                                   const SimulationResult& fine, double k);

/// Smallest value of [eps a_h(Phi,Phi) + ((1-eps^3)/eps)(fprime(U_ref) Phi, Phi)]
/// / ||Phi||^2_{-1,h} over mean-zero DG fields. Dense generalized eigensolve
/// for DOF <= 3000, shift-invert inverse iteration above.
double spectrum_estimate(const DGField& U_ref, double epsilon, double sigma0,
                         const std::function<double(double)>& fprime = nullptr);

struct GronwallInput {
  double S1 = 0.0;              // S_1 > 0
  std::vector<double> b;        // b_1..b_{L-1}, nonnegative
  std::vector<double> k;        // k_1..k_{L-1}, nonnegative
  double p = 2.0;               // exponent > 1
};

struct GronwallConditionViolated : std::runtime_error {
  int ell;
  explicit GronwallConditionViolated(int first_failing_ell)
      : std::runtime_error("Gronwall positivity condition fails at ell = " +
                           std::to_string(first_failing_ell)),
        ell(first_failing_ell) {}
};

/// Upper bounds for S_ell, ell = 2..L, from the nonlinear discrete Gronwall
/// lemma. Throws GronwallConditionViolated at the first ell where the
/// positivity condition fails.
std::vector<double> gronwall_bound(const GronwallInput& input);

}  // namespace chdg
