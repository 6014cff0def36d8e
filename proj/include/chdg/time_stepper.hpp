#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chdg/assembly.hpp"
#include "chdg/dg_space.hpp"
#include "chdg/operators.hpp"

namespace chdg {

struct NewtonDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MassConservationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelParams {
  double epsilon = 0.1;
  double k = 1e-5;
  double T = 1e-4;
  double sigma0 = 20.0;  // default 10*r*(r+1) with r=1
  int degree = 1;
  NonlinearVariant scheme = NonlinearVariant::splitting;
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  InitProjection init_projection = InitProjection::l2_continuous;
};

struct StepRecord {
  int step = 0;
  double time = 0.0;
  double energy = 0.0;
  double mass = 0.0;
  int newton_iters = 0;
  double residual = 0.0;
  double energy_law_residual = 0.0;
};

struct TimeSeriesRecord {
  std::vector<StepRecord> rows;
};

/// E_h(U) = (1/4eps) ||U^2 - 1||^2 + (eps/2) a_h(U, U).
double discrete_energy(const DGField& U, double epsilon, const SparseMat& A);

/// Advances the coupled (U, W) system with damped Newton. Matrices are
/// assembled once; the Jacobian's nonlinear block is refreshed per iteration.
class TimeStepper {
 public:
  TimeStepper(std::shared_ptr<const DGSpace> space, const ModelParams& params);

  /// Sets U^0 and computes W^0 from the chemical-potential equation with
  /// U^{-1} := U^0.
  void set_initial(const DGField& U0);

  /// One backward-Euler step. Throws NewtonDivergence / LinearSolveFailure.
  void step();

  const DGField& U() const { return U_; }
  const DGField& W() const { return W_; }
  int step_index() const { return step_index_; }
  double time() const { return step_index_ * params_.k; }
  int last_newton_iters() const { return last_iters_; }
  double last_residual() const { return last_residual_; }

  const ModelParams& params() const { return params_; }
  const SparseMat& sipg() const { return A_; }
  const SparseMat& mass_matrix() const { return M_; }
  double mass(const DGField& U) const { return mvec_.dot(U.coeffs); }
  double energy(const DGField& U) const { return discrete_energy(U, params_.epsilon, A_); }

 private:
  Eigen::VectorXd residual(const Eigen::VectorXd& u, const Eigen::VectorXd& w,
                           const Eigen::VectorXd& u_prev) const;

  std::shared_ptr<const DGSpace> space_;
  ModelParams params_;
  SparseMat A_, M_;
  Eigen::VectorXd mvec_;
  DGField U_, W_;
  int step_index_ = 0;
  int last_iters_ = 0;
  double last_residual_ = 0.0;
};

/// Running evaluation of the per-step energy-law identity: the accumulated
/// sums are owned by the caller so trajectories can stream.
class EnergyLawAccumulator {
 public:
  EnergyLawAccumulator(std::shared_ptr<const DGSpace> space, const ModelParams& params,
                       const InverseLaplacianSolver& solver);

  void set_initial(const DGField& U0);
  /// Feed U^m (m >= 1); returns the identity residual at this step.
  double advance(const DGField& U);

 private:
  std::shared_ptr<const DGSpace> space_;
  ModelParams params_;
  const InverseLaplacianSolver* solver_;
  Eigen::VectorXd u_prev_;
  double e0_ = 0.0;
  double sum_ = 0.0;
};

/// Residuals of the discrete energy law at every ell >= 1 for a stored
/// trajectory U^0..U^M.
std::vector<double> energy_law_residual(const std::vector<Eigen::VectorXd>& trajectory,
                                        std::shared_ptr<const DGSpace> space,
                                        const ModelParams& params,
                                        const InverseLaplacianSolver& solver);

struct SimulationResult {
  TimeSeriesRecord series;
  std::vector<Eigen::VectorXd> U_history;  // one entry per recorded step, incl. step 0
  std::vector<Eigen::VectorXd> W_history;
  std::shared_ptr<const DGSpace> space;
};

struct SimulationOptions {
  bool keep_history = true;
  bool compute_energy_law = true;
  /// Called after every accepted step (and for step 0).
  std::function<void(const StepRecord&, const DGField& U, const DGField& W)> on_step;
};

/// Full run: project u0, advance to T, track energy/mass/energy-law.
/// Mass conservation is enforced per step at 1e-10 * |Omega|.
SimulationResult run_simulation(std::shared_ptr<const DGSpace> space, const ModelParams& params,
                                const std::function<double(Point2)>& u0,
                                const SimulationOptions& options = {});

}  // namespace chdg
