#include "chdg/time_stepper.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <utility>

#include "chdg/quadrature.hpp"

namespace chdg {

namespace {

/// Integrate g(U(x), V(x)) over the mesh with quadrature exact for 4r.
double integrate_pointwise(const DGSpace& space, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& v, const std::function<double(double, double)>& g) {
  const Mesh& mesh = space.mesh();
  const int ldim = space.local_dim();
  const TriangleRule rule = triangle_quadrature(4 * space.degree());
  std::vector<Eigen::VectorXd> phi;
  phi.reserve(rule.points.size());
  for (const auto& b : rule.points) phi.push_back(space.basis_values(b[1], b[2]));

  double total = 0.0;
  for (int c = 0; c < space.num_cells(); ++c) {
    const double scale = 2.0 * mesh.cell_area(c);
    Eigen::VectorXd uloc(ldim), vloc(ldim);
    for (int l = 0; l < ldim; ++l) {
      uloc(l) = u(space.global_dof(c, l));
      vloc(l) = v(space.global_dof(c, l));
    }
    for (std::size_t q = 0; q < rule.points.size(); ++q)
      total += rule.weights[q] * scale * g(phi[q].dot(uloc), phi[q].dot(vloc));
  }
  return total;
}

}  // namespace

double discrete_energy(const DGField& U, double epsilon, const SparseMat& A) {
  const double bulk = integrate_pointwise(*U.space, U.coeffs, U.coeffs, [](double u, double) {
    const double s = u * u - 1.0;
    return s * s;
  });
  return bulk / (4.0 * epsilon) + 0.5 * epsilon * U.coeffs.dot(A * U.coeffs);
}

TimeStepper::TimeStepper(std::shared_ptr<const DGSpace> space, const ModelParams& params)
    : space_(std::move(space)), params_(params) {
  A_ = assemble_sipg(*space_, params_.sigma0);
  M_ = assemble_mass(*space_);
  mvec_ = M_ * Eigen::VectorXd::Ones(space_->dof_count());
  U_ = DGField::zero(space_);
  W_ = DGField::zero(space_);
}

void TimeStepper::set_initial(const DGField& U0) {
  U_ = U0;
  step_index_ = 0;
  // W^0 from the chemical-potential equation with U^{-1} := U^0.
  const Eigen::VectorXd n0 = assemble_nonlinear(*space_, U_, U_, params_.scheme);
  const Eigen::VectorXd rhs = params_.epsilon * (A_ * U_.coeffs) + n0 / params_.epsilon;
  Eigen::SimplicialLDLT<SparseMat> mass_solver(M_);
  if (mass_solver.info() != Eigen::Success)
    throw LinearSolveFailure("TimeStepper: mass factorization failed");
  W_.coeffs = mass_solver.solve(rhs);
  W_.tag = DGField::Tag::broken;
}

Eigen::VectorXd TimeStepper::residual(const Eigen::VectorXd& u, const Eigen::VectorXd& w,
                                      const Eigen::VectorXd& u_prev) const {
  const int n = space_->dof_count();
  DGField uf{space_, u, DGField::Tag::broken};
  DGField pf{space_, u_prev, DGField::Tag::broken};
  Eigen::VectorXd r(2 * n);
  r.head(n) = M_ * ((u - u_prev) / params_.k) + A_ * w;
  r.tail(n) = params_.epsilon * (A_ * u) +
              assemble_nonlinear(*space_, uf, pf, params_.scheme) / params_.epsilon - M_ * w;
  return r;
}

void TimeStepper::step() {
  const int n = space_->dof_count();
  const Eigen::VectorXd u_prev = U_.coeffs;
  Eigen::VectorXd u = U_.coeffs;
  Eigen::VectorXd w = W_.coeffs;

  // fixed Jacobian blocks: [M/k, A; eps*A + (1/eps)N'(U), -M]
  std::vector<Eigen::Triplet<double>> fixed;
  fixed.reserve(static_cast<std::size_t>(2 * M_.nonZeros() + 2 * A_.nonZeros()));
  for (int kk = 0; kk < M_.outerSize(); ++kk) {
    for (SparseMat::InnerIterator it(M_, kk); it; ++it) {
      fixed.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                         it.value() / params_.k);
      fixed.emplace_back(static_cast<int>(it.row()) + n, static_cast<int>(it.col()) + n,
                         -it.value());
    }
  }
  for (int kk = 0; kk < A_.outerSize(); ++kk) {
    for (SparseMat::InnerIterator it(A_, kk); it; ++it) {
      fixed.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()) + n, it.value());
      fixed.emplace_back(static_cast<int>(it.row()) + n, static_cast<int>(it.col()),
                         params_.epsilon * it.value());
    }
  }

  Eigen::VectorXd res = residual(u, w, u_prev);
  double res_norm = res.lpNorm<Eigen::Infinity>();
  last_iters_ = 0;

  Eigen::SparseLU<SparseMat> lu;
  bool analyzed = false;

  while (res_norm > params_.newton_tol) {
    if (last_iters_ >= params_.newton_max_iter)
      throw NewtonDivergence("Newton did not reach tolerance after max iterations");

    DGField uf{space_, u, DGField::Tag::broken};
    const SparseMat nprime = assemble_nonlinear_jacobian(*space_, uf, params_.scheme);
    std::vector<Eigen::Triplet<double>> trips = fixed;
    for (int kk = 0; kk < nprime.outerSize(); ++kk)
      for (SparseMat::InnerIterator it(nprime, kk); it; ++it)
        trips.emplace_back(static_cast<int>(it.row()) + n, static_cast<int>(it.col()),
                           it.value() / params_.epsilon);
    SparseMat jac(2 * n, 2 * n);
    jac.setFromTriplets(trips.begin(), trips.end());

    if (!analyzed) {
      lu.analyzePattern(jac);
      analyzed = true;
    }
    lu.factorize(jac);
    if (lu.info() != Eigen::Success)
      throw LinearSolveFailure("Newton Jacobian factorization failed");
    const Eigen::VectorXd delta = lu.solve(-res);
    if (lu.info() != Eigen::Success) throw LinearSolveFailure("Newton linear solve failed");

    // halving line search: accept only a residual decrease
    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 30; ++halving) {
      const Eigen::VectorXd u_try = u + alpha * delta.head(n);
      const Eigen::VectorXd w_try = w + alpha * delta.tail(n);
      const Eigen::VectorXd res_try = residual(u_try, w_try, u_prev);
      const double norm_try = res_try.lpNorm<Eigen::Infinity>();
      if (norm_try < res_norm) {
        u = u_try;
        w = w_try;
        res = res_try;
        res_norm = norm_try;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) throw NewtonDivergence("Newton line search stalled");
    ++last_iters_;
  }

  last_residual_ = res_norm;
  U_.coeffs = u;
  U_.tag = DGField::Tag::broken;
  W_.coeffs = w;
  W_.tag = DGField::Tag::broken;
  ++step_index_;
}

EnergyLawAccumulator::EnergyLawAccumulator(std::shared_ptr<const DGSpace> space,
                                           const ModelParams& params,
                                           const InverseLaplacianSolver& solver)
    : space_(std::move(space)), params_(params), solver_(&solver) {}

void EnergyLawAccumulator::set_initial(const DGField& U0) {
  u_prev_ = U0.coeffs;
  e0_ = discrete_energy(U0, params_.epsilon, solver_->sipg());
  sum_ = 0.0;
}

double EnergyLawAccumulator::advance(const DGField& U) {
  const double k = params_.k;
  const double eps = params_.epsilon;
  const Eigen::VectorXd d = (U.coeffs - u_prev_) / k;

  const double minus1 = solver_->minus1_norm_sq(d);
  const double a_d = d.dot(solver_->sipg() * d);
  const double dsq = integrate_pointwise(
      *space_, U.coeffs, u_prev_,
      [k](double u, double p) { const double v = (u * u - p * p) / k; return v * v; });
  const double ud = integrate_pointwise(
      *space_, U.coeffs, u_prev_,
      [k](double u, double p) { const double v = u * (u - p) / k; return v * v; });
  const double dl2 = d.dot(solver_->mass() * d);
  const double sign = params_.scheme == NonlinearVariant::splitting ? 1.0 : -1.0;

  sum_ += k * minus1 +
          k * k * (0.5 * eps * a_d + dsq / (4.0 * eps) + ud / (2.0 * eps) +
                   sign * dl2 / (2.0 * eps));

  u_prev_ = U.coeffs;
  const double el = discrete_energy(U, params_.epsilon, solver_->sipg());
  return el + sum_ - e0_;
}

std::vector<double> energy_law_residual(const std::vector<Eigen::VectorXd>& trajectory,
                                        std::shared_ptr<const DGSpace> space,
                                        const ModelParams& params,
                                        const InverseLaplacianSolver& solver) {
  std::vector<double> out;
  if (trajectory.empty()) return out;
  EnergyLawAccumulator acc(space, params, solver);
  acc.set_initial({space, trajectory.front(), DGField::Tag::broken});
  for (std::size_t m = 1; m < trajectory.size(); ++m)
    out.push_back(acc.advance({space, trajectory[m], DGField::Tag::broken}));
  return out;
}

SimulationResult run_simulation(std::shared_ptr<const DGSpace> space, const ModelParams& params,
                                const std::function<double(Point2)>& u0,
                                const SimulationOptions& options) {
  SimulationResult result;
  result.space = space;

  TimeStepper stepper(space, params);
  const DGField U0 = project_initial(space, u0, params.init_projection, params.sigma0);
  stepper.set_initial(U0);

  std::optional<InverseLaplacianSolver> inv;
  std::optional<EnergyLawAccumulator> acc;
  if (options.compute_energy_law) {
    inv.emplace(space, params.sigma0);
    acc.emplace(space, params, *inv);
    acc->set_initial(U0);
  }

  const double mass0 = stepper.mass(stepper.U());
  const int num_steps = static_cast<int>(std::llround(params.T / params.k));

  auto record = [&](double elr) {
    StepRecord row;
    row.step = stepper.step_index();
    row.time = stepper.time();
    row.energy = stepper.energy(stepper.U());
    row.mass = stepper.mass(stepper.U());
    row.newton_iters = stepper.last_newton_iters();
    row.residual = stepper.last_residual();
    row.energy_law_residual = elr;
    result.series.rows.push_back(row);
    if (options.keep_history) {
      result.U_history.push_back(stepper.U().coeffs);
      result.W_history.push_back(stepper.W().coeffs);
    }
    if (options.on_step) options.on_step(row, stepper.U(), stepper.W());
  };

  record(0.0);
  for (int m = 1; m <= num_steps; ++m) {
    stepper.step();
    const double drift = std::abs(stepper.mass(stepper.U()) - mass0);
    if (drift > 1e-10 * 4.0)
      throw MassConservationError("mass drift " + std::to_string(drift) + " at step " +
                                  std::to_string(m));
    record(acc ? acc->advance(stepper.U()) : 0.0);
  }
  return result;
}

}  // namespace chdg
