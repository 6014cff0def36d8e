#include "chdg/operators.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <vector>

namespace chdg {

InverseLaplacianSolver::InverseLaplacianSolver(std::shared_ptr<const DGSpace> space,
                                               double sigma0)
    : space_(std::move(space)), sigma0_(sigma0) {
  A_ = assemble_sipg(*space_, sigma0_);
  M_ = assemble_mass(*space_);
  mvec_ = M_ * Eigen::VectorXd::Ones(space_->dof_count());

  const int n = space_->dof_count();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(A_.nonZeros()) + 2 * static_cast<std::size_t>(n));
  for (int k = 0; k < A_.outerSize(); ++k)
    for (SparseMat::InnerIterator it(A_, k); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int i = 0; i < n; ++i) {
    trips.emplace_back(i, n, mvec_(i));
    trips.emplace_back(n, i, mvec_(i));
  }
  SparseMat saddle(n + 1, n + 1);
  saddle.setFromTriplets(trips.begin(), trips.end());
  saddle_.compute(saddle);
  if (saddle_.info() != Eigen::Success)
    throw LinearSolveFailure("InverseLaplacianSolver: saddle-point factorization failed");
}

Eigen::VectorXd InverseLaplacianSolver::inv_laplacian(const Eigen::VectorXd& zeta) const {
  const int n = space_->dof_count();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs.head(n) = -(M_ * zeta);
  const Eigen::VectorXd sol = saddle_.solve(rhs);
  if (saddle_.info() != Eigen::Success)
    throw LinearSolveFailure("InverseLaplacianSolver: solve failed");
  return sol.head(n);
}

DGField InverseLaplacianSolver::inv_laplacian(const DGField& zeta) const {
  return {space_, inv_laplacian(zeta.coeffs), DGField::Tag::broken};
}

double InverseLaplacianSolver::minus1_inner(const Eigen::VectorXd& zeta,
                                            const Eigen::VectorXd& xi) const {
  return -zeta.dot(M_ * inv_laplacian(xi));
}

double InverseLaplacianSolver::minus1_norm_sq(const Eigen::VectorXd& zeta) const {
  return minus1_inner(zeta, zeta);
}

double InverseLaplacianSolver::minus1_inner(const DGField& zeta, const DGField& xi) const {
  return minus1_inner(zeta.coeffs, xi.coeffs);
}

double InverseLaplacianSolver::minus1_norm(const DGField& zeta) const {
  return std::sqrt(std::max(0.0, minus1_norm_sq(zeta.coeffs)));
}

DGField elliptic_projection(std::shared_ptr<const DGSpace> space,
                            const std::function<double(Point2)>& u,
                            const std::function<Point2(Point2)>& grad_u, double sigma0) {
  const SparseMat A = assemble_sipg(*space, sigma0);
  const SparseMat M = assemble_mass(*space);
  const int quad_degree = 2 * space->degree() + 8;
  const Eigen::VectorXd rhs = assemble_sipg_rhs_smooth(*space, u, grad_u, quad_degree);

  SparseMat sys = A + M;
  Eigen::SimplicialLDLT<SparseMat> solver(sys);
  if (solver.info() != Eigen::Success)
    throw LinearSolveFailure("elliptic_projection: factorization failed");
  Eigen::VectorXd x = solver.solve(rhs);
  if (solver.info() != Eigen::Success)
    throw LinearSolveFailure("elliptic_projection: solve failed");
  return {space, std::move(x), DGField::Tag::broken};
}

DGField project_initial(std::shared_ptr<const DGSpace> space,
                        const std::function<double(Point2)>& u0, InitProjection method,
                        double sigma0, const std::function<Point2(Point2)>& grad_u0) {
  const Eigen::SparseMatrix<double>& P = space->prolongation();
  const int quad_degree = 2 * space->degree() + 10;

  Eigen::VectorXd rhs;
  SparseMat sys;
  if (method == InitProjection::l2_continuous) {
    const SparseMat M = assemble_mass(*space);
    sys = P.transpose() * M * P;
    rhs = P.transpose() * assemble_load(*space, u0, quad_degree);
  } else {
    std::function<Point2(Point2)> grad = grad_u0;
    if (!grad) {
      grad = [u0](Point2 x) -> Point2 {
        const double step = 1e-6;
        return {(u0({x[0] + step, x[1]}) - u0({x[0] - step, x[1]})) / (2.0 * step),
                (u0({x[0], x[1] + step}) - u0({x[0], x[1] - step})) / (2.0 * step)};
      };
    }
    const SparseMat A = assemble_sipg(*space, sigma0);
    const SparseMat M = assemble_mass(*space);
    SparseMat AM = A + M;
    sys = P.transpose() * AM * P;
    rhs = P.transpose() * assemble_sipg_rhs_smooth(*space, u0, grad, quad_degree);
  }

  Eigen::SimplicialLDLT<SparseMat> solver(sys);
  if (solver.info() != Eigen::Success)
    throw LinearSolveFailure("project_initial: factorization failed");
  Eigen::VectorXd c = solver.solve(rhs);
  if (solver.info() != Eigen::Success)
    throw LinearSolveFailure("project_initial: solve failed");
  return {space, P * c, DGField::Tag::continuous};
}

DGField node_average(const DGField& v) {
  const DGSpace& space = *v.space;
  const auto& cmap = space.continuous_map();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(space.continuous_dof_count());
  Eigen::VectorXd count = Eigen::VectorXd::Zero(space.continuous_dof_count());
  for (int g = 0; g < space.dof_count(); ++g) {
    sum(cmap[static_cast<std::size_t>(g)]) += v.coeffs(g);
    count(cmap[static_cast<std::size_t>(g)]) += 1.0;
  }
  Eigen::VectorXd out(space.dof_count());
  for (int g = 0; g < space.dof_count(); ++g) {
    const int cg = cmap[static_cast<std::size_t>(g)];
    out(g) = sum(cg) / count(cg);
  }
  return {v.space, std::move(out), DGField::Tag::continuous};
}

}  // namespace chdg
