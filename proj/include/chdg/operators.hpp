#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <functional>
#include <memory>
#include <stdexcept>

#include "chdg/assembly.hpp"
#include "chdg/dg_space.hpp"

namespace chdg {

struct LinearSolveFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class InitProjection { l2_continuous, elliptic_continuous };

/// Inverse discrete Laplacian on the mean-zero subspace, realized as one
/// factorization of the SIPG matrix augmented with the mass-weighted mean
/// constraint. Immutable after construction; solves are const.
class InverseLaplacianSolver {
 public:
  InverseLaplacianSolver(std::shared_ptr<const DGSpace> space, double sigma0);

  const DGSpace& space() const { return *space_; }
  double sigma0() const { return sigma0_; }
  const SparseMat& sipg() const { return A_; }
  const SparseMat& mass() const { return M_; }
  const Eigen::VectorXd& mass_of_one() const { return mvec_; }

  /// theta = Delta_h^{-1} zeta: mean-zero field with a_h(-theta, w) = (zeta, w)
  /// for all mean-zero w. Only the mean-zero part of zeta matters.
  DGField inv_laplacian(const DGField& zeta) const;
  Eigen::VectorXd inv_laplacian(const Eigen::VectorXd& zeta) const;

  double minus1_inner(const DGField& zeta, const DGField& xi) const;
  double minus1_norm(const DGField& zeta) const;
  double minus1_inner(const Eigen::VectorXd& zeta, const Eigen::VectorXd& xi) const;
  double minus1_norm_sq(const Eigen::VectorXd& zeta) const;

 private:
  std::shared_ptr<const DGSpace> space_;
  double sigma0_;
  SparseMat A_, M_;
  Eigen::VectorXd mvec_;
  Eigen::SparseLU<SparseMat> saddle_;
};

/// DG elliptic projection: a_h(u - Pu, v) + (u - Pu, v) = 0 for all v in V_h.
DGField elliptic_projection(std::shared_ptr<const DGSpace> space,
                            const std::function<double(Point2)>& u,
                            const std::function<Point2(Point2)>& grad_u, double sigma0);

/// Projection of u0 onto the continuous subspace S_h, either L2-orthogonal or
/// elliptic. Result is tagged continuous.
DGField project_initial(std::shared_ptr<const DGSpace> space,
                        const std::function<double(Point2)>& u0, InitProjection method,
                        double sigma0,
                        const std::function<Point2(Point2)>& grad_u0 = nullptr);

/// Arithmetic mean of coefficients at geometrically coincident Lagrange
/// nodes; output tagged continuous.
DGField node_average(const DGField& v);

}  // namespace chdg
