#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <memory>
#include <vector>

#include "chdg/mesh.hpp"

namespace chdg {

/// Broken space V_h of degree-r polynomials on each triangle, with a nodal
/// Lagrange basis on the equispaced barycentric lattice. The continuous
/// subspace S_h is exposed through a map grouping DOFs whose Lagrange nodes
/// coincide geometrically.
class DGSpace {
 public:
  DGSpace(std::shared_ptr<const Mesh> mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  int local_dim() const { return local_dim_; }
  int num_cells() const { return static_cast<int>(mesh_->cells.size()); }
  int dof_count() const { return num_cells() * local_dim_; }
  int global_dof(int cell, int local) const { return cell * local_dim_ + local; }

  /// Reference coordinates (xi, eta) of the local Lagrange nodes.
  const std::vector<Point2>& ref_nodes() const { return ref_nodes_; }
  Point2 node_position(int cell, int local) const;

  /// Basis values at a reference point, length local_dim.
  Eigen::VectorXd basis_values(double xi, double eta) const;
  /// Reference gradients, local_dim x 2.
  Eigen::MatrixXd basis_ref_gradients(double xi, double eta) const;
  /// Physical gradients in the given cell, local_dim x 2.
  Eigen::MatrixXd basis_gradients(int cell, double xi, double eta) const;

  /// Continuous-subspace map: global DOF -> S_h DOF id.
  const std::vector<int>& continuous_map() const { return continuous_map_; }
  int continuous_dof_count() const { return n_continuous_; }
  /// 0/1 prolongation S_h -> V_h (dof_count x continuous_dof_count).
  const Eigen::SparseMatrix<double>& prolongation() const { return prolongation_; }

 private:
  std::shared_ptr<const Mesh> mesh_;
  int degree_;
  int local_dim_;
  std::vector<Point2> ref_nodes_;
  std::vector<std::array<int, 2>> mono_exps_;  // (p, q) for xi^p eta^q
  Eigen::MatrixXd coeffs_;                     // monomial coefficients of the nodal basis
  std::vector<int> continuous_map_;
  int n_continuous_ = 0;
  Eigen::SparseMatrix<double> prolongation_;
};

struct DGField {
  enum class Tag { broken, continuous };

  std::shared_ptr<const DGSpace> space;
  Eigen::VectorXd coeffs;
  Tag tag = Tag::broken;

  static DGField zero(std::shared_ptr<const DGSpace> space, Tag tag = Tag::broken) {
    return {space, Eigen::VectorXd::Zero(space->dof_count()), tag};
  }
  static DGField constant(std::shared_ptr<const DGSpace> space, double value) {
    return {space, Eigen::VectorXd::Constant(space->dof_count(), value), Tag::continuous};
  }
};

/// Value of the local polynomial at a barycentric point of the cell.
double eval_field(const DGField& field, int cell, const std::array<double, 3>& bary);

/// Element-local gradient at a barycentric point.
Point2 broken_gradient(const DGField& field, int cell, const std::array<double, 3>& bary);

}  // namespace chdg
