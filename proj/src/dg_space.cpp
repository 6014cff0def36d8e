#include "chdg/dg_space.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>

namespace chdg {

DGSpace::DGSpace(std::shared_ptr<const Mesh> mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree) {
  if (degree_ < 1) throw std::invalid_argument("DGSpace: degree must be >= 1");
  local_dim_ = (degree_ + 1) * (degree_ + 2) / 2;

  for (int p = 0; p <= degree_; ++p)
    for (int q = 0; q <= degree_ - p; ++q) mono_exps_.push_back({p, q});

  for (int i = 0; i <= degree_; ++i)
    for (int j = 0; j <= degree_ - i; ++j)
      ref_nodes_.push_back({static_cast<double>(i) / degree_, static_cast<double>(j) / degree_});

  Eigen::MatrixXd vandermonde(local_dim_, local_dim_);
  for (int nd = 0; nd < local_dim_; ++nd) {
    const auto& pt = ref_nodes_[static_cast<std::size_t>(nd)];
    for (int m = 0; m < local_dim_; ++m) {
      const auto& e = mono_exps_[static_cast<std::size_t>(m)];
      vandermonde(nd, m) = std::pow(pt[0], e[0]) * std::pow(pt[1], e[1]);
    }
  }
  coeffs_ = vandermonde.inverse();  // column i: monomial coefficients of phi_i

  // S_h map: group DOFs whose physical node positions coincide. Nodes sit on
  // the lattice x = -1 + (2/(n*r)) * integer, so integer keys are exact.
  const int scale = mesh_->n * degree_;
  std::map<std::pair<std::int64_t, std::int64_t>, int> groups;
  continuous_map_.assign(static_cast<std::size_t>(dof_count()), -1);
  std::vector<Eigen::Triplet<double>> trips;
  for (int c = 0; c < num_cells(); ++c) {
    for (int l = 0; l < local_dim_; ++l) {
      const Point2 x = node_position(c, l);
      const auto key = std::make_pair(std::llround((x[0] + 1.0) * scale / 2.0),
                                      std::llround((x[1] + 1.0) * scale / 2.0));
      auto [it, inserted] = groups.try_emplace(key, n_continuous_);
      if (inserted) ++n_continuous_;
      const int g = global_dof(c, l);
      continuous_map_[static_cast<std::size_t>(g)] = it->second;
      trips.emplace_back(g, it->second, 1.0);
    }
  }
  prolongation_.resize(dof_count(), n_continuous_);
  prolongation_.setFromTriplets(trips.begin(), trips.end());
}

Point2 DGSpace::node_position(int cell, int local) const {
  const auto& pt = ref_nodes_[static_cast<std::size_t>(local)];
  return mesh_->to_physical(cell, pt[0], pt[1]);
}

Eigen::VectorXd DGSpace::basis_values(double xi, double eta) const {
  Eigen::VectorXd monos(local_dim_);
  for (int m = 0; m < local_dim_; ++m) {
    const auto& e = mono_exps_[static_cast<std::size_t>(m)];
    monos(m) = std::pow(xi, e[0]) * std::pow(eta, e[1]);
  }
  return coeffs_.transpose() * monos;
}

Eigen::MatrixXd DGSpace::basis_ref_gradients(double xi, double eta) const {
  Eigen::MatrixXd dmonos(local_dim_, 2);
  for (int m = 0; m < local_dim_; ++m) {
    const auto& e = mono_exps_[static_cast<std::size_t>(m)];
    dmonos(m, 0) = e[0] > 0 ? e[0] * std::pow(xi, e[0] - 1) * std::pow(eta, e[1]) : 0.0;
    dmonos(m, 1) = e[1] > 0 ? e[1] * std::pow(xi, e[0]) * std::pow(eta, e[1] - 1) : 0.0;
  }
  return coeffs_.transpose() * dmonos;
}

Eigen::MatrixXd DGSpace::basis_gradients(int cell, double xi, double eta) const {
  const auto J = mesh_->cell_jacobian(cell);
  const double det = J[0][0] * J[1][1] - J[1][0] * J[0][1];
  // J^{-T}, with J columns (J[0], J[1])
  Eigen::Matrix2d jinv_t;
  jinv_t << J[1][1] / det, -J[0][1] / det, -J[1][0] / det, J[0][0] / det;
  return basis_ref_gradients(xi, eta) * jinv_t.transpose();
}

double eval_field(const DGField& field, int cell, const std::array<double, 3>& bary) {
  const DGSpace& sp = *field.space;
  if (cell < 0 || cell >= sp.num_cells()) throw std::out_of_range("eval_field: cell id");
  const Eigen::VectorXd phi = sp.basis_values(bary[1], bary[2]);
  double v = 0.0;
  for (int l = 0; l < sp.local_dim(); ++l) v += phi(l) * field.coeffs(sp.global_dof(cell, l));
  return v;
}

Point2 broken_gradient(const DGField& field, int cell, const std::array<double, 3>& bary) {
  const DGSpace& sp = *field.space;
  if (cell < 0 || cell >= sp.num_cells()) throw std::out_of_range("broken_gradient: cell id");
  const Eigen::MatrixXd grads = sp.basis_gradients(cell, bary[1], bary[2]);
  Point2 g{0.0, 0.0};
  for (int l = 0; l < sp.local_dim(); ++l) {
    const double c = field.coeffs(sp.global_dof(cell, l));
    g[0] += c * grads(l, 0);
    g[1] += c * grads(l, 1);
  }
  return g;
}

}  // namespace chdg
