#include "chdg/assembly.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace chdg {

namespace {

struct VolumeTables {
  TriangleRule rule;
  std::vector<Eigen::VectorXd> phi;       // per qpoint, local_dim
  std::vector<Eigen::MatrixXd> ref_grad;  // per qpoint, local_dim x 2
};

VolumeTables make_volume_tables(const DGSpace& space, int degree) {
  VolumeTables t;
  t.rule = triangle_quadrature(degree);
  for (std::size_t q = 0; q < t.rule.points.size(); ++q) {
    const auto& b = t.rule.points[q];
    t.phi.push_back(space.basis_values(b[1], b[2]));
    t.ref_grad.push_back(space.basis_ref_gradients(b[1], b[2]));
  }
  return t;
}

Eigen::Matrix2d jacobian_inv_t(const Mesh& mesh, int cell, double& abs_det) {
  const auto J = mesh.cell_jacobian(cell);
  const double det = J[0][0] * J[1][1] - J[1][0] * J[0][1];
  abs_det = std::abs(det);
  Eigen::Matrix2d jinv_t;
  jinv_t << J[1][1] / det, -J[0][1] / det, -J[1][0] / det, J[0][0] / det;
  return jinv_t;
}

/// Trace data of one cell's basis on an interior edge: values and normal
/// gradients at the edge quadrature points.
struct EdgeTrace {
  Eigen::MatrixXd value;        // nq x local_dim
  Eigen::MatrixXd normal_grad;  // nq x local_dim
};

EdgeTrace edge_trace(const DGSpace& space, int cell, const InteriorEdge& e, const EdgeRule& rule) {
  const Mesh& mesh = space.mesh();
  const auto& va = mesh.vertices[static_cast<std::size_t>(e.verts[0])];
  const auto& vb = mesh.vertices[static_cast<std::size_t>(e.verts[1])];
  const int nq = static_cast<int>(rule.points.size());
  EdgeTrace t;
  t.value.resize(nq, space.local_dim());
  t.normal_grad.resize(nq, space.local_dim());
  for (int q = 0; q < nq; ++q) {
    const double s = rule.points[static_cast<std::size_t>(q)];
    const Point2 x{va[0] + s * (vb[0] - va[0]), va[1] + s * (vb[1] - va[1])};
    const Point2 ref = mesh.to_reference(cell, x);
    t.value.row(q) = space.basis_values(ref[0], ref[1]).transpose();
    const Eigen::MatrixXd g = space.basis_gradients(cell, ref[0], ref[1]);
    t.normal_grad.row(q) = (g.col(0) * e.normal[0] + g.col(1) * e.normal[1]).transpose();
  }
  return t;
}

}  // namespace

SparseMat assemble_sipg(const DGSpace& space, double sigma0) {
  if (!(sigma0 > 0.0)) throw std::invalid_argument("assemble_sipg: sigma0 must be positive");
  const Mesh& mesh = space.mesh();
  const int ldim = space.local_dim();
  const int r = space.degree();
  const auto vol = make_volume_tables(space, std::max(2 * r, 1));
  const EdgeRule erule = edge_quadrature(2 * r + 2);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(space.dof_count()) * static_cast<std::size_t>(4 * ldim));

  // volume gradient terms
  for (int c = 0; c < space.num_cells(); ++c) {
    double adet = 0.0;
    const Eigen::Matrix2d jinv_t = jacobian_inv_t(mesh, c, adet);
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(ldim, ldim);
    for (std::size_t q = 0; q < vol.rule.points.size(); ++q) {
      const Eigen::MatrixXd g = vol.ref_grad[q] * jinv_t.transpose();
      local += (vol.rule.weights[q] * adet) * (g * g.transpose());
    }
    for (int i = 0; i < ldim; ++i)
      for (int j = 0; j < ldim; ++j)
        trips.emplace_back(space.global_dof(c, i), space.global_dof(c, j), local(i, j));
  }

  // interior edge terms; the two-cell DOF block is ordered [left | right]
  for (const auto& e : mesh.interior_edges) {
    const EdgeTrace tl = edge_trace(space, e.left, e, erule);
    const EdgeTrace tr = edge_trace(space, e.right, e, erule);
    const int nd = 2 * ldim;
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nd, nd);
    Eigen::VectorXd jump(nd), avg_grad(nd);
    for (std::size_t q = 0; q < erule.points.size(); ++q) {
      const double w = erule.weights[q] * e.length;
      jump.head(ldim) = tl.value.row(static_cast<int>(q)).transpose();
      jump.tail(ldim) = -tr.value.row(static_cast<int>(q)).transpose();
      avg_grad.head(ldim) = 0.5 * tl.normal_grad.row(static_cast<int>(q)).transpose();
      avg_grad.tail(ldim) = 0.5 * tr.normal_grad.row(static_cast<int>(q)).transpose();
      local -= w * (jump * avg_grad.transpose() + avg_grad * jump.transpose());
      local += (w * sigma0 / e.length) * (jump * jump.transpose());
    }
    auto gdof = [&](int k) {
      return k < ldim ? space.global_dof(e.left, k) : space.global_dof(e.right, k - ldim);
    };
    for (int i = 0; i < nd; ++i)
      for (int j = 0; j < nd; ++j) trips.emplace_back(gdof(i), gdof(j), local(i, j));
  }

  SparseMat A(space.dof_count(), space.dof_count());
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

SparseMat assemble_mass(const DGSpace& space) {
  const Mesh& mesh = space.mesh();
  const int ldim = space.local_dim();
  const auto vol = make_volume_tables(space, 2 * space.degree());

  std::vector<Eigen::Triplet<double>> trips;
  Eigen::MatrixXd ref_local = Eigen::MatrixXd::Zero(ldim, ldim);
  for (std::size_t q = 0; q < vol.rule.points.size(); ++q)
    ref_local += vol.rule.weights[q] * (vol.phi[q] * vol.phi[q].transpose());

  for (int c = 0; c < space.num_cells(); ++c) {
    const double scale = 2.0 * mesh.cell_area(c);  // |det J|
    for (int i = 0; i < ldim; ++i)
      for (int j = 0; j < ldim; ++j)
        trips.emplace_back(space.global_dof(c, i), space.global_dof(c, j),
                           scale * ref_local(i, j));
  }
  SparseMat M(space.dof_count(), space.dof_count());
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

Eigen::VectorXd assemble_nonlinear(const DGSpace& space, const DGField& U, const DGField& U_prev,
                                   NonlinearVariant variant) {
  if (U.space.get() != &space || U_prev.space.get() != &space)
    throw std::invalid_argument("assemble_nonlinear: fields on mismatched spaces");
  const Mesh& mesh = space.mesh();
  const int ldim = space.local_dim();
  const auto vol = make_volume_tables(space, 4 * space.degree());

  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dof_count());
  for (int c = 0; c < space.num_cells(); ++c) {
    const double scale = 2.0 * mesh.cell_area(c);
    Eigen::VectorXd uloc(ldim), ploc(ldim);
    for (int l = 0; l < ldim; ++l) {
      uloc(l) = U.coeffs(space.global_dof(c, l));
      ploc(l) = U_prev.coeffs(space.global_dof(c, l));
    }
    for (std::size_t q = 0; q < vol.rule.points.size(); ++q) {
      const double uq = vol.phi[q].dot(uloc);
      const double explicit_part = variant == NonlinearVariant::splitting ? vol.phi[q].dot(ploc) : uq;
      const double fq = uq * uq * uq - explicit_part;
      const double w = vol.rule.weights[q] * scale;
      for (int i = 0; i < ldim; ++i) out(space.global_dof(c, i)) += w * fq * vol.phi[q](i);
    }
  }
  return out;
}

SparseMat assemble_nonlinear_jacobian(const DGSpace& space, const DGField& U,
                                      NonlinearVariant variant) {
  if (U.space.get() != &space)
    throw std::invalid_argument("assemble_nonlinear_jacobian: field on mismatched space");
  const Mesh& mesh = space.mesh();
  const int ldim = space.local_dim();
  const auto vol = make_volume_tables(space, 4 * space.degree());
  const double shift = variant == NonlinearVariant::splitting ? 0.0 : -1.0;

  std::vector<Eigen::Triplet<double>> trips;
  for (int c = 0; c < space.num_cells(); ++c) {
    const double scale = 2.0 * mesh.cell_area(c);
    Eigen::VectorXd uloc(ldim);
    for (int l = 0; l < ldim; ++l) uloc(l) = U.coeffs(space.global_dof(c, l));
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(ldim, ldim);
    for (std::size_t q = 0; q < vol.rule.points.size(); ++q) {
      const double uq = vol.phi[q].dot(uloc);
      const double fp = 3.0 * uq * uq + shift;
      local += (vol.rule.weights[q] * scale * fp) * (vol.phi[q] * vol.phi[q].transpose());
    }
    for (int i = 0; i < ldim; ++i)
      for (int j = 0; j < ldim; ++j)
        trips.emplace_back(space.global_dof(c, i), space.global_dof(c, j), local(i, j));
  }
  SparseMat J(space.dof_count(), space.dof_count());
  J.setFromTriplets(trips.begin(), trips.end());
  return J;
}

Eigen::VectorXd assemble_load(const DGSpace& space, const std::function<double(Point2)>& g,
                              int quad_degree) {
  const Mesh& mesh = space.mesh();
  const int ldim = space.local_dim();
  const auto vol = make_volume_tables(space, quad_degree);

  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dof_count());
  for (int c = 0; c < space.num_cells(); ++c) {
    const double scale = 2.0 * mesh.cell_area(c);
    for (std::size_t q = 0; q < vol.rule.points.size(); ++q) {
      const auto& b = vol.rule.points[q];
      const double gv = g(mesh.to_physical(c, b[1], b[2]));
      const double w = vol.rule.weights[q] * scale;
      for (int i = 0; i < ldim; ++i) out(space.global_dof(c, i)) += w * gv * vol.phi[q](i);
    }
  }
  return out;
}

Eigen::VectorXd assemble_sipg_rhs_smooth(const DGSpace& space,
                                         const std::function<double(Point2)>& u,
                                         const std::function<Point2(Point2)>& grad_u,
                                         int quad_degree) {
  const Mesh& mesh = space.mesh();
  const int ldim = space.local_dim();
  const auto vol = make_volume_tables(space, quad_degree);
  const EdgeRule erule = edge_quadrature(quad_degree);

  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dof_count());

  for (int c = 0; c < space.num_cells(); ++c) {
    double adet = 0.0;
    const Eigen::Matrix2d jinv_t = jacobian_inv_t(mesh, c, adet);
    for (std::size_t q = 0; q < vol.rule.points.size(); ++q) {
      const auto& b = vol.rule.points[q];
      const Point2 x = mesh.to_physical(c, b[1], b[2]);
      const Point2 gu = grad_u(x);
      const double uv = u(x);
      const double w = vol.rule.weights[q] * adet;
      const Eigen::MatrixXd g = vol.ref_grad[q] * jinv_t.transpose();
      for (int i = 0; i < ldim; ++i) {
        out(space.global_dof(c, i)) +=
            w * (gu[0] * g(i, 0) + gu[1] * g(i, 1) + uv * vol.phi[q](i));
      }
    }
  }

  // smooth u has no jumps: only -int_e (grad u . n_e) [phi_i] survives
  for (const auto& e : mesh.interior_edges) {
    const EdgeTrace tl = edge_trace(space, e.left, e, erule);
    const EdgeTrace tr = edge_trace(space, e.right, e, erule);
    const auto& va = mesh.vertices[static_cast<std::size_t>(e.verts[0])];
    const auto& vb = mesh.vertices[static_cast<std::size_t>(e.verts[1])];
    for (std::size_t q = 0; q < erule.points.size(); ++q) {
      const double s = erule.points[q];
      const Point2 x{va[0] + s * (vb[0] - va[0]), va[1] + s * (vb[1] - va[1])};
      const Point2 gu = grad_u(x);
      const double gn = gu[0] * e.normal[0] + gu[1] * e.normal[1];
      const double w = erule.weights[q] * e.length;
      for (int i = 0; i < ldim; ++i) {
        out(space.global_dof(e.left, i)) -= w * gn * tl.value(static_cast<int>(q), i);
        out(space.global_dof(e.right, i)) += w * gn * tr.value(static_cast<int>(q), i);
      }
    }
  }
  return out;
}

double broken_h1_seminorm_sq(const DGField& v) {
  const DGSpace& space = *v.space;
  const Mesh& mesh = space.mesh();
  const int ldim = space.local_dim();
  const auto vol = make_volume_tables(space, std::max(2 * space.degree() - 2, 1));
  double total = 0.0;
  for (int c = 0; c < space.num_cells(); ++c) {
    double adet = 0.0;
    const Eigen::Matrix2d jinv_t = jacobian_inv_t(mesh, c, adet);
    Eigen::VectorXd loc(ldim);
    for (int l = 0; l < ldim; ++l) loc(l) = v.coeffs(space.global_dof(c, l));
    for (std::size_t q = 0; q < vol.rule.points.size(); ++q) {
      const Eigen::MatrixXd g = vol.ref_grad[q] * jinv_t.transpose();
      const Eigen::Vector2d gv = g.transpose() * loc;
      total += vol.rule.weights[q] * adet * gv.squaredNorm();
    }
  }
  return total;
}

double jump_seminorm_sq(const DGField& v, double h_power) {
  const DGSpace& space = *v.space;
  const Mesh& mesh = space.mesh();
  const int ldim = space.local_dim();
  const EdgeRule erule = edge_quadrature(2 * space.degree() + 2);
  double total = 0.0;
  for (const auto& e : mesh.interior_edges) {
    const EdgeTrace tl = edge_trace(space, e.left, e, erule);
    const EdgeTrace tr = edge_trace(space, e.right, e, erule);
    Eigen::VectorXd ll(ldim), lr(ldim);
    for (int l = 0; l < ldim; ++l) {
      ll(l) = v.coeffs(space.global_dof(e.left, l));
      lr(l) = v.coeffs(space.global_dof(e.right, l));
    }
    double acc = 0.0;
    for (std::size_t q = 0; q < erule.points.size(); ++q) {
      const double jmp = tl.value.row(static_cast<int>(q)).dot(ll) -
                         tr.value.row(static_cast<int>(q)).dot(lr);
      acc += erule.weights[q] * e.length * jmp * jmp;
    }
    total += std::pow(e.length, h_power) * acc;
  }
  return total;
}

double field_l2_norm(const DGField& v) {
  const DGSpace& space = *v.space;
  const Mesh& mesh = space.mesh();
  const int ldim = space.local_dim();
  const auto vol = make_volume_tables(space, 2 * space.degree());
  double total = 0.0;
  for (int c = 0; c < space.num_cells(); ++c) {
    const double scale = 2.0 * mesh.cell_area(c);
    Eigen::VectorXd loc(ldim);
    for (int l = 0; l < ldim; ++l) loc(l) = v.coeffs(space.global_dof(c, l));
    for (std::size_t q = 0; q < vol.rule.points.size(); ++q) {
      const double vq = vol.phi[q].dot(loc);
      total += vol.rule.weights[q] * scale * vq * vq;
    }
  }
  return std::sqrt(total);
}

}  // namespace chdg
