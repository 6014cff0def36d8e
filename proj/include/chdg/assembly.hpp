#pragma once

#include <Eigen/Sparse>

#include <functional>

#include "chdg/dg_space.hpp"
#include "chdg/quadrature.hpp"

namespace chdg {

using SparseMat = Eigen::SparseMatrix<double>;

/// Treatment of the potential derivative in the schemes:
///   splitting: f^m = (U^m)^3 - U^{m-1}
///   implicit:  f^m = (U^m)^3 - U^m
enum class NonlinearVariant { splitting, implicit };

/// SIPG bilinear form a_h: volume gradients, symmetric consistency terms on
/// interior edges, and the penalty sigma0/h_e on jumps. Boundary edges carry
/// no terms (homogeneous Neumann).
SparseMat assemble_sipg(const DGSpace& space, double sigma0);

/// L^2 mass matrix, exact for degree <= 2r.
SparseMat assemble_mass(const DGSpace& space);

/// Vector with components (f^m, phi_i), quadrature exact for degree 4r.
Eigen::VectorXd assemble_nonlinear(const DGSpace& space, const DGField& U, const DGField& U_prev,
                                   NonlinearVariant variant);

/// Matrix with entries (f^m'(U) phi_j, phi_i); block-diagonal per cell.
SparseMat assemble_nonlinear_jacobian(const DGSpace& space, const DGField& U,
                                      NonlinearVariant variant);

/// Load vector (g, phi_i) for a callable g, with the given quadrature degree.
Eigen::VectorXd assemble_load(const DGSpace& space, const std::function<double(Point2)>& g,
                              int quad_degree);

/// RHS of the elliptic projection: a_h(u, phi_i) + (u, phi_i) for smooth u,
/// using the consistent extension of a_h (exact gradients on edges, zero
/// jumps of u).
Eigen::VectorXd assemble_sipg_rhs_smooth(const DGSpace& space,
                                         const std::function<double(Point2)>& u,
                                         const std::function<Point2(Point2)>& grad_u,
                                         int quad_degree);

/// Squared broken H^1 seminorm sum_K ||grad v||^2_{L2(K)}.
double broken_h1_seminorm_sq(const DGField& v);

/// Squared jump seminorm sum_e h_e^pow ||[v]||^2_{L2(e)} over interior edges.
double jump_seminorm_sq(const DGField& v, double h_power);

double field_l2_norm(const DGField& v);

}  // namespace chdg
