#pragma once

#include <array>
#include <vector>

namespace chdg {

/// Quadrature rule on the unit reference triangle {xi,eta >= 0, xi+eta <= 1}.
/// Points are barycentric (1-xi-eta, xi, eta); weights sum to 1/2.
struct TriangleRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Rule on the reference edge [0,1]; weights sum to 1.
struct EdgeRule {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Collapsed-coordinate Gauss rule, exact for total degree `degree`.
TriangleRule triangle_quadrature(int degree);

/// Gauss-Legendre on [0,1], exact for degree `degree`.
EdgeRule edge_quadrature(int degree);

}  // namespace chdg
