#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "chdg/operators.hpp"

using namespace chdg;

namespace {

std::shared_ptr<const DGSpace> make_space(int n, int degree) {
  return std::make_shared<const DGSpace>(
      std::make_shared<const Mesh>(build_uniform_mesh(n)), degree);
}

Eigen::VectorXd random_mean_zero(const InverseLaplacianSolver& inv, std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXd z(inv.space().dof_count());
  for (int i = 0; i < z.size(); ++i) z(i) = gauss(rng);
  const Eigen::VectorXd& mv = inv.mass_of_one();
  return z - (mv.dot(z) / mv.sum()) * Eigen::VectorXd::Ones(z.size());
}

}  // namespace

TEST_CASE("inverse Laplacian satisfies its defining identity") {
  const auto space = make_space(8, 1);
  const InverseLaplacianSolver inv(space, 20.0);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd zeta = random_mean_zero(inv, rng);
    const Eigen::VectorXd theta = inv.inv_laplacian(zeta);
    // mean-zero output
    CHECK(std::abs(inv.mass_of_one().dot(theta)) < 1e-10 * zeta.norm());
    // a_h(-theta, w) = (zeta, w) for all w in the mean-zero subspace:
    // residual of A*theta + M*zeta restricted to mean-zero directions
    // r must be a multiple of the constraint gradient mv; remove it and check
    const Eigen::VectorXd r = inv.sipg() * theta + inv.mass() * zeta;
    const Eigen::VectorXd& mv = inv.mass_of_one();
    const Eigen::VectorXd clean = r - (mv.dot(r) / mv.squaredNorm()) * mv;
    CHECK(clean.cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, zeta.norm()));
  }
}

TEST_CASE("the three expressions of the negative-index inner product agree") {
  const auto space = make_space(8, 1);
  const InverseLaplacianSolver inv(space, 20.0);
  std::mt19937 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd zeta = random_mean_zero(inv, rng);
    const Eigen::VectorXd xi = random_mean_zero(inv, rng);
    const Eigen::VectorXd th_z = inv.inv_laplacian(zeta);
    const Eigen::VectorXd th_x = inv.inv_laplacian(xi);
    const double e1 = inv.minus1_inner(zeta, xi);
    const double e2 = -zeta.dot(inv.mass() * th_x);       // (zeta, -Dh^-1 xi)
    const double e3 = -xi.dot(inv.mass() * th_z);         // (xi, -Dh^-1 zeta)
    const double e4 = th_z.dot(inv.sipg() * th_x);        // a_h(Dh^-1 zeta, Dh^-1 xi)
    const double scale = std::max({1.0, std::abs(e1)});
    CHECK(std::abs(e1 - e2) <= 1e-10 * scale);
    CHECK(std::abs(e1 - e3) <= 1e-10 * scale);
    CHECK(std::abs(e1 - e4) <= 1e-10 * scale);
  }
}

TEST_CASE("negative-index norm is positive definite on mean-zero fields") {
  const auto space = make_space(4, 1);
  const InverseLaplacianSolver inv(space, 20.0);
  std::mt19937 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd zeta = random_mean_zero(inv, rng);
    if (zeta.norm() < 1e-12) continue;
    CHECK(inv.minus1_norm_sq(zeta) > 0.0);
  }
}

TEST_CASE("elliptic projection reproduces polynomials of the space") {
  const auto space = make_space(3, 1);
  const DGField p = elliptic_projection(
      space, [](Point2 x) { return 2.0 * x[0] - x[1] + 0.5; },
      [](Point2) { return Point2{2.0, -1.0}; }, 20.0);
  for (int c = 0; c < space->num_cells(); ++c)
    for (int l = 0; l < space->local_dim(); ++l) {
      const Point2 node = space->node_position(c, l);
      CHECK(p.coeffs(space->global_dof(c, l)) ==
            doctest::Approx(2.0 * node[0] - node[1] + 0.5).epsilon(1e-9));
    }
}

TEST_CASE("elliptic projection converges at the expected rates") {
  using std::numbers::pi;
  auto u = [](Point2 x) { return std::cos(pi * x[0]) * std::cos(pi * x[1]); };
  auto grad_u = [](Point2 x) {
    return Point2{-pi * std::sin(pi * x[0]) * std::cos(pi * x[1]),
                  -pi * std::cos(pi * x[0]) * std::sin(pi * x[1])};
  };

  std::vector<double> el2, eh1;
  for (int n : {4, 8, 16}) {
    const auto space = make_space(n, 1);
    const DGField p = elliptic_projection(space, u, grad_u, 20.0);

    const TriangleRule rule = triangle_quadrature(8);
    double l2 = 0.0, h1 = 0.0;
    for (int c = 0; c < space->num_cells(); ++c) {
      const double scale = 2.0 * space->mesh().cell_area(c);
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const auto& b = rule.points[q];
        const Point2 x = space->mesh().to_physical(c, b[1], b[2]);
        const double dv = eval_field(p, c, b) - u(x);
        const Point2 gp = broken_gradient(p, c, b);
        const Point2 gu = grad_u(x);
        l2 += rule.weights[q] * scale * dv * dv;
        h1 += rule.weights[q] * scale *
              ((gp[0] - gu[0]) * (gp[0] - gu[0]) + (gp[1] - gu[1]) * (gp[1] - gu[1]));
      }
    }
    el2.push_back(std::sqrt(l2));
    eh1.push_back(std::sqrt(h1));
  }
  const double rate_l2 = std::log2(el2[1] / el2[2]);
  const double rate_h1 = std::log2(eh1[1] / eh1[2]);
  CHECK(rate_l2 > 1.8);
  CHECK(rate_l2 < 2.2);
  CHECK(rate_h1 > 0.85);
  CHECK(rate_h1 < 1.15);
}

TEST_CASE("initial projection preserves the total mass") {
  const auto space = make_space(6, 1);
  auto u0 = [](Point2 x) { return std::tanh((x[0] + 0.2 * x[1]) / 0.5) + 0.3; };
  const DGField p = project_initial(space, u0, InitProjection::l2_continuous, 20.0);
  CHECK(p.tag == DGField::Tag::continuous);

  // (P u0, 1) = (u0, 1) because constants lie in the continuous subspace
  const InverseLaplacianSolver inv(space, 20.0);
  const double mass_p = inv.mass_of_one().dot(p.coeffs);
  const TriangleRule rule = triangle_quadrature(20);
  double mass_u = 0.0;
  for (int c = 0; c < space->num_cells(); ++c) {
    const double scale = 2.0 * space->mesh().cell_area(c);
    for (std::size_t q = 0; q < rule.points.size(); ++q)
      mass_u += rule.weights[q] * scale *
                u0(space->mesh().to_physical(c, rule.points[q][1], rule.points[q][2]));
  }
  CHECK(mass_p == doctest::Approx(mass_u).epsilon(1e-8));
}

TEST_CASE("both initial projections agree on functions inside the space") {
  const auto space = make_space(4, 1);
  auto u0 = [](Point2 x) { return 1.0 - 0.5 * x[0] + 0.25 * x[1]; };
  auto g0 = [](Point2) { return Point2{-0.5, 0.25}; };
  const DGField a = project_initial(space, u0, InitProjection::l2_continuous, 20.0);
  const DGField b = project_initial(space, u0, InitProjection::elliptic_continuous, 20.0, g0);
  CHECK((a.coeffs - b.coeffs).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("node averaging: the +-1 two-triangle field averages to zero on the diagonal") {
  const auto space = make_space(1, 1);
  Eigen::VectorXd c(6);
  c << 1, 1, 1, -1, -1, -1;
  const DGField v{space, c, DGField::Tag::broken};
  const DGField a = node_average(v);
  CHECK(a.tag == DGField::Tag::continuous);
  // diagonal endpoints (-1,-1) and (1,1) are shared -> average 0; the two
  // off-diagonal corners keep their one-sided values
  int zeros = 0, plus = 0, minus = 0;
  for (int cell = 0; cell < 2; ++cell)
    for (int l = 0; l < 3; ++l) {
      const double val = a.coeffs(space->global_dof(cell, l));
      const Point2 p = space->node_position(cell, l);
      if (std::abs(p[0] - p[1]) < 1e-12) {
        CHECK(val == doctest::Approx(0.0));
        ++zeros;
      } else if (val > 0) {
        ++plus;
      } else {
        ++minus;
      }
    }
  CHECK(zeros == 4);
  CHECK(plus == 1);
  CHECK(minus == 1);
}

TEST_CASE("node averaging is the identity on continuous fields") {
  const auto space = make_space(3, 2);
  Eigen::VectorXd c(space->dof_count());
  for (int cell = 0; cell < space->num_cells(); ++cell)
    for (int l = 0; l < space->local_dim(); ++l) {
      const Point2 p = space->node_position(cell, l);
      c(space->global_dof(cell, l)) = p[0] * p[0] - p[1];
    }
  const DGField v{space, c, DGField::Tag::broken};
  const DGField a = node_average(v);
  CHECK((a.coeffs - c).cwiseAbs().maxCoeff() < 1e-12);
}
