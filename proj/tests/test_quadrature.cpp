#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "chdg/quadrature.hpp"

using namespace chdg;

namespace {

// exact integral of xi^p eta^q over the unit triangle: p! q! / (p+q+2)!
double tri_monomial(int p, int q) {
  double v = 1.0;
  for (int i = 1; i <= p; ++i) v *= i;
  for (int i = 1; i <= q; ++i) v *= i;
  for (int i = 1; i <= p + q + 2; ++i) v /= i;
  return v;
}

double quad_tri(const TriangleRule& rule, int p, int q) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.points.size(); ++i) {
    const double xi = rule.points[i][1], eta = rule.points[i][2];
    s += rule.weights[i] * std::pow(xi, p) * std::pow(eta, q);
  }
  return s;
}

}  // namespace

TEST_CASE("triangle rule integrates all monomials up to its degree exactly") {
  for (int degree : {1, 2, 3, 4, 6, 9, 12}) {
    const TriangleRule rule = triangle_quadrature(degree);
    for (int p = 0; p <= degree; ++p) {
      for (int q = 0; p + q <= degree; ++q) {
        CAPTURE(degree);
        CAPTURE(p);
        CAPTURE(q);
        CHECK(quad_tri(rule, p, q) == doctest::Approx(tri_monomial(p, q)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("hand value: integral of xi^2 eta^2 over the unit triangle is 1/180") {
  const TriangleRule rule = triangle_quadrature(4);
  CHECK(quad_tri(rule, 2, 2) == doctest::Approx(1.0 / 180.0).epsilon(1e-14));
}

TEST_CASE("triangle weights are positive and sum to the reference area 1/2") {
  for (int degree : {1, 5, 10, 20}) {
    const TriangleRule rule = triangle_quadrature(degree);
    double s = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      s += w;
    }
    CHECK(s == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("triangle points lie inside the reference triangle") {
  const TriangleRule rule = triangle_quadrature(8);
  for (const auto& b : rule.points) {
    CHECK(b[0] > 0.0);
    CHECK(b[1] > 0.0);
    CHECK(b[2] > 0.0);
    CHECK(b[0] + b[1] + b[2] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("edge rule is Gauss-Legendre on [0,1]") {
  for (int degree : {1, 3, 7, 15}) {
    const EdgeRule rule = edge_quadrature(degree);
    for (int p = 0; p <= degree; ++p) {
      double s = 0.0;
      for (std::size_t i = 0; i < rule.points.size(); ++i)
        s += rule.weights[i] * std::pow(rule.points[i], p);
      CAPTURE(degree);
      CAPTURE(p);
      CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("hand value: integral of s^3 over [0,1] is 1/4") {
  const EdgeRule rule = edge_quadrature(3);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.points.size(); ++i)
    s += rule.weights[i] * std::pow(rule.points[i], 3);
  CHECK(s == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("out-of-range degrees are rejected") {
  CHECK_THROWS_AS(triangle_quadrature(0), std::invalid_argument);
  CHECK_THROWS_AS(triangle_quadrature(41), std::invalid_argument);
  CHECK_THROWS_AS(edge_quadrature(0), std::invalid_argument);
  CHECK_THROWS_AS(edge_quadrature(41), std::invalid_argument);
}
