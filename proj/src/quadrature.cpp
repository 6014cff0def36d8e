#include "chdg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace chdg {

namespace {

constexpr int kMaxDegree = 40;

/// Gauss-Legendre nodes/weights on [-1,1] via Newton on the recurrence.
void gauss_legendre(int npts, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(npts), 0.0);
  w.assign(static_cast<std::size_t>(npts), 0.0);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < npts; ++i) {
    double t = std::cos(pi * (i + 0.75) / (npts + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= npts; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = npts * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = t;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace

EdgeRule edge_quadrature(int degree) {
  if (degree < 1 || degree > kMaxDegree)
    throw std::invalid_argument("edge_quadrature: unsupported degree");
  const int npts = (degree + 2) / 2;  // 2*npts - 1 >= degree
  std::vector<double> x, w;
  gauss_legendre(npts, x, w);
  EdgeRule rule;
  rule.degree = degree;
  for (int i = 0; i < npts; ++i) {
    rule.points.push_back(0.5 * (x[static_cast<std::size_t>(i)] + 1.0));
    rule.weights.push_back(0.5 * w[static_cast<std::size_t>(i)]);
  }
  return rule;
}

TriangleRule triangle_quadrature(int degree) {
  if (degree < 1 || degree > kMaxDegree)
    throw std::invalid_argument("triangle_quadrature: unsupported degree");
  // Duffy map (u,v) -> (xi, eta) = (u, v(1-u)) with Jacobian (1-u). A total
  // degree-d monomial pulls back to degree <= d+1 in u and <= d in v.
  const int nu = (degree + 3) / 2;  // 2*nu - 1 >= degree + 1
  const int nv = (degree + 2) / 2;
  std::vector<double> xu, wu, xv, wv;
  gauss_legendre(nu, xu, wu);
  gauss_legendre(nv, xv, wv);

  TriangleRule rule;
  rule.degree = degree;
  for (int i = 0; i < nu; ++i) {
    const double u = 0.5 * (xu[static_cast<std::size_t>(i)] + 1.0);
    const double cu = 0.5 * wu[static_cast<std::size_t>(i)];
    for (int j = 0; j < nv; ++j) {
      const double v = 0.5 * (xv[static_cast<std::size_t>(j)] + 1.0);
      const double cv = 0.5 * wv[static_cast<std::size_t>(j)];
      const double xi = u;
      const double eta = v * (1.0 - u);
      rule.points.push_back({1.0 - xi - eta, xi, eta});
      rule.weights.push_back(cu * cv * (1.0 - u));
    }
  }
  return rule;
}

}  // namespace chdg
