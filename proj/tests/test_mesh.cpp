#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "chdg/mesh.hpp"

using namespace chdg;

TEST_CASE("two-triangle mesh combinatorics") {
  const Mesh m = build_uniform_mesh(1);
  CHECK(m.vertices.size() == 4);
  CHECK(m.cells.size() == 2);
  CHECK(m.interior_edges.size() == 1);
  CHECK(m.boundary_edges.size() == 4);
  CHECK(m.h == doctest::Approx(2.0 * std::sqrt(2.0)));

  const InteriorEdge& e = m.interior_edges[0];
  CHECK(e.left > e.right);
  CHECK(e.length == doctest::Approx(2.0 * std::sqrt(2.0)));
  // diagonal normal points from the upper-left triangle into the lower-right one
  CHECK(e.normal[0] * e.normal[0] + e.normal[1] * e.normal[1] == doctest::Approx(1.0));
  const Point2 cl = m.cell_centroid(e.left);
  const Point2 cr = m.cell_centroid(e.right);
  CHECK((cr[0] - cl[0]) * e.normal[0] + (cr[1] - cl[1]) * e.normal[1] > 0.0);
}

TEST_CASE("n=5 counts and h") {
  const Mesh m = build_uniform_mesh(5);
  CHECK(m.cells.size() == 50);
  CHECK(m.vertices.size() == 36);
  CHECK(m.h == doctest::Approx(0.4 * std::sqrt(2.0)));
  // interior edges: vertical (n-1)*n + horizontal n*(n-1) + diagonals n*n
  CHECK(m.interior_edges.size() == 4 * 5 + 4 * 5 + 25);
  CHECK(m.boundary_edges.size() == 4 * 5);
}

TEST_CASE("cells are counterclockwise with area h_x*h_y/2") {
  for (int n : {1, 3, 8}) {
    const Mesh m = build_uniform_mesh(n);
    const double expected = 0.5 * (2.0 / n) * (2.0 / n);
    double total = 0.0;
    for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
      CHECK(m.cell_area(c) == doctest::Approx(expected));
      total += m.cell_area(c);
    }
    CHECK(total == doctest::Approx(4.0));
  }
}

TEST_CASE("edge normals are unit and consistent with left->right orientation") {
  const Mesh m = build_uniform_mesh(4);
  for (const auto& e : m.interior_edges) {
    CHECK(std::hypot(e.normal[0], e.normal[1]) == doctest::Approx(1.0));
    const Point2 cl = m.cell_centroid(e.left);
    const Point2 cr = m.cell_centroid(e.right);
    CHECK((cr[0] - cl[0]) * e.normal[0] + (cr[1] - cl[1]) * e.normal[1] > 0.0);
    // the normal is perpendicular to the edge
    const Point2 a = m.vertices[e.verts[0]];
    const Point2 b = m.vertices[e.verts[1]];
    CHECK((b[0] - a[0]) * e.normal[0] + (b[1] - a[1]) * e.normal[1] ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  for (const auto& e : m.boundary_edges) {
    const Point2 c = m.cell_centroid(e.cell);
    const Point2 a = m.vertices[e.verts[0]];
    const Point2 mid{0.5 * (a[0] + m.vertices[e.verts[1]][0]),
                     0.5 * (a[1] + m.vertices[e.verts[1]][1])};
    CHECK((mid[0] - c[0]) * e.normal[0] + (mid[1] - c[1]) * e.normal[1] > 0.0);
  }
}

TEST_CASE("refinement nests: every fine vertex set contains the coarse one") {
  const Mesh coarse = build_uniform_mesh(3);
  const Mesh fine = build_uniform_mesh(6);
  std::set<std::pair<long, long>> fine_keys;
  auto key = [](const Point2& p) {
    return std::make_pair(std::lround(p[0] * 1e12), std::lround(p[1] * 1e12));
  };
  for (const auto& v : fine.vertices) fine_keys.insert(key(v));
  for (const auto& v : coarse.vertices) CHECK(fine_keys.count(key(v)) == 1);
}

TEST_CASE("affine map round-trips and locate_cell agrees with geometry") {
  const Mesh m = build_uniform_mesh(7);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int c = static_cast<int>(unif(rng) * m.cells.size()) % m.cells.size();
    double xi = unif(rng), eta = unif(rng);
    if (xi + eta > 1.0) {
      xi = 1.0 - xi;
      eta = 1.0 - eta;
    }
    const Point2 x = m.to_physical(c, xi, eta);
    const Point2 ref = m.to_reference(c, x);
    CHECK(ref[0] == doctest::Approx(xi).epsilon(1e-12));
    CHECK(ref[1] == doctest::Approx(eta).epsilon(1e-12));
    if (xi > 1e-9 && eta > 1e-9 && xi + eta < 1.0 - 1e-9) CHECK(m.locate_cell(x) == c);
  }
}

TEST_CASE("locate_cell covers the whole square including edges and corners") {
  const Mesh m = build_uniform_mesh(4);
  for (double x = -1.0; x <= 1.0; x += 0.125) {
    for (double y = -1.0; y <= 1.0; y += 0.125) {
      const int c = m.locate_cell({x, y});
      REQUIRE(c >= 0);
      REQUIRE(c < static_cast<int>(m.cells.size()));
      const Point2 r = m.to_reference(c, {x, y});
      CHECK(r[0] >= -1e-12);
      CHECK(r[1] >= -1e-12);
      CHECK(r[0] + r[1] <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("invalid subdivision count is rejected") {
  CHECK_THROWS_AS(build_uniform_mesh(0), std::invalid_argument);
  CHECK_THROWS_AS(build_uniform_mesh(-3), std::invalid_argument);
}
