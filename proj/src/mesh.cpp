#include "chdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace chdg {

double Mesh::cell_area(int cell) const {
  auto v = cell_vertices(cell);
  return 0.5 * std::abs((v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) -
                        (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]));
}

Point2 Mesh::cell_centroid(int cell) const {
  auto v = cell_vertices(cell);
  return {(v[0][0] + v[1][0] + v[2][0]) / 3.0, (v[0][1] + v[1][1] + v[2][1]) / 3.0};
}

std::array<Point2, 2> Mesh::cell_jacobian(int cell) const {
  auto v = cell_vertices(cell);
  return {Point2{v[1][0] - v[0][0], v[1][1] - v[0][1]},
          Point2{v[2][0] - v[0][0], v[2][1] - v[0][1]}};
}

Point2 Mesh::to_physical(int cell, double xi, double eta) const {
  auto v = cell_vertices(cell);
  auto J = cell_jacobian(cell);
  return {v[0][0] + J[0][0] * xi + J[1][0] * eta, v[0][1] + J[0][1] * xi + J[1][1] * eta};
}

Point2 Mesh::to_reference(int cell, const Point2& x) const {
  auto v = cell_vertices(cell);
  auto J = cell_jacobian(cell);
  const double det = J[0][0] * J[1][1] - J[1][0] * J[0][1];
  const double dx = x[0] - v[0][0];
  const double dy = x[1] - v[0][1];
  return {(J[1][1] * dx - J[1][0] * dy) / det, (-J[0][1] * dx + J[0][0] * dy) / det};
}

int Mesh::locate_cell(const Point2& x) const {
  const double s = 2.0 / n;
  int i = static_cast<int>(std::floor((x[0] + 1.0) / s));
  int j = static_cast<int>(std::floor((x[1] + 1.0) / s));
  i = std::clamp(i, 0, n - 1);
  j = std::clamp(j, 0, n - 1);
  const double u = (x[0] + 1.0) / s - i;
  const double v = (x[1] + 1.0) / s - j;
  const int lower = 2 * (j * n + i);
  return (v <= u) ? lower : lower + 1;
}

Mesh build_uniform_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_uniform_mesh: n must be >= 1");

  Mesh mesh;
  mesh.n = n;
  const double s = 2.0 / n;
  mesh.h = s * std::sqrt(2.0);

  mesh.vertices.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.push_back({-1.0 + s * i, -1.0 + s * j});

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  mesh.cells.reserve(static_cast<std::size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int ll = vid(i, j), lr = vid(i + 1, j), ur = vid(i + 1, j + 1), ul = vid(i, j + 1);
      mesh.cells.push_back({ll, lr, ur});  // lower triangle
      mesh.cells.push_back({ll, ur, ul});  // upper triangle
    }
  }

  // Edge topology: collect the three edges of every cell keyed by the sorted
  // vertex pair.
  std::map<std::pair<int, int>, std::vector<int>> edge_cells;
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    const auto& cv = mesh.cells[static_cast<std::size_t>(c)];
    for (int k = 0; k < 3; ++k) {
      int a = cv[static_cast<std::size_t>(k)];
      int b = cv[static_cast<std::size_t>((k + 1) % 3)];
      if (a > b) std::swap(a, b);
      edge_cells[{a, b}].push_back(c);
    }
  }

  for (const auto& [key, cs] : edge_cells) {
    const auto& va = mesh.vertices[static_cast<std::size_t>(key.first)];
    const auto& vb = mesh.vertices[static_cast<std::size_t>(key.second)];
    const double tx = vb[0] - va[0], ty = vb[1] - va[1];
    const double len = std::hypot(tx, ty);
    Point2 normal{ty / len, -tx / len};

    if (cs.size() == 2) {
      InteriorEdge e;
      e.verts = {key.first, key.second};
      e.left = std::max(cs[0], cs[1]);
      e.right = std::min(cs[0], cs[1]);
      e.length = len;
      // orient from left into right
      auto cl = mesh.cell_centroid(e.left);
      auto cr = mesh.cell_centroid(e.right);
      if (normal[0] * (cr[0] - cl[0]) + normal[1] * (cr[1] - cl[1]) < 0.0) {
        normal = {-normal[0], -normal[1]};
      }
      e.normal = normal;
      mesh.interior_edges.push_back(e);
    } else if (cs.size() == 1) {
      BoundaryEdge e;
      e.verts = {key.first, key.second};
      e.cell = cs[0];
      e.length = len;
      auto cc = mesh.cell_centroid(e.cell);
      const double mx = 0.5 * (va[0] + vb[0]), my = 0.5 * (va[1] + vb[1]);
      if (normal[0] * (mx - cc[0]) + normal[1] * (my - cc[1]) < 0.0) {
        normal = {-normal[0], -normal[1]};
      }
      e.normal = normal;
      mesh.boundary_edges.push_back(e);
    } else {
      throw std::logic_error("build_uniform_mesh: edge shared by more than two cells");
    }
  }

  return mesh;
}

}  // namespace chdg
