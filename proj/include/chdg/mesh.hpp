#pragma once

#include <array>
#include <vector>

namespace chdg {

using Point2 = std::array<double, 2>;

/// Interior edge shared by two cells. `left` is the cell with the bigger
/// global index; the jump on the edge is [v] = v|_left - v|_right and the
/// stored unit normal points from `left` into `right`.
struct InteriorEdge {
  std::array<int, 2> verts;  // endpoint vertex indices; s in [0,1] runs verts[0] -> verts[1]
  int left;
  int right;
  Point2 normal;
  double length;
};

struct BoundaryEdge {
  std::array<int, 2> verts;
  int cell;
  Point2 normal;  // outward
  double length;
};

/// Uniform triangulation of [-1,1]^2: n x n squares, each split along the
/// lower-left -> upper-right diagonal so that refining n -> 2n nests.
/// Immutable after construction.
class Mesh {
 public:
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> cells;  // counterclockwise vertex triples
  std::vector<InteriorEdge> interior_edges;
  std::vector<BoundaryEdge> boundary_edges;
  double h = 0.0;  // max element diameter
  int n = 0;       // subdivisions per axis

  std::array<Point2, 3> cell_vertices(int cell) const {
    const auto& c = cells[static_cast<std::size_t>(cell)];
    return {vertices[static_cast<std::size_t>(c[0])],
            vertices[static_cast<std::size_t>(c[1])],
            vertices[static_cast<std::size_t>(c[2])]};
  }

  double cell_area(int cell) const;
  Point2 cell_centroid(int cell) const;

  /// Columns of the affine map x = v0 + J * (xi, eta).
  std::array<Point2, 2> cell_jacobian(int cell) const;

  /// Map reference coordinates (xi, eta) on the unit triangle to physical.
  Point2 to_physical(int cell, double xi, double eta) const;

  /// Inverse of the affine map; exact for points in the cell's plane.
  Point2 to_reference(int cell, const Point2& x) const;

  /// Cell containing x, resolved structurally from the uniform layout.
  /// Points on the diagonal are assigned to the lower triangle.
  int locate_cell(const Point2& x) const;
};

Mesh build_uniform_mesh(int n);

}  // namespace chdg
