#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "chdg/dg_space.hpp"

namespace chdg {

/// Initial condition u0(x) = tanh(d0(x) / (sqrt(2) eps)) with d0 the signed
/// distance to the initial interface, positive outside.
struct InitialCondition {
  int test_id = 0;  // 1..3, or 0 for custom
  double epsilon = 0.1;
  std::function<double(Point2)> signed_distance;

  double value(Point2 x) const;
  double operator()(Point2 x) const { return value(x); }
};

/// Test 1: ellipse x1^2/0.36 + x2^2/0.04 = 1 (signed distance by closest-point
/// projection). Test 2: two circles r=0.3 at (-0.3,0) and r=0.25 at (0.3,0).
/// Test 3: four circles r=0.2 at (+-0.3,0) and (0,+-0.3).
InitialCondition make_initial(int test_id, double epsilon);

InitialCondition make_custom_initial(std::function<double(Point2)> d0, double epsilon);

/// Signed distance to the axis-aligned ellipse x^2/a^2 + y^2/b^2 = 1 (a > b),
/// positive outside, via closest-point projection.
double ellipse_signed_distance(Point2 p, double a, double b);

struct Segment {
  Point2 a;
  Point2 b;
};

struct InterfacePolyline {
  double time = 0.0;
  std::vector<Segment> segments;
};

/// Zero level set of a continuous piecewise-linear field: one chord per cut
/// cell. Nodal values within 1e-13 * scale of zero are nudged positive before
/// classification.
InterfacePolyline extract_zero_level_set(const DGField& vhat, double time);

struct InterfaceDistance {
  double value = 0.0;     // one-sided sup_{x in polyline} dist(x, reference)
  double accuracy = 0.0;  // reported bound: half the reference sample spacing
};

/// One-sided distance from the polyline to a sampled reference curve, with
/// local segment-projection refinement around the nearest sample. Returns
/// nullopt for an empty polyline.
std::optional<InterfaceDistance> interface_distance(const InterfacePolyline& poly,
                                                    const std::vector<Point2>& reference);

std::vector<Point2> sample_ellipse(double a, double b, int count);
std::vector<Point2> sample_circle(Point2 center, double radius, int count);

double polyline_length(const InterfacePolyline& poly);

}  // namespace chdg
