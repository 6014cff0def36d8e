#include "chdg/interface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chdg {

double InitialCondition::value(Point2 x) const {
  return std::tanh(signed_distance(x) / (std::sqrt(2.0) * epsilon));
}

namespace {

double circle_signed_distance(Point2 p, Point2 c, double radius) {
  return std::hypot(p[0] - c[0], p[1] - c[1]) - radius;
}

}  // namespace

double ellipse_signed_distance(Point2 p, double a, double b) {
  const double x = std::abs(p[0]);
  const double y = std::abs(p[1]);
  const double inside = (p[0] * p[0]) / (a * a) + (p[1] * p[1]) / (b * b) - 1.0;
  const double sign = inside > 0.0 ? 1.0 : -1.0;

  if (y < 1e-300) {
    // on the major axis the closest point may leave the axis
    const double crit = (a * a - b * b) / a;
    if (x >= crit) return sign * std::abs(x - a);
    const double xe = a * a * x / (a * a - b * b);
    const double ye = b * std::sqrt(std::max(0.0, 1.0 - (xe / a) * (xe / a)));
    return -std::hypot(x - xe, ye);  // interior of the evolute gap is always inside
  }

  // root of F(t) = (a x/(t+a^2))^2 + (b y/(t+b^2))^2 - 1 on (-b^2, inf);
  // F is strictly decreasing there.
  auto F = [&](double t) {
    const double u = a * x / (t + a * a);
    const double v = b * y / (t + b * b);
    return u * u + v * v - 1.0;
  };
  double lo = -b * b + 1e-14 * b * b;
  while (F(lo) < 0.0) lo = -b * b + 0.5 * (lo + b * b);  // should not trigger for y > 0
  double hi = std::max({a * x - a * a, b * y - b * b, 0.0}) + a * a;
  while (F(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (F(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-16 * (std::abs(hi) + a * a)) break;
  }
  const double t = 0.5 * (lo + hi);
  const double xe = a * a * x / (t + a * a);
  const double ye = b * b * y / (t + b * b);
  return sign * std::hypot(x - xe, y - ye);
}

InitialCondition make_initial(int test_id, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("make_initial: epsilon must be positive");
  InitialCondition ic;
  ic.test_id = test_id;
  ic.epsilon = epsilon;
  switch (test_id) {
    case 1:
      ic.signed_distance = [](Point2 p) { return ellipse_signed_distance(p, 0.6, 0.2); };
      break;
    case 2:
      ic.signed_distance = [](Point2 p) {
        return std::min(circle_signed_distance(p, {-0.3, 0.0}, 0.3),
                        circle_signed_distance(p, {0.3, 0.0}, 0.25));
      };
      break;
    case 3:
      ic.signed_distance = [](Point2 p) {
        return std::min({circle_signed_distance(p, {-0.3, 0.0}, 0.2),
                         circle_signed_distance(p, {0.3, 0.0}, 0.2),
                         circle_signed_distance(p, {0.0, -0.3}, 0.2),
                         circle_signed_distance(p, {0.0, 0.3}, 0.2)});
      };
      break;
    default:
      throw std::invalid_argument("make_initial: unknown test id");
  }
  return ic;
}

InitialCondition make_custom_initial(std::function<double(Point2)> d0, double epsilon) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("make_custom_initial: epsilon must be positive");
  InitialCondition ic;
  ic.test_id = 0;
  ic.epsilon = epsilon;
  ic.signed_distance = std::move(d0);
  return ic;
}

InterfacePolyline extract_zero_level_set(const DGField& vhat, double time) {
  const DGSpace& space = *vhat.space;
  if (space.degree() != 1)
    throw std::invalid_argument("extract_zero_level_set: requires a degree-1 field");
  if (vhat.tag != DGField::Tag::continuous)
    throw std::invalid_argument("extract_zero_level_set: requires a continuous field");

  const double scale = std::max(vhat.coeffs.lpNorm<Eigen::Infinity>(),
                                std::numeric_limits<double>::min());
  const double zero_tol = 1e-13 * scale;
  const double nudge = std::numeric_limits<double>::epsilon() * scale;

  InterfacePolyline poly;
  poly.time = time;

  // local node order of DGSpace at r=1: (0,0), (0,1), (1,0) -> vertices 0, 2, 1
  for (int c = 0; c < space.num_cells(); ++c) {
    std::array<double, 3> v{};
    std::array<Point2, 3> x{};
    for (int l = 0; l < 3; ++l) {
      v[static_cast<std::size_t>(l)] = vhat.coeffs(space.global_dof(c, l));
      x[static_cast<std::size_t>(l)] = space.node_position(c, l);
    }
    for (auto& val : v)
      if (std::abs(val) <= zero_tol) val = nudge;

    std::vector<Point2> cuts;
    for (int k = 0; k < 3; ++k) {
      const int k2 = (k + 1) % 3;
      const double va = v[static_cast<std::size_t>(k)];
      const double vb = v[static_cast<std::size_t>(k2)];
      if ((va > 0.0) == (vb > 0.0)) continue;
      const double s = va / (va - vb);
      const auto& pa = x[static_cast<std::size_t>(k)];
      const auto& pb = x[static_cast<std::size_t>(k2)];
      cuts.push_back({pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])});
    }
    if (cuts.size() == 2) poly.segments.push_back({cuts[0], cuts[1]});
  }
  return poly;
}

namespace {

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  const double abx = b[0] - a[0], aby = b[1] - a[1];
  const double len2 = abx * abx + aby * aby;
  double s = 0.0;
  if (len2 > 0.0) s = std::clamp(((p[0] - a[0]) * abx + (p[1] - a[1]) * aby) / len2, 0.0, 1.0);
  return std::hypot(p[0] - (a[0] + s * abx), p[1] - (a[1] + s * aby));
}

}  // namespace

std::optional<InterfaceDistance> interface_distance(const InterfacePolyline& poly,
                                                    const std::vector<Point2>& reference) {
  if (poly.segments.empty()) return std::nullopt;
  if (reference.size() < 2048)
    throw std::invalid_argument("interface_distance: reference must supply >= 2048 samples");

  const int nref = static_cast<int>(reference.size());
  double spacing = 0.0;
  for (int i = 0; i < nref; ++i) {
    const auto& a = reference[static_cast<std::size_t>(i)];
    const auto& b = reference[static_cast<std::size_t>((i + 1) % nref)];
    spacing = std::max(spacing, std::hypot(b[0] - a[0], b[1] - a[1]));
  }

  double sup = 0.0;
  for (const auto& seg : poly.segments) {
    const std::array<Point2, 3> samples{
        seg.a, Point2{0.5 * (seg.a[0] + seg.b[0]), 0.5 * (seg.a[1] + seg.b[1])}, seg.b};
    for (const auto& p : samples) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int i = 0; i < nref; ++i) {
        const auto& rp = reference[static_cast<std::size_t>(i)];
        const double d = std::hypot(p[0] - rp[0], p[1] - rp[1]);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      // refine against the two reference segments adjacent to the winner
      const auto& prev = reference[static_cast<std::size_t>((best + nref - 1) % nref)];
      const auto& next = reference[static_cast<std::size_t>((best + 1) % nref)];
      const auto& at = reference[static_cast<std::size_t>(best)];
      best_d = std::min(best_d, point_segment_distance(p, prev, at));
      best_d = std::min(best_d, point_segment_distance(p, at, next));
      sup = std::max(sup, best_d);
    }
  }
  return InterfaceDistance{sup, 0.5 * spacing};
}

std::vector<Point2> sample_ellipse(double a, double b, int count) {
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(count));
  const double pi = std::acos(-1.0);
  for (int i = 0; i < count; ++i) {
    const double t = 2.0 * pi * i / count;
    pts.push_back({a * std::cos(t), b * std::sin(t)});
  }
  return pts;
}

std::vector<Point2> sample_circle(Point2 center, double radius, int count) {
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(count));
  const double pi = std::acos(-1.0);
  for (int i = 0; i < count; ++i) {
    const double t = 2.0 * pi * i / count;
    pts.push_back({center[0] + radius * std::cos(t), center[1] + radius * std::sin(t)});
  }
  return pts;
}

double polyline_length(const InterfacePolyline& poly) {
  double len = 0.0;
  for (const auto& s : poly.segments) len += std::hypot(s.b[0] - s.a[0], s.b[1] - s.a[1]);
  return len;
}

}  // namespace chdg
