#include "cmc/curve_tools.hpp"

#include <algorithm>
#include <numeric>

namespace cmc {

namespace {

constexpr double kGroupTol = 1e-9;
constexpr double kFixTol = 1e-6;

bool same_map(const Mat2& a, const Mat2& b) { return (a - b).cwiseAbs().maxCoeff() < kGroupTol; }

double angle_between(const Vec2& u, const Vec2& v) {
  return std::atan2(u.x() * v.y() - u.y() * v.x(), u.dot(v));
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

struct Mirror {
  Mat2 map;
  double defect;
};

Mirror mirror_at(const std::vector<Mat2>& group, const Vec2& p, const Vec2& tangent, double max_defect,
                 const char* which) {
  const double scale = std::max(1.0, p.norm());
  Mirror best{Mat2::Identity(), std::numeric_limits<double>::infinity()};
  for (const Mat2& m : group) {
    if (m.determinant() > 0.0) continue;
    if ((m * p - p).norm() > kFixTol * scale) continue;
    const double defect = std::abs(angle_between(tangent, -(m * tangent)));
    if (defect < best.defect) best = {m, defect};
  }
  if (!(best.defect <= max_defect)) {
    throw SolverError(std::string("non-smooth junction at the ") + which + " point: smallest tangent defect " +
                      std::to_string(best.defect) + " rad exceeds " + std::to_string(max_defect));
  }
  return best;
}

// Edges shorter than this carry no usable direction (interpolation noise
// between neighbouring steps is ~1e-12), so such vertices are merged.
constexpr double kMinEdge = 1e-7;

void append_dedup(std::vector<Vec2>& out, const Vec2& p) {
  if (out.empty() || (out.back() - p).norm() > kMinEdge) out.push_back(p);
}

}  // namespace

Mat2 section_map(const sol::Isometry& iso) {
  Mat2 m = Mat2::Zero();
  switch (iso.kind) {
    case sol::IsometryKind::ReflectXZ:
      m.diagonal() << 1.0, -1.0;
      return m;
    case sol::IsometryKind::ReflectYZ:
      m.diagonal() << -1.0, 1.0;
      return m;
    case sol::IsometryKind::RotatePiC:
      return -Mat2::Identity();
    case sol::IsometryKind::RotatePiDiag:
      m(0, 1) = iso.sign;
      m(1, 0) = iso.sign;
      return m;
    case sol::IsometryKind::TranslateBase:
    case sol::IsometryKind::TranslateDiag:
      break;
  }
  throw PreconditionError("translations do not fix the base section");
}

std::vector<Mat2> section_maps(const std::vector<sol::Isometry>& isos) {
  std::vector<Mat2> out;
  out.reserve(isos.size());
  for (const auto& iso : isos) out.push_back(section_map(iso));
  return out;
}

std::vector<Mat2> group_closure(const std::vector<Mat2>& generators, std::size_t max_order) {
  std::vector<Mat2> group{Mat2::Identity()};
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (const Mat2& g : generators) {
      const Mat2 prod = g * group[i];
      if (std::none_of(group.begin(), group.end(), [&](const Mat2& h) { return same_map(h, prod); })) {
        group.push_back(prod);
        if (group.size() > max_order) throw PreconditionError("generated group is not finite (or too large)");
      }
    }
  }
  return group;
}

CurvePortion portion_from_profile(const ProfileCurve& profile) {
  if (profile.samples.size() < 2) throw PreconditionError("profile has fewer than two samples");
  CurvePortion p;
  p.points.reserve(profile.samples.size());
  for (const auto& s : profile.samples) append_dedup(p.points, {s.x, s.y});
  const auto n = p.points.size();
  // Endpoints carry vertical tangents; the sign follows the traversal.
  p.start_tangent = Vec2(0.0, p.points[1].y() > p.points[0].y() ? 1.0 : -1.0);
  p.end_tangent = Vec2(0.0, p.points[n - 1].y() > p.points[n - 2].y() ? 1.0 : -1.0);
  if (!std::isinf(profile.samples.front().hp) || !std::isinf(profile.samples.back().hp)) {
    throw PreconditionError("profile endpoints must have vertical tangents");
  }
  return p;
}

CurvePortion portion_from_planar(const PlanarCurve& curve, const EventHit& end) {
  CurvePortion p;
  for (const auto& s : curve.samples) {
    if (s.s > end.state.s) break;
    append_dedup(p.points, {s.x, s.y});
  }
  const Vec2 last{end.state.x, end.state.y};
  if (p.points.size() > 1 && (p.points.back() - last).norm() <= kMinEdge) p.points.back() = last;
  append_dedup(p.points, last);
  if (p.points.size() < 2) throw PreconditionError("portion has fewer than two points");
  const double th0 = curve.samples.front().theta;
  p.start_tangent = {std::cos(th0), std::sin(th0)};
  p.end_tangent = {std::cos(end.state.theta), std::sin(end.state.theta)};
  return p;
}

ClosedPlaneCurve extend_by_symmetry(const CurvePortion& portion, const std::vector<Mat2>& generators,
                                    double max_defect) {
  if (portion.points.size() < 2) throw PreconditionError("portion has fewer than two points");
  const std::vector<Mat2> group = group_closure(generators);
  const Vec2& A = portion.points.front();
  const Vec2& B = portion.points.back();
  const Mirror at_start = mirror_at(group, A, portion.start_tangent, max_defect, "start");
  const Mirror at_end = mirror_at(group, B, portion.end_tangent, max_defect, "end");

  ClosedPlaneCurve out;
  out.max_junction_defect = std::max(at_start.defect, at_end.defect);
  Mat2 g = Mat2::Identity();
  for (std::size_t k = 0; k < 2 * group.size() + 2; ++k) {
    if (k > 0 && k % 2 == 0 && same_map(g, Mat2::Identity())) {
      out.portions = k;
      out.vertices.back() = out.vertices.front();
      return out;
    }
    if (k > 0) out.junctions.push_back(out.vertices.size() - 1);
    if (k % 2 == 0) {
      for (const Vec2& p : portion.points) append_dedup(out.vertices, g * p);
      g = g * at_end.map;
    } else {
      for (auto it = portion.points.rbegin(); it != portion.points.rend(); ++it) append_dedup(out.vertices, g * *it);
      g = g * at_start.map;
    }
  }
  throw SolverError("symmetry unfolding did not close");
}

TurningReport turning_number(const ClosedPlaneCurve& curve) {
  const std::size_t n = curve.size();
  if (n < 3) throw PreconditionError("closed curve needs at least three distinct vertices");
  std::vector<bool> is_junction(n, false);
  for (std::size_t j : curve.junctions) is_junction[j % n] = true;
  is_junction[0] = curve.portions > 0;  // the closing vertex is a junction as well

  TurningReport rep;
  double smooth = 0.0;
  double junction = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& prev = curve.vertices[(i + n - 1) % n];
    const Vec2& cur = curve.vertices[i];
    const Vec2& next = curve.vertices[(i + 1) % n];
    const Vec2 e0 = cur - prev;
    const Vec2 e1 = next - cur;
    if (e0.squaredNorm() == 0.0 || e1.squaredNorm() == 0.0) throw PreconditionError("zero-length edge");
    const double a = angle_between(e0, e1);
    (is_junction[i] ? junction : smooth) += a;
  }
  rep.smooth_part = smooth / (2.0 * kPi);
  rep.junction_part = junction / (2.0 * kPi);
  rep.total = rep.smooth_part + rep.junction_part;
  rep.turn = static_cast<int>(std::lround(rep.total));
  if (std::abs(rep.total - rep.turn) > 0.05) {
    throw SolverError("turning number " + std::to_string(rep.total) + " is not close to an integer; sampling too coarse");
  }
  return rep;
}

IntersectionReport self_intersections(const ClosedPlaneCurve& curve) {
  const std::size_t n = curve.size();
  IntersectionReport rep;
  if (n < 4) return rep;
  const auto& v = curve.vertices;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto min_x = [&](std::size_t i) { return std::min(v[i].x(), v[i + 1].x()); };
  auto max_x = [&](std::size_t i) { return std::max(v[i].x(), v[i + 1].x()); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return min_x(a) < min_x(b); });

  std::vector<std::size_t> active;
  for (std::size_t i : order) {
    const double x0 = min_x(i);
    std::erase_if(active, [&](std::size_t j) { return max_x(j) < x0; });
    const Vec2& p = v[i];
    const Vec2 r = v[i + 1] - p;
    const double ylo = std::min(p.y(), v[i + 1].y());
    const double yhi = std::max(p.y(), v[i + 1].y());
    for (std::size_t j : active) {
      const std::size_t d = i > j ? i - j : j - i;
      if (d == 1 || d == n - 1) continue;
      if (std::max(v[j].y(), v[j + 1].y()) < ylo || std::min(v[j].y(), v[j + 1].y()) > yhi) continue;
      const Vec2& q = v[j];
      const Vec2 s = v[j + 1] - q;
      const double denom = cross(r, s);
      if (denom == 0.0) continue;  // parallel edges are not counted as crossings
      const double t = cross(q - p, s) / denom;
      const double u = cross(q - p, r) / denom;
      // half-open edges so a crossing through a vertex counts once
      if (t >= 0.0 && t < 1.0 && u >= 0.0 && u < 1.0) {
        ++rep.count;
        rep.locations.push_back(p + t * r);
      }
    }
    active.push_back(i);
  }
  return rep;
}

double hausdorff_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  auto directed = [](const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
    double worst = 0.0;
    for (const Vec2& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec2& q : to) best = std::min(best, (p - q).squaredNorm());
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return std::max(directed(a, b), directed(b, a));
}

ClosedPlaneCurve refine(const ClosedPlaneCurve& curve, int factor) {
  if (factor < 1) throw PreconditionError("refinement factor must be positive");
  ClosedPlaneCurve out;
  out.portions = curve.portions;
  out.max_junction_defect = curve.max_junction_defect;
  const std::size_t n = curve.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < factor; ++k) {
      const double w = static_cast<double>(k) / factor;
      out.vertices.push_back((1.0 - w) * curve.vertices[i] + w * curve.vertices[i + 1]);
    }
  }
  out.vertices.push_back(out.vertices.front());
  for (std::size_t j : curve.junctions) out.junctions.push_back(j * static_cast<std::size_t>(factor));
  return out;
}

}  // namespace cmc
