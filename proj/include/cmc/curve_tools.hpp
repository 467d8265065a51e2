#pragma once

// Closed plane curves in a cross-section chart: assembling a closed curve
// from one portion and a finite group of linear isometries of the chart,
// discrete turning number and self-intersections. All computations use the
// flat chart coordinates.

#include "cmc/ode_engine.hpp"
#include "cmc/sol_geometry.hpp"

#include <vector>

namespace cmc {

struct ClosedPlaneCurve {
  std::vector<Vec2> vertices;  // vertices.front() == vertices.back()
  std::vector<std::size_t> junctions;  // indices where consecutive copies meet
  std::size_t portions = 0;
  double max_junction_defect = 0.0;  // radians

  [[nodiscard]] std::size_t size() const { return vertices.empty() ? 0 : vertices.size() - 1; }
};

/// Restriction of Sol isometries fixing the base section {z = 0} (the
/// reflections sigma_xz, sigma_yz and the rotations psi, psi_+-) to that plane.
[[nodiscard]] Mat2 section_map(const sol::Isometry& iso);
[[nodiscard]] std::vector<Mat2> section_maps(const std::vector<sol::Isometry>& isos);

/// Closure of the generators under composition. Throws PreconditionError when
/// the group is not finite within `max_order` elements.
[[nodiscard]] std::vector<Mat2> group_closure(const std::vector<Mat2>& generators, std::size_t max_order = 64);

struct CurvePortion {
  std::vector<Vec2> points;  // from start to end
  Vec2 start_tangent{1.0, 0.0};
  Vec2 end_tangent{1.0, 0.0};
};

[[nodiscard]] CurvePortion portion_from_profile(const ProfileCurve& profile);
/// Portion of a planar curve from its first sample up to the given hit.
[[nodiscard]] CurvePortion portion_from_planar(const PlanarCurve& curve, const EventHit& end);

/// Unfolds the portion by the reflections of the group that fix its endpoints
/// and reverse the tangent there. Throws SolverError when no such reflection
/// exists within `max_defect` radians (non-smooth junction).
[[nodiscard]] ClosedPlaneCurve extend_by_symmetry(const CurvePortion& portion, const std::vector<Mat2>& generators,
                                                  double max_defect = 1e-4);

struct TurningReport {
  int turn = 0;
  double total = 0.0;          // signed total turning / 2pi
  double smooth_part = 0.0;    // turning at ordinary vertices / 2pi
  double junction_part = 0.0;  // turning at junction vertices / 2pi
};

/// Throws SolverError when the total is farther than 0.05 from an integer.
[[nodiscard]] TurningReport turning_number(const ClosedPlaneCurve& curve);

struct IntersectionReport {
  std::size_t count = 0;
  std::vector<Vec2> locations;
};

/// Crossings between non-adjacent edges, by a sweep over x.
[[nodiscard]] IntersectionReport self_intersections(const ClosedPlaneCurve& curve);

/// Symmetric Hausdorff distance between two vertex sets.
[[nodiscard]] double hausdorff_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b);

/// Resamples by linear interpolation with `factor` times as many edges.
[[nodiscard]] ClosedPlaneCurve refine(const ClosedPlaneCurve& curve, int factor);

}  // namespace cmc
