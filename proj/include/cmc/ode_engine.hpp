#pragma once

// Integration of generating curves.
//
// Graph profiles Y = h(X) are integrated from X = 0 in both directions. When
// |h'| passes the swap threshold the engine changes chart: on the Sol base
// axis it continues with the mirrored graph X = k(U) (x- and y-graphs satisfy
// the same ODE), on the other axes it switches to arc length with the
// inclination angle as state. Either way the curve is followed until its
// tangent turns vertical, which marks the blow-up endpoints R_-, R_+.

#include "cmc/invariant_surface.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cmc {

struct IntegrationOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double swap_threshold = 10.0;
  double hysteresis = 0.5;
  double max_length = 200.0;  // Euclidean arc length in the chart
  double min_step = 1e-14;
  double event_tol = 1e-12;
  double initial_step = 1e-3;
  double sample_spacing = 5e-3;  // max arc length between recorded samples
  /// Re-run at 1/100 of the tolerances and report the endpoint shift.
  bool refine_endpoints = false;

  void validate() const;
};

enum class ChartTag { XGraph, YGraph, Angle };

[[nodiscard]] const char* chart_name(ChartTag tag);

struct ProfileSample {
  double t = 0.0;  // signed Euclidean arc length from the initial point
  double x = 0.0;  // chart coordinates
  double y = 0.0;
  double hp = 0.0;  // dy/dx; +-inf at vertical tangents
  ChartTag chart = ChartTag::XGraph;
};

enum class IntegrationStatus { Complete, StepUnderflow, MaxLength };

struct ProfileCurve {
  std::vector<ProfileSample> samples;
  AxisSpec axis;
  double H = 0.0;
  double a = 0.0;
  double b = 0.0;
  Vec2 end_minus{0.0, 0.0};  // chart points with vertical tangent
  Vec2 end_plus{0.0, 0.0};
  double Rminus = 0.0;  // X coordinates of those points
  double Rplus = 0.0;
  double endpoint_shift = 0.0;  // only with refine_endpoints
  IntegrationStatus status = IntegrationStatus::Complete;
  std::string diagnostic;

  [[nodiscard]] bool complete() const { return status == IntegrationStatus::Complete; }
  [[nodiscard]] double height_at_Rplus() const { return end_plus.y(); }
  [[nodiscard]] double height_at_Rminus() const { return end_minus.y(); }
};

/// Maximal solution with h(0) = a, h'(0) = b. Throws SolverError on a
/// non-finite state; step underflow and the length cap return a partial curve.
[[nodiscard]] ProfileCurve integrate_profile(const AxisSpec& axis, double H, double a, double b,
                                             const IntegrationOptions& opts = {});

/// Only the part with X >= 0 (forward half). Cheaper when symmetry is known.
[[nodiscard]] ProfileCurve integrate_forward_half(const AxisSpec& axis, double H, double a, double b,
                                                  const IntegrationOptions& opts = {});

struct MonotonicityReport {
  bool valid = false;
  double t0 = 0.0;          // X where h' changes sign
  int sign_changes = 0;     // of h' along the graph part
  std::size_t violations = 0;
  std::string message;
};

/// Checks that h' has exactly one sign change, from negative to positive.
[[nodiscard]] MonotonicityReport monotonicity_report(const ProfileCurve& curve);

enum class EventKind { CrossYAxis, CrossDiagonalPlus, CrossDiagonalMinus, DerivativeZero, Blowup };

struct EventSpec {
  EventKind kind = EventKind::CrossYAxis;
  bool terminal = false;
};

struct PlanarState {
  double s = 0.0;  // arc length
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // tangent angle, continuous (not wrapped)
};

struct EventHit {
  EventKind kind = EventKind::CrossYAxis;
  PlanarState state;
};

struct PlanarCurve {
  std::vector<PlanarState> samples;
  std::vector<EventHit> hits;
  IntegrationStatus status = IntegrationStatus::Complete;
  std::string diagnostic;
};

/// Returning true from the callback stops the integration at that hit.
using HitCallback = std::function<bool(const EventHit&)>;

/// Unit-speed curve in the cross-section of a Sol axis, starting at p0 with
/// tangent angle theta0 and mean curvature H with respect to the left normal.
/// Stops at the first terminal event, when `on_hit` returns true, or at the
/// length cap. Throws SolverError when the cap is reached without any hit.
[[nodiscard]] PlanarCurve integrate_planar_curve(const AxisSpec& axis, double H, const Vec2& p0, double theta0,
                                                 const std::vector<EventSpec>& events,
                                                 const IntegrationOptions& opts = {},
                                                 const HitCallback& on_hit = {});

/// Arc-length parametrization of the forward half of a graph profile, starting
/// at (0, a) with horizontal tangent and ending at the vertical tangent.
/// Used for the flux computation; states are evaluated at the requested arc
/// lengths (fractions of the total length L in [0, 1]).
struct ArclengthProfile {
  double L = 0.0;
  PlanarState end;
  std::vector<PlanarState> at;  // states at the requested fractions
  std::vector<double> curvature;  // theta' at the same points
};

[[nodiscard]] ArclengthProfile arclength_profile(const AxisSpec& axis, double H, double a,
                                                 const std::vector<double>& fractions,
                                                 const IntegrationOptions& opts = {});

}  // namespace cmc
