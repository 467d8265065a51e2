#pragma once

// Shooting searches: the zero-height graph solution (closed embedded
// cylinders), immersed closed solutions with a prescribed turning number,
// family sweeps in H and continuation of an immersed branch in H.

#include "cmc/curve_tools.hpp"
#include "cmc/ode_engine.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cmc {

enum class Classification { Embedded, Immersed, Failed };

[[nodiscard]] const char* classification_name(Classification c);

struct BracketPoint {
  double parameter = 0.0;
  double objective = 0.0;
};

struct RootOptions {
  double objective_tol = 1e-10;
  double width_tol = 1e-13;
  double secant_width = 1e-3;  // secant steps only below this bracket width
  int max_iterations = 200;
  int grid = 8;  // subintervals scanned before bisecting

  void validate() const;
};

struct ShootingResult {
  double parameter = 0.0;  // a0 or d0
  double residual = 0.0;   // |objective| at the parameter
  double T = 0.0;          // R(a0) or the aimed event time
  int turn = 0;
  double symmetry_residual = 0.0;  // |R(a0) + a0| on the Sol base, |R+ + R-| otherwise
  std::vector<BracketPoint> history;
  Classification classification = Classification::Failed;
  int evaluations = 0;
  bool converged = false;
  std::string message;
};

using Objective = std::function<std::optional<double>(double)>;

struct RootOutcome {
  double x = 0.0;
  double fx = 0.0;
  std::vector<BracketPoint> history;
  int evaluations = 0;
  bool converged = false;
};

/// Bisection with Illinois-type secant steps once the bracket is narrower than
/// `secant_width`. `f(lo)` and `f(hi)` must have opposite signs. Throws
/// BracketError when the objective is undefined at an interior point.
[[nodiscard]] RootOutcome bracketed_root(const Objective& f, double lo, double flo, double hi, double fhi,
                                         const RootOptions& opts);

/// Scans `grid` subintervals and returns the sign-change subinterval closest
/// to `prefer` (or the first one). Throws BracketError listing the sampled
/// values when there is none.
struct ScanResult {
  double lo = 0.0, hi = 0.0, flo = 0.0, fhi = 0.0;
  int sign_changes = 0;
  std::vector<BracketPoint> samples;
};
[[nodiscard]] ScanResult scan_bracket(const Objective& f, double lo, double hi, int grid,
                                      std::optional<double> prefer = std::nullopt);

/// phi(a) = h(R(a)) for the profile with h(0) = a, h'(0) = 0. A profile that
/// hits the length cap is retried with a cap up to 64 times longer.
[[nodiscard]] std::optional<double> zero_height_objective(const AxisSpec& axis, double H, double a,
                                                          const IntegrationOptions& opts);

struct ZeroHeightSolution {
  ShootingResult result;
  ProfileCurve profile;
};

/// Default bracket (-2, 0); without an explicit bracket the search moves to
/// (2 lo, lo) while there is no sign change, down to -1024.
[[nodiscard]] ZeroHeightSolution find_zero_height(const AxisSpec& axis, double H,
                                                  std::optional<std::pair<double, double>> bracket = std::nullopt,
                                                  const RootOptions& ropts = {},
                                                  const IntegrationOptions& iopts = {});

enum class Aim { YAxis, DiagMinus };

[[nodiscard]] const char* aim_name(Aim aim);

struct ImmersedShot {
  bool found = false;
  double defect = 0.0;  // angle defect at the aimed crossing
  double turn_estimate = 0.0;
  EventHit hit;
  PlanarCurve curve;
};

/// Shoots from (d, d) with tangent (-1, 1)/sqrt2 on the Sol base and returns
/// the crossing of the aimed line whose closed extension has `target_turn`.
[[nodiscard]] ImmersedShot shoot_immersed(double H, double d, int target_turn, Aim aim,
                                          const IntegrationOptions& opts = {});

/// Turning number of the closed extension if the curve were reflected at the
/// crossing `hit` (used to select the crossing).
[[nodiscard]] double extension_turn(const EventHit& hit, double theta0, Aim aim);

struct ImmersedSolution {
  ShootingResult result;
  ClosedPlaneCurve curve;
  std::size_t self_intersections = 0;
};

[[nodiscard]] ImmersedSolution find_immersed(double H, int target_turn, Aim aim, std::pair<double, double> bracket,
                                             const RootOptions& ropts = {}, const IntegrationOptions& iopts = {});

/// Closed curve generated by the shot at parameter d (must be converged).
[[nodiscard]] ClosedPlaneCurve immersed_closed_curve(double H, double d, int target_turn, Aim aim,
                                                     const IntegrationOptions& opts = {});

/// The zero-height curve unfolded by the reflection through {y = 0}.
[[nodiscard]] ClosedPlaneCurve embedded_closed_curve(const ProfileCurve& zero_height_profile);

struct FamilyMember {
  double H = 0.0;
  bool ok = false;
  std::string error;
  ShootingResult result;
  ProfileCurve profile;
  ClosedPlaneCurve curve;
  double max_abs_x = 0.0;
  double max_abs_y = 0.0;
  double diameter = 0.0;  // R+ - R-
};

struct FamilySweep {
  std::vector<FamilyMember> members;  // in the order of the input list
  bool nested = false;
  std::string nesting_message;
};

/// One zero-height solution per H, computed in parallel; failures are recorded
/// per member. Nesting is checked for the successful members sorted by H.
[[nodiscard]] FamilySweep sweep_family(const AxisSpec& axis, const std::vector<double>& H_list,
                                       const RootOptions& ropts = {}, const IntegrationOptions& iopts = {},
                                       bool parallel = true);

/// True when every vertex of `inner` lies strictly inside `outer` and the two
/// curves do not cross.
[[nodiscard]] bool strictly_inside(const ClosedPlaneCurve& inner, const ClosedPlaneCurve& outer);

struct ContinuationOptions {
  double dH = 0.02;
  double dH_min = 1e-4;
  double dH_max = 0.05;
  double window = 0.05;  // half-width of the search window around the predicted d
  int grid = 8;
};

struct ContinuationStep {
  double H = 0.0;
  double d = 0.0;
  double residual = 0.0;
};

struct ContinuationReport {
  std::vector<ContinuationStep> steps;
  double last_H = 0.0;
  double last_d = 0.0;
  bool reached_goal = false;
  std::string stop_reason;
  int last_turn = 0;
  /// Hausdorff distance between the last closed curve and the embedded
  /// solution at the same H (a 5-fold cover has the same trace).
  double distance_to_embedded = 0.0;
};

/// Follows the immersed branch through (H0, root in bracket0) up to H_goal.
[[nodiscard]] ContinuationReport continue_immersed_branch(int target_turn, Aim aim, double H0,
                                                          std::pair<double, double> bracket0, double H_goal,
                                                          const ContinuationOptions& copts = {},
                                                          const RootOptions& ropts = {},
                                                          const IntegrationOptions& iopts = {});

}  // namespace cmc
