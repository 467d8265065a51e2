#pragma once

// Mean curvature of surfaces f(s,t) = Phi_s(beta(t)) invariant under a
// one-parameter group of left translations.
//
// The generating curve beta lives in a two-dimensional cross-section with chart
// coordinates (X, Y):
//   SolBase        S_0 = {z = 0},                  (X, Y) -> (X, Y, 0)
//   SolDiagPlus    S_{+,0},                         (X, Y) -> (X/sqrt2, -X/sqrt2, Y)
//   SolDiagMinus   S_{-,0},                         (X, Y) -> (X/sqrt2, +X/sqrt2, Y)
//   EktAxis        vertical plane over gamma,       (X, Y) -> gamma(X) + (0, Y, 0)
// Graph solutions are Y = h(X). Because every Phi_s is a left translation, the
// frame coefficients of df/ds and df/dt do not depend on s, so the fundamental
// forms are assembled at s = 0 from the chart's frame data and the constant
// connection table of the ambient space.

#include "cmc/ekt_geometry.hpp"
#include "cmc/sol_geometry.hpp"

#include <string>

namespace cmc {

struct SpaceModel {
  enum class Kind { Sol, Ekt };
  Kind kind = Kind::Sol;
  ekt::Params ekt{};

  static SpaceModel sol() { return {}; }
  static SpaceModel e_kappa_tau(const ekt::Params& p) { return {Kind::Ekt, p}; }
};

enum class AxisKind { SolBase, SolDiagPlus, SolDiagMinus, EktAxis };

struct AxisSpec {
  SpaceModel space;
  AxisKind axis = AxisKind::SolBase;

  static AxisSpec sol_base() { return {SpaceModel::sol(), AxisKind::SolBase}; }
  static AxisSpec sol_diag(int sign) {
    return {SpaceModel::sol(), sign > 0 ? AxisKind::SolDiagPlus : AxisKind::SolDiagMinus};
  }
  static AxisSpec ekt_axis(const ekt::Params& p) { return {SpaceModel::e_kappa_tau(p), AxisKind::EktAxis}; }

  void validate() const;
  [[nodiscard]] bool is_sol() const { return space.kind == SpaceModel::Kind::Sol; }
  [[nodiscard]] int diag_sign() const { return axis == AxisKind::SolDiagMinus ? -1 : +1; }
  /// Infimum of the admissible mean curvatures: 0 in Sol, H(E) in E(kappa,tau).
  [[nodiscard]] double critical_H() const;
  [[nodiscard]] std::string name() const;
};

/// Frame data of the cross-section chart at (X, Y).
struct ChartJet {
  Vec3 point;                            // model coordinates
  Eigen::Matrix<double, 3, 2> tangent;   // frame coefficients of d/dX, d/dY
  Eigen::Matrix<double, 3, 2> d_tangent_dX;
  Eigen::Matrix<double, 3, 2> d_tangent_dY;
  Vec3 generator;                        // frame coefficients of d/ds Phi_s
};

[[nodiscard]] ChartJet chart_jet(const AxisSpec& axis, double X, double Y);
[[nodiscard]] Vec3 embed(const AxisSpec& axis, double X, double Y);

/// sum_ij u_i v_j nabla_{E_i} E_j in the ambient space of the axis.
[[nodiscard]] Vec3 connection_product(const AxisSpec& axis, const Vec3& u, const Vec3& v);

/// Position, velocity and acceleration of the generating curve in chart coordinates.
struct CurveJet {
  double X = 0.0, Y = 0.0;
  double Xp = 1.0, Yp = 0.0;
  double Xpp = 0.0, Ypp = 0.0;
};

/// Upper: <N, d/dY> > 0, the convention for graph ODEs.
/// Inner: N is the left normal of the oriented curve, the convention for closed
/// counterclockwise curves and for the flux computation.
enum class Orientation { Upper, Inner };

struct FundamentalForms {
  double g11 = 0, g12 = 0, g22 = 0;
  double b11 = 0, b12 = 0, b22 = 0;
  double detg = 0;
  FrameVector normal;
  Orientation orientation = Orientation::Upper;

  [[nodiscard]] double mean_curvature() const { return (g22 * b11 - 2.0 * g12 * b12 + g11 * b22) / (2.0 * detg); }
};

[[nodiscard]] FundamentalForms fundamental_forms(const AxisSpec& axis, const CurveJet& jet, Orientation orientation);

/// H along the family of accelerations P'' = base + lambda * direction is
/// H(lambda) = at_zero + slope * lambda.
struct AffineMeanCurvature {
  double at_zero = 0.0;
  double slope = 0.0;
};

[[nodiscard]] AffineMeanCurvature mean_curvature_affine(const AxisSpec& axis, const CurveJet& base,
                                                        const Vec2& direction, Orientation orientation);

/// Mean curvature (inner normal) of the Sol surface generated along the base by
/// (x(t), y(t), 0), from the closed-form expression in x, y and their derivatives.
[[nodiscard]] double sol_curve_mean_curvature(double x, double y, double xp, double yp, double xpp, double ypp);

/// The same equation for a unit-speed curve with tangent angle theta, solved for
/// the Euclidean curvature theta'.
[[nodiscard]] double sol_curve_curvature(double x, double y, double theta, double H);

struct GraphState {
  double t = 0.0;
  double h = 0.0;
  double hp = 0.0;
  double H = 0.0;
};

/// h'' of the graph Y = h(X) with mean curvature H (upper normal).
/// Throws GraphDegenerateError when the h'' coefficient vanishes.
[[nodiscard]] double implicit_hpp(const AxisSpec& axis, const GraphState& state);

/// theta' of a unit-speed curve through (X, Y) with tangent angle theta whose
/// surface has mean curvature H with respect to the left normal.
[[nodiscard]] double curvature_for_tangent(const AxisSpec& axis, double X, double Y, double theta, double H);

/// h'' for vertical graphs over the horizontal lift gamma; independent of h.
[[nodiscard]] double ekt_hpp(const ekt::Params& params, double H, double t, double hp);

/// Forms of the E(kappa,tau) surface along an arc-length generating curve
/// beta = gamma(x) + (0, y, 0), with inner normal. `curvature` is theta' and
/// only enters b22.
[[nodiscard]] FundamentalForms ekt_arclength_frames(const ekt::Params& params, double x, double xp, double yp,
                                                    double curvature = 0.0);

}  // namespace cmc
