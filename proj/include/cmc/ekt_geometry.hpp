#pragma once

// E(kappa,tau) for kappa <= 0 as the metric Lie group R^2 x_A R with
// A = [[sqrt(-kappa), 0], [2 tau, 0]].
//
// Left-invariant orthonormal frame (r = sqrt(-kappa)):
//   E1 = e^{zr} d/dx + (2 tau / r)(e^{zr} - 1) d/dy,   E2 = d/dy,   E3 = d/dz.
// E2 spans the vertical (fiber) direction, E1 and E3 the horizontal space.
// The kappa = 0 branch is evaluated in its own closed form (2 tau z for the shear term).

#include "cmc/common.hpp"

namespace cmc::ekt {

struct Params {
  double kappa = -1.0;
  double tau = 0.0;
  double alpha = kPi / 2.0;  // slope of the translation axis; pi/2 is horizontal

  /// Throws PreconditionError when kappa > 0, alpha is outside (0, pi/2], or
  /// a tilted axis is requested with tau != 0.
  void validate() const;

  [[nodiscard]] double root() const { return std::sqrt(-kappa); }
  [[nodiscard]] bool flat_base() const { return kappa == 0.0; }
  [[nodiscard]] bool horizontal_axis() const { return alpha == kPi / 2.0; }
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  [[nodiscard]] Vec3 coords() const { return {x, y, z}; }
  [[nodiscard]] static Point from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
};

/// H(E) = sqrt(-kappa)/2.
[[nodiscard]] double critical_mean_curvature(double kappa);

/// e^{z r}, the (1,1) entry of exp(zA).
[[nodiscard]] double growth(const Params& p, double z);
/// (2 tau / r)(e^{z r} - 1), the (2,1) entry of exp(zA); 2 tau z when kappa = 0.
[[nodiscard]] double shear(const Params& p, double z);

[[nodiscard]] Mat2 exp_zA(const Params& p, double z);

[[nodiscard]] Point group_mul(const Params& p, const Point& a, const Point& b);

/// Columns are E1, E2, E3 at q in coordinates.
[[nodiscard]] Mat3 frame_matrix(const Params& p, const Point& q);
[[nodiscard]] Mat3 metric_at(const Params& p, const Point& q);
[[nodiscard]] FrameVector to_frame(const Params& p, const Point& q, const Vec3& coordinate_vector);
[[nodiscard]] Vec3 to_coords(const Params& p, const Point& q, const FrameVector& v);

[[nodiscard]] FrameVector connection(const Params& p, int i, int j);

struct BasePoint {
  double x = 0.0;
  double z = 0.0;
};

/// Unit-speed geodesic of the base (x,z)-plane through the origin, orthogonal
/// to the projection of the axis c(s) = (0,0,s).
[[nodiscard]] BasePoint base_geodesic(const Params& p, double t);
[[nodiscard]] BasePoint base_geodesic_velocity(const Params& p, double t);

/// Frame coefficients of the horizontal lift gamma'(t) = sech(tr) E1 - tanh(tr) E3.
[[nodiscard]] FrameVector lift_direction(const Params& p, double t);
/// t-derivative of the frame coefficients of lift_direction.
[[nodiscard]] FrameVector lift_direction_rate(const Params& p, double t);

/// Horizontal lift gamma(t) of the base geodesic with gamma(0) = origin.
[[nodiscard]] Point horizontal_lift(const Params& p, double t);

/// Generator of the horizontal translations Phi_s along c, in the frame at q:
/// x r e^{-zr} E1 + 2 tau x e^{-zr} E2 + E3.
[[nodiscard]] FrameVector killing_field(const Params& p, const Point& q);

/// Generator of the translation family along the (possibly tilted) axis:
/// sin(alpha) K + cos(alpha) E2.
[[nodiscard]] FrameVector axis_generator(const Params& p, const Point& q);

/// Translation by s along the axis. For alpha < pi/2 (tau = 0 only) this is the
/// horizontal translation by s sin(alpha) composed with the vertical one by s cos(alpha).
[[nodiscard]] Point translate(const Params& p, double s, const Point& q);
[[nodiscard]] Mat3 translate_differential(const Params& p, double s, const Point& q);

/// Vertical translation T_sigma (x, y + sigma, z).
[[nodiscard]] inline Point vertical_translate(double sigma, const Point& q) { return {q.x, q.y + sigma, q.z}; }

}  // namespace cmc::ekt
