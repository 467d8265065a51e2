#include "cmc/ekt_geometry.hpp"

#include <array>
#include <string>

namespace cmc::ekt {

namespace {

double log_cosh(double u) {
  const double a = std::abs(u);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double sech(double u) { return 1.0 / std::cosh(u); }

// tanh(u) - gd(u), with gd the Gudermannian; series near 0 where the
// difference cancels to O(u^3).
double tanh_minus_gd(double u) {
  if (std::abs(u) < 1e-2) {
    const double u2 = u * u;
    return u * u2 * (-1.0 / 6.0 + u2 * (11.0 / 120.0 - u2 * (211.0 / 5040.0)));
  }
  return std::tanh(u) - std::atan(std::sinh(u));
}

}  // namespace

void Params::validate() const {
  if (!std::isfinite(kappa) || !std::isfinite(tau) || !std::isfinite(alpha)) {
    throw PreconditionError("E(kappa,tau) parameters must be finite");
  }
  if (kappa > 0.0) {
    throw PreconditionError("kappa > 0 (S^2 x R, Berger spheres) is outside the kappa <= 0 model, got kappa = " +
                            std::to_string(kappa));
  }
  if (!(alpha > 0.0 && alpha <= kPi / 2.0)) {
    throw PreconditionError("axis slope alpha must lie in (0, pi/2]");
  }
  if (tau != 0.0 && alpha != kPi / 2.0) {
    throw PreconditionError("tilted axes (alpha < pi/2) require tau = 0");
  }
}

double critical_mean_curvature(double kappa) {
  if (kappa > 0.0) throw PreconditionError("critical mean curvature is only defined here for kappa <= 0");
  return std::sqrt(-kappa) / 2.0;
}

double growth(const Params& p, double z) {
  if (p.flat_base()) return 1.0;
  return std::exp(z * p.root());
}

double shear(const Params& p, double z) {
  if (p.flat_base()) return 2.0 * p.tau * z;
  const double r = p.root();
  return 2.0 * p.tau * std::expm1(z * r) / r;
}

Mat2 exp_zA(const Params& p, double z) {
  Mat2 m;
  m << growth(p, z), 0.0, shear(p, z), 1.0;
  return m;
}

Point group_mul(const Params& p, const Point& a, const Point& b) {
  return {a.x + growth(p, a.z) * b.x, a.y + shear(p, a.z) * b.x + b.y, a.z + b.z};
}

Mat3 frame_matrix(const Params& p, const Point& q) {
  Mat3 m = Mat3::Identity();
  m(0, 0) = growth(p, q.z);
  m(1, 0) = shear(p, q.z);
  return m;
}

Mat3 metric_at(const Params& p, const Point& q) {
  // Gram matrix of the coframe dual to the frame above.
  const double inv_growth = 1.0 / growth(p, q.z);
  const double c = shear(p, q.z) * inv_growth;
  Mat3 g = Mat3::Identity();
  g(0, 0) = inv_growth * inv_growth + c * c;
  g(0, 1) = g(1, 0) = -c;
  return g;
}

FrameVector to_frame(const Params& p, const Point& q, const Vec3& v) {
  const double a1 = v.x() / growth(p, q.z);
  return {a1, v.y() - shear(p, q.z) * a1, v.z()};
}

Vec3 to_coords(const Params& p, const Point& q, const FrameVector& v) {
  return {growth(p, q.z) * v.a1, shear(p, q.z) * v.a1 + v.a2, v.a3};
}

FrameVector connection(const Params& p, int i, int j) {
  require_frame_index(i, "ekt::connection");
  require_frame_index(j, "ekt::connection");
  const double r = p.root();
  const double t = p.tau;
  const std::array<std::array<FrameVector, 3>, 3> table{{
      {{{0, 0, r}, {0, 0, t}, {-r, -t, 0}}},
      {{{0, 0, t}, {0, 0, 0}, {-t, 0, 0}}},
      {{{0, t, 0}, {-t, 0, 0}, {0, 0, 0}}},
  }};
  return table[i - 1][j - 1];
}

BasePoint base_geodesic(const Params& p, double t) {
  if (p.flat_base()) return {t, 0.0};
  const double r = p.root();
  const double u = t * r;
  return {std::tanh(u) / r, -log_cosh(u) / r};
}

BasePoint base_geodesic_velocity(const Params& p, double t) {
  if (p.flat_base()) return {1.0, 0.0};
  const double u = t * p.root();
  const double s = sech(u);
  return {s * s, -std::tanh(u)};
}

FrameVector lift_direction(const Params& p, double t) {
  if (p.flat_base()) return {1.0, 0.0, 0.0};
  const double u = t * p.root();
  return {sech(u), 0.0, -std::tanh(u)};
}

FrameVector lift_direction_rate(const Params& p, double t) {
  if (p.flat_base()) return {0.0, 0.0, 0.0};
  const double r = p.root();
  const double u = t * r;
  const double s = sech(u);
  return {-r * s * std::tanh(u), 0.0, -r * s * s};
}

Point horizontal_lift(const Params& p, double t) {
  const BasePoint b = base_geodesic(p, t);
  if (p.flat_base()) return {b.x, 0.0, b.z};
  const double r = p.root();
  return {b.x, 2.0 * p.tau * tanh_minus_gd(t * r) / (r * r), b.z};
}

FrameVector killing_field(const Params& p, const Point& q) {
  if (p.flat_base()) return {0.0, 2.0 * p.tau * q.x, 1.0};
  const double r = p.root();
  const double decay = std::exp(-q.z * r);
  return {q.x * r * decay, 2.0 * p.tau * q.x * decay, 1.0};
}

FrameVector axis_generator(const Params& p, const Point& q) {
  if (p.horizontal_axis()) return killing_field(p, q);
  return std::sin(p.alpha) * killing_field(p, q) + FrameVector{0.0, std::cos(p.alpha), 0.0};
}

Point translate(const Params& p, double s, const Point& q) {
  if (!p.horizontal_axis() && p.tau != 0.0) {
    throw PreconditionError("tilted translations require tau = 0");
  }
  const double horizontal = p.horizontal_axis() ? s : s * std::sin(p.alpha);
  const double vertical = p.horizontal_axis() ? 0.0 : s * std::cos(p.alpha);
  return {growth(p, horizontal) * q.x, shear(p, horizontal) * q.x + q.y + vertical, q.z + horizontal};
}

Mat3 translate_differential(const Params& p, double s, const Point&) {
  if (!p.horizontal_axis() && p.tau != 0.0) {
    throw PreconditionError("tilted translations require tau = 0");
  }
  const double horizontal = p.horizontal_axis() ? s : s * std::sin(p.alpha);
  Mat3 d = Mat3::Identity();
  d(0, 0) = growth(p, horizontal);
  d(1, 0) = shear(p, horizontal);
  return d;
}

}  // namespace cmc::ekt
