#include "cmc/invariant_surface.hpp"

#include <array>

namespace cmc {

namespace {

using Mat32 = Eigen::Matrix<double, 3, 2>;

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

std::array<std::array<Vec3, 3>, 3> connection_table(const AxisSpec& axis) {
  std::array<std::array<Vec3, 3>, 3> table;
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      table[i - 1][j - 1] =
          axis.is_sol() ? sol::connection(i, j).vec() : ekt::connection(axis.space.ekt, i, j).vec();
    }
  }
  return table;
}

Vec3 connection_product(const std::array<std::array<Vec3, 3>, 3>& table, const Vec3& u, const Vec3& v) {
  Vec3 out = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    if (u[i] == 0.0) continue;
    for (int j = 0; j < 3; ++j) out += u[i] * v[j] * table[i][j];
  }
  return out;
}

struct Assembly {
  FundamentalForms forms;
  Mat32 tangent;
};

Assembly assemble(const AxisSpec& axis, const CurveJet& c, Orientation orientation) {
  const ChartJet jet = chart_jet(axis, c.X, c.Y);
  const auto table = connection_table(axis);

  const Vec2 vel{c.Xp, c.Yp};
  const Vec2 acc{c.Xpp, c.Ypp};
  const Vec3 v1 = jet.generator;
  const Vec3 v2 = jet.tangent * vel;

  const Vec3 d11 = connection_product(table, v1, v1);
  const Vec3 d12 = connection_product(table, v1, v2);
  const Mat32 tangent_rate = jet.d_tangent_dX * c.Xp + jet.d_tangent_dY * c.Yp;
  const Vec3 d22 = tangent_rate * vel + jet.tangent * acc + connection_product(table, v2, v2);

  Vec3 n = v1.cross(v2);
  const double n_norm = n.norm();
  if (!(n_norm > 0.0)) {
    throw GraphDegenerateError("surface tangent vectors are parallel; normal undefined");
  }
  n /= n_norm;
  const Vec3 reference =
      orientation == Orientation::Upper ? Vec3(jet.tangent.col(1)) : Vec3(jet.tangent * Vec2{-c.Yp, c.Xp});
  if (n.dot(reference) < 0.0) n = -n;

  FundamentalForms f;
  f.g11 = v1.squaredNorm();
  f.g12 = v1.dot(v2);
  f.g22 = v2.squaredNorm();
  f.detg = f.g11 * f.g22 - f.g12 * f.g12;
  f.b11 = d11.dot(n);
  f.b12 = d12.dot(n);
  f.b22 = d22.dot(n);
  f.normal = FrameVector::from(n);
  f.orientation = orientation;
  return {f, jet.tangent};
}

}  // namespace

void AxisSpec::validate() const {
  const bool ekt_axis = axis == AxisKind::EktAxis;
  if (ekt_axis != (space.kind == SpaceModel::Kind::Ekt)) {
    throw PreconditionError("axis kind does not match the ambient space");
  }
  if (ekt_axis) space.ekt.validate();
}

double AxisSpec::critical_H() const { return is_sol() ? 0.0 : ekt::critical_mean_curvature(space.ekt.kappa); }

std::string AxisSpec::name() const {
  switch (axis) {
    case AxisKind::SolBase:
      return "sol-base";
    case AxisKind::SolDiagPlus:
      return "sol-diag-plus";
    case AxisKind::SolDiagMinus:
      return "sol-diag-minus";
    case AxisKind::EktAxis:
      return "ekt";
  }
  return "unknown";
}

Vec3 embed(const AxisSpec& axis, double X, double Y) {
  switch (axis.axis) {
    case AxisKind::SolBase:
      return {X, Y, 0.0};
    case AxisKind::SolDiagPlus:
    case AxisKind::SolDiagMinus: {
      const double sign = axis.diag_sign();
      return {X * kInvSqrt2, -sign * X * kInvSqrt2, Y};
    }
    case AxisKind::EktAxis: {
      const ekt::Point g = ekt::horizontal_lift(axis.space.ekt, X);
      return {g.x, g.y + Y, g.z};
    }
  }
  throw PreconditionError("unknown axis kind");
}

ChartJet chart_jet(const AxisSpec& axis, double X, double Y) {
  ChartJet jet;
  jet.point = embed(axis, X, Y);
  jet.tangent.setZero();
  jet.d_tangent_dX.setZero();
  jet.d_tangent_dY.setZero();
  switch (axis.axis) {
    case AxisKind::SolBase:
      jet.tangent(0, 0) = 1.0;
      jet.tangent(1, 1) = 1.0;
      jet.generator = sol::killing_fields(sol::Point::from(jet.point))[2].vec();
      break;
    case AxisKind::SolDiagPlus:
    case AxisKind::SolDiagMinus: {
      const double sign = axis.diag_sign();
      const double ez = std::exp(Y);
      jet.tangent(0, 0) = ez * kInvSqrt2;
      jet.tangent(1, 0) = -sign * kInvSqrt2 / ez;
      jet.tangent(2, 1) = 1.0;
      jet.d_tangent_dY(0, 0) = ez * kInvSqrt2;
      jet.d_tangent_dY(1, 0) = sign * kInvSqrt2 / ez;
      const sol::Point p = sol::Point::from(jet.point);
      jet.generator = sol::to_frame(p, Vec3{kInvSqrt2, sign * kInvSqrt2, 0.0}).vec();
      break;
    }
    case AxisKind::EktAxis: {
      const ekt::Params& params = axis.space.ekt;
      jet.tangent.col(0) = ekt::lift_direction(params, X).vec();
      jet.tangent(1, 1) = 1.0;
      jet.d_tangent_dX.col(0) = ekt::lift_direction_rate(params, X).vec();
      jet.generator = ekt::axis_generator(params, ekt::Point::from(jet.point)).vec();
      break;
    }
  }
  return jet;
}

Vec3 connection_product(const AxisSpec& axis, const Vec3& u, const Vec3& v) {
  return connection_product(connection_table(axis), u, v);
}

FundamentalForms fundamental_forms(const AxisSpec& axis, const CurveJet& jet, Orientation orientation) {
  return assemble(axis, jet, orientation).forms;
}

AffineMeanCurvature mean_curvature_affine(const AxisSpec& axis, const CurveJet& base, const Vec2& direction,
                                          Orientation orientation) {
  const Assembly a = assemble(axis, base, orientation);
  const FundamentalForms& f = a.forms;
  const double normal_component = (a.tangent * direction).dot(f.normal.vec());
  return {f.mean_curvature(), f.g11 * normal_component / (2.0 * f.detg)};
}

double sol_curve_mean_curvature(double x, double y, double xp, double yp, double xpp, double ypp) {
  const double speed2 = xp * xp + yp * yp;
  if (!(speed2 > 0.0)) throw PreconditionError("sol_curve_mean_curvature: degenerate tangent");
  const double w = x * yp + xp * y;
  const double C = std::sqrt(speed2 + (xp * y + x * yp) * (xp * y + x * yp));
  const double rhs = (x * yp - xp * y + (x * x - y * y) * w) * speed2 +
                     2.0 * (y * yp + x * xp) * (y * yp - x * xp) * w +
                     (x * x + y * y + 1.0) * (xp * ypp - xpp * yp + (xp * xp - yp * yp) * w);
  return rhs / (2.0 * C * C * C);
}

double sol_curve_curvature(double x, double y, double theta, double H) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double w = x * s + c * y;
  const double C = std::sqrt(1.0 + w * w);
  const double first = x * s - c * y + (x * x - y * y) * w;
  const double second = 2.0 * (y * s + x * c) * (y * s - x * c) * w;
  return (2.0 * H * C * C * C - first - second) / (x * x + y * y + 1.0) - (c * c - s * s) * w;
}

double implicit_hpp(const AxisSpec& axis, const GraphState& state) {
  const CurveJet base{state.t, state.h, 1.0, state.hp, 0.0, 0.0};
  const AffineMeanCurvature a = mean_curvature_affine(axis, base, Vec2{0.0, 1.0}, Orientation::Upper);
  if (!(std::abs(a.slope) > 1e-300) || !std::isfinite(a.slope)) {
    throw GraphDegenerateError("h'' coefficient vanishes: the surface is not a Killing graph here");
  }
  return (state.H - a.at_zero) / a.slope;
}

double curvature_for_tangent(const AxisSpec& axis, double X, double Y, double theta, double H) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const CurveJet base{X, Y, c, s, 0.0, 0.0};
  const AffineMeanCurvature a = mean_curvature_affine(axis, base, Vec2{-s, c}, Orientation::Inner);
  if (!(std::abs(a.slope) > 1e-300) || !std::isfinite(a.slope)) {
    throw GraphDegenerateError("curvature coefficient vanishes");
  }
  return (H - a.at_zero) / a.slope;
}

double ekt_hpp(const ekt::Params& params, double H, double t, double hp) {
  params.validate();
  if (!(H > ekt::critical_mean_curvature(params.kappa))) {
    throw PreconditionError("ekt_hpp: H must exceed sqrt(-kappa)/2");
  }
  return implicit_hpp(AxisSpec::ekt_axis(params), {t, 0.0, hp, H});
}

FundamentalForms ekt_arclength_frames(const ekt::Params& params, double x, double xp, double yp, double curvature) {
  params.validate();
  if (std::abs(xp * xp + yp * yp - 1.0) > 1e-9) {
    throw PreconditionError("ekt_arclength_frames: tangent is not unit length");
  }
  const CurveJet jet{x, 0.0, xp, yp, -curvature * yp, curvature * xp};
  return fundamental_forms(AxisSpec::ekt_axis(params), jet, Orientation::Inner);
}

}  // namespace cmc
