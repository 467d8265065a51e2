#pragma once

// Numerical property checks shared by the unit tests and the acceptance
// binary. Each returns the largest error found over its sample set.

#include "cmc/ekt_geometry.hpp"
#include "cmc/export.hpp"
#include "cmc/invariant_surface.hpp"
#include "cmc/sol_geometry.hpp"
#include "oracles/fd_mean_curvature.hpp"

#include <functional>
#include <random>
#include <vector>

namespace checks {

using namespace cmc;

inline std::mt19937_64& rng() {
  static thread_local std::mt19937_64 g(20240611);
  return g;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline Vec3 random_vec(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }

// ---- frames -------------------------------------------------------------

inline double sol_frame_error(int samples) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const sol::Point p = sol::Point::from(random_vec(-3, 3));
    const Mat3 F = sol::frame_matrix(p);
    worst = std::max(worst, (F.transpose() * sol::metric_at(p) * F - Mat3::Identity()).cwiseAbs().maxCoeff());
  }
  return worst;
}

inline double ekt_frame_error(const ekt::Params& prm, int samples) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const ekt::Point p = ekt::Point::from(random_vec(-2, 2));
    const Mat3 F = ekt::frame_matrix(prm, p);
    const Mat3 G = ekt::metric_at(prm, p);
    // residual in units of the magnitude of the summed terms
    const Mat3 scale = F.cwiseAbs().transpose() * G.cwiseAbs() * F.cwiseAbs();
    worst = std::max(worst, ((F.transpose() * G * F - Mat3::Identity()).cwiseAbs().array() / scale.array()).maxCoeff());
  }
  return worst;
}

// ---- isometries ---------------------------------------------------------

inline std::vector<sol::Isometry> sample_isometries(double s) {
  return {sol::Isometry::translate_base(s),    sol::Isometry::translate_diag(+1, s),
          sol::Isometry::translate_diag(-1, s), sol::Isometry::reflect_xz(),
          sol::Isometry::reflect_yz(),          sol::Isometry::rotate_pi_c(),
          sol::Isometry::rotate_pi_diag(+1),    sol::Isometry::rotate_pi_diag(-1)};
}

inline Mat3 fd_jacobian(const std::function<Vec3(const Vec3&)>& f, const Vec3& p, double h = 1e-6) {
  Mat3 J;
  for (int k = 0; k < 3; ++k) {
    Vec3 e = Vec3::Zero();
    e[k] = h;
    J.col(k) = (f(p + e) - f(p - e)) / (2.0 * h);
  }
  return J;
}

struct PullbackErrors {
  double closed_form = 0.0;
  double finite_difference = 0.0;
};

inline PullbackErrors sol_pullback_errors(int samples) {
  PullbackErrors e;
  for (int i = 0; i < samples; ++i) {
    const Vec3 pc = random_vec(-1.5, 1.5);
    const sol::Point p = sol::Point::from(pc);
    for (const auto& iso : sample_isometries(uniform(-1.5, 1.5))) {
      const sol::Point q = sol::apply(iso, p);
      const Vec3 u = random_vec(-1, 1);
      const Vec3 v = random_vec(-1, 1);
      const double before = u.dot(sol::metric_at(p) * v);
      const Mat3 D = sol::differential(iso, p);
      e.closed_form = std::max(e.closed_form, std::abs((D * u).dot(sol::metric_at(q) * (D * v)) - before));
      const Mat3 J = fd_jacobian([&](const Vec3& x) { return sol::apply(iso, sol::Point::from(x)).coords(); }, pc);
      e.finite_difference =
          std::max(e.finite_difference, std::abs((J * u).dot(sol::metric_at(q) * (J * v)) - before));
    }
  }
  return e;
}

inline PullbackErrors ekt_pullback_errors(const ekt::Params& prm, int samples) {
  PullbackErrors e;
  for (int i = 0; i < samples; ++i) {
    const Vec3 pc = random_vec(-1, 1);
    const ekt::Point p = ekt::Point::from(pc);
    const double s = uniform(-1, 1);
    const ekt::Point q = ekt::translate(prm, s, p);
    const Vec3 u = random_vec(-1, 1);
    const Vec3 v = random_vec(-1, 1);
    const double before = u.dot(ekt::metric_at(prm, p) * v);
    const Mat3 D = ekt::translate_differential(prm, s, p);
    e.closed_form = std::max(e.closed_form, std::abs((D * u).dot(ekt::metric_at(prm, q) * (D * v)) - before));
    const Mat3 J = fd_jacobian([&](const Vec3& x) { return ekt::translate(prm, s, ekt::Point::from(x)).coords(); }, pc);
    e.finite_difference = std::max(e.finite_difference, std::abs((J * u).dot(ekt::metric_at(prm, q) * (J * v)) - before));
  }
  return e;
}

// sigma_yz Phi_s = Phi_s sigma_yz, sigma_xz Phi_s = Phi_s sigma_xz, psi_+ Phi_s = Phi_{-s} psi_+
inline double commutation_error(int samples) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const sol::Point p = sol::Point::from(random_vec(-2, 2));
    const double s = uniform(-2, 2);
    const auto T = sol::Isometry::translate_base(s);
    const auto Tm = sol::Isometry::translate_base(-s);
    auto gap = [&](const sol::Isometry& a, const sol::Isometry& b, const sol::Isometry& c, const sol::Isometry& d) {
      return (sol::apply(a, sol::apply(b, p)).coords() - sol::apply(c, sol::apply(d, p)).coords()).cwiseAbs().maxCoeff();
    };
    worst = std::max(worst, gap(sol::Isometry::reflect_yz(), T, T, sol::Isometry::reflect_yz()));
    worst = std::max(worst, gap(sol::Isometry::reflect_xz(), T, T, sol::Isometry::reflect_xz()));
    worst = std::max(worst, gap(sol::Isometry::rotate_pi_diag(+1), T, Tm, sol::Isometry::rotate_pi_diag(+1)));
    worst = std::max(worst, gap(sol::Isometry::rotate_pi_diag(-1), T, Tm, sol::Isometry::rotate_pi_diag(-1)));
  }
  return worst;
}

// ---- Killing fields -----------------------------------------------------

using MetricFn = std::function<Mat3(const Vec3&)>;
using FieldFn = std::function<Vec3(const Vec3&)>;

// max |L_K g| by central differences
inline double lie_derivative_residual(const MetricFn& g, const FieldFn& K, const Vec3& p, double h = 1e-6) {
  Mat3 dg[3];
  Mat3 dK;  // dK(k, i) = d_i K^k
  for (int i = 0; i < 3; ++i) {
    Vec3 e = Vec3::Zero();
    e[i] = h;
    dg[i] = (g(p + e) - g(p - e)) / (2 * h);
    dK.col(i) = (K(p + e) - K(p - e)) / (2 * h);
  }
  const Vec3 k = K(p);
  const Mat3 G = g(p);
  Mat3 L = Mat3::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double v = 0;
      for (int m = 0; m < 3; ++m) v += k[m] * dg[m](i, j) + G(m, j) * dK(m, i) + G(i, m) * dK(m, j);
      L(i, j) = v;
    }
  }
  return L.cwiseAbs().maxCoeff();
}

inline double sol_killing_residual(int samples) {
  double worst = 0.0;
  const MetricFn g = [](const Vec3& x) { return sol::metric_at(sol::Point::from(x)); };
  for (int i = 0; i < samples; ++i) {
    const Vec3 p = random_vec(-1.5, 1.5);
    for (int k = 0; k < 3; ++k) {
      const FieldFn K = [k](const Vec3& x) {
        const sol::Point q = sol::Point::from(x);
        return sol::to_coords(q, sol::killing_fields(q)[k]);
      };
      worst = std::max(worst, lie_derivative_residual(g, K, p));
    }
  }
  return worst;
}

inline double ekt_killing_residual(const ekt::Params& prm, int samples) {
  double worst = 0.0;
  const MetricFn g = [&](const Vec3& x) { return ekt::metric_at(prm, ekt::Point::from(x)); };
  const FieldFn K = [&](const Vec3& x) {
    const ekt::Point q = ekt::Point::from(x);
    return ekt::to_coords(prm, q, ekt::killing_field(prm, q));
  };
  for (int i = 0; i < samples; ++i) worst = std::max(worst, lie_derivative_residual(g, K, random_vec(-1, 1)));
  return worst;
}

// ---- curvature from a constant connection table ----------------------------

using Connection = std::function<FrameVector(int, int)>;

// nabla_{E_i} of the constant-coefficient field v
inline Vec3 nabla(const Connection& c, int i, const Vec3& v) {
  Vec3 out = Vec3::Zero();
  for (int j = 1; j <= 3; ++j) out += v[j - 1] * c(i, j).vec();
  return out;
}

inline Vec3 nabla_along(const Connection& c, const Vec3& w, const Vec3& v) {
  Vec3 out = Vec3::Zero();
  for (int i = 1; i <= 3; ++i) out += w[i - 1] * nabla(c, i, v);
  return out;
}

// <R(E_a, E_b) E_b, E_a>, R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]
inline double sectional(const Connection& c, int a, int b) {
  const Vec3 Ea = Vec3::Unit(a - 1);
  const Vec3 Eb = Vec3::Unit(b - 1);
  const Vec3 bracket = nabla(c, a, Eb) - nabla(c, b, Ea);
  const Vec3 R = nabla(c, a, nabla(c, b, Eb)) - nabla(c, b, nabla(c, a, Eb)) - nabla_along(c, bracket, Eb);
  return R.dot(Ea);
}

inline double curvature_identity_error() {
  double worst = 0.0;
  for (double kappa = -4.0; kappa <= 0.0; kappa += 0.5) {
    for (double tau = -2.0; tau <= 2.0; tau += 0.5) {
      const ekt::Params prm{kappa, tau, kPi / 2};
      const Connection c = [&](int i, int j) { return ekt::connection(prm, i, j); };
      worst = std::max(worst, std::abs(sectional(c, 1, 3) - (kappa - 3 * tau * tau)));
      worst = std::max(worst, std::abs(sectional(c, 2, 3) - tau * tau));
      worst = std::max(worst, std::abs(sectional(c, 1, 2) - tau * tau));
    }
  }
  return worst;
}

// ---- base geodesic ---------------------------------------------------------

// unit speed and geodesic equations of e^{-2zr}dx^2 + dz^2, plus lift consistency
inline double base_geodesic_residual(const ekt::Params& prm) {
  const double r = prm.root();
  const double h = 1e-5;
  double worst = 0.0;
  for (double t = -2.0; t <= 2.0; t += 0.05) {
    const ekt::BasePoint p = ekt::base_geodesic(prm, t);
    const ekt::BasePoint v = ekt::base_geodesic_velocity(prm, t);
    const ekt::BasePoint vp = ekt::base_geodesic_velocity(prm, t + h);
    const ekt::BasePoint vm = ekt::base_geodesic_velocity(prm, t - h);
    const double ax = (vp.x - vm.x) / (2 * h);
    const double az = (vp.z - vm.z) / (2 * h);
    const double w = std::exp(-2 * r * p.z);
    worst = std::max(worst, std::abs(w * v.x * v.x + v.z * v.z - 1.0));
    worst = std::max(worst, std::abs(ax - 2 * r * v.x * v.z));
    worst = std::max(worst, std::abs(az + r * w * v.x * v.x));
    // position derivative consistent with the velocity
    const ekt::BasePoint pp = ekt::base_geodesic(prm, t + h);
    const ekt::BasePoint pm = ekt::base_geodesic(prm, t - h);
    worst = std::max(worst, std::abs((pp.x - pm.x) / (2 * h) - v.x));
    worst = std::max(worst, std::abs((pp.z - pm.z) / (2 * h) - v.z));
  }
  return worst;
}

inline double lift_consistency_error(const ekt::Params& prm) {
  double worst = 0.0;
  for (double t = -2.0; t <= 2.0; t += 0.1) {
    const FrameVector d = ekt::lift_direction(prm, t);
    worst = std::max(worst, std::abs(d.a2));
    const Vec3 c = ekt::to_coords(prm, ekt::horizontal_lift(prm, t), d);
    const ekt::BasePoint v = ekt::base_geodesic_velocity(prm, t);
    worst = std::max(worst, std::max(std::abs(c.x() - v.x), std::abs(c.z() - v.z)));
  }
  return worst;
}

// ---- mean curvature oracles -------------------------------------------------

// implicit solve on the Sol base against the explicit closed-form equation,
// inverted in the acceleration (H is affine in y'' at fixed x'' = 0)
inline double sol_explicit_vs_implicit(int samples) {
  const AxisSpec axis = AxisSpec::sol_base();
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = uniform(-1.5, 1.5), h = uniform(-1.5, 1.5), hp = uniform(-3, 3), H = uniform(0.1, 3);
    const double H0 = sol_curve_mean_curvature(t, h, 1.0, hp, 0.0, 0.0);
    const double H1 = sol_curve_mean_curvature(t, h, 1.0, hp, 0.0, 1.0);
    const double explicit_hpp = (H - H0) / (H1 - H0);
    const double implicit = implicit_hpp(axis, {t, h, hp, H});
    worst = std::max(worst, std::abs(explicit_hpp - implicit) / std::max(1.0, std::abs(explicit_hpp)));
  }
  return worst;
}

// E(0,0) is Euclidean space: h'' = 2H (1 + h'^2)^{3/2}
inline double euclidean_reduction_error(int samples) {
  const AxisSpec axis = AxisSpec::ekt_axis({0.0, 0.0, kPi / 2});
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = uniform(-2, 2), h = uniform(-2, 2), hp = uniform(-3, 3), H = uniform(0.1, 3);
    const double expect = 2 * H * std::pow(1 + hp * hp, 1.5);
    worst = std::max(worst, std::abs(implicit_hpp(axis, {t, h, hp, H}) - expect) / std::max(1.0, expect));
  }
  return worst;
}

// vertical-graph ODE against the generic solve, random (kappa, tau)
inline double ekt_hpp_vs_implicit(int samples) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const ekt::Params prm{uniform(-4, 0), uniform(-2, 2), kPi / 2};
    const double H = ekt::critical_mean_curvature(prm.kappa) + uniform(0.05, 2);
    const double t = uniform(-1, 1), h = uniform(-2, 2), hp = uniform(-3, 3);
    const double a = ekt_hpp(prm, H, t, hp);
    const double b = implicit_hpp(AxisSpec::ekt_axis(prm), {t, h, hp, H});
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  return worst;
}

inline oracle::Metric metric_of(const AxisSpec& axis) {
  if (axis.is_sol()) return [](const Vec3& p) { return sol::metric_at(sol::Point::from(p)); };
  const ekt::Params prm = axis.space.ekt;
  return [prm](const Vec3& p) { return ekt::metric_at(prm, ekt::Point::from(p)); };
}

inline Vec3 frame_to_coords(const AxisSpec& axis, const Vec3& p, const FrameVector& v) {
  if (axis.is_sol()) return sol::to_coords(sol::Point::from(p), v);
  return ekt::to_coords(axis.space.ekt, ekt::Point::from(p), v);
}

// Finite-difference mean curvature of f(s, u) = Phi_s(beta(u)) for a random
// quadratic curve beta against the assembled fundamental forms.
inline double fd_oracle_error(const AxisSpec& axis, int samples, double range = 1.0) {
  double worst = 0.0;
  const oracle::Metric G = metric_of(axis);
  for (int i = 0; i < samples; ++i) {
    CurveJet j;
    j.X = uniform(-range, range);
    j.Y = uniform(-range, range);
    const double th = uniform(0, 2 * kPi);
    j.Xp = std::cos(th);
    j.Yp = std::sin(th);
    j.Xpp = uniform(-1, 1);
    j.Ypp = uniform(-1, 1);
    const FundamentalForms ff = fundamental_forms(axis, j, Orientation::Upper);
    const oracle::Surface F = [&](double s, double u) {
      return surface_point(axis, s, j.X + j.Xp * u + 0.5 * j.Xpp * u * u, j.Y + j.Yp * u + 0.5 * j.Ypp * u * u);
    };
    const Vec3 p = F(0, 0);
    const Vec3 n = frame_to_coords(axis, p, ff.normal);
    const auto res = oracle::mean_curvature(G, F, 0.0, 0.0, G(p) * n);
    worst = std::max(worst, std::abs(res.H - ff.mean_curvature()));
  }
  return worst;
}

}  // namespace checks
