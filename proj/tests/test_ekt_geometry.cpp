#include "support/checks.hpp"

#include <gtest/gtest.h>

using namespace cmc;
using namespace cmc::ekt;

namespace {

const Params kHyp{-1.0, 0.0, kPi / 2};
const Params kHypTwist{-1.0, 1.0, kPi / 2};

}  // namespace

TEST(EktExp, IdentityAtZero) {
  for (const Params& p : {kHyp, kHypTwist, Params{0.0, 1.0, kPi / 2}}) {
    EXPECT_LT((exp_zA(p, 0.0) - Mat2::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(EktExp, FlatBaseShear) {
  const Mat2 m = exp_zA({0.0, 1.0, kPi / 2}, 2.0);
  EXPECT_DOUBLE_EQ(m(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(m(1, 0), 4.0);
  EXPECT_DOUBLE_EQ(m(1, 1), 1.0);
}

TEST(EktExp, MatchesSeriesExponential) {
  // exp(zA) by a truncated power series of the generator
  for (const Params& p : {kHyp, kHypTwist, Params{-0.25, -0.7, kPi / 2}, Params{0.0, 0.5, kPi / 2}}) {
    Mat2 A;
    A << p.root(), 0.0, 2.0 * p.tau, 0.0;
    for (double z : {-1.3, 0.4, 2.0}) {
      Mat2 term = Mat2::Identity(), sum = Mat2::Identity();
      for (int k = 1; k < 60; ++k) {
        term = term * A * z / k;
        sum += term;
      }
      EXPECT_LT((exp_zA(p, z) - sum).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(EktExp, ContinuousInKappaAtZero) {
  const Params nearly{-1e-10, 0.5, kPi / 2};
  const Params flat{0.0, 0.5, kPi / 2};
  for (double z : {1e-6, 1e-4, 5e-4}) {
    EXPECT_LT((exp_zA(nearly, z) - exp_zA(flat, z)).cwiseAbs().maxCoeff(), 1e-8);
  }
  // tiny r: no cancellation in (e^{zr} - 1)/r
  const Params tiny{-1e-24, 1.0, kPi / 2};
  for (double z : {-1.0, 1.0, 2.0, 3.0}) {
    EXPECT_LT((exp_zA(tiny, z) - exp_zA({0.0, 1.0, kPi / 2}, z)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

namespace {

// largest difference between the kappa < 0 and kappa = 0 forms over random inputs in [-w, w]
double flat_limit_gap(double kappa, double w) {
  const Params nearly{kappa, 0.5, kPi / 2};
  const Params flat{0.0, 0.5, kPi / 2};
  auto diff3 = [](const Vec3& a, const Vec3& b) { return (a - b).cwiseAbs().maxCoeff(); };
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Point q = Point::from(checks::random_vec(-w, w));
    const Point v = Point::from(checks::random_vec(-w, w));
    const double t = checks::uniform(-w, w), s = checks::uniform(-w, w);
    worst = std::max(worst, (metric_at(nearly, q) - metric_at(flat, q)).cwiseAbs().maxCoeff());
    worst = std::max(worst, (frame_matrix(nearly, q) - frame_matrix(flat, q)).cwiseAbs().maxCoeff());
    worst = std::max(worst, diff3(group_mul(nearly, q, v).coords(), group_mul(flat, q, v).coords()));
    worst = std::max(worst, diff3(killing_field(nearly, q).vec(), killing_field(flat, q).vec()));
    worst = std::max(worst, diff3(translate(nearly, s, q).coords(), translate(flat, s, q).coords()));
    worst = std::max(worst, diff3(horizontal_lift(nearly, t).coords(), horizontal_lift(flat, t).coords()));
    worst = std::max(worst, diff3(lift_direction(nearly, t).vec(), lift_direction(flat, t).vec()));
    const BasePoint g0 = base_geodesic(nearly, t), g1 = base_geodesic(flat, t);
    worst = std::max({worst, std::abs(g0.x - g1.x), std::abs(g0.z - g1.z)});
  }
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) worst = std::max(worst, diff3(connection(nearly, i, j).vec(), connection(flat, i, j).vec()));
  }
  return worst;
}

}  // namespace

// connection entries carry sqrt(-kappa) itself, so the gap there is exactly 1e-6
TEST(EktFlatLimit, AllOperationsAgreeNearZeroKappa) { EXPECT_LE(flat_limit_gap(-1e-12, 0.25), 1e-6); }

TEST(EktFlatLimit, GapIsFirstOrderInRoot) {
  // e^{z sqrt(-kappa)} against 1: the gap is linear in sqrt(-kappa) times |z|
  for (double r : {1e-4, 1e-6, 1e-8}) {
    const double gap = flat_limit_gap(-r * r, 1.0);
    EXPECT_GT(gap, 0.5 * r);
    EXPECT_LT(gap, 4.0 * r);
  }
}

TEST(EktParamsValidation, RejectsBadParameters) {
  EXPECT_THROW(Params({0.5, 0.0, kPi / 2}).validate(), PreconditionError);
  EXPECT_THROW(Params({-1.0, 1.0, kPi / 4}).validate(), PreconditionError);
  EXPECT_THROW(Params({-1.0, 0.0, 0.0}).validate(), PreconditionError);
  EXPECT_NO_THROW(Params({-1.0, 0.0, kPi / 4}).validate());
  EXPECT_NO_THROW(Params({0.0, 3.0, kPi / 2}).validate());
}

TEST(EktMetric, IdentityAtOrigin) {
  EXPECT_LT((metric_at(kHyp, {0, 0, 0}) - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EktMetric, ExponentialWeightWithoutTwist) {
  const Mat3 g = metric_at(kHyp, {0, 0, 1});
  EXPECT_NEAR(g(0, 0), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(g(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(g(2, 2), 1.0, 1e-15);
}

TEST(EktMetric, SymmetricPositiveDefinite) {
  for (int i = 0; i < 100; ++i) {
    const Params p{checks::uniform(-4, 0), checks::uniform(-2, 2), kPi / 2};
    const Mat3 g = metric_at(p, Point::from(checks::random_vec(-2, 2)));
    EXPECT_LT((g - g.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Mat3>(g).eigenvalues().minCoeff(), 0.0);
  }
}

TEST(EktFrame, CoordinateFrameAtZeroHeight) {
  EXPECT_LT((frame_matrix(kHypTwist, {3.0, -1.0, 0.0}) - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EktFrame, FirstVectorAtLogTwo) {
  const Mat3 F = frame_matrix(kHypTwist, {0, 0, std::log(2.0)});
  EXPECT_NEAR(F(0, 0), 2.0, 1e-14);
  EXPECT_NEAR(F(1, 0), 2.0, 1e-14);
  EXPECT_NEAR(F(2, 0), 0.0, 1e-15);
}

TEST(EktFrame, Orthonormal) {
  for (const Params& p : {kHyp, kHypTwist, Params{0.0, 1.0, kPi / 2}, Params{-4.0, -2.0, kPi / 2}}) {
    EXPECT_LT(checks::ekt_frame_error(p, 100), 1e-12);
  }
}

TEST(EktConnection, Entries) {
  EXPECT_EQ(connection(kHyp, 1, 1), (FrameVector{0, 0, 1}));
  for (const Params& p : {kHyp, kHypTwist, Params{0.0, 2.0, kPi / 2}}) {
    EXPECT_EQ(connection(p, 3, 3), (FrameVector{0, 0, 0}));
  }
}

TEST(EktConnection, FlatEuclideanVanishes) {
  const Params flat{0.0, 0.0, kPi / 2};
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) EXPECT_EQ(connection(flat, i, j).norm(), 0.0);
  }
}

TEST(EktConnection, MetricCompatibleAndTorsionFree) {
  for (const Params& p : {kHyp, kHypTwist, Params{-0.25, 0.7, kPi / 2}}) {
    for (int i = 1; i <= 3; ++i) {
      for (int j = 1; j <= 3; ++j) {
        for (int k = 1; k <= 3; ++k) {
          const double c = connection(p, i, j).vec()[k - 1] + connection(p, i, k).vec()[j - 1];
          EXPECT_NEAR(c, 0.0, 1e-15);
        }
      }
    }
    // torsion free: nabla_{Ei}Ej - nabla_{Ej}Ei equals the bracket computed from the coordinate frame
    for (int i = 1; i <= 3; ++i) {
      for (int j = 1; j <= 3; ++j) {
        const Point q{0.3, -0.2, 0.4};
        const double h = 1e-6;
        auto E = [&](int a, const Vec3& x) { return Vec3(frame_matrix(p, Point::from(x)).col(a - 1)); };
        const Vec3 x = q.coords();
        auto dE = [&](int a, const Vec3& dir) { return Vec3((E(a, x + h * dir) - E(a, x - h * dir)) / (2 * h)); };
        const Vec3 bracket = dE(j, E(i, x)) - dE(i, E(j, x));
        const Vec3 expect = to_frame(p, q, bracket).vec();
        EXPECT_LT(((connection(p, i, j) - connection(p, j, i)).vec() - expect).cwiseAbs().maxCoeff(), 1e-8);
      }
    }
  }
}

TEST(EktConnection, RejectsBadIndex) { EXPECT_THROW((void)connection(kHyp, 4, 1), std::out_of_range); }

TEST(EktCurvature, SectionalIdentities) { EXPECT_LT(checks::curvature_identity_error(), 1e-10); }

TEST(EktGeodesic, Examples) {
  EXPECT_EQ(base_geodesic(kHyp, 0.0).x, 0.0);
  EXPECT_EQ(base_geodesic(kHyp, 0.0).z, 0.0);
  const Params flat{0.0, 0.3, kPi / 2};
  for (double t : {-2.0, 0.5, 3.0}) {
    EXPECT_NEAR(base_geodesic(flat, t).x, t, 1e-15);
    EXPECT_NEAR(base_geodesic(flat, t).z, 0.0, 1e-15);
  }
  EXPECT_NEAR(base_geodesic(kHyp, 1.0).x, 0.761594, 1e-6);
  EXPECT_NEAR(base_geodesic(kHyp, 1.0).z, -0.433781, 1e-6);
}

TEST(EktGeodesic, SolvesGeodesicEquations) {
  for (const Params& p : {kHyp, Params{-0.25, 0, kPi / 2}, Params{-4.0, 1, kPi / 2}, Params{0.0, 0, kPi / 2}}) {
    EXPECT_LT(checks::base_geodesic_residual(p), 1e-8);
  }
}

TEST(EktLift, DirectionExamples) {
  const FrameVector d0 = lift_direction(kHyp, 0.0);
  EXPECT_EQ(d0, (FrameVector{1, 0, 0}));
  for (double t : {-1.0, 2.0}) EXPECT_EQ(lift_direction({0.0, 1.0, kPi / 2}, t), (FrameVector{1, 0, 0}));
  const FrameVector d1 = lift_direction(kHyp, 1.0);
  EXPECT_NEAR(d1.a1, 1.0 / std::cosh(1.0), 1e-15);
  EXPECT_NEAR(d1.a3, -std::tanh(1.0), 1e-15);
  EXPECT_NEAR(d1.norm(), 1.0, 1e-14);
}

TEST(EktLift, HorizontalAndProjectsToGeodesic) {
  for (const Params& p : {kHyp, kHypTwist, Params{-4.0, -1.5, kPi / 2}}) {
    EXPECT_LT(checks::lift_consistency_error(p), 1e-8);
    // gamma' from finite differences of the lift equals lift_direction
    for (double t : {-1.5, 0.3, 1.2}) {
      const double h = 1e-6;
      const Vec3 d = (horizontal_lift(p, t + h).coords() - horizontal_lift(p, t - h).coords()) / (2 * h);
      const Vec3 e = to_coords(p, horizontal_lift(p, t), lift_direction(p, t));
      EXPECT_LT((d - e).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(EktLift, RateIsDerivative) {
  for (double t : {-1.0, 0.0, 0.7}) {
    const double h = 1e-6;
    const Vec3 d = (lift_direction(kHypTwist, t + h).vec() - lift_direction(kHypTwist, t - h).vec()) / (2 * h);
    EXPECT_LT((d - lift_direction_rate(kHypTwist, t).vec()).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(EktKilling, Examples) {
  EXPECT_EQ(killing_field(kHypTwist, {0.0, 2.0, -1.0}), (FrameVector{0, 0, 1}));
  const FrameVector k = killing_field(kHypTwist, {1, 0, 0});
  EXPECT_NEAR(k.a1, 1.0, 1e-15);
  EXPECT_NEAR(k.a2, 2.0, 1e-15);
  EXPECT_NEAR(k.a3, 1.0, 1e-15);
}

TEST(EktKilling, LieDerivativeOfMetricVanishes) {
  for (const Params& p : {kHyp, kHypTwist, Params{0.0, 1.0, kPi / 2}}) EXPECT_LT(checks::ekt_killing_residual(p, 50), 1e-6);
}

TEST(EktTranslate, Examples) {
  const Point q{0.4, -1.0, 0.2};
  const Point t0 = translate(kHypTwist, 0.0, q);
  EXPECT_NEAR(t0.x, q.x, 1e-15);
  EXPECT_NEAR(t0.y, q.y, 1e-15);
  EXPECT_NEAR(t0.z, q.z, 1e-15);
  const Point t1 = translate(kHyp, 1.0, {1, 0, 0});
  EXPECT_NEAR(t1.x, std::exp(1.0), 1e-14);
  EXPECT_NEAR(t1.y, 0.0, 1e-15);
  EXPECT_NEAR(t1.z, 1.0, 1e-15);
}

TEST(EktTranslate, GeneratedByAxisField) {
  for (const Params& p : {kHyp, kHypTwist, Params{-1.0, 0.0, kPi / 3}}) {
    const Point q{0.3, 0.5, -0.2};
    for (double s : {0.0, 0.8}) {
      const double h = 1e-6;
      const Vec3 d = (translate(p, s + h, q).coords() - translate(p, s - h, q).coords()) / (2 * h);
      const Point at = translate(p, s, q);
      EXPECT_LT((d - to_coords(p, at, axis_generator(p, at))).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(EktTranslate, IsometryPullback) {
  for (const Params& p : {kHyp, kHypTwist, Params{-4.0, 2.0, kPi / 2}, Params{-1.0, 0.0, kPi / 3}}) {
    const auto e = checks::ekt_pullback_errors(p, 50);
    EXPECT_LT(e.closed_form, 1e-9);
    EXPECT_LT(e.finite_difference, 1e-6);
  }
}

TEST(EktTranslate, TiltedAxisRequiresZeroTwist) {
  EXPECT_THROW((void)translate({-1.0, 1.0, kPi / 4}, 1.0, {0, 0, 0}), PreconditionError);
}

TEST(EktCritical, Value) {
  EXPECT_DOUBLE_EQ(critical_mean_curvature(-1.0), 0.5);
  EXPECT_DOUBLE_EQ(critical_mean_curvature(-4.0), 1.0);
  EXPECT_DOUBLE_EQ(critical_mean_curvature(0.0), 0.0);
}
