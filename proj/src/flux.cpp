#include "cmc/flux.hpp"

#include "cmc/shooting.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace cmc {

double radius_closed_form(double kappa, double H) {
  if (kappa > 0.0) throw PreconditionError("closed-form diameter needs kappa <= 0");
  const double crit = ekt::critical_mean_curvature(kappa);
  if (!(H > crit)) {
    throw PreconditionError("subcritical mean curvature: H = " + std::to_string(H) + " <= H(E) = " +
                            std::to_string(crit));
  }
  if (kappa == 0.0) return 1.0 / (2.0 * H);
  const double r = std::sqrt(-kappa);
  return std::atanh(r / (2.0 * H)) / r;
}

double diameter_closed_form(double kappa, double H) { return 2.0 * radius_closed_form(kappa, H); }

QuadratureRule gauss_legendre_unit(int panels) {
  if (panels < 1) throw PreconditionError("need at least one quadrature panel");
  using Rule = boost::math::quadrature::gauss<double, 64>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  QuadratureRule q;
  const double h = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t i = 0; i < x.size(); ++i) {
      // the stored abscissae are the non-negative half of a symmetric rule
      q.nodes.push_back(mid + 0.5 * h * x[i]);
      q.weights.push_back(0.5 * h * w[i]);
      if (x[i] != 0.0) {
        q.nodes.push_back(mid - 0.5 * h * x[i]);
        q.weights.push_back(0.5 * h * w[i]);
      }
    }
  }
  return q;
}

namespace {

struct Tangents {
  ekt::Point p;
  Vec3 v1;  // frame coefficients of df/ds
  Vec3 v2;  // frame coefficients of df/dt
};

// Pushes the tangent vectors at p forward by Phi_s; returns frame coefficients
// at Phi_s(p).
Tangents translated(const ekt::Params& params, double s, const Tangents& t0) {
  const Mat3 D = ekt::translate_differential(params, s, t0.p);
  Tangents t;
  t.p = ekt::translate(params, s, t0.p);
  t.v1 = ekt::to_frame(params, t.p, D * ekt::to_coords(params, t0.p, FrameVector::from(t0.v1))).vec();
  t.v2 = ekt::to_frame(params, t.p, D * ekt::to_coords(params, t0.p, FrameVector::from(t0.v2))).vec();
  return t;
}

Tangents tangents_at(const ekt::Params& params, const PlanarState& st) {
  const AxisSpec axis = AxisSpec::ekt_axis(params);
  const ChartJet jet = chart_jet(axis, st.x, st.y);
  Tangents t;
  t.p = ekt::Point::from(jet.point);
  t.v1 = jet.generator;
  t.v2 = jet.tangent * Vec2(std::cos(st.theta), std::sin(st.theta));
  return t;
}

// Unit vector in span(keep, other) orthogonal to `other`, in the direction of `keep`.
Vec3 orthogonal_unit(const Vec3& keep, const Vec3& other) {
  const Vec3 w = keep - (keep.dot(other) / other.squaredNorm()) * other;
  return w.normalized();
}


}  // namespace

FluxReport weight_flux_residual(const ekt::Params& params, double H, double a, const FluxOptions& fopts,
                                const IntegrationOptions& iopts) {
  params.validate();
  if (!params.horizontal_axis()) throw PreconditionError("the flux computation needs a horizontal axis");
  FluxReport rep;
  rep.H = H;
  rep.kappa = params.kappa;
  rep.tau = params.tau;
  rep.a = a;
  rep.R_closed = radius_closed_form(params.kappa, H);

  const QuadratureRule rule = gauss_legendre_unit(fopts.panels);
  std::vector<double> fractions = rule.nodes;
  fractions.push_back(0.0);
  fractions.push_back(1.0);
  const AxisSpec axis = AxisSpec::ekt_axis(params);
  const ArclengthProfile prof = arclength_profile(axis, H, a, fractions, iopts);
  const PlanarState& start = prof.at[rule.nodes.size()];
  const PlanarState& end = prof.at[rule.nodes.size() + 1];
  const double scale = std::max(1.0, std::abs(a));
  if (std::abs(end.y) > 1e-6 * scale || std::abs(std::sin(end.theta) - 1.0) > 1e-9) {
    throw PreconditionError("generating curve does not end on {y = 0} with tangent E2 (y(L) = " +
                            std::to_string(end.y) + "); a must be the zero-height value");
  }
  if (std::abs(start.x) > 0.0 || std::abs(start.theta) > 0.0) {
    throw PreconditionError("generating curve must start at x = 0 with horizontal tangent");
  }
  rep.L = prof.L;
  rep.R_numeric = end.x;

  // Area term and the two t-boundaries (s = 0 and s = 1).
  double lhs = 0.0;
  double b1 = 0.0;
  double b3 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const PlanarState& st = prof.at[i];
    const double w = rule.weights[i] * prof.L;
    const FundamentalForms ff =
        ekt_arclength_frames(params, st.x, std::cos(st.theta), std::sin(st.theta), prof.curvature[i]);
    lhs += w * ff.normal.a2 * std::sqrt(ff.detg);

    const Tangents t0 = tangents_at(params, st);
    const Vec3 eta1 = -orthogonal_unit(t0.v1, t0.v2);
    b1 += w * eta1[1] * t0.v2.norm();

    const Tangents t1 = translated(params, 1.0, t0);
    const Vec3 eta3 = orthogonal_unit(t1.v1, t1.v2);
    b3 += w * eta3[1] * t1.v2.norm();
  }
  rep.lhs = 2.0 * H * lhs;

  // The two s-boundaries (t = L and t = 0).
  const Tangents top = tangents_at(params, end);
  const Tangents bottom = tangents_at(params, start);
  double b2 = 0.0;
  double b4 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double s = rule.nodes[i];
    const Tangents tt = translated(params, s, top);
    b2 += rule.weights[i] * orthogonal_unit(tt.v2, tt.v1)[1] * tt.v1.norm();
    const Tangents tb = translated(params, s, bottom);
    b4 += rule.weights[i] * (-orthogonal_unit(tb.v2, tb.v1))[1] * tb.v1.norm();
  }
  rep.beta1 = b1;
  rep.beta2 = b2;
  rep.beta3 = b3;
  rep.beta4 = b4;
  rep.beta13_cancellation = std::abs(b1 + b3);
  rep.rhs = b1 + b2 + b3 + b4;
  rep.residual = std::abs(rep.lhs - rep.rhs);

  if (params.flat_base()) {
    rep.lhs_evaluated = 2.0 * H * rep.R_numeric;
    rep.rhs_evaluated = 1.0;
  } else {
    const double r = params.root();
    rep.lhs_evaluated = 2.0 * H / r * std::sinh(rep.R_numeric * r);
    rep.rhs_evaluated = std::cosh(rep.R_numeric * r);
  }
  return rep;
}

FluxReport flux_for(const ekt::Params& params, double H, const FluxOptions& fopts, const IntegrationOptions& iopts) {
  const ZeroHeightSolution z = find_zero_height(AxisSpec::ekt_axis(params), H, std::nullopt, {}, iopts);
  if (!z.result.converged) throw SolverError("zero-height search did not converge");
  return weight_flux_residual(params, H, z.result.parameter, fopts, iopts);
}

}  // namespace cmc
