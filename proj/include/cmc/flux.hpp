#pragma once

// Horizontal diameter of horizontal H-cylinders in E(kappa,tau), kappa <= 0,
// and a numerical check of the weight formula
//   2H * int_{f(Omega)} <N, Y> = int_{f(dOmega)} <eta, Y>,   Y = E2,
// on Omega = [0,1] x [0,L] for the arc-length generating curve of the
// zero-height solution.

#include "cmc/ode_engine.hpp"

namespace cmc {

/// R = atanh(sqrt(-kappa) / 2H) / sqrt(-kappa); 1/(2H) for kappa = 0.
[[nodiscard]] double radius_closed_form(double kappa, double H);
/// 2R. Throws PreconditionError for H <= sqrt(-kappa)/2 or kappa > 0.
[[nodiscard]] double diameter_closed_form(double kappa, double H);

struct FluxOptions {
  int panels = 1;  // composite Gauss-Legendre, 64 nodes per panel and arc
};

struct FluxReport {
  double H = 0.0;
  double kappa = 0.0;
  double tau = 0.0;
  double a = 0.0;  // height of the generating curve at x = 0
  double L = 0.0;  // arc length of the quarter curve
  double R_closed = 0.0;
  double R_numeric = 0.0;
  double lhs = 0.0;  // 2H * area integral, by quadrature
  double rhs = 0.0;  // boundary integral, by quadrature
  double residual = 0.0;
  double lhs_evaluated = 0.0;  // (2H/r) sinh(R r) at R_numeric
  double rhs_evaluated = 0.0;  // cosh(R r) at R_numeric
  double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0, beta4 = 0.0;
  double beta13_cancellation = 0.0;  // |beta1 + beta3|
};

/// Quadrature nodes and weights on [0, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
[[nodiscard]] QuadratureRule gauss_legendre_unit(int panels);

/// Flux computation for the curve starting at (0, a) with horizontal tangent.
/// Throws PreconditionError unless that curve ends on {y = 0} with a vertical
/// tangent (a must be the zero-height value).
[[nodiscard]] FluxReport weight_flux_residual(const ekt::Params& params, double H, double a,
                                              const FluxOptions& fopts = {}, const IntegrationOptions& iopts = {});

/// Finds the zero-height value first, then calls weight_flux_residual.
[[nodiscard]] FluxReport flux_for(const ekt::Params& params, double H, const FluxOptions& fopts = {},
                                  const IntegrationOptions& iopts = {});

}  // namespace cmc
