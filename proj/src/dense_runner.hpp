#pragma once

// Thin wrapper around the dopri5 dense-output stepper: one accepted step at a
// time, interpolation inside the last step, and event location by bisection
// on the interpolant.

#include "cmc/common.hpp"
#include "cmc/ode_engine.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <functional>

namespace cmc::detail {

namespace odeint = boost::numeric::odeint;

inline constexpr std::size_t kStateSize = 4;
using State = std::array<double, kStateSize>;
using Rhs = std::function<void(const State&, State&)>;
using EventFn = std::function<double(const State&)>;

inline bool finite_state(const State& x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

class StepUnderflow : public SolverError {
 public:
  using SolverError::SolverError;
};

class DenseRunner {
 public:
  DenseRunner(Rhs rhs, const IntegrationOptions& opts, const State& x0, double t0 = 0.0)
      : rhs_(std::move(rhs)),
        opts_(opts),
        stepper_(odeint::make_dense_output(opts.atol, opts.rtol, odeint::runge_kutta_dopri5<State>())) {
    if (!finite_state(x0)) throw SolverError("non-finite initial state");
    stepper_.initialize(x0, t0, opts.initial_step);
  }

  /// One accepted step. Throws StepUnderflow or SolverError.
  void step() {
    auto sys = [this](const State& x, State& dx, double) {
      rhs_(x, dx);
      if (!finite_state(dx)) throw SolverError("non-finite derivative");
    };
    try {
      stepper_.do_step(sys);
    } catch (const odeint::step_adjustment_error& e) {
      throw StepUnderflow(std::string("step size control failed: ") + e.what());
    } catch (const odeint::no_progress_error& e) {
      throw StepUnderflow(std::string("no progress: ") + e.what());
    }
    if (!finite_state(stepper_.current_state())) throw SolverError("non-finite state");
    const double width = t_cur() - t_prev();
    if (width < opts_.min_step * std::max(1.0, std::abs(t_cur()))) {
      throw StepUnderflow("step size fell below " + std::to_string(opts_.min_step));
    }
  }

  [[nodiscard]] double t_prev() const { return stepper_.previous_time(); }
  [[nodiscard]] double t_cur() const { return stepper_.current_time(); }
  [[nodiscard]] const State& x_prev() const { return stepper_.previous_state(); }
  [[nodiscard]] const State& x_cur() const { return stepper_.current_state(); }

  [[nodiscard]] State at(double t) const {
    if (t >= t_cur()) return x_cur();
    if (t <= t_prev()) return x_prev();
    State x;
    stepper_.calc_state(t, x);
    return x;
  }

  /// Root of g inside the last step, given g(x_prev) and g(x_cur) of opposite sign
  /// (or g(x_cur) == 0).
  [[nodiscard]] double locate(const EventFn& g) const {
    double lo = t_prev();
    double hi = t_cur();
    double g_lo = g(x_prev());
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double g_mid = g(at(mid));
      if (std::abs(g_mid) <= opts_.event_tol) return mid;
      if ((g_mid < 0.0) == (g_lo < 0.0)) {
        lo = mid;
        g_lo = g_mid;
      } else {
        hi = mid;
      }
    }
    return hi;
  }

 private:
  using Stepper = odeint::result_of::make_dense_output<odeint::runge_kutta_dopri5<State>>::type;
  Rhs rhs_;
  IntegrationOptions opts_;
  Stepper stepper_;
};

/// Strict sign change between consecutive event values.
inline bool crossed(double before, double after) {
  return (before < 0.0 && after >= 0.0) || (before > 0.0 && after <= 0.0);
}

}  // namespace cmc::detail
