#include "cmc/ode_engine.hpp"

#include "dense_runner.hpp"

#include <algorithm>
#include <limits>

namespace cmc {

using detail::crossed;
using detail::DenseRunner;
using detail::EventFn;
using detail::State;

void IntegrationOptions::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) throw PreconditionError("tolerances must be positive");
  if (!(swap_threshold > 1.0) || !(hysteresis >= 0.0) || !(hysteresis < swap_threshold - 1.0)) {
    throw PreconditionError("swap threshold must exceed 1 and the hysteresis must leave it above 1");
  }
  if (!(max_length > 0.0) || !(sample_spacing > 0.0)) {
    throw PreconditionError("max_length and sample_spacing must be positive");
  }
}

const char* chart_name(ChartTag tag) {
  switch (tag) {
    case ChartTag::XGraph:
      return "xgraph";
    case ChartTag::YGraph:
      return "ygraph";
    case ChartTag::Angle:
      return "angle";
  }
  return "unknown";
}

namespace {

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Geometric state handed from one chart to the next. `normal` is the fixed
// surface normal (in the plane of the cross-section chart) with respect to
// which the target H holds.
struct Cursor {
  Vec2 p;
  Vec2 tangent;
  Vec2 normal;
  double s = 0.0;
};

struct HalfResult {
  std::vector<ProfileSample> samples;
  Vec2 end{0.0, 0.0};
  IntegrationStatus status = IntegrationStatus::Complete;
  std::string diagnostic;
};

struct Phase {
  ChartTag tag = ChartTag::XGraph;
  detail::Rhs rhs;
  EventFn stop;  // vertical tangent
  EventFn swap;  // leave this chart (upward crossing only)
  std::function<ProfileSample(const State&)> sample;
  std::function<Cursor(const State&)> cursor;
  State x0{};
};

enum class PhaseExit { Stop, Swap, Underflow, MaxLength };

struct PhaseOutcome {
  PhaseExit exit = PhaseExit::Stop;
  State state{};
  std::string diagnostic;
};

void record_step(const DenseRunner& run, const Phase& phase, double t_end, const IntegrationOptions& opts,
                 std::vector<ProfileSample>& out) {
  const double s0 = run.x_prev()[3];
  const State end = run.at(t_end);
  const double ds = end[3] - s0;
  const int n = std::max(1, static_cast<int>(std::ceil(ds / opts.sample_spacing)));
  for (int i = 1; i <= n; ++i) {
    const double t = run.t_prev() + (t_end - run.t_prev()) * static_cast<double>(i) / n;
    out.push_back(phase.sample(i == n ? end : run.at(t)));
  }
}

PhaseOutcome run_phase(const Phase& phase, const IntegrationOptions& opts, std::vector<ProfileSample>& out) {
  DenseRunner run(phase.rhs, opts, phase.x0);
  while (true) {
    try {
      run.step();
    } catch (const detail::StepUnderflow& e) {
      return {PhaseExit::Underflow, run.x_cur(), e.what()};
    }
    double t_event = std::numeric_limits<double>::infinity();
    PhaseExit kind = PhaseExit::Stop;
    if (phase.stop && crossed(phase.stop(run.x_prev()), phase.stop(run.x_cur()))) {
      t_event = run.locate(phase.stop);
      kind = PhaseExit::Stop;
    }
    if (phase.swap) {
      const double before = phase.swap(run.x_prev());
      const double after = phase.swap(run.x_cur());
      if (before < 0.0 && after >= 0.0) {
        const double t_swap = run.locate(phase.swap);
        if (t_swap < t_event) {
          t_event = t_swap;
          kind = PhaseExit::Swap;
        }
      }
    }
    if (std::isfinite(t_event)) {
      record_step(run, phase, t_event, opts, out);
      return {kind, run.at(t_event), {}};
    }
    record_step(run, phase, run.t_cur(), opts, out);
    if (run.x_cur()[3] > opts.max_length) {
      return {PhaseExit::MaxLength, run.x_cur(), "no vertical tangent within arc length " +
                                                     std::to_string(opts.max_length)};
    }
  }
}

using CurvatureFn = std::function<double(double, double, double)>;

CurvatureFn curvature_fn(const AxisSpec& axis, double H_left) {
  if (axis.axis == AxisKind::SolBase) {
    return [H_left](double x, double y, double th) { return sol_curve_curvature(x, y, th, H_left); };
  }
  return [axis, H_left](double x, double y, double th) { return curvature_for_tangent(axis, x, y, th, H_left); };
}

// x-graph: state (t, h, q = dir h', s), independent variable |t - t0|.
Phase xgraph_phase(const AxisSpec& axis, double H, const Cursor& c, const IntegrationOptions& opts) {
  const double dir = sign_of(c.tangent.x());
  const double eps = sign_of(c.normal.y());
  const double target = eps * H;
  const double thr = opts.swap_threshold;
  Phase ph;
  ph.tag = ChartTag::XGraph;
  ph.x0 = {c.p.x(), c.p.y(), c.tangent.y() / std::abs(c.tangent.x()), c.s};
  ph.rhs = [axis, dir, target](const State& x, State& dx) {
    dx[0] = dir;
    dx[1] = x[2];
    dx[2] = implicit_hpp(axis, {x[0], x[1], dir * x[2], target});
    dx[3] = std::sqrt(1.0 + x[2] * x[2]);
  };
  ph.swap = [thr](const State& x) { return x[2] * x[2] - thr * thr; };
  ph.sample = [dir](const State& x) { return ProfileSample{x[3], x[0], x[1], dir * x[2], ChartTag::XGraph}; };
  ph.cursor = [dir, eps](const State& x) {
    const double hp = dir * x[2];
    return Cursor{{x[0], x[1]}, Vec2(dir, x[2]).normalized(), eps * Vec2(-hp, 1.0).normalized(), x[3]};
  };
  return ph;
}

// Mirrored graph on the Sol base: (x, y) = (k, sy u), state (u, k, kp, s).
// The map (x, y) -> (sy y, x) is the restriction of an isometry that preserves
// the translation orbits, so k'' obeys the same ODE as h''.
Phase ygraph_phase(const AxisSpec& axis, double H, const Cursor& c, const IntegrationOptions& opts) {
  const double sy = sign_of(c.tangent.y());
  const double kp0 = c.tangent.x() / (sy * c.tangent.y());
  const double eps = sign_of(c.normal.x() - sy * kp0 * c.normal.y());
  const double target = eps * H;
  const double back = opts.swap_threshold - opts.hysteresis;
  Phase ph;
  ph.tag = ChartTag::YGraph;
  ph.x0 = {sy * c.p.y(), c.p.x(), kp0, c.s};
  ph.rhs = [axis, target](const State& x, State& dx) {
    dx[0] = 1.0;
    dx[1] = x[2];
    dx[2] = implicit_hpp(axis, {x[0], x[1], x[2], target});
    dx[3] = std::sqrt(1.0 + x[2] * x[2]);
  };
  ph.stop = [](const State& x) { return x[2]; };
  ph.swap = [back](const State& x) { return x[2] * x[2] * back * back - 1.0; };
  ph.sample = [sy](const State& x) {
    return ProfileSample{x[3], x[1], sy * x[0], sy / x[2], ChartTag::YGraph};
  };
  ph.cursor = [sy, eps](const State& x) {
    return Cursor{{x[1], sy * x[0]}, Vec2(x[2], sy).normalized(), eps * Vec2(1.0, -sy * x[2]).normalized(), x[3]};
  };
  return ph;
}

// Arc length with inclination angle: state (X, Y, theta, s).
Phase angle_phase(const AxisSpec& axis, double H, const Cursor& c) {
  const Vec2 left(-c.tangent.y(), c.tangent.x());
  const double side = sign_of(left.dot(c.normal));
  const CurvatureFn kappa = curvature_fn(axis, side * H);
  Phase ph;
  ph.tag = ChartTag::Angle;
  ph.x0 = {c.p.x(), c.p.y(), std::atan2(c.tangent.y(), c.tangent.x()), c.s};
  ph.rhs = [kappa](const State& x, State& dx) {
    dx[0] = std::cos(x[2]);
    dx[1] = std::sin(x[2]);
    dx[2] = kappa(x[0], x[1], x[2]);
    dx[3] = 1.0;
  };
  ph.stop = [](const State& x) { return std::cos(x[2]); };
  ph.sample = [](const State& x) {
    return ProfileSample{x[3], x[0], x[1], std::tan(x[2]), ChartTag::Angle};
  };
  ph.cursor = [side](const State& x) {
    const Vec2 t(std::cos(x[2]), std::sin(x[2]));
    return Cursor{{x[0], x[1]}, t, side * Vec2(-t.y(), t.x()), x[3]};
  };
  return ph;
}

HalfResult integrate_half(const AxisSpec& axis, double H, double a, double b, double dir,
                          const IntegrationOptions& opts) {
  HalfResult res;
  Cursor cur{{0.0, a}, Vec2(dir, dir * b).normalized(), Vec2(-b, 1.0).normalized(), 0.0};
  res.samples.push_back({0.0, 0.0, a, b, ChartTag::XGraph});
  const bool mirrored_graph = axis.axis == AxisKind::SolBase;
  ChartTag next = std::abs(b) > opts.swap_threshold ? (mirrored_graph ? ChartTag::YGraph : ChartTag::Angle)
                                                    : ChartTag::XGraph;
  for (int phase_count = 0; phase_count < 10000; ++phase_count) {
    Phase ph;
    switch (next) {
      case ChartTag::XGraph:
        ph = xgraph_phase(axis, H, cur, opts);
        break;
      case ChartTag::YGraph:
        ph = ygraph_phase(axis, H, cur, opts);
        break;
      case ChartTag::Angle:
        ph = angle_phase(axis, H, cur);
        break;
    }
    const PhaseOutcome out = run_phase(ph, opts, res.samples);
    cur = ph.cursor(out.state);
    switch (out.exit) {
      case PhaseExit::Stop:
        res.end = cur.p;
        res.samples.back().hp = std::numeric_limits<double>::infinity() * sign_of(res.samples.back().hp);
        return res;
      case PhaseExit::Swap:
        next = ph.tag == ChartTag::XGraph ? (mirrored_graph ? ChartTag::YGraph : ChartTag::Angle) : ChartTag::XGraph;
        break;
      case PhaseExit::Underflow:
        res.status = IntegrationStatus::StepUnderflow;
        res.diagnostic = out.diagnostic;
        res.end = cur.p;
        return res;
      case PhaseExit::MaxLength:
        res.status = IntegrationStatus::MaxLength;
        res.diagnostic = out.diagnostic;
        res.end = cur.p;
        return res;
    }
  }
  res.status = IntegrationStatus::MaxLength;
  res.diagnostic = "chart switching did not settle";
  res.end = cur.p;
  return res;
}

void check_profile_inputs(const AxisSpec& axis, double H, double a, double b, const IntegrationOptions& opts) {
  axis.validate();
  opts.validate();
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(H)) {
    throw PreconditionError("initial data must be finite");
  }
  if (!(H > axis.critical_H())) {
    throw PreconditionError("H = " + std::to_string(H) + " is not above the critical value " +
                            std::to_string(axis.critical_H()));
  }
}

void merge_status(ProfileCurve& c, const HalfResult& h, const char* side) {
  if (h.status != IntegrationStatus::Complete && c.status == IntegrationStatus::Complete) {
    c.status = h.status;
    c.diagnostic = std::string(side) + ": " + h.diagnostic;
  }
}

ProfileCurve build(const AxisSpec& axis, double H, double a, double b, const IntegrationOptions& opts,
                   bool both_sides) {
  ProfileCurve c;
  c.axis = axis;
  c.H = H;
  c.a = a;
  c.b = b;
  const HalfResult fwd = integrate_half(axis, H, a, b, +1.0, opts);
  merge_status(c, fwd, "forward");
  c.end_plus = fwd.end;
  c.Rplus = fwd.end.x();
  if (both_sides) {
    const HalfResult bwd = integrate_half(axis, H, a, b, -1.0, opts);
    merge_status(c, bwd, "backward");
    c.end_minus = bwd.end;
    c.Rminus = bwd.end.x();
    c.samples.reserve(fwd.samples.size() + bwd.samples.size());
    for (auto it = bwd.samples.rbegin(); it != bwd.samples.rend(); ++it) {
      if (it->t == 0.0) continue;
      ProfileSample s = *it;
      s.t = -s.t;
      c.samples.push_back(s);
    }
  } else {
    c.end_minus = {0.0, a};
    c.Rminus = 0.0;
  }
  c.samples.insert(c.samples.end(), fwd.samples.begin(), fwd.samples.end());
  return c;
}

ProfileCurve with_refinement(const AxisSpec& axis, double H, double a, double b, const IntegrationOptions& opts,
                             bool both_sides) {
  ProfileCurve c = build(axis, H, a, b, opts, both_sides);
  if (!opts.refine_endpoints || !c.complete()) return c;
  IntegrationOptions tight = opts;
  tight.rtol /= 100.0;
  tight.atol /= 100.0;
  tight.refine_endpoints = false;
  const ProfileCurve fine = build(axis, H, a, b, tight, both_sides);
  if (!fine.complete()) return c;
  c.endpoint_shift = std::max((c.end_plus - fine.end_plus).norm(), (c.end_minus - fine.end_minus).norm());
  c.end_plus = fine.end_plus;
  c.end_minus = fine.end_minus;
  c.Rplus = fine.Rplus;
  c.Rminus = fine.Rminus;
  return c;
}

}  // namespace

ProfileCurve integrate_profile(const AxisSpec& axis, double H, double a, double b, const IntegrationOptions& opts) {
  check_profile_inputs(axis, H, a, b, opts);
  return with_refinement(axis, H, a, b, opts, true);
}

ProfileCurve integrate_forward_half(const AxisSpec& axis, double H, double a, double b,
                                    const IntegrationOptions& opts) {
  check_profile_inputs(axis, H, a, b, opts);
  return with_refinement(axis, H, a, b, opts, false);
}

MonotonicityReport monotonicity_report(const ProfileCurve& curve) {
  MonotonicityReport rep;
  int last_sign = 0;
  double last_x = 0.0;
  bool seen_first = false;
  for (const ProfileSample& s : curve.samples) {
    if (!std::isfinite(s.hp) || s.hp == 0.0) continue;
    const int sg = s.hp > 0.0 ? 1 : -1;
    if (seen_first && sg != last_sign) {
      ++rep.sign_changes;
      if (sg < 0) ++rep.violations;
      rep.t0 = 0.5 * (last_x + s.x);
    }
    last_sign = sg;
    last_x = s.x;
    seen_first = true;
  }
  rep.valid = rep.sign_changes == 1 && rep.violations == 0;
  if (rep.valid) {
    rep.message = "h' < 0 on (R-, t0), h' > 0 on (t0, R+)";
  } else {
    rep.message = "h' has " + std::to_string(rep.sign_changes) + " sign changes (" +
                  std::to_string(rep.violations) + " from + to -); tolerance failure suspected";
  }
  return rep;
}

namespace {

EventFn event_function(EventKind kind) {
  switch (kind) {
    case EventKind::CrossYAxis:
      return [](const State& x) { return x[0]; };
    case EventKind::CrossDiagonalPlus:
      return [](const State& x) { return x[0] - x[1]; };
    case EventKind::CrossDiagonalMinus:
      return [](const State& x) { return x[0] + x[1]; };
    case EventKind::DerivativeZero:
      return [](const State& x) { return std::sin(x[2]); };
    case EventKind::Blowup:
      return [](const State& x) { return std::cos(x[2]); };
  }
  throw PreconditionError("unknown event kind");
}

PlanarState to_planar(const State& x) { return {x[3], x[0], x[1], x[2]}; }

struct AngleRun {
  PlanarCurve curve;
  std::vector<PlanarState> evaluated;
  std::vector<double> curvature;
};

// Unit-speed integration in the chart of `axis`. States at the arc lengths in
// `eval_at` (ascending) are collected on the way.
AngleRun run_angle(const AxisSpec& axis, double H_left, const Vec2& p0, double theta0,
                   const std::vector<EventSpec>& events, const IntegrationOptions& opts, const HitCallback& on_hit,
                   const std::vector<double>& eval_at = {}) {
  const CurvatureFn kappa = curvature_fn(axis, H_left);
  auto rhs = [kappa](const State& x, State& dx) {
    dx[0] = std::cos(x[2]);
    dx[1] = std::sin(x[2]);
    dx[2] = kappa(x[0], x[1], x[2]);
    dx[3] = 1.0;
  };
  std::vector<EventFn> fns;
  fns.reserve(events.size());
  for (const EventSpec& e : events) fns.push_back(event_function(e.kind));

  AngleRun out;
  PlanarCurve& c = out.curve;
  DenseRunner run(rhs, opts, State{p0.x(), p0.y(), theta0, 0.0});
  c.samples.push_back({0.0, p0.x(), p0.y(), theta0});
  std::size_t next_eval = 0;
  auto collect = [&](double upto) {
    const double slack = 1e-12 * std::max(1.0, std::abs(upto));
    while (next_eval < eval_at.size() && eval_at[next_eval] <= upto + slack) {
      const State x = run.at(std::min(eval_at[next_eval], upto));
      out.evaluated.push_back(to_planar(x));
      out.curvature.push_back(kappa(x[0], x[1], x[2]));
      ++next_eval;
    }
  };
  auto sample_to = [&](double t_end) {
    const double t0 = run.t_prev();
    const int n = std::max(1, static_cast<int>(std::ceil((t_end - t0) / opts.sample_spacing)));
    for (int i = 1; i <= n; ++i) {
      c.samples.push_back(to_planar(run.at(t0 + (t_end - t0) * static_cast<double>(i) / n)));
    }
  };

  while (true) {
    try {
      run.step();
    } catch (const detail::StepUnderflow& e) {
      c.status = IntegrationStatus::StepUnderflow;
      c.diagnostic = e.what();
      return out;
    }
    struct Pending {
      double t;
      std::size_t index;
    };
    std::vector<Pending> pending;
    for (std::size_t i = 0; i < fns.size(); ++i) {
      if (crossed(fns[i](run.x_prev()), fns[i](run.x_cur()))) pending.push_back({run.locate(fns[i]), i});
    }
    std::sort(pending.begin(), pending.end(), [](const Pending& l, const Pending& r) { return l.t < r.t; });
    for (const Pending& p : pending) {
      EventHit hit{events[p.index].kind, to_planar(run.at(p.t))};
      hit.state.s = p.t;
      c.hits.push_back(hit);
      const bool stop = events[p.index].terminal || (on_hit && on_hit(hit));
      if (stop) {
        sample_to(p.t);
        collect(p.t);
        return out;
      }
    }
    sample_to(run.t_cur());
    collect(run.t_cur());
    if (next_eval >= eval_at.size() && !eval_at.empty() && events.empty()) return out;
    if (run.t_cur() > opts.max_length) {
      c.status = IntegrationStatus::MaxLength;
      c.diagnostic = "arc length cap " + std::to_string(opts.max_length) + " reached";
      return out;
    }
  }
}

}  // namespace

PlanarCurve integrate_planar_curve(const AxisSpec& axis, double H, const Vec2& p0, double theta0,
                                   const std::vector<EventSpec>& events, const IntegrationOptions& opts,
                                   const HitCallback& on_hit) {
  axis.validate();
  opts.validate();
  if (!axis.is_sol()) throw PreconditionError("integrate_planar_curve: Sol axes only");
  if (!std::isfinite(H) || !p0.allFinite() || !std::isfinite(theta0)) {
    throw PreconditionError("integrate_planar_curve: non-finite initial data");
  }
  PlanarCurve c = run_angle(axis, H, p0, theta0, events, opts, on_hit).curve;
  if (c.hits.empty() && c.status == IntegrationStatus::MaxLength) {
    throw SolverError("integrate_planar_curve: no event within arc length " + std::to_string(opts.max_length));
  }
  return c;
}

ArclengthProfile arclength_profile(const AxisSpec& axis, double H, double a, const std::vector<double>& fractions,
                                   const IntegrationOptions& opts) {
  check_profile_inputs(axis, H, a, 0.0, opts);
  const std::vector<EventSpec> vertical{{EventKind::Blowup, true}};
  const AngleRun first = run_angle(axis, H, {0.0, a}, 0.0, vertical, opts, {});
  if (first.curve.hits.empty()) {
    throw SolverError("arclength_profile: no vertical tangent (" + first.curve.diagnostic + ")");
  }
  ArclengthProfile out;
  out.end = first.curve.hits.back().state;
  out.L = out.end.s;

  std::vector<double> times;
  times.reserve(fractions.size());
  for (double f : fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw PreconditionError("arclength_profile: fractions must lie in [0, 1]");
    times.push_back(f * out.L);
  }
  std::vector<std::size_t> order(times.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return times[l] < times[r]; });
  std::vector<double> sorted;
  sorted.reserve(times.size());
  for (std::size_t i : order) sorted.push_back(times[i]);

  const AngleRun second = run_angle(axis, H, {0.0, a}, 0.0, vertical, opts, {}, sorted);
  if (second.evaluated.size() != sorted.size()) {
    throw SolverError("arclength_profile: evaluation points beyond the computed curve");
  }
  out.at.resize(times.size());
  out.curvature.resize(times.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.at[order[k]] = second.evaluated[k];
    out.curvature[order[k]] = second.curvature[k];
  }
  return out;
}

}  // namespace cmc
