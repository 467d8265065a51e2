#include "cmc/shooting.hpp"

#include <algorithm>
#include <future>
#include <sstream>

namespace cmc {

namespace {

constexpr double kTheta0 = 3.0 * kPi / 4.0;

double wrap_angle(double a) {
  double w = std::fmod(a + kPi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  return w - kPi;
}

std::string format_samples(const std::vector<BracketPoint>& samples) {
  std::ostringstream os;
  os.precision(6);
  for (const auto& s : samples) {
    os << " (" << s.parameter << ", ";
    if (std::isnan(s.objective)) {
      os << "undefined";
    } else {
      os << s.objective;
    }
    os << ")";
  }
  return os.str();
}

}  // namespace

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::Embedded:
      return "embedded";
    case Classification::Immersed:
      return "immersed";
    case Classification::Failed:
      return "failed";
  }
  return "unknown";
}

const char* aim_name(Aim aim) { return aim == Aim::YAxis ? "y-axis" : "diag-minus"; }

void RootOptions::validate() const {
  if (!(objective_tol > 0.0) || !(width_tol > 0.0) || max_iterations < 1 || grid < 1) {
    throw PreconditionError("invalid root-finding options");
  }
}

RootOutcome bracketed_root(const Objective& f, double lo, double flo, double hi, double fhi, const RootOptions& opts) {
  if (!((flo < 0.0 && fhi > 0.0) || (flo > 0.0 && fhi < 0.0))) {
    throw BracketError("bracket endpoints do not straddle a root");
  }
  RootOutcome out;
  out.history.push_back({lo, flo});
  out.history.push_back({hi, fhi});
  double best_x = std::abs(flo) < std::abs(fhi) ? lo : hi;
  double best_f = std::abs(flo) < std::abs(fhi) ? flo : fhi;
  // Illinois bookkeeping: which side was retained last time.
  int retained = 0;
  double wlo = flo;
  double whi = fhi;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const double width = hi - lo;
    if (std::abs(best_f) < opts.objective_tol || width < opts.width_tol) {
      out.converged = true;
      break;
    }
    double x = 0.5 * (lo + hi);
    if (width < opts.secant_width) {
      const double xs = hi - whi * (hi - lo) / (whi - wlo);
      if (xs > lo && xs < hi) x = xs;
    }
    const std::optional<double> fx = f(x);
    ++out.evaluations;
    if (!fx) {
      out.history.push_back({x, std::nan("")});
      throw BracketError("objective undefined at " + std::to_string(x) +
                         " inside the bracket (the selected crossing changed); split the bracket:" +
                         format_samples(out.history));
    }
    out.history.push_back({x, *fx});
    if (std::abs(*fx) < std::abs(best_f)) {
      best_x = x;
      best_f = *fx;
    }
    if (*fx == 0.0) {
      out.converged = true;
      break;
    }
    if ((*fx < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = *fx;
      wlo = *fx;
      if (retained == +1) whi *= 0.5;
      retained = +1;
    } else {
      hi = x;
      fhi = *fx;
      whi = *fx;
      if (retained == -1) wlo *= 0.5;
      retained = -1;
    }
  }
  if (!out.converged) out.converged = std::abs(best_f) < opts.objective_tol;
  out.x = best_x;
  out.fx = best_f;
  return out;
}

ScanResult scan_bracket(const Objective& f, double lo, double hi, int grid, std::optional<double> prefer) {
  if (!(hi > lo)) throw PreconditionError("bracket must satisfy lo < hi");
  if (grid < 1) throw PreconditionError("grid must be positive");
  ScanResult res;
  std::vector<std::optional<double>> vals;
  for (int i = 0; i <= grid; ++i) {
    const double x = i == grid ? hi : lo + (hi - lo) * i / grid;
    const auto v = f(x);
    vals.push_back(v);
    res.samples.push_back({x, v ? *v : std::nan("")});
  }
  double best_dist = std::numeric_limits<double>::infinity();
  bool have = false;
  for (int i = 0; i < grid; ++i) {
    const auto& a = vals[i];
    const auto& b = vals[i + 1];
    if (!a || !b) continue;
    const bool change = (*a < 0.0 && *b >= 0.0) || (*a > 0.0 && *b <= 0.0) || *a == 0.0;
    if (!change) continue;
    ++res.sign_changes;
    const double mid = 0.5 * (res.samples[i].parameter + res.samples[i + 1].parameter);
    const double dist = prefer ? std::abs(mid - *prefer) : static_cast<double>(i);
    if (!have || dist < best_dist) {
      have = true;
      best_dist = dist;
      res.lo = res.samples[i].parameter;
      res.hi = res.samples[i + 1].parameter;
      res.flo = *a;
      res.fhi = *b;
    }
  }
  if (!have) {
    throw BracketError("no sign change of the objective on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                       "]; sampled values:" + format_samples(res.samples));
  }
  return res;
}

namespace {

// Near the critical mean curvature the profiles grow very tall; lengthen the
// cap a few times before giving up on a seed.
constexpr int kLengthRetries = 2;
constexpr double kLengthGrowth = 8.0;

template <class Integrate>
ProfileCurve with_length_retries(const IntegrationOptions& opts, Integrate&& run) {
  IntegrationOptions o = opts;
  ProfileCurve c = run(o);
  for (int k = 0; k < kLengthRetries && c.status == IntegrationStatus::MaxLength; ++k) {
    o.max_length *= kLengthGrowth;
    c = run(o);
  }
  return c;
}

}  // namespace

std::optional<double> zero_height_objective(const AxisSpec& axis, double H, double a, const IntegrationOptions& opts) {
  try {
    const ProfileCurve c = with_length_retries(
        opts, [&](const IntegrationOptions& o) { return integrate_forward_half(axis, H, a, 0.0, o); });
    if (!c.complete()) return std::nullopt;
    return c.height_at_Rplus();
  } catch (const SolverError&) {
    return std::nullopt;
  }
}

namespace {

// Root search shared by the zero-height and immersed procedures: scan, then
// bisect inside the selected subinterval. Exact zeros on the grid are accepted.
RootOutcome scan_and_solve(const Objective& f, double lo, double hi, const RootOptions& ropts,
                           std::optional<double> prefer, std::vector<BracketPoint>& history, int& sign_changes) {
  const ScanResult scan = scan_bracket(f, lo, hi, ropts.grid, prefer);
  sign_changes = scan.sign_changes;
  history.insert(history.end(), scan.samples.begin(), scan.samples.end());
  if (scan.flo == 0.0 || scan.fhi == 0.0) {
    RootOutcome r;
    r.x = scan.flo == 0.0 ? scan.lo : scan.hi;
    r.fx = 0.0;
    r.converged = true;
    return r;
  }
  RootOutcome r = bracketed_root(f, scan.lo, scan.flo, scan.hi, scan.fhi, ropts);
  r.evaluations += ropts.grid + 1;
  history.insert(history.end(), r.history.begin(), r.history.end());
  return r;
}

}  // namespace

ZeroHeightSolution find_zero_height(const AxisSpec& axis, double H, std::optional<std::pair<double, double>> bracket,
                                    const RootOptions& ropts, const IntegrationOptions& iopts) {
  axis.validate();
  ropts.validate();
  if (!(H > axis.critical_H())) throw PreconditionError("H must exceed the critical mean curvature");
  const Objective f = [&](double a) { return zero_height_objective(axis, H, a, iopts); };

  double lo = bracket ? bracket->first : -2.0;
  double hi = bracket ? bracket->second : 0.0;
  ZeroHeightSolution sol;
  ShootingResult& res = sol.result;
  RootOutcome root;
  int sign_changes = 0;
  while (true) {
    try {
      root = scan_and_solve(f, lo, hi, ropts, std::nullopt, res.history, sign_changes);
      break;
    } catch (const BracketError&) {
      // only the new segment is scanned
      if (bracket || lo <= -1024.0) throw;
      hi = lo;
      lo *= 2.0;
    }
  }
  res.parameter = root.x;
  res.residual = std::abs(root.fx);
  res.evaluations = root.evaluations;
  res.converged = root.converged;
  sol.profile = with_length_retries(
      iopts, [&](const IntegrationOptions& o) { return integrate_profile(axis, H, root.x, 0.0, o); });
  res.T = sol.profile.Rplus;
  res.symmetry_residual = axis.axis == AxisKind::SolBase ? std::abs(sol.profile.Rplus + root.x)
                                                         : std::abs(sol.profile.Rplus + sol.profile.Rminus);
  res.turn = 1;
  res.classification = res.converged && sol.profile.complete() ? Classification::Embedded : Classification::Failed;
  if (sign_changes > 1) {
    res.message = std::to_string(sign_changes) + " sign changes on the scan grid; the first was used";
  }
  return sol;
}

double extension_turn(const EventHit& hit, double theta0, Aim aim) {
  const double n = aim == Aim::YAxis ? 8.0 : 4.0;
  const double line = aim == Aim::YAxis ? kPi / 2.0 : 3.0 * kPi / 4.0;
  const double th = hit.state.theta;
  const double reflected = 2.0 * line - th;
  const double ext = wrap_angle(reflected + kPi - th);
  return (n * (th - theta0) + 0.5 * n * ext) / (2.0 * kPi);
}

ImmersedShot shoot_immersed(double H, double d, int target_turn, Aim aim, const IntegrationOptions& opts) {
  ImmersedShot shot;
  const EventKind kind = aim == Aim::YAxis ? EventKind::CrossYAxis : EventKind::CrossDiagonalMinus;
  bool overshoot = false;
  const HitCallback on_hit = [&](const EventHit& hit) {
    const double turn = extension_turn(hit, kTheta0, aim);
    if (std::abs(turn - target_turn) < 0.5) {
      shot.found = true;
      shot.hit = hit;
      shot.turn_estimate = turn;
      return true;
    }
    if (turn > target_turn + 2.0) {
      overshoot = true;
      return true;
    }
    return false;
  };
  try {
    shot.curve = integrate_planar_curve(AxisSpec::sol_base(), H, {d, d}, kTheta0, {{kind, false}}, opts, on_hit);
  } catch (const SolverError&) {
    shot.found = false;
    return shot;
  }
  if (overshoot || !shot.found) {
    shot.found = false;
    return shot;
  }
  const double th = shot.hit.state.theta;
  shot.defect = aim == Aim::YAxis ? std::sin(th) : (std::cos(th) - std::sin(th)) / std::numbers::sqrt2;
  return shot;
}

ClosedPlaneCurve immersed_closed_curve(double H, double d, int target_turn, Aim aim, const IntegrationOptions& opts) {
  const ImmersedShot shot = shoot_immersed(H, d, target_turn, aim, opts);
  if (!shot.found) throw SolverError("no crossing with the requested turning number");
  const CurvePortion portion = portion_from_planar(shot.curve, shot.hit);
  const auto gens = section_maps({sol::Isometry::reflect_xz(), sol::Isometry::reflect_yz(),
                                  sol::Isometry::rotate_pi_diag(+1), sol::Isometry::rotate_pi_diag(-1)});
  return extend_by_symmetry(portion, gens);
}

ImmersedSolution find_immersed(double H, int target_turn, Aim aim, std::pair<double, double> bracket,
                               const RootOptions& ropts, const IntegrationOptions& iopts) {
  ropts.validate();
  if (!(H > 0.0)) throw PreconditionError("H must be positive");
  if (target_turn < 1 || target_turn % 4 != 1) {
    throw PreconditionError("target turning number must be 1 mod 4, got " + std::to_string(target_turn));
  }
  const Objective f = [&](double d) -> std::optional<double> {
    const ImmersedShot s = shoot_immersed(H, d, target_turn, aim, iopts);
    if (!s.found) return std::nullopt;
    return s.defect;
  };
  ImmersedSolution sol;
  ShootingResult& res = sol.result;
  int sign_changes = 0;
  const RootOutcome root = scan_and_solve(f, bracket.first, bracket.second, ropts,
                                          0.5 * (bracket.first + bracket.second), res.history, sign_changes);
  res.parameter = root.x;
  res.residual = std::abs(root.fx);
  res.evaluations = root.evaluations;
  res.converged = root.converged;
  if (sign_changes > 1) {
    res.message = std::to_string(sign_changes) + " sign changes on the scan grid; the one nearest the centre was used";
  }
  const ImmersedShot shot = shoot_immersed(H, root.x, target_turn, aim, iopts);
  res.T = shot.hit.state.s;
  try {
    sol.curve = extend_by_symmetry(
        portion_from_planar(shot.curve, shot.hit),
        section_maps({sol::Isometry::reflect_xz(), sol::Isometry::reflect_yz(), sol::Isometry::rotate_pi_diag(+1),
                      sol::Isometry::rotate_pi_diag(-1)}));
    res.turn = turning_number(sol.curve).turn;
    sol.self_intersections = self_intersections(sol.curve).count;
    res.classification = sol.self_intersections == 0 ? Classification::Embedded : Classification::Immersed;
  } catch (const Error& e) {
    res.classification = Classification::Failed;
    res.message += std::string(res.message.empty() ? "" : "; ") + e.what();
  }
  if (!res.converged) res.classification = Classification::Failed;
  return sol;
}

ClosedPlaneCurve embedded_closed_curve(const ProfileCurve& profile) {
  Mat2 reflect = Mat2::Identity();
  reflect(1, 1) = -1.0;
  return extend_by_symmetry(portion_from_profile(profile), {reflect});
}

namespace {

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
  bool inside = false;
  const std::size_t n = poly.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[i + 1];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

FamilyMember solve_member(const AxisSpec& axis, double H, const RootOptions& ropts, const IntegrationOptions& iopts) {
  FamilyMember m;
  m.H = H;
  try {
    ZeroHeightSolution z = find_zero_height(axis, H, std::nullopt, ropts, iopts);
    m.result = z.result;
    m.profile = std::move(z.profile);
    m.curve = embedded_closed_curve(m.profile);
    for (const Vec2& v : m.curve.vertices) {
      m.max_abs_x = std::max(m.max_abs_x, std::abs(v.x()));
      m.max_abs_y = std::max(m.max_abs_y, std::abs(v.y()));
    }
    m.diameter = m.profile.Rplus - m.profile.Rminus;
    m.ok = m.result.converged;
    if (!m.ok) m.error = "not converged";
  } catch (const std::exception& e) {
    m.ok = false;
    m.error = e.what();
  }
  return m;
}

}  // namespace

bool strictly_inside(const ClosedPlaneCurve& inner, const ClosedPlaneCurve& outer) {
  for (const Vec2& v : inner.vertices) {
    if (!point_in_polygon(v, outer.vertices)) return false;
  }
  for (const Vec2& v : outer.vertices) {
    if (point_in_polygon(v, inner.vertices)) return false;
  }
  return true;
}

FamilySweep sweep_family(const AxisSpec& axis, const std::vector<double>& H_list, const RootOptions& ropts,
                         const IntegrationOptions& iopts, bool parallel) {
  FamilySweep sweep;
  if (parallel) {
    std::vector<std::future<FamilyMember>> jobs;
    jobs.reserve(H_list.size());
    for (double H : H_list) {
      jobs.push_back(std::async(std::launch::async, [&, H] { return solve_member(axis, H, ropts, iopts); }));
    }
    for (auto& j : jobs) sweep.members.push_back(j.get());
  } else {
    for (double H : H_list) sweep.members.push_back(solve_member(axis, H, ropts, iopts));
  }

  std::vector<const FamilyMember*> ok;
  for (const auto& m : sweep.members) {
    if (m.ok) ok.push_back(&m);
  }
  std::sort(ok.begin(), ok.end(), [](const FamilyMember* a, const FamilyMember* b) { return a->H < b->H; });
  sweep.nested = ok.size() == sweep.members.size();
  std::ostringstream msg;
  if (!sweep.nested) msg << "some members failed; ";
  for (std::size_t i = 1; i < ok.size(); ++i) {
    const FamilyMember& outer = *ok[i - 1];
    const FamilyMember& inner = *ok[i];
    const bool shrinks = inner.max_abs_x < outer.max_abs_x && inner.max_abs_y < outer.max_abs_y;
    const bool inside = strictly_inside(inner.curve, outer.curve);
    if (!shrinks || !inside) {
      sweep.nested = false;
      msg << "H=" << inner.H << " is not strictly inside H=" << outer.H << "; ";
    }
  }
  sweep.nesting_message = sweep.nested ? "strictly nested" : msg.str();
  return sweep;
}

ContinuationReport continue_immersed_branch(int target_turn, Aim aim, double H0, std::pair<double, double> bracket0,
                                            double H_goal, const ContinuationOptions& copts, const RootOptions& ropts,
                                            const IntegrationOptions& iopts) {
  ContinuationReport rep;
  const ImmersedSolution first = find_immersed(H0, target_turn, aim, bracket0, ropts, iopts);
  if (!first.result.converged) throw SolverError("continuation: no converged start solution");
  rep.steps.push_back({H0, first.result.parameter, first.result.residual});

  double dH = copts.dH;
  while (rep.steps.back().H < H_goal - 1e-12) {
    const ContinuationStep& last = rep.steps.back();
    const double H = std::min(last.H + dH, H_goal);
    const double step = H - last.H;
    double slope = 0.0;
    if (rep.steps.size() >= 2) {
      const ContinuationStep& prev = rep.steps[rep.steps.size() - 2];
      slope = (last.d - prev.d) / (last.H - prev.H);
    }
    const double predicted = last.d + slope * step;
    const double w = std::max(copts.window, 0.5 * std::abs(slope * step));
    const Objective f = [&](double d) -> std::optional<double> {
      const ImmersedShot s = shoot_immersed(H, d, target_turn, aim, iopts);
      if (!s.found) return std::nullopt;
      return s.defect;
    };
    RootOptions local = ropts;
    local.grid = copts.grid;
    std::vector<BracketPoint> history;
    int changes = 0;
    try {
      const RootOutcome r = scan_and_solve(f, predicted - w, predicted + w, local, predicted, history, changes);
      if (!r.converged) throw BracketError("not converged");
      rep.steps.push_back({H, r.x, std::abs(r.fx)});
      dH = std::min(dH * 1.5, copts.dH_max);
    } catch (const BracketError& e) {
      dH *= 0.5;
      if (dH < copts.dH_min) {
        rep.stop_reason = "bracket lost beyond H = " + std::to_string(last.H) + ": " + e.what();
        break;
      }
    }
  }
  rep.last_H = rep.steps.back().H;
  rep.last_d = rep.steps.back().d;
  rep.reached_goal = rep.last_H >= H_goal - 1e-12;
  if (rep.reached_goal) rep.stop_reason = "reached H = " + std::to_string(H_goal);

  try {
    const ClosedPlaneCurve curve = immersed_closed_curve(rep.last_H, rep.last_d, target_turn, aim, iopts);
    rep.last_turn = turning_number(curve).turn;
    const ZeroHeightSolution emb = find_zero_height(AxisSpec::sol_base(), rep.last_H, std::nullopt, ropts, iopts);
    rep.distance_to_embedded = hausdorff_distance(curve.vertices, embedded_closed_curve(emb.profile).vertices);
  } catch (const Error& e) {
    rep.stop_reason += std::string("; final curve analysis failed: ") + e.what();
  }
  return rep;
}

}  // namespace cmc
