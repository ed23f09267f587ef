#include "pushrec/planner.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "pushrec/dynamics.hpp"
#include "pushrec/errors.hpp"

namespace pushrec {

namespace {

int whole_steps(double span, double h, const char* what) {
  const double n = span / h;
  const double r = std::round(n);
  if (std::abs(n - r) > 1e-9 * (1.0 + std::abs(r)))
    throw InvalidParameter(std::string(what) + " must be a whole number of grid steps");
  return static_cast<int>(r);
}

double side_sign(Foothold::Side s) {
  return s == Foothold::Side::Left ? 1.0 : -1.0;
}

Foothold::Side other_side(Foothold::Side s) {
  return s == Foothold::Side::Left ? Foothold::Side::Right : Foothold::Side::Left;
}

}  // namespace

void StepParams::validate() const {
  if (!(t_ss > 0.0)) throw PlanningError("t_ss must be positive");
  if (!(t_ds > 0.0)) throw PlanningError("t_ds must be positive");
  if (!(t_init >= 0.0)) throw PlanningError("t_init must be >= 0");
  if (std::abs(l_sx) > max_step_length)
    throw PlanningError("step length exceeds max_step_length");
  if (l_sy < min_feet_distance)
    throw PlanningError("step width below min_feet_distance");
}

FootholdSequence plan_footsteps(const StepParams& step, int n_steps,
                                const StartPose& start) {
  if (n_steps < 1) throw RejectedInput("plan_footsteps: n_steps must be >= 1");
  step.validate();
  FootholdSequence out;
  out.reserve(static_cast<size_t>(n_steps));
  Foothold::Side side = start.first_swing;
  for (int i = 0; i < n_steps; ++i) {
    Foothold f;
    f.x = start.x + (i + 1) * step.l_sx;
    f.y = start.y + side_sign(side) * step.l_sy / 2.0;
    f.side = side;
    out.push_back(f);
    side = other_side(side);
  }
  return out;
}

FootholdSequence support_sequence(const FootholdSequence& landings,
                                  const StepParams& step, const StartPose& start) {
  if (landings.empty()) throw RejectedInput("support_sequence: empty landing list");
  Foothold stance;
  stance.side = other_side(landings.front().side);
  stance.x = start.x;
  stance.y = start.y + side_sign(stance.side) * step.l_sy / 2.0;
  FootholdSequence supports;
  supports.reserve(landings.size() + 1);
  supports.push_back(stance);
  supports.insert(supports.end(), landings.begin(), landings.end());
  return supports;
}

ZmpPoint zmp_reference(const StepParams& step, const FootholdSequence& supports,
                       int step_index, double t) {
  if (t < 0.0 || t >= step.duration())
    throw RejectedInput("zmp_reference: t outside [0, t_ss + t_ds)");
  if (step_index < 0 || step_index + 1 >= static_cast<int>(supports.size()))
    throw RejectedInput("zmp_reference: step_index outside the support sequence");
  const Foothold& cur = supports[static_cast<size_t>(step_index)];
  if (t < step.t_ss) return {cur.x, cur.y};
  const Foothold& next = supports[static_cast<size_t>(step_index) + 1];
  const double s = (t - step.t_ss) / step.t_ds;
  return {cur.x + (next.x - cur.x) * s, cur.y + (next.y - cur.y) * s};
}

SwingSample swing_trajectory(const SwingProfile& profile, const Foothold& from,
                             const Foothold& to, double t) {
  if (!(profile.t_ss > 0.0))
    throw InvalidParameter("swing_trajectory: profile t_ss must be positive");
  if (t < 0.0 || t > profile.t_ss)
    throw RejectedInput("swing_trajectory: t outside [0, t_ss]");
  const double T = profile.t_ss;
  const double u = t / T;

  // x: quintic 10u^3 - 15u^4 + 6u^5 between the footholds
  const double s = u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
  const double s_dd = (60.0 * u - 180.0 * u * u + 120.0 * u * u * u) / (T * T);
  // z: quartic bump 16 u^2 (1-u)^2, apex at midswing
  const double b = 16.0 * u * u * (1.0 - u) * (1.0 - u);
  const double b_dd = 32.0 * (1.0 - 6.0 * u + 6.0 * u * u) / (T * T);

  SwingSample out;
  out.x_s = from.x + (to.x - from.x) * s;
  out.x_s_dd = (to.x - from.x) * s_dd;
  out.z_s = profile.h_apex * b;
  out.z_s_dd = profile.h_apex * b_dd;
  return out;
}

const char* walk_phase_name(WalkPhase p) {
  switch (p) {
    case WalkPhase::Idle: return "Idle";
    case WalkPhase::Initialize: return "Initialize";
    case WalkPhase::SingleSupport: return "SingleSupport";
    case WalkPhase::DoubleSupport: return "DoubleSupport";
  }
  return "?";
}

WalkState advance_state_machine(WalkState current, double dt, const StepParams& step) {
  if (!(dt > 0.0)) throw RejectedInput("advance_state_machine: dt must be positive");
  WalkState s = current;
  const double eps = dt / 2.0;
  switch (s.phase) {
    case WalkPhase::Idle:
      if (s.walk_commanded) {
        s.phase = WalkPhase::Initialize;
        s.t = 0.0;
      }
      return s;
    case WalkPhase::Initialize:
      s.t += dt;
      if (s.t >= step.t_init - eps) {
        s.phase = WalkPhase::SingleSupport;
        s.t = 0.0;
      }
      return s;
    case WalkPhase::SingleSupport:
      s.t += dt;
      if (s.t >= step.t_ss - eps) s.phase = WalkPhase::DoubleSupport;
      return s;
    case WalkPhase::DoubleSupport:
      s.t += dt;
      if (s.t >= step.duration() - eps) {
        s.phase = WalkPhase::SingleSupport;
        s.t = std::max(0.0, s.t - step.duration());
        s.support = other_side(s.support);
        s.step_index += 1;
      }
      return s;
  }
  return s;
}

std::vector<double> solve_com_bvp(const std::vector<double>& p,
                                  const std::vector<double>& f, double h,
                                  double om2, double x_begin, double x_end) {
  const size_t n = p.size();
  if (n < 3 || f.size() != n)
    throw RejectedInput("solve_com_bvp: grids must match and have >= 3 points");
  const size_t last = n - 1;
  const double diag = -(2.0 + om2 * h * h);

  std::vector<double> d(n, 0.0);
  for (size_t k = 1; k < last; ++k) d[k] = h * h * (f[k] - om2 * p[k]);
  d[1] -= x_begin;
  d[last - 1] -= x_end;

  // Thomas forward sweep on the interior unknowns
  std::vector<double> cp(n, 0.0), dp(n, 0.0);
  cp[1] = 1.0 / diag;
  dp[1] = d[1] / diag;
  for (size_t k = 2; k < last; ++k) {
    const double m = diag - cp[k - 1];
    cp[k] = 1.0 / m;
    dp[k] = (d[k] - dp[k - 1]) / m;
  }

  std::vector<double> x(n, 0.0);
  x[0] = x_begin;
  x[last] = x_end;
  x[last - 1] = dp[last - 1];
  for (size_t k = last - 2; k >= 1; --k) x[k] = dp[k] - cp[k] * x[k + 1];
  return x;
}

namespace {

// Per-part positions of the hanging leg: two-link chain from the hip to the
// swing ankle, knee bent forward; COMs at the link midpoints, foot mass at
// the ankle point.
struct LegParts {
  double x[3];
  double z[3];
};

LegParts leg_part_positions(double hip_x, double hip_z, double ankle_x,
                            double ankle_z, const RobotParams& p) {
  double dx = ankle_x - hip_x;
  double dz = ankle_z - hip_z;
  double d = std::hypot(dx, dz);
  const double d_max = p.l_1 + p.l_2 - 1e-9;
  const double d_min = std::abs(p.l_1 - p.l_2) + 1e-9;
  double ux, uz;
  if (d < 1e-12) {
    ux = 0.0;
    uz = -1.0;
    d = d_min;
  } else {
    ux = dx / d;
    uz = dz / d;
    d = std::clamp(d, d_min, d_max);
  }
  double cos_a = (p.l_1 * p.l_1 + d * d - p.l_2 * p.l_2) / (2.0 * p.l_1 * d);
  cos_a = std::clamp(cos_a, -1.0, 1.0);
  const double sin_a = std::sqrt(std::max(0.0, 1.0 - cos_a * cos_a));
  // perpendicular chosen so the knee bends toward +x (direction of travel)
  const double knee_x = hip_x + p.l_1 * (cos_a * ux - sin_a * uz);
  const double knee_z = hip_z + p.l_1 * (cos_a * uz + sin_a * ux);

  LegParts parts;
  parts.x[0] = 0.5 * (hip_x + knee_x);
  parts.z[0] = 0.5 * (hip_z + knee_z);
  parts.x[1] = 0.5 * (knee_x + ankle_x);
  parts.z[1] = 0.5 * (knee_z + ankle_z);
  parts.x[2] = ankle_x;
  parts.z[2] = ankle_z;
  return parts;
}

std::vector<double> second_derivative(const std::vector<double>& v, double h) {
  const size_t n = v.size();
  std::vector<double> out(n, 0.0);
  for (size_t k = 1; k + 1 < n; ++k)
    out[k] = (v[k + 1] - 2.0 * v[k] + v[k - 1]) / (h * h);
  if (n >= 2) {
    out[0] = out[1];
    out[n - 1] = out[n - 2];
  }
  return out;
}

std::vector<double> first_derivative(const std::vector<double>& v, double h) {
  const size_t n = v.size();
  std::vector<double> out(n, 0.0);
  for (size_t k = 1; k + 1 < n; ++k) out[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
  if (n >= 2) {
    out[0] = (v[1] - v[0]) / h;
    out[n - 1] = (v[n - 1] - v[n - 2]) / h;
  }
  return out;
}

// Swing-ankle sample at within-step time t: airborne during single support,
// parked on the landing during double support.
SwingSample swing_at(const StepParams& step, const SwingProfile& profile,
                     const Foothold& from, const Foothold& to, double t) {
  if (t < step.t_ss) return swing_trajectory(profile, from, to, t);
  SwingSample s;
  s.x_s = to.x;
  s.z_s = 0.0;
  return s;
}

// Eq.-7 coupling term from per-part swing kinematics along a COM iterate.
std::vector<double> coupling_from_parts(const std::vector<double>& com,
                                        const std::vector<double>& ankle_x,
                                        const std::vector<double>& ankle_z,
                                        const std::vector<double>& zmp,
                                        double h, const RobotParams& params) {
  const size_t n = com.size();
  const double masses[3] = {params.m_1, params.m_2, params.m_3};
  std::vector<double> px(n), pz(n);
  std::vector<double> f(n, 0.0);
  for (int part = 0; part < 3; ++part) {
    for (size_t k = 0; k < n; ++k) {
      const LegParts parts =
          leg_part_positions(com[k], params.z_c, ankle_x[k], ankle_z[k], params);
      px[k] = parts.x[part];
      pz[k] = parts.z[part];
    }
    const std::vector<double> ax = second_derivative(px, h);
    const std::vector<double> az = second_derivative(pz, h);
    const double scale = masses[part] / (params.m_c * params.z_c);
    for (size_t k = 0; k < n; ++k)
      f[k] += scale * ((px[k] - zmp[k]) * (params.g + az[k]) - ax[k] * pz[k]);
  }
  return f;
}

}  // namespace

ComTrajectory mmipm_solve_com(const StepParams& step, const Foothold& support,
                              const Foothold& swing_from, const Foothold& swing_to,
                              const SwingProfile& profile, const RobotParams& params,
                              double tol, int max_iter, double grid_dt) {
  if (!(tol > 0.0)) throw RejectedInput("mmipm_solve_com: tol must be positive");
  if (max_iter < 1) throw RejectedInput("mmipm_solve_com: max_iter must be >= 1");
  step.validate();
  params.validate();

  const int n = whole_steps(step.duration(), grid_dt, "step duration");
  const size_t npts = static_cast<size_t>(n) + 1;
  const double om2 = params.g / params.z_c;

  FootholdSequence supports = {support, swing_to};
  std::vector<double> ts(npts), zmp(npts), ankle_x(npts), ankle_z(npts);
  std::vector<double> f(npts, 0.0);
  const double ms = params.swing_mass();
  for (size_t k = 0; k < npts; ++k) {
    const double t = std::min(k * grid_dt, step.duration() - 1e-12);
    ts[k] = k * grid_dt;
    zmp[k] = zmp_reference(step, supports, 0, t).x;
    const SwingSample sw = swing_at(step, profile, swing_from, swing_to, t);
    ankle_x[k] = sw.x_s;
    ankle_z[k] = sw.z_s;
    // iteration 0: two-mass coupling, swing mass lumped on the ankle path
    f[k] = (ms / (params.m_c * params.z_c)) *
           ((sw.x_s - zmp[k]) * (params.g + sw.z_s_dd) - sw.x_s_dd * sw.z_s);
  }

  const double x_begin = support.x - step.l_sx / 2.0;
  const double x_end = support.x + step.l_sx / 2.0;
  std::vector<double> com = solve_com_bvp(zmp, f, grid_dt, om2, x_begin, x_end);

  ComTrajectory out;
  out.dt = grid_dt;
  out.t = ts;

  for (int it = 1; it <= max_iter; ++it) {
    const std::vector<double> f_new =
        coupling_from_parts(com, ankle_x, ankle_z, zmp, grid_dt, params);
    double res = 0.0;
    for (size_t k = 0; k < npts; ++k) res = std::max(res, std::abs(f_new[k] - f[k]));
    out.residuals.push_back(res);
    out.iterations = it;
    if (res < tol) {
      out.x = std::move(com);
      out.x_ddot = second_derivative(out.x, grid_dt);
      return out;
    }
    f = f_new;
    com = solve_com_bvp(zmp, f, grid_dt, om2, x_begin, x_end);
  }
  throw NonConvergence("mmipm_solve_com: coupling iteration did not converge",
                       out.residuals.back(), max_iter);
}

WalkResult generate_walk(ModelKind kind, int n_steps, const StepParams& step,
                         const SwingProfile& profile, const RobotParams& params,
                         double grid_dt, double tol, int max_iter) {
  if (kind == ModelKind::IP || kind == ModelKind::ELIPPFM)
    throw RejectedInput("generate_walk: model has no ZMP input; walking unsupported");
  if (n_steps < 1) throw RejectedInput("generate_walk: n_steps must be >= 1");
  step.validate();
  params.validate();

  const int n_init = whole_steps(step.t_init, grid_dt, "t_init");
  const int n_step = whole_steps(step.duration(), grid_dt, "step duration");
  const int n_walk = n_step * n_steps;
  const size_t npts = static_cast<size_t>(n_walk) + 1;
  const double om2 = params.g / params.z_c;

  const StartPose start{};
  const FootholdSequence landings = plan_footsteps(step, n_steps, start);
  const FootholdSequence supports = support_sequence(landings, step, start);
  Foothold initial_swing;
  initial_swing.side = landings.front().side;
  initial_swing.x = start.x;
  initial_swing.y = start.y + side_sign(initial_swing.side) * step.l_sy / 2.0;

  // Drive the state machine across the stepping horizon to index each grid
  // point with its phase, step and within-step time.
  struct PhasePoint {
    WalkPhase phase;
    int step_index;
    double t_step;
  };
  std::vector<PhasePoint> timeline(npts);
  {
    WalkState ws;
    ws.phase = WalkPhase::SingleSupport;
    ws.t = 0.0;
    ws.support = supports.front().side;
    for (size_t k = 0; k < npts; ++k) {
      timeline[k] = {ws.phase, ws.step_index, ws.t};
      ws = advance_state_machine(ws, grid_dt, step);
    }
    timeline[npts - 1].t_step =
        std::min(timeline[npts - 1].t_step, step.duration() - 1e-12);
    if (timeline[npts - 1].step_index >= n_steps) {  // final grid point closes step n
      timeline[npts - 1].step_index = n_steps - 1;
      timeline[npts - 1].t_step = step.duration() - 1e-12;
      timeline[npts - 1].phase = WalkPhase::DoubleSupport;
    }
  }

  auto swing_bounds = [&](int idx) -> std::pair<Foothold, Foothold> {
    const Foothold from = idx == 0 ? initial_swing : supports[static_cast<size_t>(idx) - 1];
    return {from, supports[static_cast<size_t>(idx) + 1]};
  };

  std::vector<double> zmp_x(npts), zmp_y(npts), ankle_x(npts), ankle_z(npts);
  std::vector<double> f(npts, 0.0);
  const double ms = params.swing_mass();
  for (size_t k = 0; k < npts; ++k) {
    const PhasePoint& pp = timeline[k];
    const ZmpPoint z = zmp_reference(step, supports, pp.step_index, pp.t_step);
    zmp_x[k] = z.x;
    zmp_y[k] = z.y;
    const auto [from, to] = swing_bounds(pp.step_index);
    const SwingSample sw = swing_at(step, profile, from, to, pp.t_step);
    ankle_x[k] = sw.x_s;
    ankle_z[k] = sw.z_s;
    if (kind == ModelKind::TMIPM || kind == ModelKind::MMIPM)
      f[k] = (ms / (params.m_c * params.z_c)) *
             ((sw.x_s - zmp_x[k]) * (params.g + sw.z_s_dd) - sw.x_s_dd * sw.z_s);
  }

  const double x_begin = supports.front().x;
  const double x_end = 0.5 * (supports[supports.size() - 1].x +
                              supports[supports.size() - 2].x);
  std::vector<double> com = solve_com_bvp(zmp_x, f, grid_dt, om2, x_begin, x_end);

  WalkResult out;
  out.model = kind;
  out.dt = grid_dt;

  if (kind == ModelKind::MMIPM) {
    for (int it = 1; it <= max_iter; ++it) {
      const std::vector<double> f_new =
          coupling_from_parts(com, ankle_x, ankle_z, zmp_x, grid_dt, params);
      double res = 0.0;
      for (size_t k = 0; k < npts; ++k)
        res = std::max(res, std::abs(f_new[k] - f[k]));
      out.residuals.push_back(res);
      out.com_iterations = it;
      if (res < tol) break;
      f = f_new;
      com = solve_com_bvp(zmp_x, f, grid_dt, om2, x_begin, x_end);
      if (it == max_iter)
        throw NonConvergence("generate_walk: swing coupling did not converge", res,
                             max_iter);
    }
  }

  // lateral axis: height-constrained pendulum on the y reference
  const double y_begin = supports.front().y;
  const double y_end = 0.5 * (supports[supports.size() - 1].y +
                              supports[supports.size() - 2].y);
  const std::vector<double> zero(npts, 0.0);
  const std::vector<double> com_y = solve_com_bvp(zmp_y, zero, grid_dt, om2,
                                                  y_begin, y_end);

  const std::vector<double> com_xd = first_derivative(com, grid_dt);
  const std::vector<double> com_xdd = second_derivative(com, grid_dt);

  out.samples.reserve(static_cast<size_t>(n_init) + npts);

  // Initialize state: quasi-static COM shift onto the first support foot
  for (int k = 0; k < n_init; ++k) {
    const double u = n_init > 0 ? static_cast<double>(k) / n_init : 1.0;
    const double ease = 0.5 * (1.0 - std::cos(u * 3.14159265358979323846));
    WalkSample smp;
    smp.t = k * grid_dt;
    smp.phase = WalkPhase::Initialize;
    smp.step_index = 0;
    smp.com_x = start.x + (x_begin - start.x) * ease;
    smp.com_xd = 0.0;
    smp.com_y = start.y + (y_begin - start.y) * ease;
    smp.zmp_ref_x = smp.com_x;
    smp.zmp_ref_y = smp.com_y;
    smp.zmp_real_x = smp.com_x;
    smp.swing_x = initial_swing.x;
    smp.swing_z = 0.0;
    out.samples.push_back(smp);
  }

  const double t0 = n_init * grid_dt;
  for (size_t k = 0; k < npts; ++k) {
    const PhasePoint& pp = timeline[k];
    WalkSample smp;
    smp.t = t0 + k * grid_dt;
    smp.phase = pp.phase;
    smp.step_index = pp.step_index;
    smp.com_x = com[k];
    smp.com_xd = com_xd[k];
    smp.com_y = com_y[k];
    smp.zmp_ref_x = zmp_x[k];
    smp.zmp_ref_y = zmp_y[k];
    smp.swing_x = ankle_x[k];
    smp.swing_z = ankle_z[k];

    // realized ZMP from the tracked trajectory via the multi-body formula
    std::vector<BodyPoint> bodies;
    if (kind == ModelKind::LIPM || kind == ModelKind::LIPPFM) {
      bodies.push_back({params.total_mass(), com[k], params.z_c, com_xdd[k], 0.0});
    } else if (kind == ModelKind::TMIPM) {
      bodies.push_back({params.m_c, com[k], params.z_c, com_xdd[k], 0.0});
      const auto [from, to] = swing_bounds(pp.step_index);
      const SwingSample sw = swing_at(step, profile, from, to, pp.t_step);
      bodies.push_back({ms, sw.x_s, sw.z_s, sw.x_s_dd, sw.z_s_dd});
    } else {  // MMIPM
      bodies.push_back({params.m_c, com[k], params.z_c, com_xdd[k], 0.0});
      const LegParts parts =
          leg_part_positions(com[k], params.z_c, ankle_x[k], ankle_z[k], params);
      const double masses[3] = {params.m_1, params.m_2, params.m_3};
      for (int part = 0; part < 3; ++part)
        bodies.push_back({masses[part], parts.x[part], parts.z[part], 0.0, 0.0});
      // part accelerations by finite differences of neighbouring poses
      if (k >= 1 && k + 1 < npts) {
        const LegParts pm =
            leg_part_positions(com[k - 1], params.z_c, ankle_x[k - 1], ankle_z[k - 1], params);
        const LegParts pp1 =
            leg_part_positions(com[k + 1], params.z_c, ankle_x[k + 1], ankle_z[k + 1], params);
        for (int part = 0; part < 3; ++part) {
          bodies[static_cast<size_t>(part) + 1].x_dd =
              (pp1.x[part] - 2.0 * parts.x[part] + pm.x[part]) / (grid_dt * grid_dt);
          bodies[static_cast<size_t>(part) + 1].z_dd =
              (pp1.z[part] - 2.0 * parts.z[part] + pm.z[part]) / (grid_dt * grid_dt);
        }
      }
    }
    smp.zmp_real_x = compute_zmp(bodies, params);
    out.samples.push_back(smp);
  }

  return out;
}

}  // namespace pushrec
