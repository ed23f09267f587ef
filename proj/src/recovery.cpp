#include "pushrec/recovery.hpp"

#include <algorithm>
#include <cmath>

#include "pushrec/dynamics.hpp"
#include "pushrec/errors.hpp"

namespace pushrec {

namespace {

constexpr double kRateEps = 1e-6;

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// effective inertia seen by the flywheel torque
double wheel_inertia(ModelKind kind, const RobotParams& p) {
  if (kind == ModelKind::ELIPPFM)
    return p.gamma_fly() * p.i_w / (p.gamma_fly() + p.i_w);
  return p.i_w;
}

struct HipCommand {
  double tau_w = 0.0;
  bool winding = false;
};

HipCommand hip_command(ModelKind kind, const ModelState& s, const RobotParams& p,
                       const PolicyBundle& bundle) {
  HipCommand cmd;
  if (!has_flywheel(kind) || p.tau_w_max <= 0.0) return cmd;

  const double om = model_frequency(kind, p);
  const double cp = capture_point(s.cart_x(p), s.cart_x_dot(p), om);
  const double p_cmd = clamp(cp, bundle.cop_min, bundle.cop_max);
  const double excess = cp - p_cmd;

  const double th_w = s.theta_w();
  const double th_wd = s.theta_w_dot();
  const double i_eff = wheel_inertia(kind, p);
  const double dir = cp > 0.0 ? 1.0 : -1.0;
  const double release = bundle.cop_max * (1.0 - bundle.hip_release_frac);

  // wheel deceleration a full brake can guarantee in the current state; the
  // released-height model's pendulum coupling eats into the brake torque
  double a_brake = p.tau_w_max / i_eff;
  if (kind == ModelKind::ELIPPFM) {
    const double gam = p.gamma_fly();
    const double tau_a = std::clamp(-p.total_mass() * p.g * p_cmd,
                                    -p.tau_a_max, p.tau_a_max);
    const double coupling =
        -(p.mu_fly() * p.g / gam) * s.theta_a() - tau_a / gam;
    a_brake = std::max(0.5 * a_brake, a_brake - std::abs(coupling));
  }

  // stopping angle after one further control period of full wind; winding is
  // allowed only while that still lands inside the excursion budget
  const double dt = bundle.control_dt;
  const double a_wind = p.tau_w_max / i_eff;
  const double thd1 = th_wd + dir * a_wind * dt;
  const double th1 = th_w + th_wd * dt + dir * 0.5 * a_wind * dt * dt;
  const double stop_after_wind =
      th1 + thd1 * std::abs(thd1) / (2.0 * a_brake) + 2.0 * thd1 * dt;
  const bool winding = dir * th_wd > kRateEps;
  const bool engaged = excess * dir > 0.0 || (winding && dir * cp > release);

  if (engaged && dir * stop_after_wind < p.theta_w_max && dir * th_w < p.theta_w_max) {
    cmd.tau_w = dir * p.tau_w_max;
    cmd.winding = true;
  } else if (engaged && dir * th_wd > kRateEps) {
    cmd.tau_w = -std::copysign(p.tau_w_max, th_wd);  // brake at the excursion limit
  } else {
    cmd.tau_w = clamp(-i_eff * (bundle.unwind_freq * bundle.unwind_freq * th_w +
                                2.0 * bundle.unwind_freq * th_wd),
                      -p.tau_w_max, p.tau_w_max);
  }
  return cmd;
}

}  // namespace

const char* label_name(RecoveryLabel label) {
  switch (label) {
    case RecoveryLabel::StableAnkle: return "StableAnkle";
    case RecoveryLabel::StableHip: return "StableHip";
    case RecoveryLabel::Unstable: return "Unstable";
  }
  return "?";
}

PolicyBundle PolicyBundle::defaults_for(const RobotParams& p) {
  PolicyBundle b;
  b.cop_min = -p.cop_limit();
  b.cop_max = p.cop_limit();
  return b;
}

void PolicyBundle::validate(const RobotParams& p) const {
  if (cop_min > cop_max) throw InvalidParameter("cop_min must not exceed cop_max");
  if (cop_min < -p.cop_limit() - 1e-12 || cop_max > p.cop_limit() + 1e-12)
    throw InvalidParameter("CoP bounds must lie within [-delta/2, +delta/2]");
  if (!(hip_release_frac >= 0.0 && hip_release_frac < 1.0))
    throw InvalidParameter("hip_release_frac must be in [0, 1)");
  if (!(unwind_freq > 0.0)) throw InvalidParameter("unwind_freq must be positive");
  if (!(control_dt > 0.0)) throw InvalidParameter("control_dt must be positive");
}

ControlInputs ankle_policy(ModelKind kind, const ModelState& s, const RobotParams& p,
                           const PolicyBundle& bundle) {
  ControlInputs u;
  if (!bundle.ankle_enabled) return u;
  const double om = model_frequency(kind, p);
  const double cp = capture_point(s.cart_x(p), s.cart_x_dot(p), om);
  u.p_x = clamp(cp, bundle.cop_min, bundle.cop_max);
  if (kind == ModelKind::IP || kind == ModelKind::ELIPPFM) {
    // ankle torque realizing that CoP under the static load
    u.tau_a = clamp(-p.total_mass() * (p.g + u.zc_dd) * u.p_x,
                    -p.tau_a_max, p.tau_a_max);
  }
  return u;
}

double hip_policy(ModelKind kind, const ModelState& s, const RobotParams& p,
                  const PolicyBundle& bundle) {
  if (!has_flywheel(kind))
    throw RejectedInput("hip_policy: model has no flywheel input");
  return hip_command(kind, s, p, bundle).tau_w;
}

Policy make_policy(ModelKind kind, const RobotParams& p, const PolicyBundle& bundle,
                   bool with_hip) {
  bundle.validate(p);
  Policy policy;
  policy.channels = required_channels(kind);
  const bool hip_active = with_hip && bundle.hip_enabled && has_flywheel(kind);
  policy.settle_flywheel = hip_active;
  policy.fn = [kind, p, bundle, hip_active](double, const ModelState& s) {
    ControlInputs u = ankle_policy(kind, s, p, bundle);
    if (hip_active) {
      const HipCommand hip = hip_command(kind, s, p, bundle);
      u.tau_w = hip.tau_w;
      if (kind == ModelKind::ELIPPFM && hip.winding) {
        // vertical schedule in phase with the wind: soften the gravity term
        u.zc_dd = -p.zcdd_max;
        u.tau_a = clamp(-p.total_mass() * (p.g + u.zc_dd) * u.p_x,
                        -p.tau_a_max, p.tau_a_max);
      }
    }
    return u;
  };
  return policy;
}

std::pair<RecoveryLabel, std::vector<SimOutcome>> classify(
    ModelKind kind, const ModelState& initial, const RobotParams& params,
    const SimConfig& cfg, const PolicyBundle& bundle) {
  std::vector<SimOutcome> attempts;

  attempts.push_back(
      simulate(kind, initial, make_policy(kind, params, bundle, false), params, cfg));
  if (attempts.back().termination == Termination::Settled)
    return {RecoveryLabel::StableAnkle, std::move(attempts)};

  if (has_flywheel(kind) && bundle.hip_enabled) {
    attempts.push_back(
        simulate(kind, initial, make_policy(kind, params, bundle, true), params, cfg));
    if (attempts.back().termination == Termination::Settled)
      return {RecoveryLabel::StableHip, std::move(attempts)};
  }
  return {RecoveryLabel::Unstable, std::move(attempts)};
}

}  // namespace pushrec
