#include "pushrec/integrator.hpp"

#include <cmath>

#include "pushrec/errors.hpp"

namespace pushrec {

int SimConfig::step_count() const {
  const double n = t_max / dt;
  const double r = std::round(n);
  if (std::abs(n - r) > 1e-9 * (1.0 + std::abs(r)))
    throw InvalidParameter("t_max/dt must be a whole number of steps");
  return static_cast<int>(r);
}

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidParameter("dt must be positive");
  if (t_max < dt) throw InvalidParameter("t_max must be at least dt");
  if (!(settle_pos_tol > 0.0) || !(settle_vel_tol > 0.0) ||
      !(settle_ang_tol > 0.0) || !(settle_angvel_tol > 0.0))
    throw InvalidParameter("settle tolerances must be positive");
  if (!(settle_dwell >= 0.0)) throw InvalidParameter("settle_dwell must be >= 0");
  if (!(fall_angle > 0.0) || !(fall_offset > 0.0))
    throw InvalidParameter("fall bounds must be positive");
  (void)step_count();
}

unsigned required_channels(ModelKind kind) {
  switch (kind) {
    case ModelKind::IP: return kChannelAnkleTorque;
    case ModelKind::LIPM:
    case ModelKind::TMIPM:
    case ModelKind::MMIPM: return kChannelZmp;
    case ModelKind::LIPPFM: return kChannelZmp | kChannelFlywheel;
    case ModelKind::ELIPPFM:
      return kChannelAnkleTorque | kChannelFlywheel | kChannelVertical;
  }
  return 0;
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Settled: return "Settled";
    case Termination::Fell: return "Fell";
    case Termination::TimedOut: return "TimedOut";
  }
  return "?";
}

ModelState rk4_step(const DerivFn& deriv, const ModelState& s,
                    const ControlInputs& u, double dt, double t_now) {
  if (!(dt > 0.0)) throw RejectedInput("rk4_step: dt must be positive");
  const int n = state_dim(s.kind);

  auto axpy = [&](const ModelState& base, double h, const StateDeriv& k) {
    ModelState out = base;
    for (int i = 0; i < n; ++i) out.q[i] = base.q[i] + h * k[i];
    return out;
  };
  auto check = [&](const StateDeriv& k, double t_stage) {
    for (int i = 0; i < n; ++i)
      if (!std::isfinite(k[i]))
        throw NumericalBlowup("rk4_step: non-finite stage derivative", t_stage);
  };

  const StateDeriv k1 = deriv(s, u);
  check(k1, t_now);
  const StateDeriv k2 = deriv(axpy(s, 0.5 * dt, k1), u);
  check(k2, t_now + 0.5 * dt);
  const StateDeriv k3 = deriv(axpy(s, 0.5 * dt, k2), u);
  check(k3, t_now + 0.5 * dt);
  const StateDeriv k4 = deriv(axpy(s, dt, k3), u);
  check(k4, t_now + dt);

  ModelState out = s;
  for (int i = 0; i < n; ++i)
    out.q[i] = s.q[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

double realized_cop(ModelKind kind, const ControlInputs& u, const RobotParams& p) {
  switch (kind) {
    case ModelKind::IP:
      return -u.tau_a / (p.total_mass() * p.g);
    case ModelKind::ELIPPFM:
      return -u.tau_a / (p.total_mass() * (p.g + u.zc_dd));
    default:
      return u.p_x;
  }
}

namespace {

DerivFn make_deriv(ModelKind kind, const RobotParams& p, const MidstancePose& pose) {
  switch (kind) {
    case ModelKind::IP:
      return [&p](const ModelState& s, const ControlInputs& u) {
        return ip_dynamics(s, u.tau_a, p);
      };
    case ModelKind::LIPM:
      return [&p](const ModelState& s, const ControlInputs& u) {
        return lipm_dynamics(s, u.p_x, p);
      };
    case ModelKind::TMIPM:
      return [&p, pose](const ModelState& s, const ControlInputs& u) {
        return tmipm_dynamics(s, u.p_x, pose.swing_sample(s, u.p_x, p), p);
      };
    case ModelKind::MMIPM:
      return [&p, pose](const ModelState& s, const ControlInputs& u) {
        const auto parts = pose.swing_parts(s, u.p_x, p);
        return mmipm_dynamics(s, u.p_x, parts, p);
      };
    case ModelKind::LIPPFM:
      return [&p](const ModelState& s, const ControlInputs& u) {
        return lippfm_dynamics(s, u.p_x, u.tau_w, p);
      };
    case ModelKind::ELIPPFM:
      return [&p](const ModelState& s, const ControlInputs& u) {
        return elippfm_dynamics(s, u.tau_a, u.tau_w, u.zc_dd, p);
      };
  }
  throw RejectedInput("simulate: unknown model");
}

double lean_angle(const ModelState& s, const RobotParams& p) {
  if (s.kind == ModelKind::ELIPPFM) return std::abs(s.theta_a());
  const double ratio = std::min(std::abs(s.cart_x(p)) / p.l_0, 1.0);
  return std::asin(ratio);
}

}  // namespace

SimOutcome simulate(ModelKind kind, const ModelState& initial, const Policy& policy,
                    const RobotParams& params, const SimConfig& cfg) {
  cfg.validate();
  params.validate();
  if (initial.kind != kind || !initial.finite())
    throw RejectedInput("simulate: initial state invalid for the model");
  if (!policy.fn) throw RejectedInput("simulate: policy has no function");
  const unsigned need = required_channels(kind);
  if ((need & policy.channels) != need)
    throw RejectedInput("simulate: policy does not supply the inputs this model requires");

  const MidstancePose pose = MidstancePose::from(params);
  const DerivFn deriv = make_deriv(kind, params, pose);

  SimOutcome out;
  const int n = cfg.step_count();
  out.trajectory.reserve(static_cast<size_t>(n) + 1);

  ModelState s = initial;
  double in_tol_since = -1.0;  // < 0: not currently inside the settle band

  for (int k = 0; k <= n; ++k) {
    const double t = k * cfg.dt;
    const ControlInputs u = policy.fn(t, s);
    const double p_real = realized_cop(kind, u, params);

    TrajectorySample sample{t, s, u, p_real};
    out.trajectory.push_back(sample);
    out.max_zmp_excursion = std::max(out.max_zmp_excursion, std::abs(p_real));

    // fall detection
    const double xc = s.cart_x(params);
    if (std::abs(xc) > cfg.fall_offset || lean_angle(s, params) > cfg.fall_angle) {
      out.termination = Termination::Fell;
      return out;
    }

    // settle detection: balanced (COM over the commanded CoP) and stationary
    bool ok = std::abs(xc - u.p_x) <= cfg.settle_pos_tol &&
              std::abs(s.cart_x_dot(params)) <= cfg.settle_vel_tol;
    if (policy.settle_flywheel && has_flywheel(kind))
      ok = ok && std::abs(s.theta_w_dot()) <= cfg.settle_angvel_tol;
    if (ok) {
      if (in_tol_since < 0.0) in_tol_since = t;
      if (t - in_tol_since >= cfg.settle_dwell - 1e-12) {
        out.termination = Termination::Settled;
        out.settle_time = in_tol_since;
        return out;
      }
    } else {
      in_tol_since = -1.0;
    }

    if (k == n) break;

    try {
      s = rk4_step(deriv, s, u, cfg.dt, t);
    } catch (const NumericalBlowup&) {
      out.termination = Termination::Fell;
      out.blowup = true;
      return out;
    }
    if (!s.finite()) {
      out.termination = Termination::Fell;
      out.blowup = true;
      return out;
    }
  }

  out.termination = Termination::TimedOut;
  return out;
}

}  // namespace pushrec
