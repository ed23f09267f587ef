#include "pushrec/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "pushrec/errors.hpp"

namespace pushrec {

namespace {

void require_kind(const ModelState& s, ModelKind kind, const char* op) {
  if (s.kind != kind)
    throw RejectedInput(std::string(op) + ": state variant does not match the model");
  if (!s.finite())
    throw RejectedInput(std::string(op) + ": non-finite state");
}

}  // namespace

const char* model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::IP: return "IP";
    case ModelKind::LIPM: return "LIPM";
    case ModelKind::TMIPM: return "TMIPM";
    case ModelKind::MMIPM: return "MMIPM";
    case ModelKind::LIPPFM: return "LIPPFM";
    case ModelKind::ELIPPFM: return "ELIPPFM";
  }
  return "?";
}

ModelKind model_from_name(const std::string& name) {
  for (ModelKind k : kAllModels)
    if (name == model_name(k)) return k;
  throw RejectedInput("unknown model name: " + name);
}

ModelState ModelState::cartesian(ModelKind kind, double x, double x_dot) {
  ModelState s;
  s.kind = kind;
  s.q = {x, x_dot, 0.0, 0.0};
  return s;
}

ModelState ModelState::lippfm(double x, double x_dot, double theta_w, double theta_w_dot) {
  ModelState s;
  s.kind = ModelKind::LIPPFM;
  s.q = {x, x_dot, theta_w, theta_w_dot};
  return s;
}

ModelState ModelState::elippfm(double theta_a, double theta_a_dot,
                               double theta_w, double theta_w_dot) {
  ModelState s;
  s.kind = ModelKind::ELIPPFM;
  s.q = {theta_a, theta_a_dot, theta_w, theta_w_dot};
  return s;
}

void RobotParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidParameter(std::string(name) + " must be strictly positive");
  };
  positive(m_c, "m_c");
  positive(m_1, "m_1");
  positive(m_2, "m_2");
  positive(m_3, "m_3");
  positive(z_c, "z_c");
  positive(l_0, "l_0");
  positive(l_1, "l_1");
  positive(l_2, "l_2");
  positive(delta, "delta");
  positive(g, "g");
  positive(i_w, "i_w");
  positive(i_p, "i_p");
  positive(m_fly, "m_fly");
  positive(m_pend, "m_pend");
  positive(l_pend, "l_pend");
  positive(theta_w_max, "theta_w_max");
  if (z_c < z_c_min || z_c > z_c_max)
    throw InvalidParameter("z_c outside its [z_c_min, z_c_max] bounds");
  if (tau_w_max < 0.0) throw InvalidParameter("tau_w_max must be >= 0");
  if (zcdd_max < 0.0) throw InvalidParameter("zcdd_max must be >= 0");
  if (tau_a_max < 0.0) throw InvalidParameter("tau_a_max must be >= 0");
}

StateDeriv ip_dynamics(const ModelState& s, double tau_a, const RobotParams& p) {
  require_kind(s, ModelKind::IP, "ip_dynamics");
  if (!std::isfinite(tau_a)) throw RejectedInput("ip_dynamics: non-finite torque");
  const double x = s.x();
  if (std::abs(x) >= p.l_0)
    throw RejectedInput("ip_dynamics: |x| must stay below the pendulum length");
  const double theta = std::asin(x / p.l_0);
  const double c = std::cos(theta);
  const double theta_dot = s.x_dot() / (p.l_0 * c);
  const double theta_dd =
      (p.g / p.l_0) * std::sin(theta) + tau_a / (p.total_mass() * p.l_0 * p.l_0);
  const double x_dd = p.l_0 * (c * theta_dd - std::sin(theta) * theta_dot * theta_dot);
  return {s.x_dot(), x_dd, 0.0, 0.0};
}

StateDeriv lipm_dynamics(const ModelState& s, double p_x, const RobotParams& p) {
  require_kind(s, ModelKind::LIPM, "lipm_dynamics");
  if (p.z_c <= 0.0) throw InvalidParameter("lipm_dynamics: z_c must be positive");
  const double om2 = p.g / p.z_c;
  return {s.x_dot(), om2 * (s.x() - p_x), 0.0, 0.0};
}

StateDeriv tmipm_dynamics(const ModelState& s, double p_x, const SwingSample& swing,
                          const RobotParams& p) {
  require_kind(s, ModelKind::TMIPM, "tmipm_dynamics");
  if (p.m_c <= 0.0) throw InvalidParameter("tmipm_dynamics: m_c must be positive");
  if (!std::isfinite(swing.x_s) || !std::isfinite(swing.z_s) ||
      !std::isfinite(swing.x_s_dd) || !std::isfinite(swing.z_s_dd))
    throw RejectedInput("tmipm_dynamics: non-finite swing sample");
  const double om2 = p.g / p.z_c;
  const double coupling =
      (p.swing_mass() / (p.m_c * p.z_c)) *
      ((swing.x_s - p_x) * (p.g + swing.z_s_dd) - swing.x_s_dd * swing.z_s);
  return {s.x_dot(), om2 * (s.x() - p_x) + coupling, 0.0, 0.0};
}

StateDeriv mmipm_dynamics(const ModelState& s, double p_x,
                          std::span<const BodyPoint> swing_parts, const RobotParams& p) {
  require_kind(s, ModelKind::MMIPM, "mmipm_dynamics");
  if (swing_parts.size() != 3)
    throw RejectedInput("mmipm_dynamics: expected 3 swing parts (thigh, shin, foot)");
  if (p.m_c <= 0.0) throw InvalidParameter("mmipm_dynamics: m_c must be positive");
  const double om2 = p.g / p.z_c;
  double f = 0.0;
  for (const BodyPoint& b : swing_parts)
    f += (b.m / (p.m_c * p.z_c)) * ((b.x - p_x) * (p.g + b.z_dd) - b.x_dd * b.z);
  return {s.x_dot(), om2 * (s.x() - p_x) + f, 0.0, 0.0};
}

StateDeriv lippfm_dynamics(const ModelState& s, double p_x, double tau_w,
                           const RobotParams& p) {
  require_kind(s, ModelKind::LIPPFM, "lippfm_dynamics");
  if (std::abs(tau_w) > p.tau_w_max)
    throw BoundViolation("lippfm_dynamics: |tau_w| exceeds tau_w_max");
  if (p.i_w <= 0.0) throw InvalidParameter("lippfm_dynamics: i_w must be positive");
  const double om2 = p.g / p.z_c;
  const double m = p.total_mass();
  return {s.x_dot(), om2 * (s.x() - p_x) - tau_w / (m * p.l_0),
          s.theta_w_dot(), tau_w / p.i_w};
}

StateDeriv elippfm_dynamics(const ModelState& s, double tau_a, double tau_w,
                            double zc_dd, const RobotParams& p) {
  require_kind(s, ModelKind::ELIPPFM, "elippfm_dynamics");
  if (std::abs(tau_a) > p.tau_a_max)
    throw BoundViolation("elippfm_dynamics: |tau_a| exceeds tau_a_max");
  if (std::abs(tau_w) > p.tau_w_max)
    throw BoundViolation("elippfm_dynamics: |tau_w| exceeds tau_w_max");
  if (std::abs(zc_dd) > p.zcdd_max)
    throw BoundViolation("elippfm_dynamics: |zc_dd| exceeds zcdd_max");
  const double gam = p.gamma_fly();
  const double grav = p.mu_fly() * (p.g + zc_dd) / gam;
  return {s.theta_a_dot(),
          grav * s.theta_a() + tau_a / gam - tau_w / gam,
          s.theta_w_dot(),
          -grav * s.theta_a() - tau_a / gam + (gam + p.i_w) / (gam * p.i_w) * tau_w};
}

double compute_zmp(std::span<const BodyPoint> bodies, const RobotParams& p) {
  if (bodies.empty()) throw RejectedInput("compute_zmp: no bodies");
  double num = 0.0, den = 0.0;
  for (const BodyPoint& b : bodies) {
    num += b.m * b.x * (b.z_dd + p.g) - b.m * b.z * b.x_dd;
    den += b.m * (b.z_dd + p.g);
  }
  double scale = 0.0;
  for (const BodyPoint& b : bodies) scale += b.m * p.g;
  if (std::abs(den) <= 1e-12 * std::max(scale, 1.0))
    throw DegenerateLoad("compute_zmp: load sum vanishes (free fall), no ZMP exists");
  return num / den;
}

double capture_point(double x, double x_dot, double omega) {
  if (!(omega > 0.0)) throw InvalidParameter("capture_point: omega must be positive");
  return x + x_dot / omega;
}

double orbital_energy(double x, double x_dot, double p_x, double omega) {
  if (!(omega > 0.0)) throw InvalidParameter("orbital_energy: omega must be positive");
  const double r = x - p_x;
  return 0.5 * x_dot * x_dot - 0.5 * omega * omega * r * r;
}

MidstancePose MidstancePose::from(const RobotParams& p) {
  // two-link chain from the hip (at z_c) down to the swing ankle on the ground
  const double d = std::min(p.z_c, p.l_1 + p.l_2 - 1e-9);
  double cos_a = (p.l_1 * p.l_1 + d * d - p.l_2 * p.l_2) / (2.0 * p.l_1 * d);
  cos_a = std::clamp(cos_a, -1.0, 1.0);
  MidstancePose pose;
  const double knee_z = p.z_c - p.l_1 * cos_a;
  pose.z_thigh = p.z_c - 0.5 * p.l_1 * cos_a;
  pose.z_shin = 0.5 * knee_z;
  pose.z_foot = 0.0;
  pose.mass_height_sum = p.m_1 * pose.z_thigh + p.m_2 * pose.z_shin + p.m_3 * pose.z_foot;
  return pose;
}

double MidstancePose::body_accel(double x, double p_x, const RobotParams& p) const {
  const double om2 = p.g / p.z_c;
  const double num = (om2 + p.swing_mass() * p.g / (p.m_c * p.z_c)) * (x - p_x);
  const double den = 1.0 + mass_height_sum / (p.m_c * p.z_c);
  return num / den;
}

SwingSample MidstancePose::swing_sample(const ModelState& s, double p_x,
                                        const RobotParams& p) const {
  const double ms = p.swing_mass();
  SwingSample sw;
  sw.x_s = s.x();
  sw.z_s = ms > 0.0 ? mass_height_sum / ms : 0.0;
  sw.x_s_dd = body_accel(s.x(), p_x, p);
  sw.z_s_dd = 0.0;
  return sw;
}

std::array<BodyPoint, 3> MidstancePose::swing_parts(const ModelState& s, double p_x,
                                                    const RobotParams& p) const {
  const double x_dd = body_accel(s.x(), p_x, p);
  return {BodyPoint{p.m_1, s.x(), z_thigh, x_dd, 0.0},
          BodyPoint{p.m_2, s.x(), z_shin, x_dd, 0.0},
          BodyPoint{p.m_3, s.x(), z_foot, x_dd, 0.0}};
}

double model_frequency(ModelKind kind, const RobotParams& p) {
  switch (kind) {
    case ModelKind::IP:
      return std::sqrt(p.g / p.l_0);
    case ModelKind::TMIPM:
    case ModelKind::MMIPM: {
      const MidstancePose pose = MidstancePose::from(p);
      const double om2 = p.g / p.z_c;
      const double num = om2 + p.swing_mass() * p.g / (p.m_c * p.z_c);
      const double den = 1.0 + pose.mass_height_sum / (p.m_c * p.z_c);
      return std::sqrt(num / den);
    }
    case ModelKind::ELIPPFM:
      return std::sqrt(p.mu_fly() * p.g / p.gamma_fly());
    case ModelKind::LIPM:
    case ModelKind::LIPPFM:
      return p.omega();
  }
  return p.omega();
}

}  // namespace pushrec
