#pragma once

#include <array>
#include <span>

#include "pushrec/model_state.hpp"
#include "pushrec/robot_params.hpp"

namespace pushrec {

using StateDeriv = std::array<double, 4>;

/**
 * Model derivative functions. Each returns d/dt of the state layout
 * documented on ModelState. All are pure; bound checks throw rather
 * than clamp (control policies clamp before calling).
 */

// Nonlinear point-mass pendulum about the ankle, total mass lumped at l_0,
// expressed in cartesian x = l_0*sin(theta). Input: ankle torque.
StateDeriv ip_dynamics(const ModelState& s, double tau_a, const RobotParams& p);

// x_dd = omega^2 (x - p_x), omega^2 = g/z_c. Input: ZMP position.
StateDeriv lipm_dynamics(const ModelState& s, double p_x, const RobotParams& p);

// LIPM plus a lumped swing mass m_s = m_1+m_2+m_3 with coupling coefficient
// m_s/(m_c z_c); reduces exactly to LIPM when m_s = 0.
StateDeriv tmipm_dynamics(const ModelState& s, double p_x, const SwingSample& swing,
                          const RobotParams& p);

// LIPM plus per-part swing coupling; swing_parts must be {thigh, shin, foot}.
StateDeriv mmipm_dynamics(const ModelState& s, double p_x,
                          std::span<const BodyPoint> swing_parts, const RobotParams& p);

// LIPM plus flywheel. m is the total robot mass, L = l_0.
StateDeriv lippfm_dynamics(const ModelState& s, double p_x, double tau_w,
                           const RobotParams& p);

// Flywheel model with pendulum mass and released COM height; linear in the
// state with gravity coefficient mu(g + zc_dd)/gamma.
StateDeriv elippfm_dynamics(const ModelState& s, double tau_a, double tau_w,
                            double zc_dd, const RobotParams& p);

// General multi-body ZMP. Throws DegenerateLoad when the load sum vanishes.
double compute_zmp(std::span<const BodyPoint> bodies, const RobotParams& p);

double capture_point(double x, double x_dot, double omega);

double orbital_energy(double x, double x_dot, double p_x, double omega);

/**
 * Held swing-leg pose used during push recovery (no stepping): the leg joints
 * are frozen in the mid-stance configuration, so the swing masses translate
 * with the body and share its horizontal acceleration. Heights come from the
 * two-link geometry with the hip at z_c and the swing ankle at the ground.
 */
struct MidstancePose {
  double z_thigh = 0.0;
  double z_shin = 0.0;
  double z_foot = 0.0;
  double mass_height_sum = 0.0;  // m_1 z_thigh + m_2 z_shin + m_3 z_foot

  static MidstancePose from(const RobotParams& p);

  // Consistent body acceleration under this pose:
  // (1 + sum(m_i z_i)/(m_c z_c)) x_dd = (omega^2 + m_s g/(m_c z_c)) (x - p_x)
  double body_accel(double x, double p_x, const RobotParams& p) const;

  SwingSample swing_sample(const ModelState& s, double p_x, const RobotParams& p) const;
  std::array<BodyPoint, 3> swing_parts(const ModelState& s, double p_x,
                                       const RobotParams& p) const;
};

// Linearized divergence rate of each model about upright, with the held
// mid-stance pose for the swing-mass models. This is the frequency the
// capture-point policies use.
double model_frequency(ModelKind kind, const RobotParams& p);

}  // namespace pushrec
