#pragma once

#include <cmath>

namespace pushrec {

/**
 * Physical parameters shared by all six models.
 *
 * Defaults are the simulation values of the reference robot (7 kg body,
 * 3.5 kg leg, 0.45 m COM height, 0.10 m foot). Quantities the tables leave
 * open (flywheel inertia, pendulum inertia, ankle torque bound, flywheel
 * angle excursion) carry documented stand-ins and are all configurable.
 */
struct RobotParams {
  double m_c = 7.0;   // body mass (kg)
  double m_1 = 1.5;   // thigh mass (kg)
  double m_2 = 1.5;   // shin mass (kg)
  double m_3 = 0.5;   // foot mass (kg)

  double z_c = 0.45;      // nominal COM height (m)
  double z_c_min = 0.40;
  double z_c_max = 0.50;

  double l_0 = 0.50;   // pendulum length (m)
  double l_1 = 0.28;   // thigh length (m)
  double l_2 = 0.28;   // shin length (m)
  double delta = 0.10;  // foot length (m)

  double tau_w_max = 5.0;    // flywheel torque bound (N*m)
  double zcdd_max = 0.07;    // vertical COM acceleration bound (m/s^2)
  double g = 9.81;

  double i_w = 0.1;                        // flywheel inertia about its COM (kg*m^2)
  double i_p = 3.5 * 0.5 * 0.5 / 3.0;      // pendulum inertia about the base (kg*m^2)
  double m_fly = 7.0;                      // flywheel mass (kg)
  double m_pend = 3.5;                     // pendulum (stance leg) mass (kg)
  double l_pend = 0.25;                    // pendulum COM distance from base (m)
  double theta_w_max = 0.5235987755982988; // flywheel angle excursion bound (rad), pi/6
  double tau_a_max = 10.5 * 9.81 * 0.05;   // ankle torque bound (N*m), CoP at the foot edge

  double total_mass() const { return m_c + m_1 + m_2 + m_3; }
  double swing_mass() const { return m_1 + m_2 + m_3; }

  // natural frequency of the height-constrained pendulum
  double omega() const { return std::sqrt(g / z_c); }

  // flywheel-model compound constants
  double gamma_fly() const { return m_fly * l_0 * l_0 + i_p; }
  double mu_fly() const { return m_pend * l_pend + m_fly * l_0; }

  // admissible CoP range about the ankle (foot centered on the ankle)
  double cop_limit() const { return delta / 2.0; }

  // Throws InvalidParameter naming the first violated field.
  void validate() const;
};

}  // namespace pushrec
