#pragma once

#include <array>
#include <cmath>
#include <string>

#include "pushrec/robot_params.hpp"

namespace pushrec {

enum class ModelKind { IP, LIPM, TMIPM, MMIPM, LIPPFM, ELIPPFM };

constexpr std::array<ModelKind, 6> kAllModels = {
    ModelKind::IP,     ModelKind::LIPM,   ModelKind::TMIPM,
    ModelKind::MMIPM,  ModelKind::LIPPFM, ModelKind::ELIPPFM};

const char* model_name(ModelKind kind);
ModelKind model_from_name(const std::string& name);  // throws RejectedInput

constexpr int state_dim(ModelKind kind) {
  return (kind == ModelKind::LIPPFM || kind == ModelKind::ELIPPFM) ? 4 : 2;
}

constexpr bool has_flywheel(ModelKind kind) {
  return kind == ModelKind::LIPPFM || kind == ModelKind::ELIPPFM;
}

/**
 * Tagged state vector.
 *
 * Layout by kind:
 *   IP/LIPM/TMIPM/MMIPM: [x, x_dot]
 *   LIPPFM:              [x, x_dot, theta_w, theta_w_dot]
 *   ELIPPFM:             [theta_a, theta_a_dot, theta_w, theta_w_dot]
 *
 * theta_w is carried by pure integration; the flywheel models' system
 * matrices do not feed it back, but the hip policy needs it for its
 * angle excursion limit.
 */
struct ModelState {
  ModelKind kind = ModelKind::LIPM;
  std::array<double, 4> q{};

  static ModelState cartesian(ModelKind kind, double x, double x_dot);
  static ModelState lippfm(double x, double x_dot, double theta_w, double theta_w_dot);
  static ModelState elippfm(double theta_a, double theta_a_dot,
                            double theta_w, double theta_w_dot);

  double x() const { return q[0]; }
  double x_dot() const { return q[1]; }
  double theta_a() const { return q[0]; }
  double theta_a_dot() const { return q[1]; }
  double theta_w() const { return q[2]; }
  double theta_w_dot() const { return q[3]; }

  bool finite() const {
    for (int i = 0; i < state_dim(kind); ++i)
      if (!std::isfinite(q[i])) return false;
    return true;
  }

  // Horizontal COM-point position/velocity in the sagittal plane.
  // For ELIPPFM this maps the pendulum angle through x = L0*sin(theta_a).
  double cart_x(const RobotParams& p) const {
    if (kind == ModelKind::ELIPPFM) return p.l_0 * std::sin(q[0]);
    return q[0];
  }
  double cart_x_dot(const RobotParams& p) const {
    if (kind == ModelKind::ELIPPFM) return p.l_0 * q[1] * std::cos(q[0]);
    return q[1];
  }
};

// Mass point used by the general ZMP formula.
struct BodyPoint {
  double m = 0.0;
  double x = 0.0, z = 0.0;
  double x_dd = 0.0, z_dd = 0.0;
};

// Lumped swing-mass kinematic sample (two-mass model input).
struct SwingSample {
  double x_s = 0.0, z_s = 0.0;
  double x_s_dd = 0.0, z_s_dd = 0.0;
};

}  // namespace pushrec
