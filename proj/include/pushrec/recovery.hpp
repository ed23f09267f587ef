#pragma once

#include <utility>
#include <vector>

#include "pushrec/integrator.hpp"
#include "pushrec/model_state.hpp"

namespace pushrec {

enum class RecoveryLabel { StableAnkle, StableHip, Unstable };

const char* label_name(RecoveryLabel label);

struct PolicyBundle {
  bool ankle_enabled = true;
  bool hip_enabled = true;
  double cop_min = -0.05;  // admissible CoP range; defaults follow delta/2
  double cop_max = 0.05;
  double hip_release_frac = 0.3;  // wind until the capture point is this far inside
  double unwind_freq = 3.0;       // rad/s, critically damped flywheel unwind
  double control_dt = 1e-3;       // ZOH period assumed by the angle-limit lookahead

  static PolicyBundle defaults_for(const RobotParams& p);
  void validate(const RobotParams& p) const;  // throws InvalidParameter
};

// Capture-point CoP placement clamped to the foot; torque-input models get
// the ankle torque realizing that CoP. Fills p_x (and tau_a where used).
ControlInputs ankle_policy(ModelKind kind, const ModelState& s, const RobotParams& p,
                           const PolicyBundle& bundle);

// Bang-bang flywheel torque: wind against the capture-point excess until the
// angle budget is spent (committed until the capture point is pushed a margin
// inside the foot), brake at the excursion limit, then a proportional unwind
// drives the wheel angle back toward zero.
double hip_policy(ModelKind kind, const ModelState& s, const RobotParams& p,
                  const PolicyBundle& bundle);

// Full closed-loop policy for a model; with_hip additionally engages the
// flywheel strategy (and the vertical-acceleration schedule for the
// released-height model).
Policy make_policy(ModelKind kind, const RobotParams& p, const PolicyBundle& bundle,
                   bool with_hip);

/**
 * Region label for one initial state: ankle strategy alone first; if that
 * run does not settle and the model has a flywheel, ankle plus hip. Returns
 * the label with the outcome of every attempt (ankle first).
 */
std::pair<RecoveryLabel, std::vector<SimOutcome>> classify(
    ModelKind kind, const ModelState& initial, const RobotParams& params,
    const SimConfig& cfg, const PolicyBundle& bundle);

}  // namespace pushrec
