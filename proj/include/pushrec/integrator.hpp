#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pushrec/dynamics.hpp"
#include "pushrec/model_state.hpp"

namespace pushrec {

struct SimConfig {
  double dt = 1e-3;
  double t_max = 5.0;
  double settle_pos_tol = 1e-3;     // m
  double settle_vel_tol = 1e-3;     // m/s
  double settle_ang_tol = 1e-3;     // rad
  double settle_angvel_tol = 1e-3;  // rad/s
  double settle_dwell = 0.25;       // s the tolerances must hold
  double fall_angle = 1.0471975511965976;  // rad, pi/3
  double fall_offset = 0.5;                // m

  int step_count() const;  // t_max/dt, validated whole
  void validate() const;   // throws InvalidParameter
};

// Input channels a policy can drive. A model's dynamics consume a subset.
enum Channel : unsigned {
  kChannelZmp = 1u,
  kChannelAnkleTorque = 2u,
  kChannelFlywheel = 4u,
  kChannelVertical = 8u,
};

unsigned required_channels(ModelKind kind);

struct ControlInputs {
  double p_x = 0.0;
  double tau_a = 0.0;
  double tau_w = 0.0;
  double zc_dd = 0.0;
};

struct Policy {
  std::function<ControlInputs(double t, const ModelState&)> fn;
  unsigned channels = 0;
  // When set, settle detection also requires the flywheel rate to be still.
  // Enabled by policies that actively use the flywheel and unwind it.
  bool settle_flywheel = false;
};

struct TrajectorySample {
  double t = 0.0;
  ModelState state;
  ControlInputs inputs;
  double p_realized = 0.0;  // CoP realized by the applied inputs
};

enum class Termination { Settled, Fell, TimedOut };

const char* termination_name(Termination t);

struct SimOutcome {
  std::vector<TrajectorySample> trajectory;
  Termination termination = Termination::TimedOut;
  std::optional<double> settle_time;  // present iff Settled; start of the dwell
  double max_zmp_excursion = 0.0;     // max |p_realized| over the run
  bool blowup = false;                // non-finite state terminated the run
};

using DerivFn =
    std::function<StateDeriv(const ModelState&, const ControlInputs&)>;

// Classical RK4 update with inputs held constant across the step.
// Throws NumericalBlowup (carrying t_now) on a non-finite stage value.
ModelState rk4_step(const DerivFn& deriv, const ModelState& s,
                    const ControlInputs& u, double dt, double t_now = 0.0);

// CoP realized by a set of inputs for the given model (command framing:
// torque-input models map tau_a back through the static CoP relation).
double realized_cop(ModelKind kind, const ControlInputs& u, const RobotParams& p);

/**
 * Fixed-step closed-loop simulation: sample the policy, hold its outputs
 * over one RK4 step, repeat. Terminates on settle (tolerances held for the
 * dwell), fall (lean/offset bound or numerical blowup), or the horizon.
 */
SimOutcome simulate(ModelKind kind, const ModelState& initial, const Policy& policy,
                    const RobotParams& params, const SimConfig& cfg);

}  // namespace pushrec
