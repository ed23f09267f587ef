#pragma once

#include <vector>

#include "pushrec/model_state.hpp"
#include "pushrec/robot_params.hpp"

namespace pushrec {

struct StepParams {
  double l_sx = 0.1;   // step length (m)
  double l_sy = 0.1;   // step width (m)
  double t_ss = 0.5;   // single support duration (s)
  double t_ds = 0.2;   // double support duration (s)
  double t_init = 0.2; // initialize-state duration (s)
  double max_step_length = 0.25;
  double min_feet_distance = 0.08;

  double duration() const { return t_ss + t_ds; }
  void validate() const;  // throws PlanningError naming the violated constraint
};

struct Foothold {
  enum class Side { Left, Right };
  double x = 0.0;
  double y = 0.0;
  Side side = Side::Right;
};

using FootholdSequence = std::vector<Foothold>;

struct StartPose {
  double x = 0.0;
  double y = 0.0;
  Foothold::Side first_swing = Foothold::Side::Right;
};

// Landing positions of n_steps alternating steps: x advances l_sx per step,
// y alternates +/- l_sy/2 about the walk line.
FootholdSequence plan_footsteps(const StepParams& step, int n_steps,
                                const StartPose& start = {});

// Support feet per step: entry i is the stance foot during step i, with the
// initial stance prepended; length n_steps + 1 so the double-support target
// of the last step is available.
FootholdSequence support_sequence(const FootholdSequence& landings,
                                  const StepParams& step, const StartPose& start = {});

struct ZmpPoint {
  double x = 0.0;
  double y = 0.0;
};

// Piecewise ZMP reference for step `i`: the support foothold during single
// support, then a linear blend toward the next support during double support.
// t is the within-step time in [0, t_ss + t_ds).
ZmpPoint zmp_reference(const StepParams& step, const FootholdSequence& supports,
                       int step_index, double t);

struct SwingProfile {
  double h_apex = 0.04;  // m
  double t_ss = 0.5;     // s, swing duration
};

// Quintic x (rest-to-rest, zero end accelerations) and quartic z bump
// (zero at both ends, h_apex at midswing). Accelerations are analytic.
SwingSample swing_trajectory(const SwingProfile& profile, const Foothold& from,
                             const Foothold& to, double t);

enum class WalkPhase { Idle, Initialize, SingleSupport, DoubleSupport };

const char* walk_phase_name(WalkPhase p);

/**
 * Walking state machine. The timer is the within-step time: single support
 * covers [0, t_ss), double support [t_ss, t_ss + t_ds); it resets on the
 * double-to-single transition, where the support side swaps and step_index
 * advances. Initialize runs t_init and leads into the first single support.
 */
struct WalkState {
  WalkPhase phase = WalkPhase::Idle;
  double t = 0.0;
  bool walk_commanded = false;
  int step_index = 0;
  Foothold::Side support = Foothold::Side::Left;
};

WalkState advance_state_machine(WalkState current, double dt, const StepParams& step);

struct ComTrajectory {
  double dt = 0.0;
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> x_ddot;      // finite-difference accelerations
  int iterations = 0;              // swing-coupling refinements performed
  std::vector<double> residuals;   // ||f_k+1 - f_k||_inf per refinement
};

/**
 * COM trajectory over one step for the multi-mass model.
 *
 * Iteration 0 solves the two-mass boundary-value problem with the swing
 * mass lumped on the swing-ankle trajectory. Each refinement places the
 * per-part masses with the two-link leg geometry hanging from the current
 * COM iterate, rebuilds the coupling term, and re-solves, until the
 * coupling change drops below tol. Boundary conditions put the COM
 * symmetrically about the support foot (+-l_sx/2).
 */
ComTrajectory mmipm_solve_com(const StepParams& step, const Foothold& support,
                              const Foothold& swing_from, const Foothold& swing_to,
                              const SwingProfile& profile, const RobotParams& params,
                              double tol, int max_iter, double grid_dt = 1e-3);

// Tridiagonal solve of x'' = om2 (x - p) + f on a uniform grid with
// Dirichlet ends. p and f are sampled on the grid, sizes n+1.
std::vector<double> solve_com_bvp(const std::vector<double>& p,
                                  const std::vector<double>& f, double h,
                                  double om2, double x_begin, double x_end);

struct WalkSample {
  double t = 0.0;
  WalkPhase phase = WalkPhase::Idle;
  int step_index = 0;
  double com_x = 0.0, com_xd = 0.0, com_y = 0.0;
  double zmp_ref_x = 0.0, zmp_ref_y = 0.0;
  double zmp_real_x = 0.0;
  double swing_x = 0.0, swing_z = 0.0;
};

struct WalkResult {
  ModelKind model = ModelKind::LIPM;
  double dt = 0.0;
  std::vector<WalkSample> samples;
  int com_iterations = 0;
  std::vector<double> residuals;
};

/**
 * Nominal n-step walk driven by the state machine: initialize ease, then the
 * COM boundary-value solve over the stepping horizon with the model's swing
 * coupling (zero for LIPM and the flywheel-at-rest model). Supports the
 * ZMP-driven models; throws RejectedInput for IP and ELIPPFM.
 */
WalkResult generate_walk(ModelKind kind, int n_steps, const StepParams& step,
                         const SwingProfile& profile, const RobotParams& params,
                         double grid_dt = 1e-3, double tol = 1e-6, int max_iter = 50);

}  // namespace pushrec
