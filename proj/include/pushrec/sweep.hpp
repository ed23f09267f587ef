#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pushrec/recovery.hpp"

namespace pushrec {

struct GridSpec {
  double x0_min = -0.2, x0_max = 0.2, x0_step = 0.02;
  double v0_min = -0.5, v0_max = 0.5, v0_step = 0.1;

  int nx() const;
  int nv() const;
  // Grid coordinates built from the midpoint and a signed integer offset, so
  // symmetric grids produce exactly sign-symmetric values.
  double x_at(int i) const;
  double v_at(int j) const;
  void validate() const;  // throws RejectedInput
};

struct CellResult {
  RecoveryLabel label = RecoveryLabel::Unstable;
  std::optional<double> settle_time;
  bool blowup = false;
};

struct RegionMap {
  ModelKind model = ModelKind::LIPM;
  GridSpec grid;
  std::vector<CellResult> cells;  // row-major, index = i * nv + j

  const CellResult& at(int i, int j) const {
    return cells[static_cast<size_t>(i) * grid.nv() + j];
  }
};

struct ModelSummary {
  ModelKind model = ModelKind::LIPM;
  int ankle_cells = 0;
  int hip_cells = 0;
  int unstable_cells = 0;

  int stable_cells() const { return ankle_cells + hip_cells; }
  int total_cells() const { return stable_cells() + unstable_cells; }
  double stable_fraction() const {
    return total_cells() > 0 ? static_cast<double>(stable_cells()) / total_cells() : 0.0;
  }
};

struct SweepSummary {
  std::vector<ModelSummary> models;  // ordered by stable cells, descending
};

// Initial model state for a grid cell; all components beyond (x0, v0) zero.
// The angular model maps x0 -> theta_a = asin(x0/l_0), v0 -> theta_a_dot.
ModelState initial_state_for(ModelKind kind, double x0, double v0,
                             const RobotParams& params);

// One classification per cell; cells are independent and merged by index, so
// the result is invariant under evaluation order and worker count. Per-cell
// blowups are recorded, never abort the sweep.
RegionMap run_grid(ModelKind kind, const GridSpec& grid, const RobotParams& params,
                   const SimConfig& cfg, const PolicyBundle& bundle, int jobs = 1);

SweepSummary summarize(std::span<const RegionMap> maps);

}  // namespace pushrec
