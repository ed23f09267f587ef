#pragma once

#include <ostream>
#include <string>

#include "pushrec/planner.hpp"
#include "pushrec/sweep.hpp"

namespace pushrec {

// Floating-point serialization used by every artifact: 9 significant digits,
// so reruns are byte-identical.
std::string format_g9(double v);

// rows: model,x0,v0,label,settle_time (settle_time empty when absent)
void write_region_csv(std::ostream& out, const RegionMap& map);

// rows: model,stable_cells,ankle_cells,hip_cells,unstable_cells,stable_fraction
void write_summary_csv(std::ostream& out, const SweepSummary& summary);

// Cell-colored phase-plane map: yellow unstable, dark green ankle-stable,
// light green hip-stable.
void write_region_svg(std::ostream& out, const RegionMap& map);

// time series of one simulation run: t, state, inputs, realized CoP, label
void write_trace_csv(std::ostream& out, ModelKind kind, const SimOutcome& outcome,
                     RecoveryLabel label);

void write_walk_csv(std::ostream& out, const WalkResult& walk);

void print_summary_table(std::ostream& out, const SweepSummary& summary);

}  // namespace pushrec
