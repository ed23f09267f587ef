#include "pushrec/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "pushrec/errors.hpp"

namespace pushrec {

namespace {

int axis_count(double lo, double hi, double step, const char* axis) {
  if (!(step > 0.0)) throw RejectedInput(std::string(axis) + " step must be positive");
  if (hi < lo) throw RejectedInput(std::string(axis) + " max must be >= min");
  const double n = (hi - lo) / step;
  const double r = std::round(n);
  if (std::abs(n - r) > 1e-9 * (1.0 + std::abs(r)))
    throw RejectedInput(std::string(axis) +
                        " range must be a whole number of steps (inclusive endpoints)");
  return static_cast<int>(r) + 1;
}

double axis_value(double lo, double hi, double step, int count, int idx) {
  const double mid = 0.5 * (lo + hi);
  return mid + 0.5 * (2 * idx - (count - 1)) * step;
}

}  // namespace

int GridSpec::nx() const { return axis_count(x0_min, x0_max, x0_step, "x0"); }
int GridSpec::nv() const { return axis_count(v0_min, v0_max, v0_step, "v0"); }

double GridSpec::x_at(int i) const {
  return axis_value(x0_min, x0_max, x0_step, nx(), i);
}

double GridSpec::v_at(int j) const {
  return axis_value(v0_min, v0_max, v0_step, nv(), j);
}

void GridSpec::validate() const {
  (void)nx();
  (void)nv();
}

ModelState initial_state_for(ModelKind kind, double x0, double v0,
                             const RobotParams& params) {
  if (kind == ModelKind::ELIPPFM) {
    if (std::abs(x0) >= params.l_0)
      throw RejectedInput("initial_state_for: |x0| must stay below the pendulum length");
    const double theta_a = std::asin(x0 / params.l_0);
    const double theta_a_dot = v0 / (params.l_0 * std::cos(theta_a));
    return ModelState::elippfm(theta_a, theta_a_dot, 0.0, 0.0);
  }
  if (kind == ModelKind::LIPPFM) return ModelState::lippfm(x0, v0, 0.0, 0.0);
  return ModelState::cartesian(kind, x0, v0);
}

RegionMap run_grid(ModelKind kind, const GridSpec& grid, const RobotParams& params,
                   const SimConfig& cfg, const PolicyBundle& bundle, int jobs) {
  grid.validate();
  params.validate();
  cfg.validate();
  bundle.validate(params);
  if (jobs < 1) throw RejectedInput("run_grid: jobs must be >= 1");

  const int nx = grid.nx();
  const int nv = grid.nv();
  const int total = nx * nv;

  RegionMap map;
  map.model = kind;
  map.grid = grid;
  map.cells.resize(static_cast<size_t>(total));

  auto evaluate = [&](int cell) {
    const int i = cell / nv;
    const int j = cell % nv;
    const ModelState initial = initial_state_for(kind, grid.x_at(i), grid.v_at(j), params);
    const auto [label, attempts] = classify(kind, initial, params, cfg, bundle);
    CellResult& out = map.cells[static_cast<size_t>(cell)];
    out.label = label;
    out.blowup = false;
    for (const SimOutcome& a : attempts) out.blowup = out.blowup || a.blowup;
    if (label != RecoveryLabel::Unstable) out.settle_time = attempts.back().settle_time;
  };

  const int workers = std::min(jobs, total);
  if (workers <= 1) {
    for (int cell = 0; cell < total; ++cell) evaluate(cell);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int cell = next.fetch_add(1); cell < total; cell = next.fetch_add(1))
          evaluate(cell);
      });
    }
    for (std::thread& th : pool) th.join();
  }
  return map;
}

SweepSummary summarize(std::span<const RegionMap> maps) {
  if (maps.empty()) throw RejectedInput("summarize: no region maps");
  const GridSpec& ref = maps.front().grid;
  for (const RegionMap& m : maps) {
    const GridSpec& g = m.grid;
    const bool same = g.x0_min == ref.x0_min && g.x0_max == ref.x0_max &&
                      g.x0_step == ref.x0_step && g.v0_min == ref.v0_min &&
                      g.v0_max == ref.v0_max && g.v0_step == ref.v0_step;
    if (!same) throw RejectedInput("summarize: region maps use different grids");
  }

  SweepSummary summary;
  for (const RegionMap& m : maps) {
    ModelSummary s;
    s.model = m.model;
    for (const CellResult& c : m.cells) {
      switch (c.label) {
        case RecoveryLabel::StableAnkle: ++s.ankle_cells; break;
        case RecoveryLabel::StableHip: ++s.hip_cells; break;
        case RecoveryLabel::Unstable: ++s.unstable_cells; break;
      }
    }
    summary.models.push_back(s);
  }
  std::stable_sort(summary.models.begin(), summary.models.end(),
                   [](const ModelSummary& a, const ModelSummary& b) {
                     return a.stable_cells() > b.stable_cells();
                   });
  return summary;
}

}  // namespace pushrec
