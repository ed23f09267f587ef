#include "pushrec/report.hpp"

#include <cstdio>
#include <iomanip>

namespace pushrec {

std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_region_csv(std::ostream& out, const RegionMap& map) {
  out << "model,x0,v0,label,settle_time\n";
  const int nx = map.grid.nx();
  const int nv = map.grid.nv();
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < nv; ++j) {
      const CellResult& c = map.at(i, j);
      out << model_name(map.model) << ',' << format_g9(map.grid.x_at(i)) << ','
          << format_g9(map.grid.v_at(j)) << ',' << label_name(c.label) << ',';
      if (c.settle_time) out << format_g9(*c.settle_time);
      out << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const SweepSummary& summary) {
  out << "model,stable_cells,ankle_cells,hip_cells,unstable_cells,stable_fraction\n";
  for (const ModelSummary& m : summary.models) {
    out << model_name(m.model) << ',' << m.stable_cells() << ',' << m.ankle_cells << ','
        << m.hip_cells << ',' << m.unstable_cells << ','
        << format_g9(m.stable_fraction()) << '\n';
  }
}

namespace {

const char* cell_color(RecoveryLabel label) {
  switch (label) {
    case RecoveryLabel::StableAnkle: return "#1b7837";  // dark green
    case RecoveryLabel::StableHip: return "#a6dba0";    // light green
    case RecoveryLabel::Unstable: return "#f6d645";     // yellow
  }
  return "#000000";
}

}  // namespace

void write_region_svg(std::ostream& out, const RegionMap& map) {
  const int nx = map.grid.nx();
  const int nv = map.grid.nv();
  const int cell = 22;
  const int margin_left = 64;
  const int margin_bottom = 44;
  const int margin_top = 36;
  const int margin_right = 12;
  const int width = margin_left + nx * cell + margin_right;
  const int height = margin_top + nv * cell + margin_bottom;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
      << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << margin_left << "\" y=\"22\" font-family=\"sans-serif\" "
         "font-size=\"15\">"
      << model_name(map.model) << " recovery regions</text>\n";

  // rows top-to-bottom run from v0_max down to v0_min
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < nv; ++j) {
      const int px = margin_left + i * cell;
      const int py = margin_top + (nv - 1 - j) * cell;
      out << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"" << cell_color(map.at(i, j).label)
          << "\" stroke=\"white\" stroke-width=\"1\"/>\n";
    }
  }

  out << "<text x=\"" << margin_left + nx * cell / 2
      << "\" y=\"" << height - 8
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">x0 "
         "(m)</text>\n";
  out << "<text x=\"14\" y=\"" << margin_top + nv * cell / 2
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 14 "
      << margin_top + nv * cell / 2 << ")\">v0 (m/s)</text>\n";

  for (int i = 0; i < nx; i += 5) {
    out << "<text x=\"" << margin_left + i * cell + cell / 2 << "\" y=\""
        << margin_top + nv * cell + 16
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">"
        << format_g9(map.grid.x_at(i)) << "</text>\n";
  }
  for (int j = 0; j < nv; j += 5) {
    out << "<text x=\"" << margin_left - 6 << "\" y=\""
        << margin_top + (nv - 1 - j) * cell + cell / 2 + 4
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
        << format_g9(map.grid.v_at(j)) << "</text>\n";
  }
  out << "</svg>\n";
}

void write_trace_csv(std::ostream& out, ModelKind kind, const SimOutcome& outcome,
                     RecoveryLabel label) {
  out << "t,";
  if (kind == ModelKind::ELIPPFM)
    out << "theta_a,theta_a_dot,theta_w,theta_w_dot";
  else if (kind == ModelKind::LIPPFM)
    out << "x,x_dot,theta_w,theta_w_dot";
  else
    out << "x,x_dot";
  out << ",p_x,tau_a,tau_w,zc_dd,p_realized,label\n";

  const int dim = state_dim(kind);
  for (const TrajectorySample& s : outcome.trajectory) {
    out << format_g9(s.t);
    for (int i = 0; i < dim; ++i) out << ',' << format_g9(s.state.q[i]);
    out << ',' << format_g9(s.inputs.p_x) << ',' << format_g9(s.inputs.tau_a) << ','
        << format_g9(s.inputs.tau_w) << ',' << format_g9(s.inputs.zc_dd) << ','
        << format_g9(s.p_realized) << ',' << label_name(label) << '\n';
  }
}

void write_walk_csv(std::ostream& out, const WalkResult& walk) {
  out << "t,phase,step_index,com_x,com_xd,com_y,zmp_ref_x,zmp_ref_y,zmp_real_x,"
         "swing_x,swing_z\n";
  for (const WalkSample& s : walk.samples) {
    out << format_g9(s.t) << ',' << walk_phase_name(s.phase) << ',' << s.step_index
        << ',' << format_g9(s.com_x) << ',' << format_g9(s.com_xd) << ','
        << format_g9(s.com_y) << ',' << format_g9(s.zmp_ref_x) << ','
        << format_g9(s.zmp_ref_y) << ',' << format_g9(s.zmp_real_x) << ','
        << format_g9(s.swing_x) << ',' << format_g9(s.swing_z) << '\n';
  }
}

void print_summary_table(std::ostream& out, const SweepSummary& summary) {
  out << std::left << std::setw(9) << "model" << std::right << std::setw(8) << "stable"
      << std::setw(8) << "ankle" << std::setw(8) << "hip" << std::setw(10) << "unstable"
      << std::setw(10) << "fraction" << '\n';
  for (const ModelSummary& m : summary.models) {
    char frac[16];
    std::snprintf(frac, sizeof frac, "%.3f", m.stable_fraction());
    out << std::left << std::setw(9) << model_name(m.model) << std::right << std::setw(8)
        << m.stable_cells() << std::setw(8) << m.ankle_cells << std::setw(8)
        << m.hip_cells << std::setw(10) << m.unstable_cells << std::setw(10) << frac
        << '\n';
  }
}

}  // namespace pushrec
