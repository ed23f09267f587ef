#include "pushrec/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pushrec/errors.hpp"

namespace pushrec {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value, int line) {
  double out = 0.0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last)
    throw ConfigError("expected a number for '" + key + "', got '" + value + "'", key,
                      line);
  return out;
}

int parse_int(const std::string& key, const std::string& value, int line) {
  int out = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last)
    throw ConfigError("expected an integer for '" + key + "', got '" + value + "'", key,
                      line);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value, int line) {
  if (value == "true" || value == "on" || value == "1") return true;
  if (value == "false" || value == "off" || value == "0") return false;
  throw ConfigError("expected a boolean for '" + key + "', got '" + value + "'", key,
                    line);
}

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

// pulls a key out of the section; remaining keys are reported as unknown
template <class T, class Parse>
bool take(Section& sec, const std::string& key, T& dst, Parse&& parse) {
  auto it = sec.find(key);
  if (it == sec.end()) return false;
  dst = parse(key, it->second.value, it->second.line);
  sec.erase(it);
  return true;
}

bool take_double(Section& sec, const std::string& key, double& dst) {
  return take(sec, key, dst, parse_double);
}

bool take_bool(Section& sec, const std::string& key, bool& dst) {
  return take(sec, key, dst, parse_bool);
}

void reject_unknown(const Section& sec, const std::string& section_name) {
  if (sec.empty()) return;
  const auto& [key, entry] = *sec.begin();
  throw ConfigError("unknown key '" + key + "' in section [" + section_name + "]",
                    section_name + "." + key, entry.line);
}

std::string first_word(const std::string& s) {
  const auto pos = s.find(' ');
  return pos == std::string::npos ? s : s.substr(0, pos);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  std::map<std::string, Section> sections;
  {
    std::istringstream in(text);
    std::string raw;
    std::string current = "";
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string line = raw;
      const auto comment = line.find_first_of("#;");
      if (comment != std::string::npos) line = line.substr(0, comment);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError("malformed section header", line, line_no);
        current = trim(line.substr(1, line.size() - 2));
        static const char* known[] = {"robot", "sim", "grid", "step", "policy", "output"};
        bool ok = false;
        for (const char* k : known) ok = ok || current == k;
        if (!ok) throw ConfigError("unknown section [" + current + "]", current, line_no);
        sections[current];
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("expected 'key = value'", line, line_no);
      if (current.empty())
        throw ConfigError("key outside any section", line, line_no);
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty() || value.empty())
        throw ConfigError("expected 'key = value'", key, line_no);
      sections[current][key] = Entry{value, line_no};
    }
  }

  RunConfig cfg;

  {
    Section& r = sections["robot"];
    take_double(r, "m_c", cfg.robot.m_c);
    take_double(r, "m_1", cfg.robot.m_1);
    take_double(r, "m_2", cfg.robot.m_2);
    take_double(r, "m_3", cfg.robot.m_3);
    take_double(r, "z_c", cfg.robot.z_c);
    take_double(r, "z_c_min", cfg.robot.z_c_min);
    take_double(r, "z_c_max", cfg.robot.z_c_max);
    take_double(r, "l_0", cfg.robot.l_0);
    take_double(r, "l_1", cfg.robot.l_1);
    take_double(r, "l_2", cfg.robot.l_2);
    take_double(r, "delta", cfg.robot.delta);
    take_double(r, "tau_w_max", cfg.robot.tau_w_max);
    take_double(r, "zcdd_max", cfg.robot.zcdd_max);
    take_double(r, "g", cfg.robot.g);
    take_double(r, "i_w", cfg.robot.i_w);
    take_double(r, "theta_w_max", cfg.robot.theta_w_max);
    // derived unless set explicitly
    const bool has_m_fly = take_double(r, "m_fly", cfg.robot.m_fly);
    const bool has_m_pend = take_double(r, "m_pend", cfg.robot.m_pend);
    const bool has_l_pend = take_double(r, "l_pend", cfg.robot.l_pend);
    const bool has_i_p = take_double(r, "i_p", cfg.robot.i_p);
    const bool has_tau_a = take_double(r, "tau_a_max", cfg.robot.tau_a_max);
    reject_unknown(r, "robot");
    if (!has_m_fly) cfg.robot.m_fly = cfg.robot.m_c;
    if (!has_m_pend) cfg.robot.m_pend = cfg.robot.swing_mass();
    if (!has_l_pend) cfg.robot.l_pend = cfg.robot.l_0 / 2.0;
    if (!has_i_p)
      cfg.robot.i_p = cfg.robot.m_pend * cfg.robot.l_0 * cfg.robot.l_0 / 3.0;
    if (!has_tau_a)
      cfg.robot.tau_a_max = cfg.robot.total_mass() * cfg.robot.g * cfg.robot.delta / 2.0;
  }

  {
    Section& s = sections["sim"];
    take_double(s, "dt", cfg.sim.dt);
    take_double(s, "t_max", cfg.sim.t_max);
    take_double(s, "settle_pos_tol", cfg.sim.settle_pos_tol);
    take_double(s, "settle_vel_tol", cfg.sim.settle_vel_tol);
    take_double(s, "settle_ang_tol", cfg.sim.settle_ang_tol);
    take_double(s, "settle_angvel_tol", cfg.sim.settle_angvel_tol);
    take_double(s, "settle_dwell", cfg.sim.settle_dwell);
    take_double(s, "fall_angle", cfg.sim.fall_angle);
    take_double(s, "fall_offset", cfg.sim.fall_offset);
    reject_unknown(s, "sim");
  }

  {
    Section& g = sections["grid"];
    take_double(g, "x0_min", cfg.grid.x0_min);
    take_double(g, "x0_max", cfg.grid.x0_max);
    take_double(g, "x0_step", cfg.grid.x0_step);
    take_double(g, "v0_min", cfg.grid.v0_min);
    take_double(g, "v0_max", cfg.grid.v0_max);
    take_double(g, "v0_step", cfg.grid.v0_step);
    reject_unknown(g, "grid");
  }

  {
    Section& s = sections["step"];
    take_double(s, "l_sx", cfg.step.l_sx);
    take_double(s, "l_sy", cfg.step.l_sy);
    take_double(s, "t_ss", cfg.step.t_ss);
    take_double(s, "t_ds", cfg.step.t_ds);
    take_double(s, "max_step_length", cfg.step.max_step_length);
    take_double(s, "min_feet_distance", cfg.step.min_feet_distance);
    take_double(s, "h_apex", cfg.swing.h_apex);
    const bool has_t_init = take_double(s, "t_init", cfg.step.t_init);
    reject_unknown(s, "step");
    if (!has_t_init) cfg.step.t_init = cfg.step.t_ds;
    cfg.swing.t_ss = cfg.step.t_ss;
  }

  {
    Section& p = sections["policy"];
    take_bool(p, "ankle_enabled", cfg.policy.ankle_enabled);
    take_bool(p, "hip_enabled", cfg.policy.hip_enabled);
    take_double(p, "hip_release_frac", cfg.policy.hip_release_frac);
    take_double(p, "unwind_freq", cfg.policy.unwind_freq);
    const bool has_lo = take_double(p, "cop_min", cfg.policy.cop_min);
    const bool has_hi = take_double(p, "cop_max", cfg.policy.cop_max);
    reject_unknown(p, "policy");
    if (!has_lo) cfg.policy.cop_min = -cfg.robot.cop_limit();
    if (!has_hi) cfg.policy.cop_max = cfg.robot.cop_limit();
    cfg.policy.control_dt = cfg.sim.dt;
  }

  {
    Section& o = sections["output"];
    auto id = [](const std::string&, const std::string& v, int) { return v; };
    take(o, "dir", cfg.output.dir, id);
    std::string format;
    if (take(o, "format", format, id)) {
      if (format == "csv") {
        cfg.output.csv = true;
        cfg.output.svg = false;
      } else if (format == "svg") {
        cfg.output.csv = false;
        cfg.output.svg = true;
      } else if (format == "both") {
        cfg.output.csv = cfg.output.svg = true;
      } else {
        throw ConfigError("format must be csv, svg or both", "output.format", 0);
      }
    }
    int jobs = cfg.output.jobs;
    if (take(o, "jobs", jobs, parse_int)) {
      if (jobs < 1) throw ConfigError("jobs must be >= 1", "output.jobs", 0);
      cfg.output.jobs = jobs;
    }
    std::string models;
    if (take(o, "models", models, id)) {
      cfg.output.models.clear();
      std::istringstream ms(models);
      std::string name;
      while (std::getline(ms, name, ',')) {
        name = trim(name);
        if (name.empty()) continue;
        try {
          cfg.output.models.push_back(model_from_name(name));
        } catch (const RejectedInput& e) {
          throw ConfigError(e.what(), "output.models", 0);
        }
      }
      if (cfg.output.models.empty())
        throw ConfigError("models list is empty", "output.models", 0);
    }
    reject_unknown(o, "output");
  }

  // cross-field invariants
  try {
    cfg.robot.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what(), "robot." + first_word(e.what()), 0);
  }
  try {
    cfg.sim.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what(), "sim." + first_word(e.what()), 0);
  }
  try {
    cfg.grid.validate();
  } catch (const RejectedInput& e) {
    throw ConfigError(e.what(), "grid", 0);
  }
  try {
    cfg.step.validate();
  } catch (const PlanningError& e) {
    throw ConfigError(e.what(), "step", 0);
  }
  try {
    cfg.policy.validate(cfg.robot);
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what(), "policy", 0);
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  if (path.empty()) return parse_config("");
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace pushrec
