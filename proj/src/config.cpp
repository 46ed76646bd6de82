#include "schlab/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace schlab {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> tokens(const std::string& value) {
  std::istringstream in(value);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& origin, int line, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) fail(origin, line, "expected a real number, got '" + v + "'");
    return x;
  } catch (const std::logic_error&) {
    fail(origin, line, "expected a real number, got '" + v + "'");
  }
}

int parse_int(const std::string& origin, int line, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) fail(origin, line, "expected an integer, got '" + v + "'");
    return static_cast<int>(x);
  } catch (const std::logic_error&) {
    fail(origin, line, "expected an integer, got '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& origin, int line, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) fail(origin, line, "expected an unsigned integer, got '" + v + "'");
    return x;
  } catch (const std::logic_error&) {
    fail(origin, line, "expected an unsigned integer, got '" + v + "'");
  }
}

std::vector<int> parse_int_list(const std::string& origin, int line, const std::string& v) {
  std::vector<int> out;
  for (const auto& t : tokens(v)) out.push_back(parse_int(origin, line, t));
  if (out.empty()) fail(origin, line, "expected a list of integers");
  return out;
}

std::vector<double> parse_double_list(const std::string& origin, int line, const std::string& v) {
  std::vector<double> out;
  for (const auto& t : tokens(v)) out.push_back(parse_double(origin, line, t));
  if (out.empty()) fail(origin, line, "expected a list of reals");
  return out;
}

Drift parse_drift(const std::string& origin, int line, const std::string& v) {
  const auto toks = tokens(v);
  if (toks.empty()) fail(origin, line, "empty drift spec");
  const std::string& name = toks[0];
  auto want = [&](std::size_t count) {
    if (toks.size() != count + 1)
      fail(origin, line, "drift '" + name + "' expects " + std::to_string(count) + " parameters");
  };
  if (name == "zero") {
    want(0);
    return Drift::zero();
  }
  if (name == "sin") {
    if (toks.size() == 1) return Drift::scaled_sine(1.0);
    want(1);
    return Drift::scaled_sine(parse_double(origin, line, toks[1]));
  }
  if (name == "rational") {
    want(1);
    return Drift::lipschitz_rational(parse_double(origin, line, toks[1]));
  }
  if (name == "cubic") {
    want(4);
    return Drift::cubic(parse_double(origin, line, toks[1]), parse_double(origin, line, toks[2]),
                        parse_double(origin, line, toks[3]), parse_double(origin, line, toks[4]));
  }
  if (name == "cubic_cutoff") {
    want(5);
    return Drift::cubic_cutoff(parse_double(origin, line, toks[1]),
                               parse_double(origin, line, toks[2]),
                               parse_double(origin, line, toks[3]),
                               parse_double(origin, line, toks[4]),
                               parse_double(origin, line, toks[5]));
  }
  fail(origin, line, "unknown drift '" + name + "'");
}

Diffusion parse_diffusion(const std::string& origin, int line, const std::string& v) {
  const auto toks = tokens(v);
  if (toks.empty()) fail(origin, line, "empty diffusion spec");
  if (toks[0] == "constant" && toks.size() == 2)
    return Diffusion::constant(parse_double(origin, line, toks[1]));
  if (toks[0] == "shifted_sine" && toks.size() == 3)
    return Diffusion::shifted_sine(parse_double(origin, line, toks[1]),
                                   parse_double(origin, line, toks[2]));
  fail(origin, line, "expected 'constant <c>' or 'shifted_sine <b> <a>'");
}

InitialData parse_initial(const std::string& origin, int line, const std::string& v) {
  const auto toks = tokens(v);
  if (toks.empty()) fail(origin, line, "empty initial data spec");
  if (toks[0] == "zero" && toks.size() == 1) return InitialData::zero();
  if (toks[0] == "sine" && toks.size() == 3)
    return InitialData::sine_mode(parse_int(origin, line, toks[1]),
                                  parse_double(origin, line, toks[2]));
  if (toks[0] == "combo" && toks.size() >= 3 && toks.size() % 2 == 1) {
    std::vector<std::pair<int, double>> modes;
    for (std::size_t i = 1; i + 1 < toks.size(); i += 2)
      modes.emplace_back(parse_int(origin, line, toks[i]), parse_double(origin, line, toks[i + 1]));
    return InitialData::sine_combo(std::move(modes));
  }
  fail(origin, line, "expected 'zero', 'sine <j> <a>', or 'combo <j> <a> ...'");
}

RecordPolicy parse_record(const std::string& origin, int line, const std::string& v, int& stride) {
  const auto toks = tokens(v);
  if (toks.size() == 1 && toks[0] == "terminal") return RecordPolicy::terminal_only;
  if (toks.size() == 1 && toks[0] == "all") return RecordPolicy::all_steps;
  if (toks.size() == 2 && toks[0] == "stride") {
    stride = parse_int(origin, line, toks[1]);
    return RecordPolicy::stride;
  }
  fail(origin, line, "expected 'terminal', 'all', or 'stride <s>'");
}

std::string record_string(const RunConfig& c) {
  switch (c.problem.record) {
    case RecordPolicy::terminal_only:
      return "terminal";
    case RecordPolicy::all_steps:
      return "all";
    case RecordPolicy::stride:
      return "stride " + std::to_string(c.problem.stride);
    case RecordPolicy::selected:
      break;
  }
  return "terminal";
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += " ";
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += " ";
    out += fmt(v[i]);
  }
  return out;
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::rates_space: return "rates-space";
    case Command::rates_time: return "rates-time";
    case Command::kernel_errors: return "kernel-errors";
    case Command::holder: return "holder";
    case Command::density: return "density";
    case Command::malliavin: return "malliavin";
    case Command::validate: return "validate";
  }
  return "unknown";
}

RunConfig default_config(Command command) {
  RunConfig c;
  c.problem.n = 32;
  c.problem.m = 512;
  c.problem.T = 0.1;
  switch (command) {
    case Command::rates_time:
      c.study.levels = {4, 8, 16, 32, 64};
      c.study.reference = 4096;
      break;
    case Command::density:
      c.study.levels = {4, 8, 16};
      c.study.reference = 64;
      c.study.samples = 5000;
      c.problem.m = 256;
      break;
    case Command::malliavin:
      c.study.levels = {4, 8, 16};
      c.study.reference = 32;
      c.study.samples = 200;
      c.problem.m = 64;
      break;
    case Command::holder:
      c.problem.n = 64;
      c.problem.m = 4096;
      c.problem.T = 0.25;
      break;
    default:
      break;
  }
  return c;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin, Command command) {
  RunConfig cfg = default_config(command);
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(origin, line, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "problem" && section != "study" && section != "kernel" &&
          section != "output")
        fail(origin, line, "unknown section '" + section + "'");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(origin, line, "expected 'key = value'");
    if (section.empty()) fail(origin, line, "key outside any section");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const std::string full = section + "." + key;
    if (seen.count(full)) fail(origin, line, "duplicate key '" + full + "'");
    seen[full] = line;
    if (value.empty()) fail(origin, line, "empty value for '" + full + "'");

    if (full == "problem.n") cfg.problem.n = parse_int(origin, line, value);
    else if (full == "problem.m") cfg.problem.m = parse_int(origin, line, value);
    else if (full == "problem.T") cfg.problem.T = parse_double(origin, line, value);
    else if (full == "problem.drift") cfg.problem.drift = parse_drift(origin, line, value);
    else if (full == "problem.diffusion") cfg.problem.diffusion = parse_diffusion(origin, line, value);
    else if (full == "problem.initial") cfg.problem.initial = parse_initial(origin, line, value);
    else if (full == "problem.record") cfg.problem.record = parse_record(origin, line, value, cfg.problem.stride);
    else if (full == "problem.seed") cfg.seed = parse_u64(origin, line, value);
    else if (full == "study.levels") cfg.study.levels = parse_int_list(origin, line, value);
    else if (full == "study.reference") cfg.study.reference = parse_int(origin, line, value);
    else if (full == "study.samples") cfg.study.samples = parse_int(origin, line, value);
    else if (full == "study.moment_p") cfg.study.moment_p = parse_double(origin, line, value);
    else if (full == "study.eval_x") cfg.study.eval_x = parse_double(origin, line, value);
    else if (full == "study.time_gaps") cfg.study.time_gaps = parse_int_list(origin, line, value);
    else if (full == "study.space_gaps") cfg.study.space_gaps = parse_int_list(origin, line, value);
    else if (full == "study.hnorm_n") cfg.study.hnorm_n = parse_int(origin, line, value);
    else if (full == "study.hnorm_m") cfg.study.hnorm_m = parse_int(origin, line, value);
    else if (full == "study.hnorm_samples") cfg.study.hnorm_samples = parse_int(origin, line, value);
    else if (full == "study.rho") cfg.study.rho = parse_double(origin, line, value);
    else if (full == "kernel.levels") cfg.kernel.levels = parse_int_list(origin, line, value);
    else if (full == "kernel.horizon") cfg.kernel.horizon = parse_double(origin, line, value);
    else if (full == "kernel.x_points") cfg.kernel.x_points = parse_double_list(origin, line, value);
    else if (full == "kernel.tail_tol") cfg.kernel.quadrature.tail_tol = parse_double(origin, line, value);
    else if (full == "kernel.j_max") cfg.kernel.quadrature.j_max = parse_int(origin, line, value);
    else if (full == "kernel.time_nodes") cfg.kernel.quadrature.time_nodes = parse_int(origin, line, value);
    else if (full == "kernel.time_grading") cfg.kernel.quadrature.time_grading = parse_double(origin, line, value);
    else if (full == "kernel.space_nodes_per_cell") cfg.kernel.quadrature.space_nodes_per_cell = parse_int(origin, line, value);
    else if (full == "output.dir") cfg.output_dir = value;
    else fail(origin, line, "unknown key '" + full + "'");
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path, Command command) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config file not found: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path, command);
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[problem]\n";
  out << "n = " << c.problem.n << "\n";
  out << "m = " << c.problem.m << "\n";
  out << "T = " << fmt(c.problem.T) << "\n";
  out << "drift = " << c.problem.drift.describe() << "\n";
  out << "diffusion = " << c.problem.diffusion.describe() << "\n";
  out << "initial = " << c.problem.initial.describe() << "\n";
  out << "record = " << record_string(c) << "\n";
  out << "seed = " << c.seed << "\n";
  out << "\n[study]\n";
  out << "levels = " << join_ints(c.study.levels) << "\n";
  out << "reference = " << c.study.reference << "\n";
  out << "samples = " << c.study.samples << "\n";
  out << "moment_p = " << fmt(c.study.moment_p) << "\n";
  out << "eval_x = " << fmt(c.study.eval_x) << "\n";
  out << "time_gaps = " << join_ints(c.study.time_gaps) << "\n";
  out << "space_gaps = " << join_ints(c.study.space_gaps) << "\n";
  out << "hnorm_n = " << c.study.hnorm_n << "\n";
  out << "hnorm_m = " << c.study.hnorm_m << "\n";
  out << "hnorm_samples = " << c.study.hnorm_samples << "\n";
  out << "rho = " << fmt(c.study.rho) << "\n";
  out << "\n[kernel]\n";
  out << "levels = " << join_ints(c.kernel.levels) << "\n";
  out << "horizon = " << fmt(c.kernel.horizon) << "\n";
  out << "x_points = " << join_doubles(c.kernel.x_points) << "\n";
  out << "tail_tol = " << fmt(c.kernel.quadrature.tail_tol) << "\n";
  out << "j_max = " << c.kernel.quadrature.j_max << "\n";
  out << "time_nodes = " << c.kernel.quadrature.time_nodes << "\n";
  out << "time_grading = " << fmt(c.kernel.quadrature.time_grading) << "\n";
  out << "space_nodes_per_cell = " << c.kernel.quadrature.space_nodes_per_cell << "\n";
  out << "\n[output]\n";
  out << "dir = " << c.output_dir << "\n";
  return out.str();
}

}  // namespace schlab
