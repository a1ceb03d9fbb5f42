#include "oscflow/cli.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oscflow {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

std::string ConfigMap::get(const std::string& key, const std::string& fallback) const {
  auto it = entries.find(key);
  return it == entries.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  auto it = entries.find(key);
  if (it == entries.end()) return fallback;
  size_t pos = 0;
  const double v = std::stod(it->second, &pos);
  if (pos != it->second.size())
    throw std::invalid_argument("config key '" + key + "' is not a number: " + it->second);
  return v;
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
  auto it = entries.find(key);
  if (it == entries.end()) return fallback;
  size_t pos = 0;
  const int v = std::stoi(it->second, &pos);
  if (pos != it->second.size())
    throw std::invalid_argument("config key '" + key + "' is not an integer: " + it->second);
  return v;
}

std::uint64_t ConfigMap::get_u64(const std::string& key, std::uint64_t fallback) const {
  auto it = entries.find(key);
  if (it == entries.end()) return fallback;
  size_t pos = 0;
  const unsigned long long v = std::stoull(it->second, &pos);
  if (pos != it->second.size())
    throw std::invalid_argument("config key '" + key + "' is not an integer: " + it->second);
  return static_cast<std::uint64_t>(v);
}

ConfigMap parse_config(const std::string& text) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.resize(cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": empty section name");
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    out.entries[section.empty() ? key : section + "." + key] = val;
  }
  return out;
}

ConfigMap load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

ExperimentConfig ExperimentConfig::from_config(const ConfigMap& c) {
  ExperimentConfig e;
  e.m = c.get_int("grid.m", e.m);
  e.half_width = c.get_double("grid.half_width", e.half_width);
  e.probe_density = c.get_int("window.probes", e.probe_density);
  e.j_min = c.get_int("window.j_min", e.j_min);
  e.j_max = c.get_int("window.j_max", e.j_max);
  e.corpus = c.get_int("run.corpus", e.corpus);
  e.seed = c.get_u64("run.seed", e.seed);
  e.out_dir = c.get("run.out_dir", e.out_dir);
  e.dt = c.get_double("euler.dt", e.dt);
  e.horizon = c.get_double("euler.horizon", e.horizon);
  e.div_tol = c.get_double("euler.div_tol", e.div_tol);
  if (e.m < 8 || (e.m & (e.m - 1)) != 0)
    throw std::invalid_argument("grid.m must be a power of two, at least 8");
  if (!(e.half_width > 0.0)) throw std::invalid_argument("grid.half_width must be positive");
  if (e.j_min > e.j_max) throw std::invalid_argument("window.j_min exceeds window.j_max");
  if (e.probe_density < 1) throw std::invalid_argument("window.probes must be positive");
  if (e.corpus < 1) throw std::invalid_argument("run.corpus must be positive");
  if (!(e.dt > 0.0) || !(e.horizon > 0.0))
    throw std::invalid_argument("euler.dt and euler.horizon must be positive");
  return e;
}

}  // namespace oscflow
