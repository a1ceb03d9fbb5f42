#pragma once
// Experiment runner: sectioned config files, a text field container, named
// verification suites, and deterministic report emission. Everything here
// is plumbing; the mathematics lives in the other headers.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oscflow/euler.hpp"

namespace oscflow {

// Flat view of a `key = value` file with `[section]` headers. Keys are
// stored as "section.key"; entries before the first header keep the bare
// key. `#` and `;` start comments, blank lines are skipped.
struct ConfigMap {
  std::map<std::string, std::string> entries;

  bool has(const std::string& key) const { return entries.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
};

// Throws std::invalid_argument naming the offending line number.
ConfigMap parse_config(const std::string& text);
ConfigMap load_config(const std::string& path);

// Everything a suite run reads. Field defaults reproduce the shipped
// batteries at desk scale; the config file overrides them key by key.
struct ExperimentConfig {
  int m = 64;                // grid cells per axis           [grid] m
  double half_width = 8.0;   //                               [grid] half_width
  int probe_density = 3;     // probes per axis               [window] probes
  int j_min = -3;            //                               [window] j_min
  int j_max = 4;             //                               [window] j_max
  int corpus = 1000;         // randomized corpus size        [run] corpus
  std::uint64_t seed = 1;    //                               [run] seed
  std::string out_dir = "."; //                               [run] out_dir
  double dt = 1e-3;          //                               [euler] dt
  double horizon = 0.2;      //                               [euler] horizon
  double div_tol = 1e-5;     //                               [euler] div_tol

  static ExperimentConfig from_config(const ConfigMap& c);
};

// One verified claim: a measured value against its acceptance bound, with
// the anchor string of the claim it certifies.
struct CheckRow {
  std::string name;
  std::string anchor;
  double value = 0.0;
  double bound = 0.0;
  bool holds = false;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  int schema = 1;
  std::vector<CheckRow> rows;

  bool all_hold() const;
};

// Suite names in the order `all` executes them (excluding "all" itself).
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

// Runs a named battery. "all" concatenates every suite, prefixing row names
// with the suite. Throws std::invalid_argument on an unknown name.
SuiteReport run_suite(const std::string& name, const ExperimentConfig& cfg);

// Human-readable catalogue of a suite's checks and their anchors.
std::string describe(const std::string& name);

// Serializations. Values print as %.12e, so a rerun with the same seed
// yields identical bytes.
std::string report_text(const SuiteReport& rep);
std::string report_csv(const SuiteReport& rep);

// Writes <out_dir>/<suite>_summary.txt and <suite>_checks.csv through a
// temporary file plus rename, so readers never observe partial output.
// Returns the summary path. Throws std::runtime_error when unwritable.
std::string write_report(const SuiteReport& rep, const std::string& out_dir);

// Text field container, whitespace-tolerant, doubles printed as %.17g so
// loading returns the written field bit for bit.
std::string field_to_text(const CompositeField& f);
CompositeField field_from_text(const std::string& text);
void save_field(const CompositeField& f, const std::string& path);
CompositeField load_field(const std::string& path);

}  // namespace oscflow
