#include "oscflow/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oscflow {

namespace {

std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

// Row cells share one line in the summary and one record in the CSV; strip
// the two delimiters so a free-form note cannot break the framing.
std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == '|' || c == ',' || c == '\n' || c == '\r') c = ';';
  return out;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write report file: " + tmp);
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot move report into place: " + path);
}

}  // namespace

bool SuiteReport::all_hold() const {
  for (const CheckRow& r : rows)
    if (!r.holds) return false;
  return true;
}

std::string report_text(const SuiteReport& rep) {
  size_t pass = 0;
  for (const CheckRow& r : rep.rows) pass += r.holds ? 1 : 0;
  std::ostringstream out;
  out << "oscflow-report\n";
  out << "schema " << rep.schema << "\n";
  out << "suite " << rep.suite << "\n";
  out << "seed " << rep.seed << "\n";
  out << "checks " << rep.rows.size() << "\n";
  out << "pass " << pass << "\n";
  out << "fail " << rep.rows.size() - pass << "\n";
  out << "status " << (rep.all_hold() ? "pass" : "fail") << "\n";
  out << "\n";
  out << "name | anchor | value | bound | holds | note\n";
  for (const CheckRow& r : rep.rows)
    out << sanitize(r.name) << " | " << sanitize(r.anchor) << " | " << fmt12(r.value) << " | "
        << fmt12(r.bound) << " | " << (r.holds ? "yes" : "no") << " | " << sanitize(r.note)
        << "\n";
  return out.str();
}

std::string report_csv(const SuiteReport& rep) {
  std::ostringstream out;
  out << "name,anchor,value,bound,holds,note\n";
  for (const CheckRow& r : rep.rows)
    out << sanitize(r.name) << "," << sanitize(r.anchor) << "," << fmt12(r.value) << ","
        << fmt12(r.bound) << "," << (r.holds ? "yes" : "no") << "," << sanitize(r.note) << "\n";
  return out.str();
}

std::string write_report(const SuiteReport& rep, const std::string& out_dir) {
  const std::string base = out_dir.empty() ? "." : out_dir;
  const std::string summary = base + "/" + rep.suite + "_summary.txt";
  const std::string csv = base + "/" + rep.suite + "_checks.csv";
  atomic_write(summary, report_text(rep));
  atomic_write(csv, report_csv(rep));
  return summary;
}

}  // namespace oscflow
