#include "oscflow/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oscflow {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_values(std::ostringstream& out, const std::vector<double>& v) {
  out << v.size() << "\n";
  for (size_t i = 0; i < v.size(); ++i) {
    out << fmt17(v[i]);
    out << ((i % 6 == 5 || i + 1 == v.size()) ? "\n" : " ");
  }
}

std::string expect_token(std::istringstream& in, const char* what) {
  std::string tok;
  if (!(in >> tok)) throw std::invalid_argument(std::string("field file: missing ") + what);
  return tok;
}

double expect_double(std::istringstream& in, const char* what) {
  double v = 0.0;
  if (!(in >> v)) throw std::invalid_argument(std::string("field file: bad ") + what);
  return v;
}

int expect_int(std::istringstream& in, const char* what) {
  int v = 0;
  if (!(in >> v)) throw std::invalid_argument(std::string("field file: bad ") + what);
  return v;
}

std::vector<double> read_values(std::istringstream& in, const char* what) {
  const int count = expect_int(in, what);
  if (count < 0) throw std::invalid_argument(std::string("field file: negative count for ") + what);
  std::vector<double> v(static_cast<size_t>(count));
  for (double& x : v) x = expect_double(in, what);
  return v;
}

}  // namespace

std::string field_to_text(const CompositeField& f) {
  std::ostringstream out;
  out << "oscflow-field 1\n";
  out << "n " << f.n() << "\n";
  out << "poly " << f.poly.dim << " " << f.poly.degree << "\n";
  write_values(out, f.poly.coef);
  if (f.has_grid()) {
    const GridSpec& sp = f.grid.spec;
    out << "grid " << sp.m << " " << fmt17(sp.half_width) << " "
        << (sp.mode == BoundaryMode::compact ? "compact" : "periodic") << " " << f.grid.dim
        << "\n";
    write_values(out, f.grid.data);
  } else {
    out << "grid none\n";
  }
  return out.str();
}

CompositeField field_from_text(const std::string& text) {
  std::istringstream in(text);
  if (expect_token(in, "magic") != "oscflow-field" || expect_token(in, "version") != "1")
    throw std::invalid_argument("field file: not an oscflow-field version 1 file");
  if (expect_token(in, "n header") != "n")
    throw std::invalid_argument("field file: expected 'n'");
  const int n = expect_int(in, "n");
  if (expect_token(in, "poly header") != "poly")
    throw std::invalid_argument("field file: expected 'poly'");
  const int dim = expect_int(in, "poly dim");
  const int degree = expect_int(in, "poly degree");
  PolynomialField poly = PolynomialField::zero(n, dim, degree);
  std::vector<double> coef = read_values(in, "poly coefficients");
  if (coef.size() != poly.coef.size())
    throw std::invalid_argument("field file: polynomial coefficient count mismatch");
  poly.coef = std::move(coef);

  if (expect_token(in, "grid header") != "grid")
    throw std::invalid_argument("field file: expected 'grid'");
  std::string tok = expect_token(in, "grid spec");
  if (tok == "none") {
    CompositeField out = CompositeField::pure_poly(poly);
    out.validate(false);
    return out;
  }
  GridSpec sp;
  sp.n = n;
  sp.m = std::stoi(tok);
  sp.half_width = expect_double(in, "grid half_width");
  const std::string mode = expect_token(in, "grid mode");
  if (mode == "compact")
    sp.mode = BoundaryMode::compact;
  else if (mode == "periodic")
    sp.mode = BoundaryMode::periodic;
  else
    throw std::invalid_argument("field file: unknown grid mode " + mode);
  const int gdim = expect_int(in, "grid dim");
  GridField g = GridField::zero(sp, gdim);
  std::vector<double> data = read_values(in, "grid data");
  if (data.size() != g.data.size())
    throw std::invalid_argument("field file: grid data count mismatch");
  g.data = std::move(data);
  CompositeField out = CompositeField::make(poly, g);
  out.validate(false);
  return out;
}

void save_field(const CompositeField& f, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write field file: " + tmp);
    out << field_to_text(f);
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot move field file into place: " + path);
}

CompositeField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open field file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return field_from_text(buf.str());
}

}  // namespace oscflow
