#include "strichartz/io.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace strichartz {
namespace {

void write_header(std::ostream& os, const char* domain, const UniformGrid& g) {
  os << std::setprecision(17) << "# strichartz " << domain << " n=" << g.size()
     << " dx=" << g.dx() << " x0=" << g.x0() << '\n';
}

struct Parsed {
  UniformGrid grid;
  cvec values;
};

Parsed parse(std::istream& is, const std::string& expected_domain) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# strichartz ", 0) != 0) {
    throw StructuralError("csv: missing metadata line");
  }
  std::istringstream meta(line.substr(13));
  std::string domain;
  meta >> domain;
  if (domain != expected_domain) throw StructuralError("csv: expected " + expected_domain + " data");
  std::size_t n = 0;
  double dx = 0.0;
  double x0 = 0.0;
  std::string tok;
  while (meta >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "n") n = std::stoul(val);
    if (key == "dx") dx = std::stod(val);
    if (key == "x0") x0 = std::stod(val);
  }
  UniformGrid grid(n, dx, x0);
  std::getline(is, line);  // column header
  cvec values;
  values.reserve(n);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double pos = 0.0;
    double re = 0.0;
    double im = 0.0;
    char c1 = 0;
    char c2 = 0;
    if (!(row >> pos >> c1 >> re >> c2 >> im)) throw StructuralError("csv: malformed row");
    values.emplace_back(re, im);
  }
  if (values.size() != n) throw StructuralError("csv: row count does not match n");
  return Parsed{grid, std::move(values)};
}

}  // namespace

void write_csv(std::ostream& os, const WaveFunction& f) {
  write_header(os, "space", f.grid());
  os << "x,re,im\n";
  for (std::size_t j = 0; j < f.size(); ++j) {
    os << f.grid().x(j) << ',' << f[j].real() << ',' << f[j].imag() << '\n';
  }
}

void write_csv(std::ostream& os, const Spectrum& g) {
  write_header(os, "frequency", g.grid());
  os << "xi,re,im\n";
  for (std::size_t c = 0; c < g.size(); ++c) {
    os << g.xi(c) << ',' << g[c].real() << ',' << g[c].imag() << '\n';
  }
}

WaveFunction read_wavefunction_csv(std::istream& is) {
  auto p = parse(is, "space");
  return WaveFunction(p.grid, std::move(p.values));
}

Spectrum read_spectrum_csv(std::istream& is) {
  auto p = parse(is, "frequency");
  return Spectrum(p.grid, std::move(p.values));
}

void write_csv(std::ostream& os, const SpaceTimeField& u) {
  write_header(os, "spacetime", u.grid());
  os << "t,x,re,im\n";
  for (const auto& s : u.slices()) {
    for (std::size_t j = 0; j < s.values.size(); ++j) {
      const cplx z = s.field_value(u.grid(), j);
      os << s.t << ',' << s.position(u.grid(), j) << ',' << z.real() << ',' << z.imag() << '\n';
    }
  }
}

void Table::add(std::vector<double> row) {
  if (row.size() != columns.size()) throw StructuralError("Table: row width mismatch");
  rows.push_back(std::move(row));
}

void write_csv(std::ostream& os, const Table& table) {
  os << std::setprecision(17);
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    os << (i ? "," : "") << table.columns[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

}  // namespace strichartz
