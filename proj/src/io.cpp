#include "weyl/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace weyl {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

i64 parse_i64(const std::string& s, const std::string& path, std::size_t lineno) {
  std::size_t used = 0;
  i64 v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw std::domain_error(path + ":" + std::to_string(lineno) + ": bad integer '" + s + "'");
  return v;
}

double parse_f64(const std::string& s, const std::string& path, std::size_t lineno) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw std::domain_error(path + ":" + std::to_string(lineno) + ": bad number '" + s + "'");
  return v;
}

std::ofstream open_out(const std::string& path, bool append = false) {
  std::ofstream ofs(path, append ? std::ios::app : std::ios::trunc);
  if (!ofs) throw std::domain_error("cannot open for writing: " + path);
  return ofs;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_coefficients_csv(const std::string& path, const Coefficients& a) {
  if (a.set_mode) throw std::domain_error("write_coefficients_csv: interval coefficients only");
  auto ofs = open_out(path);
  ofs << "n,re,im\n";
  for (std::size_t k = 0; k < a.a.size(); ++k)
    ofs << a.lo + static_cast<i64>(k) << ',' << format_double(a.a[k].real()) << ','
        << format_double(a.a[k].imag()) << '\n';
}

Coefficients read_coefficients_csv(const std::string& path) {
  std::ifstream ifs(path);
  if (!ifs) throw std::domain_error("cannot open: " + path);
  std::map<i64, cplx> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ifs, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (lineno == 1 && line.rfind("n,", 0) == 0) continue;
    auto f = split_fields(line);
    if (f.size() != 3)
      throw std::domain_error(path + ":" + std::to_string(lineno) + ": expected n,re,im");
    i64 n = parse_i64(f[0], path, lineno);
    cplx v{parse_f64(f[1], path, lineno), parse_f64(f[2], path, lineno)};
    if (!rows.emplace(n, v).second)
      throw std::domain_error(path + ":" + std::to_string(lineno) + ": duplicate n=" +
                              std::to_string(n));
  }
  if (rows.empty()) throw std::domain_error(path + ": no coefficient rows");
  i64 lo = rows.begin()->first, hi = rows.rbegin()->first;
  std::vector<cplx> v(static_cast<std::size_t>(hi - lo + 1), cplx{0, 0});
  for (const auto& [n, z] : rows) v[static_cast<std::size_t>(n - lo)] = z;
  return Coefficients::from_values(lo, std::move(v));
}

void write_fourier_csv(const std::string& path, int d, const std::vector<FourierRow>& rows) {
  if (d < 1) throw std::domain_error("write_fourier_csv: d must be >= 1");
  auto ofs = open_out(path);
  for (int k = 1; k <= d; ++k) ofs << "xi_" << k << ',';
  ofs << "re,im,abs\n";
  for (const auto& r : rows) {
    if (static_cast<int>(r.xi.size()) != d)
      throw std::domain_error("write_fourier_csv: frequency dimension mismatch");
    for (i64 x : r.xi) ofs << x << ',';
    ofs << format_double(r.value.real()) << ',' << format_double(r.value.imag()) << ','
        << format_double(std::abs(r.value)) << '\n';
  }
}

ResultRow result_row(const std::string& experiment, const MomentResult& m) {
  ResultRow r;
  r.experiment = experiment;
  r.d = m.d;
  r.N = m.N;
  r.p = m.p;
  r.j = m.j;
  r.method = m.method;
  r.value = m.value;
  r.stderr_of_value = m.abs_error_estimate;
  r.seed = m.seed;
  r.wall_ms = m.wall_ms;
  return r;
}

void append_result_csv(const std::string& path, const ResultRow& row) {
  bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  auto ofs = open_out(path, true);
  if (fresh) ofs << "experiment,d,N,p,j,method,value,stderr,seed,wall_ms,schema_version\n";
  ofs << row.experiment << ',' << row.d << ',' << row.N << ',' << format_double(row.p) << ','
      << row.j << ',' << row.method << ',' << format_double(row.value) << ','
      << format_double(row.stderr_of_value) << ',' << row.seed << ','
      << format_double(row.wall_ms) << ',' << result_schema_version << '\n';
}

void write_shell_csv(const std::string& path, const LatticeShell& shell) {
  auto ofs = open_out(path);
  ofs << "x,y\n";
  for (const auto& pt : shell.points) ofs << pt[0] << ',' << pt[1] << '\n';
}

}  // namespace weyl
