#pragma once

#include <string>
#include <vector>

#include "weyl/common.hpp"
#include "weyl/core.hpp"
#include "weyl/counting.hpp"

namespace weyl {

// All CSV output uses '.' decimals, LF line endings, UTF-8, and %.17g doubles
// so written values round-trip exactly.

std::string format_double(double v);

// columns: n,re,im (one row per support point)
void write_coefficients_csv(const std::string& path, const Coefficients& a);
// Rows may list any subset of an integer interval; unlisted n read as 0.
Coefficients read_coefficients_csv(const std::string& path);

// columns: xi_1..xi_d,re,im,abs
struct FourierRow {
  std::vector<i64> xi;
  cplx value;
};
void write_fourier_csv(const std::string& path, int d, const std::vector<FourierRow>& rows);

// Experiment rows append to one file; a trailing schema_version column stamps
// the layout so later readers can detect format changes.
inline constexpr int result_schema_version = 1;

struct ResultRow {
  std::string experiment;
  int d = 0;
  i64 N = 0;
  double p = 0;
  int j = -1;
  std::string method;
  double value = 0;
  double stderr_of_value = 0;
  u64 seed = 0;
  double wall_ms = 0;
};

ResultRow result_row(const std::string& experiment, const MomentResult& m);
void append_result_csv(const std::string& path, const ResultRow& row);

// columns: x,y (exact integers)
void write_shell_csv(const std::string& path, const LatticeShell& shell);

}  // namespace weyl
