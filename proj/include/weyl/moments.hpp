#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "weyl/common.hpp"
#include "weyl/core.hpp"
#include "weyl/measures.hpp"

namespace weyl {

struct QuadratureSpec {
  enum class Method { Grid, MC };
  Method method = Method::Grid;
  std::vector<i64> counts;  // grid: nodes per axis; empty picks the resolution
  i64 samples = 0;          // mc
  u64 seed = 0;
  bool stratified = true;
  double tolerance = 0;  // optional absolute error target; grants one refinement retry

  static QuadratureSpec grid(std::vector<i64> counts = {});
  static QuadratureSpec mc(i64 samples, u64 seed, bool stratified = true);
};

// integral of |S|^p over the box. Grid rule: even p on the full torus uses the
// aliasing-free equispaced grid (exact); sub-boxes use composite Gauss-Legendre
// with the error estimated from a half-resolution pass. mc reports the
// standard error.
MomentResult box_moment(const Coefficients& a, const PhaseSystem& sys, const TorusBox& box,
                        double p, const QuadratureSpec& quad, int threads = 0);

// integral of |S(x, F(x))|^p weight(x) dx over the surface parameter box.
MomentResult surface_moment(const Coefficients& a, const PhaseSystem& sys,
                            const GraphSurface& surface, double p, const QuadratureSpec& quad,
                            int threads = 0);

struct DecayKernel {
  double beta = 1;  // K(xi) = (1 + |xi|)^{-beta}
};

// Exact 2l-linear pairing sum over W = l-fold frequency sums:
// sum_{u,v} W_u conj(W_v) K(u - v). Positive semidefinite kernel, so >= 0.
double kernel_moment(const Coefficients& a, const PhaseSystem& sys, const DecayKernel& K,
                     int l, int threads = 0);

// Same pairing against a caller-supplied kernel transform kappa(u - v).
cplx table_kernel_moment(const Coefficients& a, const PhaseSystem& sys, int l,
                         const std::function<cplx(std::span<const i64>)>& kappa,
                         int threads = 0);

// One random majorant-pair instance: mu = phi dx has |phi_hat| <= nu_hat
// entrywise with nu = |Q|^2 dx >= 0. Returns (|integral of |S_a|^{2l} dmu|,
// integral of |S_{|a|}|^{2l} dnu); the first must not exceed the second.
std::pair<double, double> majorant_pair_check(const Coefficients& a, const PhaseSystem& sys,
                                              int l, u64 seed);

enum class Conjecture3Norm { L2, L6D4, L9D5 };

// 2^{j(d+1)/2} * box_moment over [0,2^-j]^d, divided by ||a||_2^p, or by
// N^{p(1/2-1/3)}||a||_6^p (L6D4) or N^{p(1/2-1/9)}||a||_9^p (L9D5).
double conjecture3_normalized(const Coefficients& a, int d, i64 N, int j, double p,
                              const QuadratureSpec& quad,
                              Conjecture3Norm norm = Conjecture3Norm::L2, int threads = 0);

// Least-squares slope of log2(quantity) against log2(N) (geometric N ladder)
// or against j (uniform j ladder). Ladders need >= 4 entries.
FitResult exponent_fit_over_N(const std::function<double(i64)>& quantity,
                              const std::vector<i64>& ladder);
FitResult exponent_fit_over_j(const std::function<double(int)>& quantity,
                              const std::vector<int>& ladder);

// Small-box decoupling experiments: LHS integral over the statement's minimal
// box (mc over the non-x1 axes times the exact x1 fiber) divided by the
// statement's right-hand side with epsilon = 0.
enum class DecouplingStatement { A10, A11, A32, D32, C7 };

DecouplingStatement parse_statement(std::string_view token);
std::string statement_token(DecouplingStatement st);

struct DecouplingResult {
  double ratio = 0;
  double ratio_stderr = 0;
  double lhs = 0, lhs_stderr = 0, rhs = 0;
  i64 N = 0;
  int p = 0;
  u64 seed = 0;
  i64 samples = 0;
};

DecouplingResult decoupling_ratio(DecouplingStatement st, i64 N, const Coefficients& a,
                                  const QuadratureSpec& quad, int threads = 0);

}  // namespace weyl
