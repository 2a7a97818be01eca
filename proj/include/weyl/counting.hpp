#pragma once

#include <array>
#include <span>
#include <unordered_map>
#include <vector>

#include "weyl/core.hpp"

namespace weyl {

// Key for l-fold power-sum vectors (v_1..v_d, zero-padded). Guards ensure
// every component fits i64 exactly.
struct FreqKey {
  std::array<i64, 6> v{};
  bool operator==(const FreqKey&) const = default;
};

struct FreqKeyHash {
  std::size_t operator()(const FreqKey& k) const;
};

// v -> W(v) = sum over ordered l-tuples with power-sum vector v of the
// coefficient product.
using FreqMap = std::unordered_map<FreqKey, cplx, FreqKeyHash>;

// Iterated convolution of the system's weighted frequency measure; the
// basis of every exact even-moment computation here.
FreqMap l_fold_sums(const Coefficients& a, const PhaseSystem& sys, int l);

// Exact full-torus even moment: integral of |S|^{2l} = sum of |W(v)|^2.
double even_moment_count(const Coefficients& a, const PhaseSystem& sys, int l);

// Exact 1-d even moment of sum of b_n e(n x) for contiguous b, any offset.
double even_moment_1d(std::span<const cplx> b, int l);

// Exact even moment over an axis-aligned box via the closed form
// int_0^delta e(mt) dt per axis; anchors are folded into the coefficients
// as exact phase twists.
double box_moment_exact(const Coefficients& a, const PhaseSystem& sys,
                        const TorusBox& box, int l);

// lS - lS as a sorted set of values.
std::vector<i64> sumset(const std::vector<i64>& S, int l);

// LHS / (|I| * |lS-lS| * full moment) for the interval I = [i_lo, i_lo+i_len]
// and the 1-d sum with coefficients values[i] on frequency S[i]; the bound
// says this never exceeds 1.
double lemma_a35_check(const std::vector<i64>& S, std::span<const cplx> values,
                       double i_lo, double i_len, int l);

struct ParabKernelResult {
  double value = 0;
  double normalized = 0;
};

// Sum over shell pairs of |a_m a_n| (1+|(m-n,|m|^2-|n|^2)|)^{-beta}, and the
// same divided by ||a||^2 N^{(d-3)/2} times N^{1/2} (d=2), log N (d=3), 1
// (d>=4). Coefficients follow paraboloid point order; pass a or the default
// constant sequence.
ParabKernelResult parab_kernel_bound(int d, i64 N, double beta,
                                     const Coefficients& a, int threads = 0);
ParabKernelResult parab_kernel_bound(int d, i64 N, double beta, int threads = 0);

// F_C(a) = sqrt(a(C - a^3)) on (0, C^{1/3}), maximized at a_max = (C/4)^{1/3}.
double f_c(double C, double a);
double f_c_amax(double C);

struct IncrementBand {
  double rmin = 0, rmax = 0;
  bool within = false;  // the whole band sits inside [1/20, 20]
};

// Ratios |F_C(a_max - y) - F_C(a_max)| / y^2 over the y grid; the lemma says
// they stay within absolute constants (the band [1/20, 20] here).
IncrementBand fc_increment_check(double C, std::span<const double> y_grid);

// sup over x in [0, F_C(a_max)] of sum_{a=1}^{floor(a_max)}
// 1/(|F_C(a)-x|^beta + D^beta): grid scan at step <= D/4 plus one local
// refinement. Also checks the concave-sequence reduction
// sup <= 2 + 4 * (sum at x = F_C(floor(a_max))).
double cor_cip_sup(double C, double D, double beta, double step_factor = 0.25);

// sup over (n1,n3) in [1,N]^2 of sum over n2 != n4 in [1,N]^2 of
// (|n1^2+n2^2-n3^2-n4^2|^beta + |n1^3+n2^3-n3^3-n4^3|^beta + 1)^{-1}.
double l4_kernel_sup(i64 N, double beta, int threads = 0);

struct LatticeShell {
  i64 N = 0;
  std::vector<std::array<i64, 2>> points;  // upper semicircle, sorted by x
};

LatticeShell circle_lattice(i64 N, bool include_endpoints = true);

// Largest number of shell points (full circle) on a closed arc of arclength
// N^{gamma/2}.
int arc_max_count(i64 N, double gamma);

// Largest, over (n1,n2) in S_N^2, number of (n3,n4) with
// |n1+n2-n3-n4| in [2^j, 2^{j+1}); j < 0 selects the exact-zero bucket.
i64 pair_count_Ij(i64 N, int j);

}  // namespace weyl
