#pragma once

#include <span>
#include <vector>

#include "weyl/core.hpp"

namespace weyl {

struct GridSpec {
  std::vector<i64> counts;     // per-axis point counts
  std::vector<double> offsets; // per-axis first-node offset, fraction of a step
  bool equispaced = true;
};

// S(x) = sum of a_n e(phase(n) . x); 1-periodic per coordinate. Phases are
// reduced mod 1 in exact integer arithmetic before the complex exponential.
cplx eval_point(const Coefficients& a, const PhaseSystem& sys,
                std::span<const double> x);

// Same, restricted to lattice-set systems (paraboloid/sphere shells).
cplx eval_lattice_sum(const Coefficients& a, const PhaseSystem& sys,
                      std::span<const double> x);

// Values of S at x1 = m/M, m = 0..M-1, with the remaining coordinates fixed:
// a zero-padded backward DFT of b_n = a_n e(sum_{k>=2} phase_k(n) x_k).
// Requires frequency exactly n on axis 1 and M large enough that support
// slots do not alias.
std::vector<cplx> eval_fiber_x1(const Coefficients& a, const PhaseSystem& sys,
                                std::span<const double> x_rest, i64 M);

// Per-axis grid counts ceil(oversample*(2*l*F_k + 1)) with F_k the largest
// |frequency| on axis k; such a grid integrates |S|^{2l} exactly on the full
// torus.
std::vector<i64> nyquist_counts(const PhaseSystem& sys, i64 n_max, int l,
                                double oversample = 1.0);
std::vector<i64> nyquist_counts(const PhaseSystem& sys, const Coefficients& a,
                                int l, double oversample = 1.0);

}  // namespace weyl
