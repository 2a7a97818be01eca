#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "weyl/common.hpp"

namespace weyl {

inline constexpr double two_pi = 6.283185307179586476925286766559;

// n^k with the guard k*log2|n| <= 120; beyond that 128-bit products overflow.
i128 checked_ipow(i64 n, int k);

// x - floor(x), in [0,1). Exact for |x| < 2^52; integers map to 0.
double frac(double x);

// frac(m*x) evaluated from the bit pattern of x so that the value is within
// 2^-60 of the exact fractional part even when m*x itself is ~2^120.
double frac_mul(i128 m, double x);

// e(t) = exp(2*pi*i*t). t is reduced mod 1 before scaling by 2*pi.
cplx eiphase(double t);

// Neumaier-compensated accumulator.
struct Kahan {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct KahanC {
  Kahan re, im;
  void add(cplx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

// Deterministic parallel reduction: [0,n) is split into fixed-size blocks,
// each block is summed in index order, and the block partials are combined
// pairwise in block order. The result does not depend on the worker count.
double block_sum(i64 n, const std::function<double(i64, i64)>& block_value,
                 int threads, i64 block = 1 << 12);

// Runs fn(i) for i in [0,n) across workers; fn must only touch slot i state.
void parallel_for(i64 n, const std::function<void(i64)>& fn, int threads);

// Pairwise combination of per-block partials, in block order.
double pairwise_total(std::span<const double> partials);

// Seeded generator for sequence recipes. mt19937_64 with fixed mappings:
// u01 = (x >> 11) * 2^-53; sign = +1 when the top bit is 0, else -1.
struct Rng {
  explicit Rng(u64 seed) : gen_(seed) {}
  u64 raw() { return gen_(); }
  double u01() { return static_cast<double>(raw() >> 11) * 0x1p-53; }
  double pm1() { return (raw() >> 63) ? -1.0 : 1.0; }
  cplx unimodular();

 private:
  std::mt19937_64 gen_;
};

// Counter-mode stream for MC sample coordinates: splitmix64(key ^ mix(i)),
// reproducible and independent of how samples are partitioned over workers.
u64 splitmix64(u64 x);
double sample_u01(u64 seed, u64 index, u64 axis);

// Least squares y = slope*x + intercept with the usual slope standard error.
struct LineFit {
  double slope = 0, intercept = 0, slope_stderr = 0, residual_max = 0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Gauss-Legendre nodes/weights on [0,1], cached per order.
struct GaussRule {
  std::vector<double> x, w;
};
const GaussRule& gauss_rule(int npts);

// J0 via the ascending series for |z| <= 20 and the Hankel asymptotic beyond;
// the two branches agree near the seam to ~1e-10 relative.
double bessel_j0(double z);

}  // namespace weyl
