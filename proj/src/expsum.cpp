#include "weyl/expsum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

#include "weyl/numeric.hpp"

namespace weyl {

cplx eval_point(const Coefficients& a, const PhaseSystem& sys,
                std::span<const double> x) {
  check_support(a, sys);
  if (static_cast<int>(x.size()) != sys.d)
    throw std::domain_error("eval_point: point dimension mismatch");
  KahanC acc;
  if (sys.lattice()) {
    for (std::size_t i = 0; i < sys.points.size(); ++i) {
      double t = 0;
      for (int k = 0; k < sys.d; ++k)
        t += frac_mul(sys.points[i][static_cast<std::size_t>(k)],
                      x[static_cast<std::size_t>(k)]);
      acc.add(a.a[i] * eiphase(t));
    }
  } else {
    for (i64 n = a.lo; n <= a.hi(); ++n) {
      double t = 0;
      for (int k = 0; k < sys.d; ++k)
        t += frac_mul(sys.freq(n, k), x[static_cast<std::size_t>(k)]);
      acc.add(a.a[static_cast<std::size_t>(n - a.lo)] * eiphase(t));
    }
  }
  return acc.value();
}

cplx eval_lattice_sum(const Coefficients& a, const PhaseSystem& sys,
                      std::span<const double> x) {
  if (!sys.lattice())
    throw std::domain_error("eval_lattice_sum: system has no lattice point set");
  if (sys.points.empty())
    throw std::domain_error("eval_lattice_sum: empty point set");
  return eval_point(a, sys, x);
}

namespace {

// FFTW's planner is not thread-safe; plans are cached per length and reused
// with new-array execution (FFTW_UNALIGNED so any buffer works).
fftw_plan fiber_plan(i64 M) {
  static std::mutex mu;
  static std::map<i64, fftw_plan> cache;
  std::scoped_lock lk(mu);
  auto it = cache.find(M);
  if (it != cache.end()) return it->second;
  std::vector<cplx> in(static_cast<std::size_t>(M)), out(in.size());
  fftw_plan p = fftw_plan_dft_1d(
      static_cast<int>(M), reinterpret_cast<fftw_complex*>(in.data()),
      reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(M, p);
  return p;
}

}  // namespace

std::vector<cplx> eval_fiber_x1(const Coefficients& a, const PhaseSystem& sys,
                                std::span<const double> x_rest, i64 M) {
  check_support(a, sys);
  if (sys.lattice() || sys.exponents[0] != 1)
    throw std::domain_error("eval_fiber_x1: axis-1 frequency must be n itself");
  if (static_cast<int>(x_rest.size()) != sys.d - 1)
    throw std::domain_error("eval_fiber_x1: x_rest dimension mismatch");
  i64 lo = a.lo, hi = a.hi();
  if (lo < 0) throw std::domain_error("eval_fiber_x1: negative support");
  if (M < hi || (lo == 0 && M == hi))
    throw ResourceLimit("eval_fiber_x1: fiber length " + std::to_string(M) +
                        " aliases support up to " + std::to_string(hi));
  if (M > (i64{1} << 28)) throw ResourceLimit("eval_fiber_x1: fiber length above 2^28");
  std::vector<cplx> in(static_cast<std::size_t>(M), cplx{0, 0});
  for (i64 n = lo; n <= hi; ++n) {
    double t = 0;
    for (int k = 1; k < sys.d; ++k)
      t += frac_mul(sys.freq(n, k), x_rest[static_cast<std::size_t>(k - 1)]);
    in[static_cast<std::size_t>(n % M)] =
        a.a[static_cast<std::size_t>(n - lo)] * eiphase(t);
  }
  std::vector<cplx> out(in.size());
  fftw_execute_dft(fiber_plan(M), reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<i64> nyquist_counts(const PhaseSystem& sys, i64 n_max, int l,
                                double oversample) {
  if (l < 1) throw std::domain_error("nyquist_counts: l must be >= 1");
  if (oversample < 1.0) throw std::domain_error("nyquist_counts: oversample must be >= 1");
  std::vector<i64> counts(static_cast<std::size_t>(sys.d));
  for (int k = 0; k < sys.d; ++k) {
    i128 f = sys.max_abs_freq(k, 0, n_max);
    i128 need = 2 * static_cast<i128>(l) * f + 1;
    if (need > 1000000000000000LL)
      throw ResourceLimit("nyquist_counts: axis " + std::to_string(k + 1) +
                          " needs more than 1e15 points");
    counts[static_cast<std::size_t>(k)] =
        static_cast<i64>(std::ceil(oversample * static_cast<double>(static_cast<i64>(need))));
  }
  return counts;
}

std::vector<i64> nyquist_counts(const PhaseSystem& sys, const Coefficients& a,
                                int l, double oversample) {
  i64 n_max = std::max(std::abs(a.lo), std::abs(a.hi()));
  return nyquist_counts(sys, n_max, l, oversample);
}

}  // namespace weyl
