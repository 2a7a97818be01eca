#include "weyl/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

namespace weyl {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("WEYL_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

i128 checked_ipow(i64 n, int k) {
  if (k < 0) throw std::domain_error("checked_ipow: negative exponent");
  u128 an = n >= 0 ? static_cast<u64>(n) : static_cast<u64>(-n);
  if (an == 0) return k == 0 ? 1 : 0;
  // |n|^k is capped at 2^120 so downstream 128-bit sums stay safe. With the
  // cap in force at most 120 multiplies happen, so the plain loop is fine.
  constexpr u128 cap = u128{1} << 120;
  u128 r = 1;
  if (an > 1) {
    for (int i = 0; i < k; ++i) {
      if (r > cap / an) throw std::domain_error("checked_ipow: |n|^k exceeds 120 bits");
      r *= an;
    }
  }
  bool neg = n < 0 && (k & 1);
  return neg ? -static_cast<i128>(r) : static_cast<i128>(r);
}

double frac(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;  // x just below an integer can round up
  return r;
}

double frac_mul(i128 m, double x) {
  if (m == 0) return 0.0;
  if (m < 0) {
    double r = frac_mul(-m, x);
    return r == 0.0 ? 0.0 : 1.0 - r;
  }
  x = frac(x);
  if (x == 0.0) return 0.0;
  // x = s * 2^-t exactly, with s a 53-bit integer.
  int e;
  double f = std::frexp(x, &e);           // x = f*2^e, f in [0.5,1)
  u64 s = static_cast<u64>(std::ldexp(f, 53));
  int t = 53 - e;                          // t >= 53 since x < 1
  // m*s as three 64-bit limbs (m < 2^127, s < 2^53).
  u64 m0 = static_cast<u64>(static_cast<u128>(m));
  u64 m1 = static_cast<u64>(static_cast<u128>(m) >> 64);
  u128 p0 = static_cast<u128>(m0) * s;
  u128 p1 = static_cast<u128>(m1) * s;
  u64 L0 = static_cast<u64>(p0);
  u128 mid = (p0 >> 64) + static_cast<u128>(static_cast<u64>(p1));
  u64 L1 = static_cast<u64>(mid);
  u64 L2 = static_cast<u64>(p1 >> 64) + static_cast<u64>(mid >> 64);
  // Keep the low t bits: that is the fractional part scaled by 2^t.
  auto mask_limb = [&](u64& limb, int lo_bit) {
    if (t <= lo_bit)
      limb = 0;
    else if (t - lo_bit < 64)
      limb &= (u64{1} << (t - lo_bit)) - 1;
  };
  mask_limb(L0, 0);
  mask_limb(L1, 64);
  mask_limb(L2, 128);
  long double acc = static_cast<long double>(L2);
  acc = acc * 0x1p64L + static_cast<long double>(L1);
  acc = acc * 0x1p64L + static_cast<long double>(L0);
  double r = static_cast<double>(std::ldexp(acc, -t));
  if (r >= 1.0) r -= 1.0;
  if (r < 0.0) r = 0.0;
  return r;
}

cplx eiphase(double t) {
  double r = frac(t) * two_pi;
  return {std::cos(r), std::sin(r)};
}

cplx Rng::unimodular() { return eiphase(u01()); }

u64 splitmix64(u64 x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double sample_u01(u64 seed, u64 index, u64 axis) {
  u64 x = splitmix64(seed ^ splitmix64(index * 0x9e3779b97f4a7c15ULL + axis));
  return static_cast<double>(x >> 11) * 0x1p-53;
}

void parallel_for(i64 n, const std::function<void(i64)>& fn, int threads) {
  threads = static_cast<int>(std::min<i64>(resolve_threads(threads), n));
  if (threads <= 1) {
    for (i64 i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<i64> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::exception_ptr err;
  std::mutex err_mu;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      try {
        for (i64 i; (i = next.fetch_add(1)) < n;) fn(i);
      } catch (...) {
        std::scoped_lock lk(err_mu);
        if (!err) err = std::current_exception();
        next.store(n);
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

double pairwise_total(std::span<const double> partials) {
  // Fixed-shape pairwise tree over block order.
  std::vector<double> cur(partials.begin(), partials.end());
  if (cur.empty()) return 0.0;
  while (cur.size() > 1) {
    std::size_t half = (cur.size() + 1) / 2;
    for (std::size_t i = 0; i + half < cur.size(); ++i) cur[i] += cur[i + half];
    cur.resize(half);
  }
  return cur[0];
}

double block_sum(i64 n, const std::function<double(i64, i64)>& block_value,
                 int threads, i64 block) {
  if (n <= 0) return 0.0;
  i64 nblocks = (n + block - 1) / block;
  std::vector<double> partials(nblocks);
  parallel_for(
      nblocks,
      [&](i64 b) {
        i64 lo = b * block, hi = std::min(n, lo + block);
        partials[b] = block_value(lo, hi);
      },
      threads);
  return pairwise_total(partials);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  std::size_t n = x.size();
  if (n != y.size() || n < 2)
    throw std::domain_error("fit_line: need >= 2 matching points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw std::domain_error("fit_line: degenerate abscissae");
  LineFit out{};
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - (out.slope * x[i] + out.intercept);
    rss += r * r;
    out.residual_max = std::max(out.residual_max, std::abs(r));
  }
  out.slope_stderr = n > 2 ? std::sqrt(rss / double(n - 2) / sxx) : 0.0;
  return out;
}

const GaussRule& gauss_rule(int npts) {
  if (npts < 1 || npts > 64) throw std::domain_error("gauss_rule: order out of range");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::scoped_lock lk(mu);
  auto it = cache.find(npts);
  if (it != cache.end()) return it->second;
  GaussRule r;
  r.x.resize(npts);
  r.w.resize(npts);
  // Legendre roots by Newton from the Chebyshev initial guess.
  for (int i = 0; i < npts; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= npts; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = npts * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    r.x[i] = (1.0 - t) / 2.0;  // map [-1,1] -> [0,1], ascending
    r.w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
  return cache.emplace(npts, std::move(r)).first->second;
}

double bessel_j0(double z) {
  z = std::abs(z);
  if (z <= 20.0) {
    // ascending series in long double; worst cancellation near z=20 stays
    // below ~1e-11 absolute.
    long double q = -(static_cast<long double>(z) * z) / 4.0L;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 120; ++k) {
      term *= q / (static_cast<long double>(k) * k);
      sum += term;
      if (std::abs(static_cast<double>(term)) < 1e-25) break;
    }
    return static_cast<double>(sum);
  }
  // Hankel expansion J0 = sqrt(2/(pi z)) (P cos w - Q sin w), w = z - pi/4.
  // c[k] = (0,k) from the recurrence c[k+1] = -c[k]*(2k+1)^2/(4(k+1)).
  long double c[12];
  c[0] = 1.0L;
  for (int k = 0; k < 11; ++k)
    c[k + 1] = -c[k] * (2.0L * k + 1) * (2.0L * k + 1) / (4.0L * (k + 1));
  long double zz = z, inv2z = 1.0L / (2.0L * zz);
  long double P = 0.0L, Q = 0.0L, pw = 1.0L;
  for (int k = 0; k <= 5; ++k) {
    long double sgn = (k % 2 == 0) ? 1.0L : -1.0L;
    P += sgn * c[2 * k] * pw * pw;              // (2z)^{-2k}
    Q += sgn * c[2 * k + 1] * pw * pw * inv2z;  // (2z)^{-2k-1}
    pw *= inv2z;
  }
  long double w = zz - 0.78539816339744830961566084581988L;
  long double amp = std::sqrt(2.0L / (3.14159265358979323846264338328L * zz));
  return static_cast<double>(amp * (P * std::cos(w) - Q * std::sin(w)));
}

}  // namespace weyl
