#include "weyl/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "weyl/numeric.hpp"

namespace weyl {

std::size_t FreqKeyHash::operator()(const FreqKey& k) const {
  u64 h = 0x9e3779b97f4a7c15ULL;
  for (i64 x : k.v) h = splitmix64(h ^ static_cast<u64>(x));
  return static_cast<std::size_t>(h);
}

namespace {

struct Term {
  FreqKey f;
  cplx w;
};

// One (frequency vector, weight) pair per support element with nonzero
// coefficient; guards make every l-fold component sum fit i64.
std::vector<Term> system_terms(const Coefficients& a, const PhaseSystem& sys, int l) {
  check_support(a, sys);
  if (l < 1) throw std::domain_error("l must be >= 1");
  for (int k = 0; k < sys.d; ++k) {
    i128 f = sys.max_abs_freq(k, a.lo, a.hi());
    if (static_cast<i128>(l) * f > (i128{1} << 62))
      throw ResourceLimit("frequency sums exceed 62 bits; reduce N, d, or l");
  }
  std::vector<Term> terms;
  terms.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.a[i] == cplx{0, 0}) continue;
    Term t;
    t.w = a.a[i];
    for (int k = 0; k < sys.d; ++k) {
      i64 f = sys.lattice()
                  ? sys.points[i][static_cast<std::size_t>(k)]
                  : static_cast<i64>(sys.freq(a.lo + static_cast<i64>(i), k));
      t.f.v[static_cast<std::size_t>(k)] = f;
    }
    terms.push_back(t);
  }
  if (std::pow(static_cast<double>(std::max<std::size_t>(terms.size(), 1)), l) > 1e8)
    throw ResourceLimit("even-moment enumeration above 1e8 tuples");
  return terms;
}

FreqMap fold_terms(const std::vector<Term>& terms, int d, int l) {
  FreqMap cur;
  cur.emplace(FreqKey{}, cplx{1, 0});
  for (int fold = 0; fold < l; ++fold) {
    if (cur.size() * std::max<std::size_t>(terms.size(), 1) > 200000000)
      throw ResourceLimit("even-moment convolution above 2e8 operations");
    FreqMap next;
    next.reserve(cur.size() * 2);
    for (const auto& [v, w] : cur) {
      for (const Term& t : terms) {
        FreqKey key = v;
        for (int k = 0; k < d; ++k)
          key.v[static_cast<std::size_t>(k)] += t.f.v[static_cast<std::size_t>(k)];
        next[key] += w * t.w;
      }
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

FreqMap l_fold_sums(const Coefficients& a, const PhaseSystem& sys, int l) {
  return fold_terms(system_terms(a, sys, l), sys.d, l);
}

double even_moment_count(const Coefficients& a, const PhaseSystem& sys, int l) {
  FreqMap W = l_fold_sums(a, sys, l);
  Kahan acc;
  for (const auto& [v, w] : W) acc.add(std::norm(w));
  return acc.value();
}

double even_moment_1d(std::span<const cplx> b, int l) {
  if (b.empty()) throw std::domain_error("even_moment_1d: empty coefficients");
  if (l < 1) throw std::domain_error("even_moment_1d: l must be >= 1");
  std::size_t out = static_cast<std::size_t>(l) * (b.size() - 1) + 1;
  if (out > 10000000) throw ResourceLimit("even_moment_1d: convolution too long");
  std::vector<cplx> cur{cplx{1, 0}};
  for (int fold = 0; fold < l; ++fold) {
    std::vector<cplx> next(cur.size() + b.size() - 1, cplx{0, 0});
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) next[i + j] += cur[i] * b[j];
    cur = std::move(next);
  }
  Kahan acc;
  for (cplx z : cur) acc.add(std::norm(z));
  return acc.value();
}

double box_moment_exact(const Coefficients& a, const PhaseSystem& sys,
                        const TorusBox& box, int l) {
  if (box.dim() != sys.d) throw std::domain_error("box_moment_exact: box dimension");
  // Translation x -> x + anchor twists each coefficient by e(freq . anchor),
  // reducing every box to one anchored at 0.
  Coefficients tw = a;
  bool shifted = false;
  for (double t : box.anchor) shifted = shifted || t != 0.0;
  if (shifted) {
    for (std::size_t i = 0; i < tw.size(); ++i) {
      double ph = 0;
      for (int k = 0; k < sys.d; ++k) {
        i64 f = sys.lattice()
                    ? sys.points[i][static_cast<std::size_t>(k)]
                    : static_cast<i64>(sys.freq(tw.lo + static_cast<i64>(i), k));
        ph += frac_mul(f, box.anchor[static_cast<std::size_t>(k)]);
      }
      tw.a[i] *= eiphase(ph);
    }
  }
  FreqMap W = l_fold_sums(tw, sys, l);
  std::vector<std::pair<FreqKey, cplx>> e(W.begin(), W.end());
  std::sort(e.begin(), e.end(), [](const auto& x, const auto& y) { return x.first.v < y.first.v; });
  double work = static_cast<double>(e.size()) * static_cast<double>(e.size()) * (sys.d + 1);
  if (work > 6e8) throw ResourceLimit("box_moment_exact: pair enumeration too large");
  i64 n = static_cast<i64>(e.size());
  double total = block_sum(
      n,
      [&](i64 ilo, i64 ihi) {
        Kahan part;
        for (i64 i = ilo; i < ihi; ++i) {
          const auto& [vi, wi] = e[static_cast<std::size_t>(i)];
          for (i64 j = 0; j < n; ++j) {
            const auto& [vj, wj] = e[static_cast<std::size_t>(j)];
            cplx prod = wi * std::conj(wj);
            for (int k = 0; k < sys.d && prod != cplx{0, 0}; ++k) {
              i128 m = static_cast<i128>(vi.v[static_cast<std::size_t>(k)]) -
                       vj.v[static_cast<std::size_t>(k)];
              double delta = box.sides[static_cast<std::size_t>(k)];
              if (m == 0) {
                prod *= delta;
              } else {
                cplx num = eiphase(frac_mul(m, delta)) - cplx{1, 0};
                prod *= num / cplx{0, two_pi * static_cast<double>(m)};
              }
            }
            part.add(prod.real());
          }
        }
        return part.value();
      },
      0, 64);
  return std::max(total, 0.0);
}

std::vector<i64> sumset(const std::vector<i64>& S, int l) {
  if (S.empty()) throw std::domain_error("sumset: empty set");
  if (l < 1) throw std::domain_error("sumset: l must be >= 1");
  if (std::pow(static_cast<double>(S.size()), l) > 1e8)
    throw ResourceLimit("sumset: |S|^l above 1e8");
  std::vector<i64> base = S;
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  std::vector<i64> sums{0};
  for (int fold = 0; fold < l; ++fold) {
    std::vector<i64> next;
    next.reserve(sums.size() * base.size());
    for (i64 s : sums)
      for (i64 n : base) next.push_back(s + n);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    sums = std::move(next);
  }
  std::vector<i64> diff;
  diff.reserve(sums.size() * sums.size());
  for (i64 s : sums)
    for (i64 t : sums) diff.push_back(s - t);
  std::sort(diff.begin(), diff.end());
  diff.erase(std::unique(diff.begin(), diff.end()), diff.end());
  return diff;
}

double lemma_a35_check(const std::vector<i64>& S, std::span<const cplx> values,
                       double i_lo, double i_len, int l) {
  if (S.size() != values.size())
    throw std::domain_error("lemma_a35_check: S/values size mismatch");
  if (!(i_len > 0) || i_len > 1)
    throw std::domain_error("lemma_a35_check: interval length must be in (0,1]");
  auto [mn, mx] = std::minmax_element(S.begin(), S.end());
  std::vector<cplx> dense(static_cast<std::size_t>(*mx - *mn + 1), cplx{0, 0});
  for (std::size_t i = 0; i < S.size(); ++i)
    dense[static_cast<std::size_t>(S[i] - *mn)] += values[i];
  auto a = Coefficients::from_values(*mn, std::move(dense));
  auto sys = PhaseSystem::moment_curve(1);
  double full = even_moment_count(a, sys, l);
  if (full == 0) throw std::domain_error("lemma_a35_check: zero sequence");
  double lhs = box_moment_exact(a, sys, TorusBox::make({i_lo}, {i_len}), l);
  double size = static_cast<double>(sumset(S, l).size());
  return lhs / (i_len * size * full);
}

ParabKernelResult parab_kernel_bound(int d, i64 N, double beta,
                                     const Coefficients& a, int threads) {
  if (!(beta > 0)) throw std::domain_error("parab_kernel_bound: beta must be positive");
  auto sys = PhaseSystem::paraboloid(d, N);
  check_support(a, sys);
  double pairs = std::pow(static_cast<double>(sys.points.size()), 2);
  if (pairs > 1e8) throw ResourceLimit("parab_kernel_bound: pair enumeration above 1e8");
  i64 n = static_cast<i64>(sys.points.size());
  std::vector<double> absa(static_cast<std::size_t>(n));
  for (i64 i = 0; i < n; ++i) absa[static_cast<std::size_t>(i)] = std::abs(a.a[static_cast<std::size_t>(i)]);
  const bool inv = beta == 1.0, inv_sqrt = beta == 0.5;
  double value = block_sum(
      n,
      [&](i64 ilo, i64 ihi) {
        Kahan part;
        for (i64 i = ilo; i < ihi; ++i) {
          const auto& pi = sys.points[static_cast<std::size_t>(i)];
          for (i64 j = 0; j < n; ++j) {
            const auto& pj = sys.points[static_cast<std::size_t>(j)];
            i64 q = 0;
            for (int k = 0; k < d; ++k) {
              i64 dk = pi[static_cast<std::size_t>(k)] - pj[static_cast<std::size_t>(k)];
              q += dk * dk;
            }
            double base = 1.0 + std::sqrt(static_cast<double>(q));
            double kern = inv ? 1.0 / base
                        : inv_sqrt ? 1.0 / std::sqrt(base)
                                   : std::pow(base, -beta);
            part.add(absa[static_cast<std::size_t>(i)] * absa[static_cast<std::size_t>(j)] * kern);
          }
        }
        return part.value();
      },
      threads, 256);
  double nrm2 = 0;
  for (double v : absa) nrm2 += v * v;
  double factor = d == 2 ? std::sqrt(static_cast<double>(N))
               : d == 3  ? std::log(static_cast<double>(N))
                         : 1.0;
  ParabKernelResult r;
  r.value = value;
  r.normalized = value / (nrm2 * std::pow(static_cast<double>(N), (d - 3) / 2.0) * factor);
  return r;
}

ParabKernelResult parab_kernel_bound(int d, i64 N, double beta, int threads) {
  auto sys = PhaseSystem::paraboloid(d, N);
  return parab_kernel_bound(d, N, beta, Coefficients::constant_set(sys.points.size()), threads);
}

double f_c_amax(double C) { return std::cbrt(C / 4.0); }

double f_c(double C, double a) {
  if (!(C > 1000)) throw std::domain_error("f_c: C must exceed 1000");
  if (!(a > 0) || !(a < std::cbrt(C))) throw std::domain_error("f_c: a outside (0, C^{1/3})");
  return std::sqrt(a * (C - a * a * a));
}

IncrementBand fc_increment_check(double C, std::span<const double> y_grid) {
  if (y_grid.empty()) throw std::domain_error("fc_increment_check: empty grid");
  double amax = f_c_amax(C);
  double peak = f_c(C, amax);
  IncrementBand band;
  band.rmin = std::numeric_limits<double>::infinity();
  for (double y : y_grid) {
    if (!(y > 0) || y >= amax) throw std::domain_error("fc_increment_check: y outside (0, a_max)");
    double r = std::abs(f_c(C, amax - y) - peak) / (y * y);
    band.rmin = std::min(band.rmin, r);
    band.rmax = std::max(band.rmax, r);
  }
  band.within = band.rmin >= 1.0 / 20 && band.rmax <= 20.0;
  return band;
}

double cor_cip_sup(double C, double D, double beta, double step_factor) {
  if (!(beta > 0.5)) throw std::domain_error("cor_cip_sup: beta must exceed 1/2");
  if (!(D > 0)) throw std::domain_error("cor_cip_sup: D must be positive");
  if (!(step_factor > 0) || step_factor > 0.25)
    throw std::domain_error("cor_cip_sup: step must be at most D/4");
  double amax = f_c_amax(C);
  i64 n = static_cast<i64>(std::floor(amax));
  if (n < 1) throw std::domain_error("cor_cip_sup: no integer points below a_max");
  std::vector<double> f(static_cast<std::size_t>(n));
  for (i64 a = 1; a <= n; ++a) f[static_cast<std::size_t>(a - 1)] = f_c(C, static_cast<double>(a));
  double dbeta = std::pow(D, beta);
  auto g = [&](double x) {
    Kahan s;
    for (double fa : f) s.add(1.0 / (std::pow(std::abs(fa - x), beta) + dbeta));
    return s.value();
  };
  double xmax = f_c(C, amax);
  double step = step_factor * D;
  double npts = std::floor(xmax / step) + 2;
  if (npts * static_cast<double>(n) > 2e8)
    throw ResourceLimit("cor_cip_sup: grid scan above 2e8 evaluations");
  double best = 0, bestx = 0;
  for (double x = 0;; x += step) {
    if (x > xmax) x = xmax;
    double v = g(x);
    if (v > best) {
      best = v;
      bestx = x;
    }
    if (x == xmax) break;
  }
  // local refinement around the grid argmax
  double lo = std::max(0.0, bestx - step), hi = std::min(xmax, bestx + step);
  for (int i = 0; i <= 256; ++i) best = std::max(best, g(lo + (hi - lo) * i / 256.0));
  // concave-increasing reduction: values cluster at the top, so the sup is
  // controlled by the sum anchored at the last value
  double anchored = g(f[static_cast<std::size_t>(n - 1)]);
  if (best > 2.0 + 4.0 * anchored + 1e-9)
    throw std::runtime_error("cor_cip_sup: concavity reduction violated");
  return best;
}

double l4_kernel_sup(i64 N, double beta, int threads) {
  if (N < 1) throw std::domain_error("l4_kernel_sup: N must be >= 1");
  if (N > 512) throw ResourceLimit("l4_kernel_sup: N above 512");
  if (!(beta > 0)) throw std::domain_error("l4_kernel_sup: beta must be positive");
  if (N == 1) return 0.0;
  auto pow_beta = [beta](double x) {
    if (beta == 1.0) return x;
    if (beta == 0.5) return std::sqrt(x);
    if (beta == 0.75) {
      double t = std::sqrt(x);
      return t * std::sqrt(t);
    }
    return std::pow(x, beta);
  };
  // second-power differences are small enough to table
  std::vector<double> t2(static_cast<std::size_t>(2 * N * N + 1));
  for (std::size_t q = 0; q < t2.size(); ++q) t2[q] = pow_beta(static_cast<double>(q));
  // flat list of (n2^2-n4^2, n2^3-n4^3) over ordered pairs n2 != n4
  std::vector<i64> d2s, d3s;
  d2s.reserve(static_cast<std::size_t>(N * (N - 1)));
  d3s.reserve(d2s.capacity());
  for (i64 n2 = 1; n2 <= N; ++n2)
    for (i64 n4 = 1; n4 <= N; ++n4) {
      if (n2 == n4) continue;
      d2s.push_back(n2 * n2 - n4 * n4);
      d3s.push_back(n2 * n2 * n2 - n4 * n4 * n4);
    }
  // (n1,n3) and (n3,n1) give the same inner sum; scan the upper triangle
  std::vector<std::pair<i64, i64>> outer;
  for (i64 n1 = 1; n1 <= N; ++n1)
    for (i64 n3 = n1; n3 <= N; ++n3) outer.emplace_back(n1, n3);
  std::vector<double> sums(outer.size());
  parallel_for(
      static_cast<i64>(outer.size()),
      [&](i64 idx) {
        auto [n1, n3] = outer[static_cast<std::size_t>(idx)];
        i64 a2 = n1 * n1 - n3 * n3;
        i64 a3 = n1 * n1 * n1 - n3 * n3 * n3;
        double s = 0;
        for (std::size_t i = 0; i < d2s.size(); ++i) {
          i64 q2 = std::abs(a2 + d2s[i]);
          double p3 = pow_beta(static_cast<double>(std::abs(a3 + d3s[i])));
          s += 1.0 / (t2[static_cast<std::size_t>(q2)] + p3 + 1.0);
        }
        sums[static_cast<std::size_t>(idx)] = s;
      },
      threads);
  return *std::max_element(sums.begin(), sums.end());
}

LatticeShell circle_lattice(i64 N, bool include_endpoints) {
  LatticeShell s;
  s.N = N;
  s.points = semicircle_points(N, include_endpoints);
  return s;
}

int arc_max_count(i64 N, double gamma) {
  auto upper = semicircle_points(N, true);
  if (upper.empty()) return 0;
  std::vector<double> angles;
  for (auto& p : upper) {
    angles.push_back(std::atan2(static_cast<double>(p[1]), static_cast<double>(p[0])));
    if (p[1] > 0)
      angles.push_back(std::atan2(-static_cast<double>(p[1]), static_cast<double>(p[0])));
  }
  std::sort(angles.begin(), angles.end());
  double w = std::pow(static_cast<double>(N), (gamma - 1.0) / 2.0);
  if (w >= two_pi) return static_cast<int>(angles.size());
  std::size_t m = angles.size();
  std::vector<double> ext = angles;
  for (std::size_t i = 0; i < m; ++i) ext.push_back(angles[i] + two_pi);
  int best = 1;
  std::size_t j = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (j < i) j = i;
    while (j + 1 < i + m && ext[j + 1] - ext[i] <= w + 1e-12) ++j;
    best = std::max(best, static_cast<int>(j - i + 1));
  }
  return best;
}

i64 pair_count_Ij(i64 N, int j) {
  auto pts = semicircle_points(N, true);
  i64 s = static_cast<i64>(pts.size());
  if (s == 0) return 0;
  double quads = std::pow(static_cast<double>(s), 4);
  if (quads > 1e9) throw ResourceLimit("pair_count_Ij: |S|^4 above 1e9");
  i64 qlo = j < 0 ? 0 : (i64{1} << (2 * j));
  i64 qhi = j < 0 ? 0 : (i64{1} << (2 * j + 2));
  i64 best = 0;
  for (const auto& p1 : pts)
    for (const auto& p2 : pts) {
      i64 tx = p1[0] + p2[0], ty = p1[1] + p2[1];
      i64 count = 0;
      for (const auto& p3 : pts)
        for (const auto& p4 : pts) {
          i64 vx = tx - p3[0] - p4[0], vy = ty - p3[1] - p4[1];
          i64 q = vx * vx + vy * vy;
          bool in = j < 0 ? q == 0 : q >= qlo && q < qhi;
          if (in) ++count;
        }
      best = std::max(best, count);
    }
  return best;
}

}  // namespace weyl
