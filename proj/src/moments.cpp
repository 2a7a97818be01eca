#include "weyl/moments.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "weyl/counting.hpp"
#include "weyl/expsum.hpp"
#include "weyl/numeric.hpp"

namespace weyl {

QuadratureSpec QuadratureSpec::grid(std::vector<i64> counts) {
  for (i64 c : counts)
    if (c < 1) throw std::domain_error("QuadratureSpec: grid counts must be positive");
  QuadratureSpec q;
  q.method = Method::Grid;
  q.counts = std::move(counts);
  return q;
}

QuadratureSpec QuadratureSpec::mc(i64 samples, u64 seed, bool stratified) {
  if (samples < 1000) throw std::domain_error("QuadratureSpec: mc needs at least 1000 samples");
  QuadratureSpec q;
  q.method = Method::MC;
  q.samples = samples;
  q.seed = seed;
  q.stratified = stratified;
  return q;
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

double ipow_d(double x, int k) {
  double r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// |S|^p given |S|^2
double abs_pow(double norm_sq, double p, bool even, int l) {
  if (even) return ipow_d(norm_sq, l);
  return std::pow(norm_sq, 0.5 * p);
}

std::vector<double> axis_freqs(const PhaseSystem& sys, const Coefficients& a) {
  std::vector<double> F(static_cast<std::size_t>(sys.d));
  for (int k = 0; k < sys.d; ++k)
    F[static_cast<std::size_t>(k)] = static_cast<double>(sys.max_abs_freq(k, a.lo, a.hi()));
  return F;
}

void gl_axis(double a0, double side, i64 panels, std::vector<double>& xs, std::vector<double>& ws) {
  const GaussRule& g = gauss_rule(8);
  xs.assign(static_cast<std::size_t>(panels * 8), 0.0);
  ws.assign(static_cast<std::size_t>(panels * 8), 0.0);
  double h = side / static_cast<double>(panels);
  for (i64 i = 0; i < panels; ++i)
    for (int j = 0; j < 8; ++j) {
      xs[static_cast<std::size_t>(i * 8 + j)] = a0 + (static_cast<double>(i) + g.x[static_cast<std::size_t>(j)]) * h;
      ws[static_cast<std::size_t>(i * 8 + j)] = g.w[static_cast<std::size_t>(j)] * h;
    }
}

i64 rule_counts(double side, int lceil, double F) {
  return std::max<i64>(1, static_cast<i64>(std::ceil(side * 4.0 * lceil * F - 1e-9)));
}

std::string region_string(const TorusBox& box) {
  if (box.is_full()) return "full";
  bool zero_anchor = std::all_of(box.anchor.begin(), box.anchor.end(), [](double t) { return t == 0.0; });
  bool cube = std::all_of(box.sides.begin(), box.sides.end(),
                          [&](double s) { return s == box.sides[0]; });
  if (zero_anchor && cube)
    return "[0," + std::to_string(box.sides[0]) + "]^" + std::to_string(box.dim());
  return "box";
}

// Deterministic per-axis stratification permutations for Latin-hypercube mc.
std::vector<std::vector<i64>> strat_perms(i64 n, int axes, u64 seed) {
  std::vector<std::vector<i64>> perms(static_cast<std::size_t>(axes));
  for (int k = 0; k < axes; ++k) {
    auto& p = perms[static_cast<std::size_t>(k)];
    p.resize(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), i64{0});
    std::mt19937_64 gen(splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<u64>(k + 1))));
    std::shuffle(p.begin(), p.end(), gen);
  }
  return perms;
}

struct McDraw {
  u64 seed;
  bool stratified;
  i64 n;
  std::vector<std::vector<i64>> perms;

  McDraw(u64 seed_, bool strat, i64 n_, int axes)
      : seed(seed_), stratified(strat), n(n_),
        perms(strat ? strat_perms(n_, axes, seed_) : std::vector<std::vector<i64>>{}) {}

  double u(i64 i, int axis) const {
    double base = sample_u01(seed, static_cast<u64>(i), static_cast<u64>(axis));
    if (!stratified) return base;
    return (static_cast<double>(perms[static_cast<std::size_t>(axis)][static_cast<std::size_t>(i)]) + base) /
           static_cast<double>(n);
  }
};

struct MeanErr {
  double mean, stderr_of_mean;
};

MeanErr mean_and_stderr(std::vector<double>& f) {
  i64 n = static_cast<i64>(f.size());
  double s1 = pairwise_total(f);
  double mean = s1 / static_cast<double>(n);
  for (double& v : f) {
    double c = v - mean;
    v = c * c;
  }
  double s2 = pairwise_total(f);
  double var = n > 1 ? s2 / static_cast<double>(n - 1) : 0.0;
  return {mean, std::sqrt(std::max(0.0, var / static_cast<double>(n)))};
}

// Equispaced full-torus sweep via the x1-fiber DFT; counts satisfy Nyquist.
double fiber_sweep(const Coefficients& a, const PhaseSystem& sys, int l,
                   const std::vector<i64>& counts, int threads) {
  i64 M1 = counts[0];
  int rest = sys.d - 1;
  std::vector<i64> Mr(counts.begin() + 1, counts.end());
  i64 fibers = 1;
  for (i64 m : Mr) fibers *= m;
  double total = block_sum(
      fibers,
      [&](i64 ilo, i64 ihi) {
        Kahan part;
        std::vector<double> xr(static_cast<std::size_t>(rest));
        for (i64 fidx = ilo; fidx < ihi; ++fidx) {
          i64 t = fidx;
          for (int k = 0; k < rest; ++k) {
            xr[static_cast<std::size_t>(k)] =
                static_cast<double>(t % Mr[static_cast<std::size_t>(k)]) /
                static_cast<double>(Mr[static_cast<std::size_t>(k)]);
            t /= Mr[static_cast<std::size_t>(k)];
          }
          auto vals = eval_fiber_x1(a, sys, xr, M1);
          Kahan fs;
          for (cplx z : vals) fs.add(ipow_d(std::norm(z), l));
          part.add(fs.value());
        }
        return part.value();
      },
      threads);
  double nodes = static_cast<double>(M1);
  for (i64 m : Mr) nodes *= static_cast<double>(m);
  return total / nodes;
}

// Plain tensor sweep with direct evaluation, equispaced (periodic) nodes.
double rectangle_direct(const Coefficients& a, const PhaseSystem& sys, double p, bool even,
                        int l, const std::vector<i64>& counts, int threads) {
  i64 total_nodes = 1;
  for (i64 m : counts) total_nodes *= m;
  double work = static_cast<double>(total_nodes) * static_cast<double>(a.size());
  if (work > 2e8)
    throw ResourceLimit("box_moment: full grid needs " + std::to_string(static_cast<i64>(work)) +
                        " term evaluations, above 2e8; use mc");
  double total = block_sum(
      total_nodes,
      [&](i64 ilo, i64 ihi) {
        Kahan part;
        std::vector<double> x(static_cast<std::size_t>(sys.d));
        for (i64 idx = ilo; idx < ihi; ++idx) {
          i64 t = idx;
          for (int k = 0; k < sys.d; ++k) {
            i64 m = counts[static_cast<std::size_t>(k)];
            x[static_cast<std::size_t>(k)] = static_cast<double>(t % m) / static_cast<double>(m);
            t /= m;
          }
          part.add(abs_pow(std::norm(eval_point(a, sys, x)), p, even, l));
        }
        return part.value();
      },
      threads);
  return total / static_cast<double>(total_nodes);
}

// Composite Gauss-Legendre tensor rule over the box.
double gl_tensor(const Coefficients& a, const PhaseSystem& sys, const TorusBox& box, double p,
                 bool even, int l, const std::vector<i64>& panels, int threads) {
  int d = sys.d;
  std::vector<std::vector<double>> xs(static_cast<std::size_t>(d)), ws(static_cast<std::size_t>(d));
  i64 total = 1;
  for (int k = 0; k < d; ++k) {
    gl_axis(box.anchor[static_cast<std::size_t>(k)], box.sides[static_cast<std::size_t>(k)],
            panels[static_cast<std::size_t>(k)], xs[static_cast<std::size_t>(k)], ws[static_cast<std::size_t>(k)]);
    total *= static_cast<i64>(xs[static_cast<std::size_t>(k)].size());
  }
  return block_sum(
      total,
      [&](i64 ilo, i64 ihi) {
        Kahan part;
        std::vector<double> x(static_cast<std::size_t>(d));
        for (i64 idx = ilo; idx < ihi; ++idx) {
          i64 t = idx;
          double w = 1;
          for (int k = 0; k < d; ++k) {
            i64 m = static_cast<i64>(xs[static_cast<std::size_t>(k)].size());
            i64 ik = t % m;
            t /= m;
            x[static_cast<std::size_t>(k)] = xs[static_cast<std::size_t>(k)][static_cast<std::size_t>(ik)];
            w *= ws[static_cast<std::size_t>(k)][static_cast<std::size_t>(ik)];
          }
          part.add(abs_pow(std::norm(eval_point(a, sys, x)), p, even, l) * w);
        }
        return part.value();
      },
      threads);
}

}  // namespace

MomentResult box_moment(const Coefficients& a, const PhaseSystem& sys, const TorusBox& box,
                        double p, const QuadratureSpec& quad, int threads) {
  auto t0 = std::chrono::steady_clock::now();
  if (!(p > 0)) throw std::domain_error("box_moment: p must be positive");
  if (box.dim() != sys.d) throw std::domain_error("box_moment: box dimension");
  check_support(a, sys);

  bool even = p <= 240 && p == std::floor(p) && (static_cast<i64>(p) % 2 == 0);
  int l = even ? static_cast<int>(p) / 2 : 0;
  int lceil = static_cast<int>(std::ceil(0.5 * p - 1e-12));

  MomentResult R;
  R.d = sys.d;
  R.N = sys.lattice() ? sys.N : a.hi();
  R.p = p;
  R.region = region_string(box);

  if (quad.method == QuadratureSpec::Method::MC) {
    if (quad.samples < 1000) throw std::domain_error("box_moment: mc needs at least 1000 samples");
    double vol = box.volume();
    i64 n = quad.samples;
    for (int attempt = 0;; ++attempt) {
      McDraw draw(quad.seed, quad.stratified, n, sys.d);
      std::vector<double> f(static_cast<std::size_t>(n));
      parallel_for(
          n,
          [&](i64 i) {
            std::vector<double> x(static_cast<std::size_t>(sys.d));
            for (int k = 0; k < sys.d; ++k)
              x[static_cast<std::size_t>(k)] = box.anchor[static_cast<std::size_t>(k)] +
                                               box.sides[static_cast<std::size_t>(k)] * draw.u(i, k);
            f[static_cast<std::size_t>(i)] = abs_pow(std::norm(eval_point(a, sys, x)), p, even, l);
          },
          threads);
      auto st = mean_and_stderr(f);
      R.value = st.mean * vol;
      R.abs_error_estimate = st.stderr_of_mean * vol;
      if (attempt == 0 && quad.tolerance > 0 && R.abs_error_estimate > quad.tolerance) {
        n *= 4;
        continue;
      }
      break;
    }
    R.method = "mc";
    R.seed = quad.seed;
    R.wall_ms = elapsed_ms(t0);
    return R;
  }

  std::vector<double> F = axis_freqs(sys, a);
  R.method = "grid";

  if (box.is_full() && even) {
    // aliasing-free equispaced grid: exact for the trig polynomial |S|^{2l}
    std::vector<i64> counts;
    if (quad.counts.empty()) {
      counts = nyquist_counts(sys, a, l);
    } else {
      counts = quad.counts;
      if (static_cast<int>(counts.size()) != sys.d)
        throw std::domain_error("box_moment: counts dimension");
      std::string need;
      bool bad = false;
      for (int k = 0; k < sys.d; ++k) {
        i64 nyq = 2 * l * static_cast<i64>(F[static_cast<std::size_t>(k)]) + 1;
        need += (k ? "," : "") + std::to_string(nyq);
        bad = bad || counts[static_cast<std::size_t>(k)] < nyq;
      }
      if (bad)
        throw std::domain_error("box_moment: full-torus grid for p=" + std::to_string(2 * l) +
                                " needs per-axis counts of at least (" + need + ")");
    }
    if (!sys.lattice() && sys.exponents[0] == 1 && a.lo >= 0 && sys.d >= 1) {
      double fib_work = 1;
      for (i64 m : counts) fib_work *= static_cast<double>(m);
      fib_work *= std::log2(static_cast<double>(counts[0])) + 1;
      if (fib_work > 2e10)
        throw ResourceLimit("box_moment: grid needs about " +
                            std::to_string(static_cast<i64>(fib_work)) +
                            " operations, above 2e10; use mc");
      R.value = fiber_sweep(a, sys, l, counts, threads);
    } else {
      R.value = rectangle_direct(a, sys, p, even, l, counts, threads);
    }
    R.abs_error_estimate = 1e-13 * std::abs(R.value);
    R.wall_ms = elapsed_ms(t0);
    return R;
  }

  // sub-box, even p, automatic resolution: the anchored pair sum is exact and
  // usually cheaper than quadrature, so prefer it while the pair count is small
  if (even && quad.counts.empty()) {
    double e_est = 1;
    for (int i = 1; i <= l; ++i) e_est = e_est * static_cast<double>(a.size()) / i;
    if (e_est * e_est * sys.d <= 2e8) {
      R.value = box_moment_exact(a, sys, box, l);
      R.abs_error_estimate = 1e-13 * std::abs(R.value);
      R.method = "exact-count";
      R.wall_ms = elapsed_ms(t0);
      return R;
    }
  }

  // composite Gauss-Legendre with halving error estimate
  std::vector<i64> panels(static_cast<std::size_t>(sys.d));
  if (quad.counts.empty()) {
    for (int k = 0; k < sys.d; ++k) {
      double osc = 2.0 * lceil * F[static_cast<std::size_t>(k)] * box.sides[static_cast<std::size_t>(k)];
      panels[static_cast<std::size_t>(k)] = std::max<i64>(2, static_cast<i64>(std::ceil(1.5 * osc)) + 2);
    }
  } else {
    if (static_cast<int>(quad.counts.size()) != sys.d)
      throw std::domain_error("box_moment: counts dimension");
    std::string need;
    bool bad = false;
    for (int k = 0; k < sys.d; ++k) {
      i64 req = rule_counts(box.sides[static_cast<std::size_t>(k)], lceil, F[static_cast<std::size_t>(k)]);
      need += (k ? "," : "") + std::to_string(req);
      bad = bad || quad.counts[static_cast<std::size_t>(k)] < req;
    }
    if (bad)
      throw std::domain_error(
          "box_moment: grid resolution violates the step rule; need per-axis counts of at least (" +
          need + ")");
    for (int k = 0; k < sys.d; ++k)
      panels[static_cast<std::size_t>(k)] = std::max<i64>(1, quad.counts[static_cast<std::size_t>(k)] / 8);
  }
  for (int attempt = 0;; ++attempt) {
    double nodes = 1;
    for (i64 pn : panels) nodes *= 8.0 * static_cast<double>(pn);
    if (nodes * static_cast<double>(a.size()) > 2e8)
      throw ResourceLimit("box_moment: grid needs " +
                          std::to_string(static_cast<i64>(nodes * static_cast<double>(a.size()))) +
                          " term evaluations, above 2e8; use mc or explicit counts");
    double fine = gl_tensor(a, sys, box, p, even, l, panels, threads);
    std::vector<i64> half(panels);
    for (i64& pn : half) pn = std::max<i64>(1, pn / 2);
    double coarse = gl_tensor(a, sys, box, p, even, l, half, threads);
    R.value = fine;
    R.abs_error_estimate = std::abs(fine - coarse);
    if (attempt == 0 && quad.counts.empty() && quad.tolerance > 0 &&
        R.abs_error_estimate > quad.tolerance) {
      for (i64& pn : panels) pn *= 2;
      continue;
    }
    break;
  }
  R.wall_ms = elapsed_ms(t0);
  return R;
}

MomentResult surface_moment(const Coefficients& a, const PhaseSystem& sys,
                            const GraphSurface& surface, double p, const QuadratureSpec& quad,
                            int threads) {
  auto t0 = std::chrono::steady_clock::now();
  if (!(p > 0)) throw std::domain_error("surface_moment: p must be positive");
  if (surface.d != sys.d) throw std::domain_error("surface_moment: surface/system dimension");
  check_support(a, sys);

  bool even = p <= 240 && p == std::floor(p) && (static_cast<i64>(p) % 2 == 0);
  int l = even ? static_cast<int>(p) / 2 : 0;
  int lceil = static_cast<int>(std::ceil(0.5 * p - 1e-12));
  bool circle = surface.family == SurfaceFamily::Circle;
  int pd = circle ? 1 : surface.params();

  MomentResult R;
  R.d = sys.d;
  R.N = sys.lattice() ? sys.N : a.hi();
  R.p = p;
  R.region = circle ? "circle" : "graph";

  auto eval_at = [&](std::span<const double> x) {
    if (circle) {
      double th = two_pi * x[0];
      std::vector<double> pt{surface.radius * std::cos(th), surface.radius * std::sin(th)};
      return abs_pow(std::norm(eval_point(a, sys, pt)), p, even, l) * two_pi * surface.radius;
    }
    std::vector<double> pt(x.begin(), x.end());
    pt.push_back(surface.f(x));
    return abs_pow(std::norm(eval_point(a, sys, pt)), p, even, l) * surface.weight(x);
  };

  if (quad.method == QuadratureSpec::Method::MC) {
    if (quad.samples < 1000) throw std::domain_error("surface_moment: mc needs at least 1000 samples");
    i64 n = quad.samples;
    for (int attempt = 0;; ++attempt) {
      McDraw draw(quad.seed, quad.stratified, n, pd);
      std::vector<double> f(static_cast<std::size_t>(n));
      parallel_for(
          n,
          [&](i64 i) {
            std::vector<double> x(static_cast<std::size_t>(pd));
            for (int k = 0; k < pd; ++k) x[static_cast<std::size_t>(k)] = draw.u(i, k);
            f[static_cast<std::size_t>(i)] = eval_at(x);
          },
          threads);
      auto st = mean_and_stderr(f);
      R.value = st.mean;
      R.abs_error_estimate = st.stderr_of_mean;
      if (attempt == 0 && quad.tolerance > 0 && R.abs_error_estimate > quad.tolerance) {
        n *= 4;
        continue;
      }
      break;
    }
    R.method = "mc";
    R.seed = quad.seed;
    R.wall_ms = elapsed_ms(t0);
    return R;
  }

  std::vector<double> F = axis_freqs(sys, a);
  // composed bandwidth per parameter axis
  std::vector<double> B(static_cast<std::size_t>(pd));
  if (circle) {
    B[0] = surface.radius * (F[0] + F[1]);
  } else {
    std::vector<double> corner(static_cast<std::size_t>(pd), 1.0);
    std::vector<double> g(static_cast<std::size_t>(pd));
    surface.grad(corner, g);
    if (surface.family == SurfaceFamily::Custom) {
      // probe a coarse lattice; polynomial families peak at the corner
      std::vector<double> probe(static_cast<std::size_t>(pd));
      int steps = pd <= 2 ? 17 : 5;
      i64 total = 1;
      for (int k = 0; k < pd; ++k) total *= steps;
      for (i64 idx = 0; idx < total; ++idx) {
        i64 t = idx;
        for (int k = 0; k < pd; ++k) {
          probe[static_cast<std::size_t>(k)] = static_cast<double>(t % steps) / (steps - 1);
          t /= steps;
        }
        std::vector<double> gp(static_cast<std::size_t>(pd));
        surface.grad(probe, gp);
        for (int k = 0; k < pd; ++k)
          g[static_cast<std::size_t>(k)] = std::max(g[static_cast<std::size_t>(k)],
                                                    std::abs(gp[static_cast<std::size_t>(k)]));
      }
    }
    for (int k = 0; k < pd; ++k)
      B[static_cast<std::size_t>(k)] = F[static_cast<std::size_t>(k)] +
                                       F[static_cast<std::size_t>(sys.d - 1)] *
                                           std::abs(g[static_cast<std::size_t>(k)]);
  }

  std::vector<i64> panels(static_cast<std::size_t>(pd));
  if (quad.counts.empty()) {
    for (int k = 0; k < pd; ++k)
      panels[static_cast<std::size_t>(k)] =
          std::max<i64>(2, static_cast<i64>(std::ceil(1.5 * 2.0 * lceil * B[static_cast<std::size_t>(k)])) + 2);
  } else {
    if (static_cast<int>(quad.counts.size()) != pd)
      throw std::domain_error("surface_moment: counts dimension");
    std::string need;
    bool bad = false;
    for (int k = 0; k < pd; ++k) {
      i64 req = rule_counts(1.0, lceil, F[static_cast<std::size_t>(k)]);
      need += (k ? "," : "") + std::to_string(req);
      bad = bad || quad.counts[static_cast<std::size_t>(k)] < req;
    }
    if (bad)
      throw std::domain_error(
          "surface_moment: grid resolution violates the step rule; need per-axis counts of at least (" +
          need + ")");
    for (int k = 0; k < pd; ++k)
      panels[static_cast<std::size_t>(k)] = std::max<i64>(1, quad.counts[static_cast<std::size_t>(k)] / 8);
  }
  double nodes = 1;
  for (i64 pn : panels) nodes *= 8.0 * static_cast<double>(pn);
  if (nodes * static_cast<double>(a.size()) > 2.5e8)
    throw ResourceLimit("surface_moment: grid needs " +
                        std::to_string(static_cast<i64>(nodes * static_cast<double>(a.size()))) +
                        " term evaluations, above 2.5e8; pass explicit counts or use mc");

  auto sweep = [&](const std::vector<i64>& pan) {
    if (circle) {
      i64 m = pan[0] * 8;
      return block_sum(
                 m,
                 [&](i64 ilo, i64 ihi) {
                   Kahan part;
                   for (i64 i = ilo; i < ihi; ++i) {
                     double th = static_cast<double>(i) / static_cast<double>(m);
                     part.add(eval_at(std::span{&th, 1}));
                   }
                   return part.value();
                 },
                 threads) /
             static_cast<double>(m);
    }
    std::vector<std::vector<double>> xs(static_cast<std::size_t>(pd)), ws(static_cast<std::size_t>(pd));
    i64 total = 1;
    for (int k = 0; k < pd; ++k) {
      gl_axis(0.0, 1.0, pan[static_cast<std::size_t>(k)], xs[static_cast<std::size_t>(k)],
              ws[static_cast<std::size_t>(k)]);
      total *= static_cast<i64>(xs[static_cast<std::size_t>(k)].size());
    }
    return block_sum(
        total,
        [&](i64 ilo, i64 ihi) {
          Kahan part;
          std::vector<double> x(static_cast<std::size_t>(pd));
          for (i64 idx = ilo; idx < ihi; ++idx) {
            i64 t = idx;
            double w = 1;
            for (int k = 0; k < pd; ++k) {
              i64 m = static_cast<i64>(xs[static_cast<std::size_t>(k)].size());
              i64 ik = t % m;
              t /= m;
              x[static_cast<std::size_t>(k)] = xs[static_cast<std::size_t>(k)][static_cast<std::size_t>(ik)];
              w *= ws[static_cast<std::size_t>(k)][static_cast<std::size_t>(ik)];
            }
            part.add(eval_at(x) * w);
          }
          return part.value();
        },
        threads);
  };

  for (int attempt = 0;; ++attempt) {
    double fine = sweep(panels);
    std::vector<i64> half(panels);
    for (i64& pn : half) pn = std::max<i64>(1, pn / 2);
    double coarse = sweep(half);
    R.value = fine;
    R.abs_error_estimate = std::abs(fine - coarse);
    if (attempt == 0 && quad.counts.empty() && quad.tolerance > 0 &&
        R.abs_error_estimate > quad.tolerance) {
      double nodes2 = 1;
      for (i64 pn : panels) nodes2 *= 16.0 * static_cast<double>(pn);
      if (nodes2 * static_cast<double>(a.size()) <= 2.5e8) {
        for (i64& pn : panels) pn *= 2;
        continue;
      }
    }
    break;
  }
  R.method = "grid";
  R.wall_ms = elapsed_ms(t0);
  return R;
}

cplx table_kernel_moment(const Coefficients& a, const PhaseSystem& sys, int l,
                         const std::function<cplx(std::span<const i64>)>& kappa, int threads) {
  (void)threads;
  if (l < 1) throw std::domain_error("table_kernel_moment: l must be >= 1");
  FreqMap W = l_fold_sums(a, sys, l);
  std::vector<std::pair<FreqKey, cplx>> e(W.begin(), W.end());
  std::sort(e.begin(), e.end(), [](const auto& x, const auto& y) { return x.first.v < y.first.v; });
  double work = static_cast<double>(e.size()) * static_cast<double>(e.size());
  if (work > 2e8) throw ResourceLimit("table_kernel_moment: pair enumeration above 2e8");
  KahanC acc;
  std::array<i64, 6> diff{};
  for (const auto& [u, wu] : e)
    for (const auto& [v, wv] : e) {
      for (int k = 0; k < sys.d; ++k)
        diff[static_cast<std::size_t>(k)] = u.v[static_cast<std::size_t>(k)] - v.v[static_cast<std::size_t>(k)];
      cplx kv = kappa(std::span{diff.data(), static_cast<std::size_t>(sys.d)});
      if (kv != cplx{0, 0}) acc.add(wu * std::conj(wv) * kv);
    }
  return acc.value();
}

double kernel_moment(const Coefficients& a, const PhaseSystem& sys, const DecayKernel& K, int l,
                     int threads) {
  if (l < 1) throw std::domain_error("kernel_moment: l must be >= 1");
  if (K.beta < 0) throw std::domain_error("kernel_moment: decay exponent must be >= 0");
  if (l > 1) {
    i64 nz = 0;
    for (const cplx& c : a.a)
      if (c != cplx{0, 0}) ++nz;
    if (std::pow(static_cast<double>(nz), 2.0 * l) > 1e8)
      throw ResourceLimit(
          "kernel_moment: |support|^(2l) above 1e8 tuples; split the l-fold sums in half and "
          "pair the two tables (meet in the middle) instead");
  }
  FreqMap W = l_fold_sums(a, sys, l);
  std::vector<std::pair<FreqKey, cplx>> e(W.begin(), W.end());
  std::sort(e.begin(), e.end(), [](const auto& x, const auto& y) { return x.first.v < y.first.v; });
  double work = static_cast<double>(e.size()) * static_cast<double>(e.size()) * sys.d;
  if (work > 6e8) throw ResourceLimit("kernel_moment: pair enumeration above 6e8");
  double beta = K.beta;
  i64 n = static_cast<i64>(e.size());
  double total = block_sum(
      n,
      [&](i64 ilo, i64 ihi) {
        Kahan part;
        for (i64 i = ilo; i < ihi; ++i) {
          const auto& [u, wu] = e[static_cast<std::size_t>(i)];
          for (i64 jj = 0; jj < n; ++jj) {
            const auto& [v, wv] = e[static_cast<std::size_t>(jj)];
            double q = 0;
            for (int k = 0; k < sys.d; ++k) {
              double dk = static_cast<double>(u.v[static_cast<std::size_t>(k)] -
                                              v.v[static_cast<std::size_t>(k)]);
              q += dk * dk;
            }
            double base = 1.0 + std::sqrt(q);
            double kv;
            if (beta == 0.0)
              kv = 1.0;
            else if (beta == 1.0)
              kv = 1.0 / base;
            else if (beta == 0.5)
              kv = 1.0 / std::sqrt(base);
            else
              kv = std::pow(base, -beta);
            part.add((wu * std::conj(wv)).real() * kv);
          }
        }
        return part.value();
      },
      threads, 64);
  return std::max(total, 0.0);
}

std::pair<double, double> majorant_pair_check(const Coefficients& a, const PhaseSystem& sys,
                                              int l, u64 seed) {
  int d = sys.d;
  if (d > 6) throw std::domain_error("majorant_pair_check: d above key width");
  // density nu = |Q|^2 with Q a random trig polynomial with nonnegative
  // coefficients on a small frequency grid
  int base = d <= 3 ? 3 : 2;
  i64 grid = 1;
  for (int k = 0; k < d; ++k) grid *= base;
  Rng rng(seed);
  std::vector<std::pair<std::array<i64, 6>, double>> q(static_cast<std::size_t>(grid));
  for (i64 idx = 0; idx < grid; ++idx) {
    std::array<i64, 6> m{};
    i64 t = idx;
    for (int k = 0; k < d; ++k) {
      m[static_cast<std::size_t>(k)] = t % base;
      t /= base;
    }
    q[static_cast<std::size_t>(idx)] = {m, rng.u01()};
  }
  std::map<std::array<i64, 6>, double> nu_hat;
  for (const auto& [m1, q1] : q)
    for (const auto& [m2, q2] : q) {
      std::array<i64, 6> key{};
      for (int k = 0; k < d; ++k) key[static_cast<std::size_t>(k)] = m1[static_cast<std::size_t>(k)] - m2[static_cast<std::size_t>(k)];
      nu_hat[key] += q1 * q2;
    }
  // phase twists theta with |theta| <= 1, theta(-key) = conj(theta(key))
  std::map<std::array<i64, 6>, cplx> phi_hat;
  for (const auto& [key, nv] : nu_hat) {
    std::array<i64, 6> negk{};
    for (int k = 0; k < d; ++k) negk[static_cast<std::size_t>(k)] = -key[static_cast<std::size_t>(k)];
    bool zero = std::all_of(key.begin(), key.end(), [](i64 v) { return v == 0; });
    if (zero) {
      phi_hat[key] = cplx{(2 * rng.u01() - 1) * nv, 0};
    } else if (key < negk) {
      cplx th = rng.unimodular();
      phi_hat[key] = th * nv;
      phi_hat[negk] = std::conj(th) * nu_hat.at(negk);
    }
  }
  auto kappa_mu = [&](std::span<const i64> diff) {
    std::array<i64, 6> key{};
    for (std::size_t k = 0; k < diff.size(); ++k) key[k] = -diff[k];
    auto it = phi_hat.find(key);
    return it == phi_hat.end() ? cplx{0, 0} : it->second;
  };
  auto kappa_nu = [&](std::span<const i64> diff) {
    std::array<i64, 6> key{};
    for (std::size_t k = 0; k < diff.size(); ++k) key[k] = diff[k];
    auto it = nu_hat.find(key);
    return it == nu_hat.end() ? cplx{0, 0} : cplx{it->second, 0};
  };
  Coefficients abs_a = a;
  for (cplx& c : abs_a.a) c = std::abs(c);
  double lhs = std::abs(table_kernel_moment(a, sys, l, kappa_mu));
  double rhs = table_kernel_moment(abs_a, sys, l, kappa_nu).real();
  return {lhs, rhs};
}

double conjecture3_normalized(const Coefficients& a, int d, i64 N, int j, double p,
                              const QuadratureSpec& quad, Conjecture3Norm norm, int threads) {
  if (j < 0) throw std::domain_error("conjecture3_normalized: j must be >= 0");
  if (a.hi() > N) throw std::domain_error("conjecture3_normalized: support exceeds N");
  double denom;
  switch (norm) {
    case Conjecture3Norm::L2:
      denom = std::pow(a.norm_l2(), p);
      break;
    case Conjecture3Norm::L6D4:
      denom = std::pow(static_cast<double>(N), p * (0.5 - 1.0 / 3.0)) * std::pow(a.norm_lp(6), p);
      break;
    case Conjecture3Norm::L9D5:
      denom = std::pow(static_cast<double>(N), p * (0.5 - 1.0 / 9.0)) * std::pow(a.norm_lp(9), p);
      break;
    default:
      throw std::domain_error("conjecture3_normalized: unknown normalization");
  }
  if (!(denom > 0)) throw std::domain_error("conjecture3_normalized: zero sequence");
  auto sys = PhaseSystem::moment_curve(d);
  auto m = box_moment(a, sys, TorusBox::dyadic(d, j), p, quad, threads);
  return std::pow(2.0, 0.5 * j * (d + 1)) * m.value / denom;
}

FitResult exponent_fit_over_N(const std::function<double(i64)>& quantity,
                              const std::vector<i64>& ladder) {
  if (ladder.size() < 4) throw std::domain_error("exponent_fit_over_N: need at least 4 ladder points");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (ladder[i] < 1) throw std::domain_error("exponent_fit_over_N: ladder entries must be >= 1");
    if (i && ladder[i] <= ladder[i - 1])
      throw std::domain_error("exponent_fit_over_N: ladder must increase");
    if (i >= 2 && ladder[i] * ladder[i - 2] != ladder[i - 1] * ladder[i - 1])
      throw std::domain_error("exponent_fit_over_N: ladder must be geometric");
  }
  std::vector<std::array<double, 2>> pts;
  for (i64 N : ladder) {
    double qv = quantity(N);
    if (!(qv > 0) || !std::isfinite(qv))
      throw std::domain_error("exponent_fit_over_N: nonpositive quantity at N=" + std::to_string(N));
    pts.push_back({std::log2(static_cast<double>(N)), std::log2(qv)});
  }
  return fit_log_points(pts);
}

FitResult exponent_fit_over_j(const std::function<double(int)>& quantity,
                              const std::vector<int>& ladder) {
  if (ladder.size() < 4) throw std::domain_error("exponent_fit_over_j: need at least 4 ladder points");
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (ladder[i] <= ladder[i - 1]) throw std::domain_error("exponent_fit_over_j: ladder must increase");
    if (i >= 2 && ladder[i] - ladder[i - 1] != ladder[1] - ladder[0])
      throw std::domain_error("exponent_fit_over_j: ladder must be uniformly spaced");
  }
  std::vector<std::array<double, 2>> pts;
  for (int j : ladder) {
    double qv = quantity(j);
    if (!(qv > 0) || !std::isfinite(qv))
      throw std::domain_error("exponent_fit_over_j: nonpositive quantity at j=" + std::to_string(j));
    pts.push_back({static_cast<double>(j), std::log2(qv)});
  }
  return fit_log_points(pts);
}

namespace {

struct StatementInfo {
  std::vector<int> exps;
  int l;
  std::vector<int> side_npow;  // box side on axis k is N^{-side_npow[k]}
  double rhs_npow;
  double norm_q;
};

StatementInfo statement_info(DecouplingStatement st) {
  switch (st) {
    case DecouplingStatement::A10:
      return {{1, 2, 3, 4}, 6, {0, 0, 2, 2}, 4, 6};
    case DecouplingStatement::A11:
      return {{1, 2, 3, 4}, 6, {0, 1, 1, 2}, 4, 6};
    case DecouplingStatement::A32:
      return {{1, 3, 4, 5}, 6, {0, 2, 2, 3}, 4, 6};
    case DecouplingStatement::D32:
      return {{1, 2, 4, 5}, 6, {0, 0, 3, 3}, 4, 6};
    case DecouplingStatement::C7:
      return {{1, 2, 3, 4, 5}, 9, {0, 0, 2, 1, 2}, 7, 9};
  }
  throw std::domain_error("decoupling_ratio: unknown statement");
}

}  // namespace

DecouplingStatement parse_statement(std::string_view token) {
  if (token == "a10") return DecouplingStatement::A10;
  if (token == "a11") return DecouplingStatement::A11;
  if (token == "a32") return DecouplingStatement::A32;
  if (token == "d32") return DecouplingStatement::D32;
  if (token == "c7") return DecouplingStatement::C7;
  throw std::domain_error("decoupling_ratio: unknown statement '" + std::string(token) + "'");
}

std::string statement_token(DecouplingStatement st) {
  switch (st) {
    case DecouplingStatement::A10: return "a10";
    case DecouplingStatement::A11: return "a11";
    case DecouplingStatement::A32: return "a32";
    case DecouplingStatement::D32: return "d32";
    case DecouplingStatement::C7: return "c7";
  }
  return "?";
}

DecouplingResult decoupling_ratio(DecouplingStatement st, i64 N, const Coefficients& a,
                                  const QuadratureSpec& quad, int threads) {
  StatementInfo info = statement_info(st);
  if (N < 2) throw std::domain_error("decoupling_ratio: N must be >= 2");
  if (a.set_mode) throw std::domain_error("decoupling_ratio: needs interval coefficients");
  if (2 * a.lo < N || a.hi() > N)
    throw std::domain_error("decoupling_ratio: support must lie in [N/2, N]");
  if (quad.method != QuadratureSpec::Method::MC)
    throw std::domain_error("decoupling_ratio: sampled lower-dimensional integral, use mc");
  if (quad.samples < 1000) throw std::domain_error("decoupling_ratio: mc needs at least 1000 samples");

  auto sys = PhaseSystem::power_system(info.exps);
  check_support(a, sys);
  int d = sys.d;
  i64 M = static_cast<i64>(a.size());
  double work = static_cast<double>(quad.samples) * info.l * static_cast<double>(M) * static_cast<double>(M);
  if (work > 2e10) {
    i64 max_n = 2 * static_cast<i64>(std::sqrt(2e10 / (static_cast<double>(quad.samples) * info.l)));
    throw ResourceLimit("decoupling_ratio: sampling work above 2e10; max feasible N with " +
                        std::to_string(quad.samples) + " samples is about " + std::to_string(max_n));
  }

  std::vector<double> sides(static_cast<std::size_t>(d), 1.0);
  double vol_rest = 1;
  for (int k = 1; k < d; ++k) {
    sides[static_cast<std::size_t>(k)] =
        std::pow(static_cast<double>(N), -static_cast<double>(info.side_npow[static_cast<std::size_t>(k)]));
    vol_rest *= sides[static_cast<std::size_t>(k)];
  }

  i64 n = quad.samples;
  McDraw draw(quad.seed, quad.stratified, n, d - 1);
  std::vector<double> f(static_cast<std::size_t>(n));
  parallel_for(
      n,
      [&](i64 i) {
        std::vector<cplx> b(static_cast<std::size_t>(M));
        std::vector<double> x(static_cast<std::size_t>(d - 1));
        for (int k = 1; k < d; ++k)
          x[static_cast<std::size_t>(k - 1)] = sides[static_cast<std::size_t>(k)] * draw.u(i, k - 1);
        for (i64 idx = 0; idx < M; ++idx) {
          double ph = 0;
          for (int k = 1; k < d; ++k)
            ph += frac_mul(sys.freq(a.lo + idx, k), x[static_cast<std::size_t>(k - 1)]);
          b[static_cast<std::size_t>(idx)] = a.a[static_cast<std::size_t>(idx)] * eiphase(ph);
        }
        f[static_cast<std::size_t>(i)] = even_moment_1d(b, info.l);
      },
      threads);
  auto stt = mean_and_stderr(f);

  DecouplingResult out;
  out.N = N;
  out.p = 2 * info.l;
  out.seed = quad.seed;
  out.samples = n;
  out.lhs = stt.mean * vol_rest;
  out.lhs_stderr = stt.stderr_of_mean * vol_rest;
  out.rhs = std::pow(static_cast<double>(N), info.rhs_npow) * vol_rest *
            std::pow(a.norm_lp(info.norm_q), 2.0 * info.l);
  out.ratio = out.lhs / out.rhs;
  out.ratio_stderr = out.lhs_stderr / out.rhs;
  return out;
}

}  // namespace weyl
