#include "weyl/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "weyl/numeric.hpp"

namespace weyl {

namespace {

std::function<double(std::span<const double>)> poly_f(SurfaceFamily fam, int d) {
  switch (fam) {
    case SurfaceFamily::Square:
      return [](std::span<const double> x) { return x[0] * x[0]; };
    case SurfaceFamily::BilinearD3:
      return [](std::span<const double> x) { return x[0] * x[1]; };
    case SurfaceFamily::QuadD4:
      return [](std::span<const double> x) { return 0.5 * (x[1] * x[1] + x[0] * x[2]); };
    case SurfaceFamily::QuadD5:
      return [](std::span<const double> x) { return 0.5 * (x[0] * x[3] + x[1] * x[2]); };
    case SurfaceFamily::General:
      return [d](std::span<const double> x) {
        double s = 0;
        for (int i = 1; 2 * i <= d; ++i) s += x[static_cast<std::size_t>(i - 1)] * x[static_cast<std::size_t>(d - i - 1)];
        return 2.0 * s / d;
      };
    default:
      throw std::domain_error("GraphSurface: not a polynomial family");
  }
}

std::function<void(std::span<const double>, std::span<double>)> poly_grad(SurfaceFamily fam, int d) {
  switch (fam) {
    case SurfaceFamily::Square:
      return [](std::span<const double> x, std::span<double> g) { g[0] = 2 * x[0]; };
    case SurfaceFamily::BilinearD3:
      return [](std::span<const double> x, std::span<double> g) {
        g[0] = x[1];
        g[1] = x[0];
      };
    case SurfaceFamily::QuadD4:
      return [](std::span<const double> x, std::span<double> g) {
        g[0] = 0.5 * x[2];
        g[1] = x[1];
        g[2] = 0.5 * x[0];
      };
    case SurfaceFamily::QuadD5:
      return [](std::span<const double> x, std::span<double> g) {
        g[0] = 0.5 * x[3];
        g[1] = 0.5 * x[2];
        g[2] = 0.5 * x[1];
        g[3] = 0.5 * x[0];
      };
    case SurfaceFamily::General:
      return [d](std::span<const double> x, std::span<double> g) {
        int half = d / 2;
        for (int k = 1; k <= d - 1; ++k) {
          int cnt = (k <= half ? 1 : 0) + (d - k <= half ? 1 : 0);
          g[static_cast<std::size_t>(k - 1)] = 2.0 * cnt * x[static_cast<std::size_t>(d - k - 1)] / d;
        }
      };
    default:
      throw std::domain_error("GraphSurface: not a polynomial family");
  }
}

GraphSurface polynomial(SurfaceFamily fam, int d) {
  GraphSurface s;
  s.family = fam;
  s.d = d;
  s.f = poly_f(fam, d);
  s.grad = poly_grad(fam, d);
  return s;
}

}  // namespace

GraphSurface GraphSurface::square() { return polynomial(SurfaceFamily::Square, 2); }
GraphSurface GraphSurface::bilinear_d3() { return polynomial(SurfaceFamily::BilinearD3, 3); }
GraphSurface GraphSurface::quad_d4() { return polynomial(SurfaceFamily::QuadD4, 4); }
GraphSurface GraphSurface::quad_d5() { return polynomial(SurfaceFamily::QuadD5, 5); }

GraphSurface GraphSurface::general(int d) {
  if (d < 2) throw std::domain_error("GraphSurface: general family needs d >= 2");
  return polynomial(SurfaceFamily::General, d);
}

GraphSurface GraphSurface::circle(double r) {
  if (!(r > 0)) throw std::domain_error("GraphSurface: circle radius must be positive");
  GraphSurface s;
  s.family = SurfaceFamily::Circle;
  s.d = 2;
  s.radius = r;
  return s;
}

GraphSurface GraphSurface::custom(int d, std::function<double(std::span<const double>)> f,
                                  std::function<void(std::span<const double>, std::span<double>)> grad) {
  if (d < 2) throw std::domain_error("GraphSurface: need d >= 2");
  if (!f || !grad) throw std::domain_error("GraphSurface: custom surface needs F and its gradient");
  GraphSurface s;
  s.family = SurfaceFamily::Custom;
  s.d = d;
  s.f = std::move(f);
  s.grad = std::move(grad);
  return s;
}

double GraphSurface::height(std::span<const double> x) const {
  if (family == SurfaceFamily::Circle) throw std::domain_error("GraphSurface: circle has no graph height");
  if (static_cast<int>(x.size()) != params()) throw std::domain_error("GraphSurface: parameter dimension");
  return f(x);
}

double GraphSurface::weight(std::span<const double> x) const {
  if (family == SurfaceFamily::Circle) return 1.0;
  if (static_cast<int>(x.size()) != params()) throw std::domain_error("GraphSurface: parameter dimension");
  std::vector<double> g(x.size());
  grad(x, g);
  double q = 1;
  for (double v : g) q += v * v;
  return std::sqrt(q);
}

double GraphSurface::containment_sup(i64 N) const {
  if (family == SurfaceFamily::Circle || family == SurfaceFamily::Custom)
    throw std::domain_error("containment_sup: polynomial families only");
  if (N < 1) throw std::domain_error("containment_sup: N must be >= 1");
  // Every listed polynomial has nonnegative coefficients, so the sup over the
  // shrinking box sits at the far corner (1/N, 1/N^2, ..., 1/N^{d-1}).
  std::vector<double> corner(static_cast<std::size_t>(params()));
  double v = 1;
  for (auto& c : corner) {
    v /= static_cast<double>(N);
    c = v;
  }
  return f(corner);
}

namespace {

double max_abs(std::span<const i64> xi) {
  i64 m = 0;
  for (i64 v : xi) m = std::max(m, std::abs(v));
  return static_cast<double>(m);
}

double norm2(std::span<const i64> xi) {
  double q = 0;
  for (i64 v : xi) q += static_cast<double>(v) * static_cast<double>(v);
  return std::sqrt(q);
}

cplx circle_quadrature(const GraphSurface& s, std::span<const i64> xi, i64 nodes) {
  KahanC acc;
  double r = s.radius;
  for (i64 j = 0; j < nodes; ++j) {
    double th = two_pi * static_cast<double>(j) / static_cast<double>(nodes);
    double ph = static_cast<double>(xi[0]) * r * std::cos(th) +
                static_cast<double>(xi[1]) * r * std::sin(th);
    acc.add(eiphase(-ph));
  }
  return acc.value() * (two_pi * r / static_cast<double>(nodes));
}

cplx graph_quadrature(const GraphSurface& s, std::span<const i64> xi, i64 panels) {
  int p = s.params();
  const GaussRule& rule = gauss_rule(8);
  i64 m = panels * 8;
  std::vector<double> node(static_cast<std::size_t>(m)), wt(static_cast<std::size_t>(m));
  for (i64 k = 0; k < panels; ++k)
    for (int j = 0; j < 8; ++j) {
      node[static_cast<std::size_t>(k * 8 + j)] =
          (static_cast<double>(k) + rule.x[static_cast<std::size_t>(j)]) / static_cast<double>(panels);
      wt[static_cast<std::size_t>(k * 8 + j)] = rule.w[static_cast<std::size_t>(j)] / static_cast<double>(panels);
    }
  std::vector<i64> idx(static_cast<std::size_t>(p), 0);
  std::vector<double> x(static_cast<std::size_t>(p));
  KahanC acc;
  while (true) {
    double w = 1;
    for (int k = 0; k < p; ++k) {
      x[static_cast<std::size_t>(k)] = node[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
      w *= wt[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
    }
    double ph = 0;
    for (int k = 0; k < p; ++k) ph += static_cast<double>(xi[static_cast<std::size_t>(k)]) * x[static_cast<std::size_t>(k)];
    ph += static_cast<double>(xi[static_cast<std::size_t>(p)]) * s.f(x);
    acc.add(eiphase(-ph) * (w * s.weight(x)));
    int k = 0;
    while (k < p && ++idx[static_cast<std::size_t>(k)] == m) {
      idx[static_cast<std::size_t>(k)] = 0;
      ++k;
    }
    if (k == p) break;
  }
  return acc.value();
}

cplx quadrature(const GraphSurface& s, std::span<const i64> xi, i64 panels) {
  if (s.family == SurfaceFamily::Circle) return circle_quadrature(s, xi, panels * 8);
  return graph_quadrature(s, xi, panels);
}

}  // namespace

FourierCoefficient surface_fourier_coefficient(const GraphSurface& s,
                                               std::span<const i64> xi, i64 panels) {
  if (static_cast<int>(xi.size()) != s.d)
    throw std::domain_error("surface_fourier_coefficient: frequency dimension");
  i64 need = 2 * (1 + static_cast<i64>(max_abs(xi)));
  if (panels < need)
    throw std::domain_error("surface_fourier_coefficient: need at least " + std::to_string(need) +
                            " panels per axis, got " + std::to_string(panels));
  int p = s.family == SurfaceFamily::Circle ? 1 : s.params();
  double evals = std::pow(8.0 * static_cast<double>(panels), p) * (1.0 + std::pow(0.5, p));
  if (evals > 2.5e8)
    throw ResourceLimit("surface_fourier_coefficient: quadrature needs about " +
                        std::to_string(static_cast<i64>(evals)) + " evaluations, above 2.5e8");
  cplx fine = quadrature(s, xi, panels);
  cplx coarse = quadrature(s, xi, std::max<i64>(1, panels / 2));
  return {fine, std::abs(fine - coarse)};
}

double bessel_circle_magnitude(double r, double t) {
  if (!(r > 0)) throw std::domain_error("bessel_oracle: radius must be positive");
  return two_pi * r * bessel_j0(two_pi * r * t);
}

cplx bessel_oracle(double r, std::span<const i64> xi) {
  return cplx{bessel_circle_magnitude(r, norm2(xi)), 0.0};
}

namespace {

// Least-squares amplitude of t^{-1/2} cos(2 pi (r t - 1/8)) against the exact
// circle coefficient on t in [100, 200]; tends to 2 sqrt(r).
double herz_amplitude(double r) {
  static std::map<double, double> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(r);
  if (it != cache.end()) return it->second;
  Kahan num, den;
  for (int j = 0; j <= 400; ++j) {
    double t = 100.0 + 0.25 * j;
    double phi = std::cos(two_pi * (r * t - 0.125)) / std::sqrt(t);
    num.add(bessel_circle_magnitude(r, t) * phi);
    den.add(phi * phi);
  }
  double c0 = num.value() / den.value();
  cache.emplace(r, c0);
  return c0;
}

}  // namespace

double herz_residual(double r, std::span<const i64> xi) {
  if (!(r > 0)) throw std::domain_error("herz_residual: radius must be positive");
  double t = norm2(xi);
  if (t < 5.0) throw std::domain_error("herz_residual: need |xi| >= 5");
  double c0 = herz_amplitude(r);
  double main = c0 / std::sqrt(t) * std::cos(two_pi * (r * t - 0.125));
  return std::abs(bessel_circle_magnitude(r, t) - main) * t * std::sqrt(t);
}

FitResult decay_fit(const GraphSurface& s, const std::vector<std::vector<i64>>& directions,
                    const std::vector<i64>& radii, int threads) {
  if (radii.size() < 3) throw std::domain_error("decay_fit: need at least 3 radii");
  if (directions.empty()) throw std::domain_error("decay_fit: need at least 1 direction");
  for (const auto& u : directions) {
    if (static_cast<int>(u.size()) != s.d) throw std::domain_error("decay_fit: direction dimension");
    if (std::all_of(u.begin(), u.end(), [](i64 v) { return v == 0; }))
      throw std::domain_error("decay_fit: zero direction");
  }
  for (i64 t : radii)
    if (t < 1) throw std::domain_error("decay_fit: radii must be >= 1");

  i64 nd = static_cast<i64>(directions.size());
  i64 total = static_cast<i64>(radii.size()) * nd;
  std::vector<double> mag(static_cast<std::size_t>(total));
  std::vector<double> dist(static_cast<std::size_t>(total));
  parallel_for(
      total,
      [&](i64 idx) {
        i64 t = radii[static_cast<std::size_t>(idx / nd)];
        const auto& u = directions[static_cast<std::size_t>(idx % nd)];
        std::vector<i64> xi(u.size());
        for (std::size_t k = 0; k < u.size(); ++k) xi[k] = t * u[k];
        i64 panels = 2 * (1 + static_cast<i64>(max_abs(xi)));
        auto c = surface_fourier_coefficient(s, xi, panels);
        mag[static_cast<std::size_t>(idx)] = std::abs(c.value);
        dist[static_cast<std::size_t>(idx)] = norm2(xi);
      },
      threads);

  bool any_alive = std::any_of(mag.begin(), mag.end(), [](double v) { return v >= 1e-14; });
  if (!any_alive) throw std::domain_error("decay_fit: all coefficients below 1e-14, fit degenerate");

  std::vector<std::array<double, 2>> pts;
  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    std::size_t best = ri * static_cast<std::size_t>(nd);
    for (std::size_t di = 1; di < static_cast<std::size_t>(nd); ++di) {
      std::size_t k = ri * static_cast<std::size_t>(nd) + di;
      if (mag[k] > mag[best]) best = k;
    }
    if (mag[best] < 1e-14)
      throw std::domain_error("decay_fit: envelope vanishes at radius " +
                              std::to_string(radii[ri]) + ", fit degenerate");
    pts.push_back({std::log(dist[best]), std::log(mag[best])});
  }
  return fit_log_points(pts);
}

}  // namespace weyl
