#include "weyl/core.hpp"

#include <algorithm>
#include <cmath>

#include "weyl/numeric.hpp"

namespace weyl {

Coefficients Coefficients::constant(i64 lo, i64 hi) {
  if (hi < lo) throw std::domain_error("Coefficients: empty interval");
  Coefficients c;
  c.lo = lo;
  c.a.assign(static_cast<std::size_t>(hi - lo + 1), cplx{1.0, 0.0});
  return c;
}

Coefficients Coefficients::from_values(i64 lo, std::vector<cplx> v) {
  if (v.empty()) throw std::domain_error("Coefficients: empty support");
  Coefficients c;
  c.lo = lo;
  c.a = std::move(v);
  return c;
}

Coefficients Coefficients::on_set(std::vector<cplx> v) {
  if (v.empty()) throw std::domain_error("Coefficients: empty support");
  Coefficients c;
  c.set_mode = true;
  c.a = std::move(v);
  return c;
}

Coefficients Coefficients::constant_set(std::size_t count) {
  if (count == 0) throw std::domain_error("Coefficients: empty support");
  Coefficients c;
  c.set_mode = true;
  c.a.assign(count, cplx{1.0, 0.0});
  return c;
}

double Coefficients::norm_l1() const {
  double s = 0;
  for (cplx z : a) s += std::abs(z);
  return s;
}

double Coefficients::norm_l2() const {
  double s = 0;
  for (cplx z : a) s += std::norm(z);
  return std::sqrt(s);
}

double Coefficients::norm_lp(double p) const {
  if (p <= 0) throw std::domain_error("norm_lp: p must be positive");
  if (std::isinf(p)) {
    double m = 0;
    for (cplx z : a) m = std::max(m, std::abs(z));
    return m;
  }
  double s = 0;
  for (cplx z : a) s += std::pow(std::abs(z), p);
  return std::pow(s, 1.0 / p);
}

static i64 isqrt_i64(i64 v) {
  if (v < 0) return -1;
  i64 r = static_cast<i64>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

std::vector<std::array<i64, 2>> semicircle_points(i64 N, bool endpoints) {
  if (N < 0) throw std::domain_error("semicircle_points: N must be nonnegative");
  if (N > 100000000) throw ResourceLimit("semicircle_points: N above 1e8");
  std::vector<std::array<i64, 2>> pts;
  i64 r = isqrt_i64(N);
  for (i64 x = -r; x <= r; ++x) {
    i64 rem = N - x * x;
    i64 y = isqrt_i64(rem);
    if (y * y != rem) continue;
    if (y == 0 && !endpoints) continue;
    pts.push_back({x, y});
  }
  return pts;  // already sorted by x; one y per x on the upper half
}

PhaseSystem PhaseSystem::moment_curve(int d) {
  if (d < 1) throw std::domain_error("moment_curve: d must be >= 1");
  PhaseSystem s;
  s.kind = SystemKind::MomentCurve;
  s.d = d;
  s.exponents.resize(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) s.exponents[static_cast<std::size_t>(k)] = k + 1;
  return s;
}

PhaseSystem PhaseSystem::power_system(std::vector<int> exponents) {
  if (exponents.empty()) throw std::domain_error("power_system: no exponents");
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    if (exponents[k] < 1 || (k > 0 && exponents[k] <= exponents[k - 1]))
      throw std::domain_error("power_system: exponents must be strictly increasing positive");
  }
  PhaseSystem s;
  s.kind = SystemKind::PowerSystem;
  s.d = static_cast<int>(exponents.size());
  s.exponents = std::move(exponents);
  return s;
}

PhaseSystem PhaseSystem::paraboloid(int d, i64 N) {
  if (d < 2) throw std::domain_error("paraboloid: d must be >= 2");
  if (N < 1) throw std::domain_error("paraboloid: N must be >= 1");
  double count = std::pow(static_cast<double>(N), d - 1);
  if (count > 1e7) throw ResourceLimit("paraboloid: N^(d-1) above 1e7 points");
  PhaseSystem s;
  s.kind = SystemKind::ParaboloidShell;
  s.d = d;
  s.N = N;
  // odometer over n in {1..N}^{d-1}, lexicographic; point = (n, |n|^2)
  std::vector<i64> n(static_cast<std::size_t>(d - 1), 1);
  for (;;) {
    i64 q = 0;
    for (i64 v : n) q += v * v;
    std::vector<i64> p(n.begin(), n.end());
    p.push_back(q);
    s.points.push_back(std::move(p));
    int k = d - 2;
    while (k >= 0 && n[static_cast<std::size_t>(k)] == N) {
      n[static_cast<std::size_t>(k)] = 1;
      --k;
    }
    if (k < 0) break;
    ++n[static_cast<std::size_t>(k)];
  }
  return s;
}

PhaseSystem PhaseSystem::sphere(i64 N, bool include_endpoints) {
  PhaseSystem s;
  s.kind = SystemKind::SphereShell;
  s.d = 2;
  s.N = N;
  s.endpoints = include_endpoints;
  for (auto& p : semicircle_points(N, include_endpoints))
    s.points.push_back({p[0], p[1]});
  return s;
}

i128 PhaseSystem::freq(i64 n, int axis) const {
  if (lattice()) throw std::domain_error("freq: lattice systems carry explicit points");
  return checked_ipow(n, exponents[static_cast<std::size_t>(axis)]);
}

i128 PhaseSystem::max_abs_freq(int axis, i64 lo, i64 hi) const {
  if (lattice()) {
    i64 m = 0;
    for (const auto& p : points)
      m = std::max(m, std::abs(p[static_cast<std::size_t>(axis)]));
    return m;
  }
  i64 n = std::max(std::abs(lo), std::abs(hi));
  i128 f = checked_ipow(n, exponents[static_cast<std::size_t>(axis)]);
  return f < 0 ? -f : f;
}

void check_support(const Coefficients& a, const PhaseSystem& sys) {
  if (sys.lattice()) {
    if (!a.set_mode || a.size() != sys.points.size())
      throw std::domain_error("coefficients do not match the system's point set");
    if (sys.points.empty()) throw std::domain_error("empty lattice point set");
  } else {
    if (a.set_mode)
      throw std::domain_error("set-mode coefficients with a curve system");
    if (a.a.empty()) throw std::domain_error("empty coefficient support");
  }
}

TorusBox TorusBox::full(int d) {
  if (d < 1) throw std::domain_error("TorusBox: dimension must be >= 1");
  TorusBox b;
  b.anchor.assign(static_cast<std::size_t>(d), 0.0);
  b.sides.assign(static_cast<std::size_t>(d), 1.0);
  return b;
}

TorusBox TorusBox::dyadic(int d, int j) {
  if (j < 0) throw std::domain_error("TorusBox: dyadic scale must be >= 0");
  TorusBox b = full(d);
  std::fill(b.sides.begin(), b.sides.end(), std::ldexp(1.0, -j));
  return b;
}

TorusBox TorusBox::anchored(std::vector<double> sides) {
  std::vector<double> zeros(sides.size(), 0.0);
  return make(std::move(zeros), std::move(sides));
}

TorusBox TorusBox::make(std::vector<double> anchor, std::vector<double> sides) {
  if (sides.empty() || anchor.size() != sides.size())
    throw std::domain_error("TorusBox: anchor/sides mismatch");
  for (double s : sides)
    if (!(s > 0.0) || s > 1.0) throw std::domain_error("TorusBox: sides must be in (0,1]");
  for (double& t : anchor) {
    if (!std::isfinite(t)) throw std::domain_error("TorusBox: anchor not finite");
    t -= std::floor(t);
  }
  TorusBox b;
  b.anchor = std::move(anchor);
  b.sides = std::move(sides);
  return b;
}

double TorusBox::volume() const {
  double v = 1;
  for (double s : sides) v *= s;
  return v;
}

bool TorusBox::is_full() const {
  for (double s : sides)
    if (s != 1.0) return false;
  return true;
}

TorusBox TorusBox::translated(std::span<const double> t) const {
  if (t.size() != anchor.size()) throw std::domain_error("translated: dimension mismatch");
  std::vector<double> na = anchor;
  for (std::size_t k = 0; k < na.size(); ++k) {
    na[k] += t[k];
    na[k] -= std::floor(na[k]);
  }
  TorusBox b;
  b.anchor = std::move(na);
  b.sides = sides;
  return b;
}

double DyadicScale::side() const { return std::ldexp(1.0, -j); }

CriticalExponents critical_exponents(int d) {
  if (d < 2) throw std::domain_error("critical_exponents: d must be >= 2");
  CriticalExponents e;
  i64 dd = d;
  e.p = dd * (dd - 1);
  e.rho = (d % 2 == 0) ? (3 * dd * dd - 4) / 4 : (3 * dd * dd - 3) / 4;
  e.v = dd * (dd + 1);
  return e;
}

double conjecture_envelope(int d, double p, i64 N, int j) {
  if (!(p > 0)) throw std::domain_error("conjecture_envelope: p must be positive");
  if (N < 1) throw std::domain_error("conjecture_envelope: N must be >= 1");
  if (j < 0) throw std::domain_error("conjecture_envelope: j must be >= 0");
  double rho = static_cast<double>(critical_exponents(d).rho);
  double expo = std::max(0.0, (p - rho) / 2.0);
  return std::pow(static_cast<double>(N), expo);
}

FitResult fit_log_points(std::span<const std::array<double, 2>> pts) {
  std::vector<double> x(pts.size()), y(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    x[i] = pts[i][0];
    y[i] = pts[i][1];
  }
  LineFit lf = fit_line(x, y);
  FitResult r;
  r.slope = lf.slope;
  r.intercept = lf.intercept;
  r.slope_stderr = lf.slope_stderr;
  r.residual_max = lf.residual_max;
  r.sample_points.assign(pts.begin(), pts.end());
  return r;
}

}  // namespace weyl
