#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "weyl/common.hpp"

namespace weyl {

// A finite complex sequence, either on the integer interval [lo, hi()] or on
// an explicit lattice point set (set_mode, values follow the system's point
// order).
struct Coefficients {
  i64 lo = 1;
  bool set_mode = false;
  std::vector<cplx> a;

  static Coefficients constant(i64 lo, i64 hi);
  static Coefficients from_values(i64 lo, std::vector<cplx> v);
  static Coefficients on_set(std::vector<cplx> v);
  static Coefficients constant_set(std::size_t count);

  i64 hi() const { return lo + static_cast<i64>(a.size()) - 1; }
  std::size_t size() const { return a.size(); }

  double norm_l1() const;
  double norm_l2() const;
  // Direct sum for finite p, max modulus for p = infinity.
  double norm_lp(double p) const;
};

enum class SystemKind { MomentCurve, PowerSystem, ParaboloidShell, SphereShell };

// Integer points on the upper semicircle x^2 + y^2 = N, sorted by x then y.
// Endpoints are the y = 0 points (present only when N is a perfect square).
std::vector<std::array<i64, 2>> semicircle_points(i64 N, bool endpoints);

// The frequency map of an exponential sum: either a curve n -> (n^{e_1},...,
// n^{e_d}) with strictly increasing positive integer exponents, or an explicit
// lattice point set (paraboloid shell, sphere shell).
struct PhaseSystem {
  SystemKind kind = SystemKind::MomentCurve;
  int d = 1;  // torus dimension
  std::vector<int> exponents;            // curve kinds
  i64 N = 0;                             // shell kinds
  bool endpoints = true;                 // sphere semicircle endpoints
  std::vector<std::vector<i64>> points;  // shell kinds, fixed enumeration order

  static PhaseSystem moment_curve(int d);
  static PhaseSystem power_system(std::vector<int> exponents);
  static PhaseSystem paraboloid(int d, i64 N);
  static PhaseSystem sphere(i64 N, bool include_endpoints = true);

  bool lattice() const {
    return kind == SystemKind::ParaboloidShell || kind == SystemKind::SphereShell;
  }
  // Curve kinds: frequency of term n on a 0-based axis, exact in 128 bits.
  i128 freq(i64 n, int axis) const;
  // Largest |frequency| on an axis over the support (curve) or point set.
  i128 max_abs_freq(int axis, i64 lo, i64 hi) const;
};

// Throws when the coefficient layout cannot index the system's terms.
void check_support(const Coefficients& a, const PhaseSystem& sys);

// Axis-aligned box in the torus: [anchor_k, anchor_k + side_k) per axis.
struct TorusBox {
  std::vector<double> anchor, sides;

  static TorusBox full(int d);
  static TorusBox dyadic(int d, int j);                  // [0, 2^-j]^d
  static TorusBox anchored(std::vector<double> sides);   // anchor 0
  static TorusBox make(std::vector<double> anchor, std::vector<double> sides);

  int dim() const { return static_cast<int>(sides.size()); }
  double volume() const;
  bool is_full() const;
  TorusBox translated(std::span<const double> t) const;  // anchor shift mod 1
};

struct DyadicScale {
  int j = 0;
  double side() const;
};

struct CriticalExponents {
  i64 p = 0, rho = 0, v = 0;
};

// p_d = d(d-1); rho_d = (3d^2-4)/4 for even d, (3d^2-3)/4 for odd d (always
// an integer); v_d = d(d+1).
CriticalExponents critical_exponents(int d);

// N^{max(0, (p - rho_d)/2)}, the growth envelope the normalized dyadic-box
// moment is compared against. The scale j enters the normalization, not the
// envelope.
double conjecture_envelope(int d, double p, i64 N, int j = 0);

struct MomentResult {
  double value = 0;
  double abs_error_estimate = 0;
  std::string method;  // grid | mc | exact-count | exact-kernel
  int d = 0;
  i64 N = 0;
  double p = 0;
  int j = -1;
  std::string region;
  u64 seed = 0;
  double wall_ms = 0;
};

struct FitResult {
  double slope = 0, intercept = 0, slope_stderr = 0, residual_max = 0;
  std::vector<std::array<double, 2>> sample_points;  // (log-abscissa, log-ordinate)
};

// Least-squares line through (x, y) pairs; stores the points so the fit can
// be reproduced from the result alone.
FitResult fit_log_points(std::span<const std::array<double, 2>> pts);

}  // namespace weyl
