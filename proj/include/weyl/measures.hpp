#pragma once

#include <functional>
#include <span>
#include <vector>

#include "weyl/common.hpp"
#include "weyl/core.hpp"

namespace weyl {

// Graph hypersurfaces {(x, F(x)) : x in [0,1]^{d-1}} inside T^d carrying the
// surface measure with weight sqrt(1+|grad F|^2), plus the circle of radius r
// in T^2 with arclength measure.
enum class SurfaceFamily { Square, BilinearD3, QuadD4, QuadD5, General, Circle, Custom };

struct GraphSurface {
  SurfaceFamily family = SurfaceFamily::Square;
  int d = 2;          // ambient dimension; parameter domain has d-1 axes
  double radius = 1;  // circle only

  std::function<double(std::span<const double>)> f;
  std::function<void(std::span<const double>, std::span<double>)> grad;

  static GraphSurface square();        // d=2, F(x) = x^2
  static GraphSurface bilinear_d3();   // d=3, F(x) = x1*x2
  static GraphSurface quad_d4();       // d=4, F(x) = (x2^2 + x1*x3)/2
  static GraphSurface quad_d5();       // d=5, F(x) = (x1*x4 + x2*x3)/2
  static GraphSurface general(int d);  // (2/d) sum_{i<=d/2} x_i x_{d-i}
  static GraphSurface circle(double r);
  static GraphSurface custom(int d, std::function<double(std::span<const double>)> f,
                             std::function<void(std::span<const double>, std::span<double>)> grad);

  int params() const { return d - 1; }
  double height(std::span<const double> x) const;
  double weight(std::span<const double> x) const;

  // sup of |F| over [0,1/N] x [0,1/N^2] x ... x [0,1/N^{d-1}] for the
  // polynomial families (monotone in each variable, so the far corner).
  double containment_sup(i64 N) const;
};

struct FourierCoefficient {
  cplx value;
  double error;  // estimated from comparing against the half-resolution grid
};

// sigma_hat(xi) = integral of e(-xi . (x, F(x))) weight(x) dx, by composite
// tensor Gauss-Legendre with `panels` panels per parameter axis (equispaced
// in angle for the circle). Requires panels >= 2*(1+|xi|_inf).
FourierCoefficient surface_fourier_coefficient(const GraphSurface& s,
                                               std::span<const i64> xi, i64 panels);

// Circle-of-radius-r reference value 2*pi*r*J0(2*pi*r*|xi|).
cplx bessel_oracle(double r, std::span<const i64> xi);
double bessel_circle_magnitude(double r, double t);

// |sigma_hat(xi) - C0 |xi|^{-1/2} cos(2 pi (r|xi| - 1/8))| * |xi|^{3/2} for the
// circle of radius r; C0 is fit once per radius on |xi| in [100,200].
double herz_residual(double r, std::span<const i64> xi);

// Fits log|sigma_hat| against log|xi| on the upper envelope over directions,
// sampling xi = t * u for each radius t and direction u. Slope estimates the
// decay exponent -beta.
FitResult decay_fit(const GraphSurface& s, const std::vector<std::vector<i64>>& directions,
                    const std::vector<i64>& radii, int threads = 0);

}  // namespace weyl
