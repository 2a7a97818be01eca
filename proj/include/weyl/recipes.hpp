#pragma once

#include <optional>
#include <string>

#include "weyl/common.hpp"
#include "weyl/core.hpp"
#include "weyl/moments.hpp"

namespace weyl {

// Test-sequence generators. Seeded kinds draw from Rng(seed) one value per
// index in ascending n order (rademacher: pm1, unimodular-random: unimodular),
// so realized sequences are stable across platforms and releases.
struct SequenceRecipe {
  enum class Kind { Constant, Rademacher, UnimodularRandom, Indicator, Smallcap, File };
  Kind kind = Kind::Constant;
  u64 seed = 0;        // rademacher, unimodular-random
  i64 lo = 0, hi = 0;  // indicator
  i64 N = 0;           // smallcap
  std::string path;    // file

  static SequenceRecipe constant();
  static SequenceRecipe rademacher(u64 seed);
  static SequenceRecipe unimodular_random(u64 seed);
  static SequenceRecipe indicator(i64 lo, i64 hi);
  static SequenceRecipe smallcap(i64 N);
  static SequenceRecipe file(std::string path);

  bool operator==(const SequenceRecipe&) const = default;
};

// {"kind":"smallcap","N":16} and so on; round-trips through from_json.
std::string recipe_to_json(const SequenceRecipe& r);
SequenceRecipe recipe_from_json(const std::string& text);

// largest m with m^4 <= N^3, the small-cap window length
i64 smallcap_window(i64 N);

// Fill [lo, hi] from the recipe. Indicator and small-cap windows must fit
// inside the requested interval; file rows must all land inside it.
Coefficients realize(const SequenceRecipe& r, i64 lo, i64 hi);
// Shorthand for recipes that carry their own support (indicator, smallcap,
// file); the unbounded kinds (constant, random) need an explicit interval.
Coefficients realize(const SequenceRecipe& r);

// [0, c/N] x [0, c/N^2] x ... x [0, c/N^d]
TorusBox q_box(int d, i64 N, double c);

// On q_box(d, N, c) every phase x_1 n + ... + x_d n^d stays within c*d of 0,
// so with a≡1 on [1,N] each term has real part >= cos(2*pi*c*d) and
// |S| >= N cos(2*pi*c*d). Requires c <= 1/(8d) (total phase <= 1/8 turn).
double interference_bound(int d, i64 N, double c);

// min |S| over `samples` counter-seeded uniform draws from q_box(d, N, c);
// never below interference_bound when the bound's precondition holds.
double interference_sampled_min(int d, i64 N, double c, i64 samples, u64 seed, int threads = 0);

struct SmallcapResult {
  double lhs = 0;         // integral over [-1,1]^2 x [-1/N,1/N] x [-1/N^3,1/N^3]
  double lhs_stderr = 0;  // mc standard error (x1 fiber is exact)
  i64 m = 0;              // smallcap window length
  i64 N = 0;
  u64 seed = 0;
  i64 samples = 0;
};

// 12th moment of the quartic-curve sum over the shrunken domain, for the
// small-cap window sequence (or an explicit override, e.g. a single spike:
// then lhs = the domain volume exactly). mc over (x2,x3,x4), exact x1 fiber.
SmallcapResult smallcap_lower_bound(i64 N, const QuadratureSpec& quad,
                                    const std::optional<Coefficients>& a_override = {},
                                    int threads = 0);

}  // namespace weyl
