#include "weyl/recipes.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "weyl/counting.hpp"
#include "weyl/expsum.hpp"
#include "weyl/io.hpp"
#include "weyl/numeric.hpp"

namespace weyl {

SequenceRecipe SequenceRecipe::constant() { return {}; }

SequenceRecipe SequenceRecipe::rademacher(u64 seed) {
  SequenceRecipe r;
  r.kind = Kind::Rademacher;
  r.seed = seed;
  return r;
}

SequenceRecipe SequenceRecipe::unimodular_random(u64 seed) {
  SequenceRecipe r;
  r.kind = Kind::UnimodularRandom;
  r.seed = seed;
  return r;
}

SequenceRecipe SequenceRecipe::indicator(i64 lo, i64 hi) {
  if (hi < lo) throw std::domain_error("indicator recipe: empty window");
  SequenceRecipe r;
  r.kind = Kind::Indicator;
  r.lo = lo;
  r.hi = hi;
  return r;
}

SequenceRecipe SequenceRecipe::smallcap(i64 N) {
  if (N < 1) throw std::domain_error("smallcap recipe: N must be >= 1");
  if (N > 2000000) throw ResourceLimit("smallcap recipe: N above 2e6");
  SequenceRecipe r;
  r.kind = Kind::Smallcap;
  r.N = N;
  return r;
}

SequenceRecipe SequenceRecipe::file(std::string path) {
  if (path.empty()) throw std::domain_error("file recipe: empty path");
  SequenceRecipe r;
  r.kind = Kind::File;
  r.path = std::move(path);
  return r;
}

std::string recipe_to_json(const SequenceRecipe& r) {
  nlohmann::ordered_json j;
  switch (r.kind) {
    case SequenceRecipe::Kind::Constant:
      j["kind"] = "constant";
      break;
    case SequenceRecipe::Kind::Rademacher:
      j["kind"] = "rademacher";
      j["seed"] = r.seed;
      break;
    case SequenceRecipe::Kind::UnimodularRandom:
      j["kind"] = "unimodular-random";
      j["seed"] = r.seed;
      break;
    case SequenceRecipe::Kind::Indicator:
      j["kind"] = "indicator";
      j["lo"] = r.lo;
      j["hi"] = r.hi;
      break;
    case SequenceRecipe::Kind::Smallcap:
      j["kind"] = "smallcap";
      j["N"] = r.N;
      break;
    case SequenceRecipe::Kind::File:
      j["kind"] = "file";
      j["path"] = r.path;
      break;
  }
  return j.dump();
}

SequenceRecipe recipe_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::domain_error(std::string("recipe json: ") + e.what());
  }
  try {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return SequenceRecipe::constant();
    if (kind == "rademacher") return SequenceRecipe::rademacher(j.at("seed").get<u64>());
    if (kind == "unimodular-random")
      return SequenceRecipe::unimodular_random(j.at("seed").get<u64>());
    if (kind == "indicator")
      return SequenceRecipe::indicator(j.at("lo").get<i64>(), j.at("hi").get<i64>());
    if (kind == "smallcap") return SequenceRecipe::smallcap(j.at("N").get<i64>());
    if (kind == "file") return SequenceRecipe::file(j.at("path").get<std::string>());
    throw std::domain_error("recipe json: unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw std::domain_error(std::string("recipe json: ") + e.what());
  }
}

i64 smallcap_window(i64 N) {
  if (N < 1) throw std::domain_error("smallcap_window: N must be >= 1");
  if (N > 2000000) throw ResourceLimit("smallcap_window: N above 2e6");
  i64 n3 = N * N * N;
  i64 m = static_cast<i64>(std::floor(std::pow(static_cast<double>(N), 0.75)));
  auto p4 = [](i64 v) { return v * v * v * v; };
  while (m > 0 && p4(m) > n3) --m;
  while (p4(m + 1) <= n3) ++m;
  return m;
}

namespace {

std::pair<i64, i64> natural_window(const SequenceRecipe& r) {
  switch (r.kind) {
    case SequenceRecipe::Kind::Indicator:
      return {r.lo, r.hi};
    case SequenceRecipe::Kind::Smallcap:
      return {r.N / 2, r.N / 2 + smallcap_window(r.N)};
    default:
      throw std::domain_error("realize: recipe does not fix a support; pass an interval");
  }
}

}  // namespace

Coefficients realize(const SequenceRecipe& r, i64 lo, i64 hi) {
  if (hi < lo) throw std::domain_error("realize: empty interval");
  if (hi - lo + 1 > 100000000) throw ResourceLimit("realize: support above 1e8");
  std::size_t n = static_cast<std::size_t>(hi - lo + 1);
  switch (r.kind) {
    case SequenceRecipe::Kind::Constant:
      return Coefficients::constant(lo, hi);
    case SequenceRecipe::Kind::Rademacher: {
      Rng rng(r.seed);
      std::vector<cplx> v(n);
      for (auto& z : v) z = cplx{rng.pm1(), 0};
      return Coefficients::from_values(lo, std::move(v));
    }
    case SequenceRecipe::Kind::UnimodularRandom: {
      Rng rng(r.seed);
      std::vector<cplx> v(n);
      for (auto& z : v) z = rng.unimodular();
      return Coefficients::from_values(lo, std::move(v));
    }
    case SequenceRecipe::Kind::Indicator:
    case SequenceRecipe::Kind::Smallcap: {
      auto [wlo, whi] = natural_window(r);
      if (wlo < lo || whi > hi)
        throw std::domain_error("realize: window [" + std::to_string(wlo) + "," +
                                std::to_string(whi) + "] not inside the requested interval");
      std::vector<cplx> v(n, cplx{0, 0});
      for (i64 k = wlo; k <= whi; ++k) v[static_cast<std::size_t>(k - lo)] = cplx{1, 0};
      return Coefficients::from_values(lo, std::move(v));
    }
    case SequenceRecipe::Kind::File: {
      Coefficients raw = read_coefficients_csv(r.path);
      if (raw.lo < lo || raw.hi() > hi)
        throw std::domain_error("realize: file support [" + std::to_string(raw.lo) + "," +
                                std::to_string(raw.hi()) + "] not inside the requested interval");
      std::vector<cplx> v(n, cplx{0, 0});
      for (std::size_t k = 0; k < raw.size(); ++k)
        v[static_cast<std::size_t>(raw.lo - lo) + k] = raw.a[k];
      return Coefficients::from_values(lo, std::move(v));
    }
  }
  throw std::domain_error("realize: unknown recipe kind");
}

Coefficients realize(const SequenceRecipe& r) {
  if (r.kind == SequenceRecipe::Kind::File) return read_coefficients_csv(r.path);
  auto [lo, hi] = natural_window(r);
  return realize(r, lo, hi);
}

TorusBox q_box(int d, i64 N, double c) {
  if (d < 1) throw std::domain_error("q_box: d must be >= 1");
  if (N < 1) throw std::domain_error("q_box: N must be >= 1");
  if (!(c > 0) || c > 1) throw std::domain_error("q_box: shrink factor must be in (0,1]");
  std::vector<double> sides(static_cast<std::size_t>(d));
  double s = c;
  for (int k = 0; k < d; ++k) {
    s /= static_cast<double>(N);
    sides[static_cast<std::size_t>(k)] = s;
  }
  return TorusBox::anchored(std::move(sides));
}

double interference_bound(int d, i64 N, double c) {
  if (d < 1) throw std::domain_error("interference_bound: d must be >= 1");
  if (N < 1) throw std::domain_error("interference_bound: N must be >= 1");
  if (!(c > 0) || c > 1.0 / (8.0 * d))
    throw std::domain_error("interference_bound: no guarantee above c = 1/(8d)");
  return static_cast<double>(N) * std::cos(two_pi * c * static_cast<double>(d));
}

double interference_sampled_min(int d, i64 N, double c, i64 samples, u64 seed, int threads) {
  if (samples < 1) throw std::domain_error("interference_sampled_min: samples must be >= 1");
  if (static_cast<double>(samples) * static_cast<double>(N) > 2e9)
    throw ResourceLimit("interference_sampled_min: samples*N above 2e9");
  TorusBox box = q_box(d, N, c);
  auto a = Coefficients::constant(1, N);
  auto sys = PhaseSystem::moment_curve(d);
  std::vector<double> vals(static_cast<std::size_t>(samples));
  parallel_for(
      samples,
      [&](i64 i) {
        std::vector<double> x(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k)
          x[static_cast<std::size_t>(k)] =
              box.sides[static_cast<std::size_t>(k)] * sample_u01(seed, static_cast<u64>(i), static_cast<u64>(k));
        vals[static_cast<std::size_t>(i)] = std::abs(eval_point(a, sys, x));
      },
      threads);
  return *std::min_element(vals.begin(), vals.end());
}

SmallcapResult smallcap_lower_bound(i64 N, const QuadratureSpec& quad,
                                    const std::optional<Coefficients>& a_override, int threads) {
  if (N < 2) throw std::domain_error("smallcap_lower_bound: N must be >= 2");
  if (quad.method != QuadratureSpec::Method::MC)
    throw std::domain_error("smallcap_lower_bound: sampled outer integral, use mc");
  if (quad.samples < 1000)
    throw std::domain_error("smallcap_lower_bound: mc needs at least 1000 samples");
  Coefficients a = a_override ? *a_override : realize(SequenceRecipe::smallcap(N));
  if (a.set_mode || a.lo < 1)
    throw std::domain_error("smallcap_lower_bound: interval coefficients with lo >= 1");

  const int l = 6;
  i64 terms = static_cast<i64>(a.size());
  double per_sample = 0.5 * l * l * static_cast<double>(terms) * static_cast<double>(terms);
  if (static_cast<double>(quad.samples) * per_sample > 2e10) {
    i64 max_s = static_cast<i64>(2e10 / per_sample);
    throw ResourceLimit("smallcap_lower_bound: sampling work above 2e10; at this N use at most " +
                        std::to_string(max_s) + " samples");
  }

  auto sys = PhaseSystem::power_system({1, 2, 3, 4});
  double nd = static_cast<double>(N);
  // x2 spans [-1,1]; x3 and x4 are that interval shrunk by N and N^3
  std::array<double, 3> scale{1.0, 1.0 / nd, 1.0 / (nd * nd * nd)};

  i64 n = quad.samples;
  std::vector<double> f(static_cast<std::size_t>(n));
  parallel_for(
      n,
      [&](i64 i) {
        std::array<double, 3> x{};
        for (int k = 0; k < 3; ++k)
          x[static_cast<std::size_t>(k)] =
              scale[static_cast<std::size_t>(k)] *
              (2.0 * sample_u01(quad.seed, static_cast<u64>(i), static_cast<u64>(k)) - 1.0);
        std::vector<cplx> b(static_cast<std::size_t>(terms));
        for (i64 idx = 0; idx < terms; ++idx) {
          double ph = 0;
          for (int k = 1; k <= 3; ++k)
            ph += frac_mul(sys.freq(a.lo + idx, k), x[static_cast<std::size_t>(k - 1)]);
          b[static_cast<std::size_t>(idx)] = a.a[static_cast<std::size_t>(idx)] * eiphase(ph);
        }
        f[static_cast<std::size_t>(i)] = even_moment_1d(b, l);
      },
      threads);

  Kahan m1;
  for (double v : f) m1.add(v);
  double mean = m1.value() / static_cast<double>(n);
  Kahan m2;
  for (double v : f) m2.add((v - mean) * (v - mean));
  double se = n > 1 ? std::sqrt(std::max(0.0, m2.value()) /
                                (static_cast<double>(n) * static_cast<double>(n - 1)))
                    : 0.0;

  // x1 length 2 times the (x2,x3,x4) volume 2 * 2/N * 2/N^3
  double vol_rest = 2.0 * (2.0 / nd) * (2.0 / (nd * nd * nd));
  SmallcapResult out;
  out.lhs = 2.0 * mean * vol_rest;
  out.lhs_stderr = 2.0 * se * vol_rest;
  out.m = smallcap_window(N);
  out.N = N;
  out.seed = quad.seed;
  out.samples = n;
  return out;
}

}  // namespace weyl
