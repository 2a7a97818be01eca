#include <chrono>
#include <cmath>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "weyl/core.hpp"
#include "weyl/counting.hpp"
#include "weyl/expsum.hpp"
#include "weyl/io.hpp"
#include "weyl/measures.hpp"
#include "weyl/moments.hpp"
#include "weyl/recipes.hpp"
#include "weyl/verify.hpp"

namespace {

using namespace weyl;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

i64 parse_i64_tok(const std::string& s) {
  i64 v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::domain_error("bad integer '" + s + "'");
  return v;
}

u64 parse_u64_tok(const std::string& s) {
  u64 v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::domain_error("bad integer '" + s + "'");
  return v;
}

double parse_f64_tok(const std::string& s) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::domain_error("bad number '" + s + "'");
  return v;
}

std::vector<double> parse_f64_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split(s, ',')) out.push_back(parse_f64_tok(t));
  return out;
}

SequenceRecipe parse_seq(const std::string& tok) {
  if (!tok.empty() && tok[0] == '{') return recipe_from_json(tok);
  auto parts = split(tok, ':');
  const auto& head = parts[0];
  if ((head == "const" || head == "constant") && parts.size() == 1)
    return SequenceRecipe::constant();
  if (head == "rademacher" && parts.size() == 2)
    return SequenceRecipe::rademacher(parse_u64_tok(parts[1]));
  if (head == "unimodular" && parts.size() == 2)
    return SequenceRecipe::unimodular_random(parse_u64_tok(parts[1]));
  if (head == "indicator" && parts.size() == 3)
    return SequenceRecipe::indicator(parse_i64_tok(parts[1]), parse_i64_tok(parts[2]));
  if (head == "smallcap" && parts.size() == 2)
    return SequenceRecipe::smallcap(parse_i64_tok(parts[1]));
  if (head == "file" && parts.size() >= 2) return SequenceRecipe::file(tok.substr(5));
  throw std::domain_error("unknown sequence recipe '" + tok +
                          "'; forms: const, rademacher:SEED, unimodular:SEED, "
                          "indicator:LO:HI, smallcap:N, file:PATH, or recipe json");
}

TorusBox parse_box(const std::string& tok, int d, i64 N) {
  auto parts = split(tok, ':');
  const auto& head = parts[0];
  if (head == "full" && parts.size() == 1) return TorusBox::full(d);
  if (head == "dyadic" && parts.size() == 2)
    return TorusBox::dyadic(d, static_cast<int>(parse_i64_tok(parts[1])));
  if (head == "qbox" && parts.size() == 2) return q_box(d, N, parse_f64_tok(parts[1]));
  if (head == "sides" && parts.size() == 2) {
    auto sides = parse_f64_list(parts[1]);
    if (static_cast<int>(sides.size()) != d)
      throw std::domain_error("box sides need d entries");
    return TorusBox::anchored(std::move(sides));
  }
  if (head == "box" && parts.size() == 2) {
    auto halves = split(parts[1], ';');
    if (halves.size() != 2) throw std::domain_error("box spec needs anchor;sides");
    auto anchor = parse_f64_list(halves[0]);
    auto sides = parse_f64_list(halves[1]);
    if (static_cast<int>(anchor.size()) != d || static_cast<int>(sides.size()) != d)
      throw std::domain_error("box anchor and sides need d entries");
    return TorusBox::make(std::move(anchor), std::move(sides));
  }
  throw std::domain_error("unknown box spec '" + tok +
                          "'; forms: full, dyadic:J, qbox:C, sides:s1,..., box:a1,..;s1,..");
}

QuadratureSpec parse_quad(const std::string& tok, u64 seed, double tolerance) {
  auto parts = split(tok, ':');
  QuadratureSpec q;
  if (parts[0] == "grid" && parts.size() <= 2) {
    std::vector<i64> counts;
    if (parts.size() == 2)
      for (const auto& t : split(parts[1], ',')) counts.push_back(parse_i64_tok(t));
    q = QuadratureSpec::grid(std::move(counts));
  } else if (parts[0] == "mc" && (parts.size() == 2 || parts.size() == 3)) {
    bool stratified = true;
    if (parts.size() == 3) {
      if (parts[2] != "plain") throw std::domain_error("mc modifier must be 'plain'");
      stratified = false;
    }
    q = QuadratureSpec::mc(parse_i64_tok(parts[1]), seed, stratified);
  } else {
    throw std::domain_error("unknown quadrature '" + tok +
                            "'; forms: grid, grid:c1,..., mc:SAMPLES[:plain]");
  }
  q.seed = seed;
  q.tolerance = tolerance;
  return q;
}

GraphSurface parse_surface(const std::string& tok) {
  auto parts = split(tok, ':');
  const auto& head = parts[0];
  if (head == "square" && parts.size() == 1) return GraphSurface::square();
  if (head == "bilinear" && parts.size() == 1) return GraphSurface::bilinear_d3();
  if (head == "quad4" && parts.size() == 1) return GraphSurface::quad_d4();
  if (head == "quad5" && parts.size() == 1) return GraphSurface::quad_d5();
  if (head == "general" && parts.size() == 2)
    return GraphSurface::general(static_cast<int>(parse_i64_tok(parts[1])));
  if (head == "circle" && parts.size() == 2) return GraphSurface::circle(parse_f64_tok(parts[1]));
  throw std::domain_error("unknown surface '" + tok +
                          "'; forms: square, bilinear, quad4, quad5, general:D, circle:R");
}

// All options and config-file keys of one invocation; a saved copy reproduces
// the run (same seeds, same reduction schedule).
struct RunConfig {
  int d = 2, j = 0, l = 2, threads = 0;
  i64 N = 0;
  double p = 2, beta = 1, c = 0.5, C = 0, D = 0, gamma = 0;
  double tolerance = 0, max_tuples = 0, max_seconds = 0;
  u64 seed = 0;
  std::string seq = "const", box = "full", quad = "grid", dquad = "mc:200000";
  std::string x, surface = "square", kind, statement = "a11";
  std::string over = "N", ladder, normalize = "none";
  std::string suite, out, config, save_config;
  bool vinogradov = false, no_endpoints = false;
};

struct CfgEntry {
  std::string key;
  char type;  // i: int, l: i64, u: u64, d: double, s: string, b: bool
  void* p;
};

// Adds a CLI option and records it so config files can mirror the flag.
struct Reg {
  CLI::App* s;
  std::vector<CfgEntry>* es;

  CLI::Option* opt(const char* key, int& v, const char* help) {
    es->push_back({key, 'i', &v});
    return s->add_option(std::string("--") + key, v, help);
  }
  CLI::Option* opt(const char* key, i64& v, const char* help) {
    es->push_back({key, 'l', &v});
    return s->add_option(std::string("--") + key, v, help);
  }
  CLI::Option* opt(const char* key, u64& v, const char* help) {
    es->push_back({key, 'u', &v});
    return s->add_option(std::string("--") + key, v, help);
  }
  CLI::Option* opt(const char* key, double& v, const char* help) {
    es->push_back({key, 'd', &v});
    return s->add_option(std::string("--") + key, v, help);
  }
  CLI::Option* opt(const char* key, std::string& v, const char* help) {
    es->push_back({key, 's', &v});
    return s->add_option(std::string("--") + key, v, help);
  }
  CLI::Option* pos(const char* key, std::string& v, const char* help) {
    es->push_back({key, 's', &v});
    return s->add_option(key, v, help);
  }
  CLI::Option* flag(const char* key, bool& v, const char* help) {
    es->push_back({key, 'b', &v});
    return s->add_flag(std::string("--") + key, v, help);
  }
};

std::size_t opt_count(CLI::App* s, const std::string& key) {
  auto* o = s->get_option_no_throw("--" + key);
  if (!o) o = s->get_option_no_throw(key);
  return o ? o->count() : 0;
}

void apply_config(CLI::App* s, const std::vector<CfgEntry>& entries, const std::string& path,
                  const std::string& cmd) {
  std::ifstream f(path);
  if (!f) throw std::domain_error("cannot open: " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw std::domain_error(std::string("config json: ") + e.what());
  }
  if (!cfg.is_object()) throw std::domain_error("config json: expected an object");
  for (const auto& [k, v] : cfg.items()) {
    if (k == "command") {
      if (v != cmd)
        throw std::domain_error("config is for '" + v.get<std::string>() + "', not '" + cmd + "'");
      continue;
    }
    if (k == "config" || k == "save-config") continue;
    const CfgEntry* e = nullptr;
    for (const auto& c : entries)
      if (c.key == k) e = &c;
    if (!e) throw std::domain_error("config: unknown key '" + k + "' for " + cmd);
    if (opt_count(s, k) > 0) continue;  // explicit flags win
    try {
      switch (e->type) {
        case 'i': *static_cast<int*>(e->p) = v.get<int>(); break;
        case 'l': *static_cast<i64*>(e->p) = v.get<i64>(); break;
        case 'u': *static_cast<u64*>(e->p) = v.get<u64>(); break;
        case 'd': *static_cast<double*>(e->p) = v.get<double>(); break;
        case 's': *static_cast<std::string*>(e->p) = v.get<std::string>(); break;
        case 'b': *static_cast<bool*>(e->p) = v.get<bool>(); break;
      }
    } catch (const nlohmann::json::exception&) {
      throw std::domain_error("config: bad value for '" + k + "'");
    }
  }
}

void save_config(const std::vector<CfgEntry>& entries, const std::string& path,
                 const std::string& cmd) {
  nlohmann::ordered_json out;
  out["command"] = cmd;
  for (const auto& e : entries) {
    switch (e.type) {
      case 'i': out[e.key] = *static_cast<int*>(e.p); break;
      case 'l': out[e.key] = *static_cast<i64*>(e.p); break;
      case 'u': out[e.key] = *static_cast<u64*>(e.p); break;
      case 'd': out[e.key] = *static_cast<double*>(e.p); break;
      case 's': out[e.key] = *static_cast<std::string*>(e.p); break;
      case 'b': out[e.key] = *static_cast<bool*>(e.p); break;
    }
  }
  std::ofstream f(path);
  if (!f) throw std::domain_error("cannot open: " + path);
  f << out.dump(2) << '\n';
}

void print_kv(const char* k, double v) { std::cout << k << ' ' << format_double(v) << '\n'; }

void print_moment(const MomentResult& m) {
  print_kv("value", m.value);
  print_kv("stderr", m.abs_error_estimate);
  std::cout << "method " << m.method << '\n';
  std::cout << "seed " << m.seed << '\n';
  print_kv("wall_ms", m.wall_ms);
}

// Best-effort point-count estimate for the --max-tuples guard; 0 when the
// rule picks its own resolution and the count is not cheaply known.
double quad_points_estimate(const QuadratureSpec& q, const PhaseSystem& sys,
                            const Coefficients& a, double p, const TorusBox& box) {
  if (q.method == QuadratureSpec::Method::MC) return static_cast<double>(q.samples);
  double prod = 1;
  if (!q.counts.empty()) {
    for (i64 c : q.counts) prod *= static_cast<double>(c);
    return prod;
  }
  double half = p / 2;
  if (box.is_full() && half == std::floor(half) && half >= 1) {
    for (i64 c : nyquist_counts(sys, a, static_cast<int>(half))) prod *= static_cast<double>(c);
    return prod;
  }
  return 0;
}

void check_max_tuples(double estimate, double max_tuples) {
  if (max_tuples > 0 && estimate > max_tuples) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "work estimate %.3g above --max-tuples %.3g", estimate,
                  max_tuples);
    throw ResourceLimit(buf);
  }
}

void require_N(i64 N) {
  if (N < 1) throw std::domain_error("missing or bad --N");
}

int run(int argc, char** argv) {
  CLI::App app{"lattice exponential sum moments, kernels, and verification experiments"};
  app.require_subcommand(1);
  RunConfig rc;

  struct SubCtx {
    CLI::App* s = nullptr;
    std::vector<CfgEntry> entries;
    std::function<int()> run;
  };
  std::vector<SubCtx> subs(9);

  auto common = [&rc](CLI::App* s) {
    s->add_option("--config", rc.config, "json config file; explicit flags win");
    s->add_option("--save-config", rc.save_config, "write the effective options as json");
  };

  // eval
  {
    auto& ctx = subs[0];
    ctx.s = app.add_subcommand("eval", "evaluate the sum at one point");
    Reg r{ctx.s, &ctx.entries};
    r.opt("d", rc.d, "number of torus variables");
    r.opt("N", rc.N, "coefficient support [1,N]");
    r.opt("seq", rc.seq, "coefficient recipe");
    r.opt("x", rc.x, "point x1,...,xd");
    common(ctx.s);
    ctx.run = [&rc]() {
      require_N(rc.N);
      if (rc.x.empty()) throw std::domain_error("eval needs --x x1,...,xd");
      auto xs = parse_f64_list(rc.x);
      if (static_cast<int>(xs.size()) != rc.d)
        throw std::domain_error("--x needs exactly d entries");
      auto a = realize(parse_seq(rc.seq), 1, rc.N);
      auto v = eval_point(a, PhaseSystem::moment_curve(rc.d), xs);
      print_kv("re", v.real());
      print_kv("im", v.imag());
      print_kv("abs", std::abs(v));
      return 0;
    };
  }

  // moment
  {
    auto& ctx = subs[1];
    ctx.s = app.add_subcommand("moment", "integral of |S|^p over a torus box");
    Reg r{ctx.s, &ctx.entries};
    r.opt("d", rc.d, "number of torus variables");
    r.opt("N", rc.N, "coefficient support [1,N]");
    r.opt("p", rc.p, "moment exponent");
    r.opt("j", rc.j, "dyadic box scale (shortcut for --box dyadic:j)");
    r.opt("seq", rc.seq, "coefficient recipe");
    r.opt("box", rc.box, "full | dyadic:J | qbox:C | sides:s1,... | box:a1,..;s1,..");
    r.opt("quad", rc.quad, "grid | grid:c1,... | mc:SAMPLES[:plain]");
    r.opt("seed", rc.seed, "mc seed");
    r.opt("tolerance", rc.tolerance, "absolute error target (one refinement retry)");
    r.opt("out", rc.out, "append a result csv row");
    r.opt("threads", rc.threads, "worker count (0 = WEYL_THREADS or cores)");
    r.opt("max-tuples", rc.max_tuples, "refuse when the point-count estimate exceeds this");
    common(ctx.s);
    ctx.run = [&rc, &ctx]() {
      require_N(rc.N);
      if (!(rc.p > 0)) throw std::domain_error("--p must be positive");
      bool jset = opt_count(ctx.s, "j") > 0;
      if (jset && opt_count(ctx.s, "box") > 0)
        throw std::domain_error("pass --box or --j, not both");
      auto box = jset ? TorusBox::dyadic(rc.d, rc.j) : parse_box(rc.box, rc.d, rc.N);
      auto quad = parse_quad(rc.quad, rc.seed, rc.tolerance);
      auto a = realize(parse_seq(rc.seq), 1, rc.N);
      auto sys = PhaseSystem::moment_curve(rc.d);
      check_max_tuples(quad_points_estimate(quad, sys, a, rc.p, box), rc.max_tuples);
      auto m = box_moment(a, sys, box, rc.p, quad, rc.threads);
      if (jset) m.j = rc.j;
      print_moment(m);
      if (!rc.out.empty()) append_result_csv(rc.out, result_row("moment", m));
      return 0;
    };
  }

  // surface-moment
  {
    auto& ctx = subs[2];
    ctx.s = app.add_subcommand("surface-moment",
                               "integral of |S|^p against a weighted surface measure");
    Reg r{ctx.s, &ctx.entries};
    r.opt("surface", rc.surface, "square | bilinear | quad4 | quad5 | general:D | circle:R");
    r.opt("N", rc.N, "coefficient support [1,N]");
    r.opt("p", rc.p, "moment exponent");
    r.opt("seq", rc.seq, "coefficient recipe");
    r.opt("quad", rc.quad, "grid | grid:c1,... | mc:SAMPLES[:plain]");
    r.opt("seed", rc.seed, "mc seed");
    r.opt("tolerance", rc.tolerance, "absolute error target");
    r.opt("out", rc.out, "append a result csv row");
    r.opt("threads", rc.threads, "worker count");
    common(ctx.s);
    ctx.run = [&rc]() {
      require_N(rc.N);
      if (!(rc.p > 0)) throw std::domain_error("--p must be positive");
      auto surface = parse_surface(rc.surface);
      auto quad = parse_quad(rc.quad, rc.seed, rc.tolerance);
      auto a = realize(parse_seq(rc.seq), 1, rc.N);
      auto m = surface_moment(a, PhaseSystem::moment_curve(surface.d), surface, rc.p, quad,
                              rc.threads);
      print_moment(m);
      if (!rc.out.empty()) append_result_csv(rc.out, result_row("surface-moment", m));
      return 0;
    };
  }

  // kernel
  {
    auto& ctx = subs[3];
    ctx.s = app.add_subcommand("kernel", "kernel suprema and pairing sums");
    Reg r{ctx.s, &ctx.entries};
    r.opt("kind", rc.kind, "parab | l4 | cip | decay");
    r.opt("d", rc.d, "paraboloid dimension (parab)");
    r.opt("N", rc.N, "scale");
    r.opt("beta", rc.beta, "kernel decay exponent");
    r.opt("l", rc.l, "pairing half-exponent (decay)");
    r.opt("C", rc.C, "curve parameter (cip)");
    r.opt("D", rc.D, "offset parameter (cip)");
    r.opt("seq", rc.seq, "coefficient recipe (decay)");
    r.opt("threads", rc.threads, "worker count");
    common(ctx.s);
    ctx.run = [&rc]() {
      if (rc.kind == "parab") {
        require_N(rc.N);
        auto res = parab_kernel_bound(rc.d, rc.N, rc.beta, rc.threads);
        print_kv("value", res.value);
        print_kv("normalized", res.normalized);
        return 0;
      }
      if (rc.kind == "l4") {
        require_N(rc.N);
        print_kv("value", l4_kernel_sup(rc.N, rc.beta, rc.threads));
        return 0;
      }
      if (rc.kind == "cip") {
        if (!(rc.C > 0) || !(rc.D > 0)) throw std::domain_error("cip needs --C > 0 and --D > 0");
        print_kv("value", cor_cip_sup(rc.C, rc.D, rc.beta));
        return 0;
      }
      if (rc.kind == "decay") {
        require_N(rc.N);
        if (rc.l < 1) throw std::domain_error("--l must be >= 1");
        auto a = realize(parse_seq(rc.seq), 1, rc.N);
        print_kv("value",
                 kernel_moment(a, PhaseSystem::moment_curve(rc.d), DecayKernel{rc.beta}, rc.l,
                               rc.threads));
        return 0;
      }
      throw std::domain_error("--kind must be parab, l4, cip, or decay");
    };
  }

  // fit
  {
    auto& ctx = subs[4];
    ctx.s = app.add_subcommand("fit", "log2 slope of a moment over an N or j ladder");
    Reg r{ctx.s, &ctx.entries};
    r.opt("over", rc.over, "ladder variable: N | j");
    r.opt("ladder", rc.ladder, "comma list; defaults 16,32,64,128 over N, 0,1,2,3,4 over j");
    r.opt("normalize", rc.normalize, "none | l2 | l6 | l9");
    r.opt("d", rc.d, "number of torus variables");
    r.opt("N", rc.N, "coefficient support (fixed, over j)");
    r.opt("p", rc.p, "moment exponent");
    r.opt("seq", rc.seq, "coefficient recipe");
    r.opt("box", rc.box, "box spec (over N)");
    r.opt("quad", rc.quad, "quadrature spec");
    r.opt("seed", rc.seed, "mc seed");
    r.opt("tolerance", rc.tolerance, "absolute error target");
    r.opt("out", rc.out, "append one result csv row per ladder point");
    r.opt("threads", rc.threads, "worker count");
    r.opt("max-tuples", rc.max_tuples, "refuse when a point-count estimate exceeds this");
    common(ctx.s);
    ctx.run = [&rc, &ctx]() {
      bool over_j = rc.over == "j";
      if (!over_j && rc.over != "N") throw std::domain_error("--over must be N or j");
      if (rc.normalize != "none" && rc.normalize != "l2" && rc.normalize != "l6" &&
          rc.normalize != "l9")
        throw std::domain_error("--normalize must be none, l2, l6, or l9");
      auto quad = parse_quad(rc.quad, rc.seed, rc.tolerance);
      auto sys = PhaseSystem::moment_curve(rc.d);
      auto norm_factor = [&rc](const Coefficients& a, i64 N) {
        if (rc.normalize == "l2") return std::pow(a.norm_l2(), rc.p);
        if (rc.normalize == "l6")
          return std::pow(static_cast<double>(N), rc.p / 6) * std::pow(a.norm_lp(6), rc.p);
        if (rc.normalize == "l9")
          return std::pow(static_cast<double>(N), 7 * rc.p / 18) * std::pow(a.norm_lp(9), rc.p);
        return 1.0;
      };
      std::vector<std::array<double, 2>> pts;
      auto emit = [&rc](MomentResult m, double x, double q, double se) {
        std::cout << "point " << format_double(x) << ' ' << format_double(q) << '\n';
        if (!rc.out.empty()) {
          auto row = result_row("fit", m);
          row.value = q;
          row.stderr_of_value = se;
          append_result_csv(rc.out, row);
        }
      };
      if (over_j) {
        if (opt_count(ctx.s, "box") > 0)
          throw std::domain_error("over j fixes the box to dyadic scales");
        require_N(rc.N);
        auto a = realize(parse_seq(rc.seq), 1, rc.N);
        double norm = norm_factor(a, rc.N);
        for (const auto& t : split(rc.ladder.empty() ? "0,1,2,3,4" : rc.ladder, ',')) {
          int j = static_cast<int>(parse_i64_tok(t));
          auto box = TorusBox::dyadic(rc.d, j);
          check_max_tuples(quad_points_estimate(quad, sys, a, rc.p, box), rc.max_tuples);
          auto m = box_moment(a, sys, box, rc.p, quad, rc.threads);
          m.j = j;
          double pref =
              rc.normalize == "none" ? 1.0 : std::exp2(0.5 * j * (rc.d + 1));
          double q = pref * m.value / norm;
          emit(m, j, q, pref * m.abs_error_estimate / norm);
          pts.push_back({static_cast<double>(j), std::log2(q)});
        }
      } else {
        for (const auto& t : split(rc.ladder.empty() ? "16,32,64,128" : rc.ladder, ',')) {
          i64 N = parse_i64_tok(t);
          auto a = realize(parse_seq(rc.seq), 1, N);
          auto box = parse_box(rc.box, rc.d, N);
          check_max_tuples(quad_points_estimate(quad, sys, a, rc.p, box), rc.max_tuples);
          auto m = box_moment(a, sys, box, rc.p, quad, rc.threads);
          double norm = norm_factor(a, N);
          double q = m.value / norm;
          emit(m, static_cast<double>(N), q, m.abs_error_estimate / norm);
          pts.push_back({std::log2(static_cast<double>(N)), std::log2(q)});
        }
      }
      auto f = fit_log_points(pts);
      print_kv("slope", f.slope);
      print_kv("slope_stderr", f.slope_stderr);
      print_kv("residual_max", f.residual_max);
      return 0;
    };
  }

  // decoupling
  {
    auto& ctx = subs[5];
    ctx.s = app.add_subcommand("decoupling", "small-box decoupling ratio for one statement");
    Reg r{ctx.s, &ctx.entries};
    r.opt("statement", rc.statement, "a10 | a11 | a32 | d32 | c7");
    r.opt("N", rc.N, "scale; coefficients live on [N/2, N]");
    r.opt("seq", rc.seq, "coefficient recipe");
    r.opt("quad", rc.dquad, "mc:SAMPLES[:plain]");
    r.opt("seed", rc.seed, "mc seed");
    r.opt("out", rc.out, "append a result csv row");
    r.opt("threads", rc.threads, "worker count");
    r.opt("max-tuples", rc.max_tuples, "refuse when the sample count exceeds this");
    common(ctx.s);
    ctx.run = [&rc]() {
      require_N(rc.N);
      auto st = parse_statement(rc.statement);
      auto quad = parse_quad(rc.dquad, rc.seed, 0);
      check_max_tuples(static_cast<double>(quad.samples), rc.max_tuples);
      auto a = realize(parse_seq(rc.seq), rc.N / 2, rc.N);
      auto t0 = std::chrono::steady_clock::now();
      auto res = decoupling_ratio(st, rc.N, a, quad, rc.threads);
      double wall_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
      std::cout << "statement " << statement_token(st) << '\n';
      std::cout << "p " << res.p << '\n';
      print_kv("ratio", res.ratio);
      print_kv("ratio_stderr", res.ratio_stderr);
      print_kv("lhs", res.lhs);
      print_kv("lhs_stderr", res.lhs_stderr);
      print_kv("rhs", res.rhs);
      std::cout << "samples " << res.samples << '\n';
      std::cout << "seed " << res.seed << '\n';
      if (!rc.out.empty()) {
        ResultRow row;
        row.experiment = "decoupling-" + statement_token(st);
        row.d = st == DecouplingStatement::C7 ? 5 : 4;
        row.N = res.N;
        row.p = res.p;
        row.method = "mc";
        row.value = res.ratio;
        row.stderr_of_value = res.ratio_stderr;
        row.seed = res.seed;
        row.wall_ms = wall_ms;
        append_result_csv(rc.out, row);
      }
      return 0;
    };
  }

  // count
  {
    auto& ctx = subs[6];
    ctx.s = app.add_subcommand("count", "exact weighted solution count of the 2l-fold system");
    Reg r{ctx.s, &ctx.entries};
    r.flag("vinogradov", rc.vinogradov, "unit coefficients on [1,N] (the classical count)");
    r.opt("d", rc.d, "number of equations (curve system)");
    r.opt("l", rc.l, "half exponent");
    r.opt("N", rc.N, "coefficient support [1,N]");
    r.opt("seq", rc.seq, "coefficient recipe");
    r.opt("max-tuples", rc.max_tuples, "refuse when the enumeration bound exceeds this");
    common(ctx.s);
    ctx.run = [&rc]() {
      require_N(rc.N);
      if (rc.l < 1) throw std::domain_error("--l must be >= 1");
      if (rc.vinogradov) rc.seq = "const";
      auto a = realize(parse_seq(rc.seq), 1, rc.N);
      check_max_tuples(std::pow(static_cast<double>(a.size()), rc.l), rc.max_tuples);
      double v = even_moment_count(a, PhaseSystem::moment_curve(rc.d), rc.l);
      std::cout << format_double(v) << '\n';
      return 0;
    };
  }

  // shell
  {
    auto& ctx = subs[7];
    ctx.s = app.add_subcommand("shell", "circle lattice shell points and arc counts");
    Reg r{ctx.s, &ctx.entries};
    r.opt("N", rc.N, "shell radius squared");
    r.opt("gamma", rc.gamma, "also report the max count on arcs of length N^(gamma/2)");
    r.opt("j", rc.j, "also report the pair count with gap in [2^j, 2^(j+1))");
    r.flag("no-endpoints", rc.no_endpoints, "drop the y=0 endpoints of the semicircle");
    r.opt("out", rc.out, "write the shell points csv");
    common(ctx.s);
    ctx.run = [&rc, &ctx]() {
      require_N(rc.N);
      auto shell = circle_lattice(rc.N, !rc.no_endpoints);
      std::cout << "points " << shell.points.size() << '\n';
      if (opt_count(ctx.s, "gamma") > 0)
        std::cout << "arc_max " << arc_max_count(rc.N, rc.gamma) << '\n';
      if (opt_count(ctx.s, "j") > 0)
        std::cout << "pair_count " << pair_count_Ij(rc.N, rc.j) << '\n';
      if (!rc.out.empty()) write_shell_csv(rc.out, shell);
      return 0;
    };
  }

  // verify
  {
    auto& ctx = subs[8];
    ctx.s = app.add_subcommand("verify", "run an acceptance criteria suite");
    Reg r{ctx.s, &ctx.entries};
    r.pos("suite", rc.suite,
          "core | paraboloid | l4 | sphere | decoupling-light | decoupling-heavy; "
          "empty runs everything except decoupling-heavy");
    r.opt("max-seconds", rc.max_seconds, "refuse suites estimated above this budget");
    r.opt("out", rc.out, "write the json report");
    r.opt("threads", rc.threads, "worker count");
    common(ctx.s);
    ctx.run = [&rc]() {
      auto results = run_suite(rc.suite, rc.max_seconds, rc.threads);
      bool all = true;
      for (const auto& res : results) {
        std::printf("[%s] %d %s (%.1fs) %s\n", res.pass ? "ok" : "FAIL", res.id,
                    res.name.c_str(), res.seconds, res.detail.c_str());
        all = all && res.pass;
      }
      std::size_t passed = 0;
      for (const auto& res : results) passed += res.pass;
      std::printf("passed %zu/%zu\n", passed, results.size());
      if (!all) {
        std::printf("failures:");
        for (const auto& res : results)
          if (!res.pass) std::printf(" %d", res.id);
        std::printf("\n");
      }
      if (!rc.out.empty()) {
        std::ofstream f(rc.out);
        if (!f) throw std::domain_error("cannot open: " + rc.out);
        f << report_json(results) << '\n';
      }
      return all ? 0 : 1;
    };
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    std::cerr << "run 'weyl --help' or 'weyl SUBCOMMAND --help' for usage\n";
    return 64;
  }

  for (auto& ctx : subs) {
    if (!ctx.s->parsed()) continue;
    try {
      if (!rc.config.empty()) apply_config(ctx.s, ctx.entries, rc.config, ctx.s->get_name());
      if (!rc.save_config.empty()) save_config(ctx.entries, rc.save_config, ctx.s->get_name());
      return ctx.run();
    } catch (const ResourceLimit& e) {
      std::cerr << "resource: " << e.what() << '\n';
      return 3;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return 64;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
