#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "weyl/io.hpp"
#include "weyl/measures.hpp"
#include "weyl/moments.hpp"
#include "weyl/numeric.hpp"
#include "weyl/recipes.hpp"

using namespace weyl;
using doctest::Approx;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream ifs(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(ifs, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("recipe realizations have the advertised values") {
  auto c = realize(SequenceRecipe::constant(), 1, 16);
  CHECK(c.lo == 1);
  CHECK(c.size() == 16);
  CHECK(c.norm_l2() == Approx(4.0).epsilon(1e-14));

  auto r1 = realize(SequenceRecipe::rademacher(7), 1, 32);
  auto r2 = realize(SequenceRecipe::rademacher(7), 1, 32);
  bool saw_minus = false;
  for (std::size_t k = 0; k < r1.size(); ++k) {
    CHECK(r1.a[k] == r2.a[k]);
    CHECK(r1.a[k].imag() == 0.0);
    CHECK(std::abs(std::abs(r1.a[k].real()) - 1.0) < 1e-15);
    if (r1.a[k].real() < 0) saw_minus = true;
  }
  CHECK(saw_minus);
  CHECK(r1.norm_lp(6) == Approx(std::pow(32.0, 1.0 / 6.0)).epsilon(1e-13));

  auto u1 = realize(SequenceRecipe::unimodular_random(3), 1, 20);
  auto u2 = realize(SequenceRecipe::unimodular_random(3), 1, 20);
  bool off_axis = false;
  for (std::size_t k = 0; k < u1.size(); ++k) {
    CHECK(u1.a[k] == u2.a[k]);
    CHECK(std::abs(u1.a[k]) == Approx(1.0).epsilon(1e-14));
    if (std::abs(u1.a[k].imag()) > 0.1) off_axis = true;
  }
  CHECK(off_axis);

  CHECK_THROWS_AS(realize(SequenceRecipe::constant()), std::domain_error);
  CHECK_THROWS_AS(realize(SequenceRecipe::constant(), 5, 4), std::domain_error);
}

TEST_CASE("window recipes place mass where promised") {
  auto ind = realize(SequenceRecipe::indicator(8, 16), 1, 16);
  for (i64 n = 1; n <= 16; ++n)
    CHECK(ind.a[static_cast<std::size_t>(n - 1)].real() == (n >= 8 ? 1.0 : 0.0));

  auto nat = realize(SequenceRecipe::indicator(8, 16));
  CHECK(nat.lo == 8);
  CHECK(nat.size() == 9);
  CHECK(nat.norm_l1() == Approx(9.0));

  auto sc = realize(SequenceRecipe::smallcap(16));
  CHECK(sc.lo == 8);
  CHECK(sc.hi() == 16);
  CHECK(sc.norm_l1() == Approx(9.0));

  CHECK_THROWS_AS(realize(SequenceRecipe::indicator(8, 16), 1, 12), std::domain_error);
  CHECK_THROWS_AS(realize(SequenceRecipe::smallcap(16), 9, 20), std::domain_error);
  CHECK_THROWS_AS(SequenceRecipe::indicator(5, 4), std::domain_error);
}

TEST_CASE("smallcap window length is the largest fourth power under N cubed") {
  CHECK(smallcap_window(1) == 1);
  CHECK(smallcap_window(2) == 1);
  CHECK(smallcap_window(10) == 5);
  CHECK(smallcap_window(15) == 7);
  CHECK(smallcap_window(16) == 8);
  CHECK(smallcap_window(81) == 27);
  CHECK(smallcap_window(255) == 63);
  CHECK(smallcap_window(256) == 64);
  CHECK_THROWS_AS(smallcap_window(0), std::domain_error);
  CHECK_THROWS_AS(smallcap_window(3000000), ResourceLimit);

  auto s81 = realize(SequenceRecipe::smallcap(81));
  CHECK(s81.lo == 40);
  CHECK(s81.hi() == 67);
}

TEST_CASE("recipes round-trip through json") {
  std::vector<SequenceRecipe> all{
      SequenceRecipe::constant(),         SequenceRecipe::rademacher(7),
      SequenceRecipe::unimodular_random(3), SequenceRecipe::indicator(8, 16),
      SequenceRecipe::smallcap(16),       SequenceRecipe::file("coeffs.csv")};
  for (const auto& r : all) CHECK(recipe_from_json(recipe_to_json(r)) == r);

  auto sc = recipe_from_json("{\"kind\":\"smallcap\",\"N\":16}");
  CHECK(sc == SequenceRecipe::smallcap(16));
  auto rd = recipe_from_json("{\"seed\": 9, \"kind\": \"rademacher\"}");
  CHECK(rd == SequenceRecipe::rademacher(9));

  CHECK_THROWS_AS(recipe_from_json("{\"kind\":\"weibull\"}"), std::domain_error);
  CHECK_THROWS_AS(recipe_from_json("{\"kind\":\"indicator\",\"lo\":3}"), std::domain_error);
  CHECK_THROWS_AS(recipe_from_json("not json"), std::domain_error);
}

TEST_CASE("file recipes read back what io wrote") {
  auto path = temp_path("weyl_coeffs_rt.csv");
  auto orig = Coefficients::from_values(
      3, {cplx{1.5, -2.25}, cplx{0, 0}, cplx{1.0 / 3.0, 7e-17}, cplx{0, 0}});
  write_coefficients_csv(path, orig);

  auto back = read_coefficients_csv(path);
  REQUIRE(back.lo == 3);
  REQUIRE(back.size() == orig.size());
  for (std::size_t k = 0; k < orig.size(); ++k) CHECK(back.a[k] == orig.a[k]);

  auto nat = realize(SequenceRecipe::file(path));
  CHECK(nat.lo == 3);
  CHECK(nat.a[0] == orig.a[0]);

  auto wide = realize(SequenceRecipe::file(path), 1, 10);
  CHECK(wide.lo == 1);
  CHECK(wide.size() == 10);
  CHECK(wide.a[2] == orig.a[0]);
  CHECK(wide.a[0] == cplx{0, 0});
  CHECK(wide.a[9] == cplx{0, 0});

  CHECK_THROWS_AS(realize(SequenceRecipe::file(path), 4, 10), std::domain_error);
  CHECK_THROWS_AS(SequenceRecipe::file(""), std::domain_error);
  std::filesystem::remove(path);
}

TEST_CASE("coefficient csv rejects malformed input") {
  auto path = temp_path("weyl_coeffs_bad.csv");
  auto put = [&](const std::string& body) {
    std::ofstream ofs(path, std::ios::trunc);
    ofs << body;
  };

  put("n,re,im\n1,1,0\n4,2,0\n");
  auto sparse = read_coefficients_csv(path);
  CHECK(sparse.lo == 1);
  CHECK(sparse.size() == 4);
  CHECK(sparse.a[1] == cplx{0, 0});
  CHECK(sparse.a[3] == cplx{2, 0});

  put("n,re,im\n1,1,0\n1,2,0\n");
  CHECK_THROWS_WITH_AS(read_coefficients_csv(path), doctest::Contains("duplicate"),
                       std::domain_error);
  put("n,re,im\n1,fast,0\n");
  CHECK_THROWS_WITH_AS(read_coefficients_csv(path), doctest::Contains("bad number"),
                       std::domain_error);
  put("n,re,im\n1,1\n");
  CHECK_THROWS_AS(read_coefficients_csv(path), std::domain_error);
  put("n,re,im\n");
  CHECK_THROWS_AS(read_coefficients_csv(path), std::domain_error);
  CHECK_THROWS_AS(read_coefficients_csv(temp_path("weyl_no_such_file.csv")), std::domain_error);
  std::filesystem::remove(path);
}

TEST_CASE("result csv appends one header and versioned rows") {
  auto path = temp_path("weyl_results.csv");
  std::filesystem::remove(path);

  ResultRow row;
  row.experiment = "moment";
  row.d = 2;
  row.N = 64;
  row.p = 6;
  row.method = "grid";
  row.value = 12345.5;
  row.seed = 9;
  row.wall_ms = 1.5;
  append_result_csv(path, row);
  row.j = 3;
  row.method = "mc";
  append_result_csv(path, row);

  auto lines = read_lines(path);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "experiment,d,N,p,j,method,value,stderr,seed,wall_ms,schema_version");
  CHECK(lines[1] == "moment,2,64,6,-1,grid,12345.5,0,9,1.5,1");
  CHECK(lines[2].rfind("moment,2,64,6,3,mc,", 0) == 0);
  CHECK(lines[2].back() == '1');
  std::filesystem::remove(path);

  auto spath = temp_path("weyl_shell.csv");
  write_shell_csv(spath, circle_lattice(25));
  auto slines = read_lines(spath);
  CHECK(slines[0] == "x,y");
  CHECK(slines.size() == 1 + circle_lattice(25).points.size());
  std::filesystem::remove(spath);

  auto fpath = temp_path("weyl_fourier.csv");
  std::vector<FourierRow> frows{{{3, 4}, cplx{0.5, -0.25}}};
  write_fourier_csv(fpath, 2, frows);
  auto flines = read_lines(fpath);
  REQUIRE(flines.size() == 2);
  CHECK(flines[0] == "xi_1,xi_2,re,im,abs");
  CHECK(flines[1].rfind("3,4,0.5,-0.25,0.5590169943749474", 0) == 0);
  CHECK_THROWS_AS(write_fourier_csv(fpath, 3, frows), std::domain_error);
  std::filesystem::remove(fpath);
}

TEST_CASE("q_box shrinks each axis by another factor of N") {
  auto b = q_box(2, 4, 1.0);
  REQUIRE(b.dim() == 2);
  CHECK(b.anchor[0] == 0.0);
  CHECK(b.sides[0] == 0.25);
  CHECK(b.sides[1] == 0.0625);
  CHECK(b.volume() == Approx(std::pow(4.0, -3.0)).epsilon(1e-15));

  auto b5 = q_box(5, 2, 0.5);
  for (int k = 0; k < 5; ++k) CHECK(b5.sides[static_cast<std::size_t>(k)] == std::ldexp(1.0, -(k + 2)));

  CHECK_THROWS_AS(q_box(0, 4, 1.0), std::domain_error);
  CHECK_THROWS_AS(q_box(2, 4, 0.0), std::domain_error);
  CHECK_THROWS_AS(q_box(2, 4, 1.5), std::domain_error);

  // graph families stay inside the last q_box side over the first d-1 sides
  std::vector<GraphSurface> fams{GraphSurface::square(), GraphSurface::bilinear_d3(),
                                 GraphSurface::quad_d4(), GraphSurface::quad_d5(),
                                 GraphSurface::general(5)};
  for (const auto& s : fams)
    for (i64 N : {4, 7}) {
      auto box = q_box(s.d, N, 1.0);
      for (int k = 0; k + 1 < s.d; ++k)
        CHECK(box.sides[static_cast<std::size_t>(k)] ==
              Approx(std::pow(static_cast<double>(N), -(k + 1))).epsilon(1e-15));
      CHECK(s.containment_sup(N) <= box.sides[static_cast<std::size_t>(s.d - 1)] * (1 + 1e-12));
    }
}

TEST_CASE("interference bound holds at sampled points") {
  CHECK(interference_bound(2, 16, 1.0 / 16.0) ==
        Approx(16.0 * std::cos(two_pi / 8.0)).epsilon(1e-14));
  CHECK(interference_bound(1, 1000, 1e-9) == Approx(1000.0).epsilon(1e-12));
  CHECK_THROWS_AS(interference_bound(2, 16, 0.07), std::domain_error);
  CHECK_THROWS_AS(interference_bound(3, 16, 0.05), std::domain_error);

  for (auto [d, N] : std::vector<std::pair<int, i64>>{{2, 16}, {3, 64}, {4, 64}, {5, 32}}) {
    double c = 1.0 / (8.0 * d);
    double bound = interference_bound(d, N, c);
    double got = interference_sampled_min(d, N, c, 1000, 77);
    CHECK(got >= bound);
    CHECK(got <= static_cast<double>(N) * (1 + 1e-12));
    CHECK(interference_sampled_min(d, N, c, 1000, 77, 3) == got);
  }

  CHECK_THROWS_AS(interference_sampled_min(2, 16, 1.0 / 16.0, 0, 1), std::domain_error);
  CHECK_THROWS_AS(interference_sampled_min(2, 1 << 30, 1.0 / 16.0, 100000, 1), ResourceLimit);
}

TEST_CASE("smallcap lower bound integrates the shrunken twelfth moment") {
  QuadratureSpec mc;
  mc.method = QuadratureSpec::Method::MC;

  // single spike: |S| = 1 everywhere, so the moment is the domain volume
  mc.samples = 2000;
  mc.seed = 3;
  auto spike = smallcap_lower_bound(16, mc, Coefficients::from_values(8, {cplx{1, 0}}));
  CHECK(spike.lhs == Approx(16.0 / 65536.0).epsilon(1e-12));
  CHECK(spike.lhs_stderr < 1e-12 * spike.lhs);

  mc.samples = 40000;
  mc.seed = 5;
  auto r16 = smallcap_lower_bound(16, mc);
  CHECK(r16.m == 8);
  CHECK(r16.samples == 40000);
  CHECK(r16.lhs == Approx(3.954035e4).epsilon(1e-6));
  CHECK(r16.lhs_stderr == Approx(6.44e2).epsilon(2e-2));

  auto r81 = smallcap_lower_bound(81, mc);
  CHECK(r81.m == 27);
  CHECK(r81.lhs == Approx(1.763274e5).epsilon(1e-6));

  // lhs/m^2 stays within a factor 4 across N, the shape of the lower bound
  double k16 = r16.lhs / 64.0, k81 = r81.lhs / 729.0;
  CHECK(k16 / k81 > 1.0);
  CHECK(k16 / k81 < 4.0);

  QuadratureSpec grid;
  grid.method = QuadratureSpec::Method::Grid;
  CHECK_THROWS_WITH_AS(smallcap_lower_bound(16, grid), doctest::Contains("use mc"),
                       std::domain_error);
  mc.samples = 500;
  CHECK_THROWS_AS(smallcap_lower_bound(16, mc), std::domain_error);
  mc.samples = 2000;
  CHECK_THROWS_AS(smallcap_lower_bound(1, mc), std::domain_error);
  mc.samples = 300000;
  CHECK_THROWS_WITH_AS(smallcap_lower_bound(256, mc), doctest::Contains("at most"),
                       ResourceLimit);
}
