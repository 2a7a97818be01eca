#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "weyl/core.hpp"
#include "weyl/counting.hpp"
#include "weyl/expsum.hpp"
#include "weyl/io.hpp"
#include "weyl/measures.hpp"
#include "weyl/moments.hpp"
#include "weyl/recipes.hpp"
#include "weyl/verify.hpp"

namespace py = pybind11;
using namespace weyl;

namespace {
using rel = py::call_guard<py::gil_scoped_release>;
}

PYBIND11_MODULE(_weyl, m) {
  m.doc() = "moments, kernels, and counting for lattice exponential sums";

  py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);

  py::class_<Coefficients>(m, "Coefficients")
      .def_static("constant", &Coefficients::constant, py::arg("lo"), py::arg("hi"))
      .def_static("from_values", &Coefficients::from_values, py::arg("lo"), py::arg("values"))
      .def_static("on_set", &Coefficients::on_set, py::arg("values"))
      .def_readonly("lo", &Coefficients::lo)
      .def_readonly("set_mode", &Coefficients::set_mode)
      .def_property_readonly("values",
                             [](const Coefficients& a) { return std::vector<cplx>(a.a); })
      .def_property_readonly("hi", &Coefficients::hi)
      .def("__len__", &Coefficients::size)
      .def("norm_l1", &Coefficients::norm_l1)
      .def("norm_l2", &Coefficients::norm_l2)
      .def("norm_lp", &Coefficients::norm_lp, py::arg("p"));

  py::class_<PhaseSystem>(m, "PhaseSystem")
      .def_static("moment_curve", &PhaseSystem::moment_curve, py::arg("d"))
      .def_static("power_system", &PhaseSystem::power_system, py::arg("exponents"))
      .def_static("paraboloid", &PhaseSystem::paraboloid, py::arg("d"), py::arg("N"))
      .def_static("sphere", &PhaseSystem::sphere, py::arg("N"), py::arg("include_endpoints") = true)
      .def_readonly("d", &PhaseSystem::d)
      .def_readonly("exponents", &PhaseSystem::exponents)
      .def("lattice", &PhaseSystem::lattice);

  py::class_<TorusBox>(m, "TorusBox")
      .def_static("full", &TorusBox::full, py::arg("d"))
      .def_static("dyadic", &TorusBox::dyadic, py::arg("d"), py::arg("j"))
      .def_static("anchored", &TorusBox::anchored, py::arg("sides"))
      .def_static("make", &TorusBox::make, py::arg("anchor"), py::arg("sides"))
      .def_readonly("anchor", &TorusBox::anchor)
      .def_readonly("sides", &TorusBox::sides)
      .def("dim", &TorusBox::dim)
      .def("volume", &TorusBox::volume);

  py::class_<QuadratureSpec>(m, "QuadratureSpec")
      .def_static("grid", &QuadratureSpec::grid, py::arg("counts") = std::vector<i64>{})
      .def_static("mc", &QuadratureSpec::mc, py::arg("samples"), py::arg("seed"),
                  py::arg("stratified") = true)
      .def_readwrite("tolerance", &QuadratureSpec::tolerance)
      .def_readonly("samples", &QuadratureSpec::samples)
      .def_readonly("seed", &QuadratureSpec::seed);

  py::class_<MomentResult>(m, "MomentResult")
      .def_readonly("value", &MomentResult::value)
      .def_readonly("abs_error_estimate", &MomentResult::abs_error_estimate)
      .def_readonly("method", &MomentResult::method)
      .def_readonly("d", &MomentResult::d)
      .def_readonly("N", &MomentResult::N)
      .def_readonly("p", &MomentResult::p)
      .def_readonly("j", &MomentResult::j)
      .def_readonly("region", &MomentResult::region)
      .def_readonly("seed", &MomentResult::seed)
      .def_readonly("wall_ms", &MomentResult::wall_ms);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("slope", &FitResult::slope)
      .def_readonly("intercept", &FitResult::intercept)
      .def_readonly("slope_stderr", &FitResult::slope_stderr)
      .def_readonly("residual_max", &FitResult::residual_max)
      .def_readonly("sample_points", &FitResult::sample_points);

  py::class_<CriticalExponents>(m, "CriticalExponents")
      .def_readonly("p", &CriticalExponents::p)
      .def_readonly("rho", &CriticalExponents::rho)
      .def_readonly("v", &CriticalExponents::v);

  py::class_<GraphSurface>(m, "GraphSurface")
      .def_static("square", &GraphSurface::square)
      .def_static("bilinear_d3", &GraphSurface::bilinear_d3)
      .def_static("quad_d4", &GraphSurface::quad_d4)
      .def_static("quad_d5", &GraphSurface::quad_d5)
      .def_static("general", &GraphSurface::general, py::arg("d"))
      .def_static("circle", &GraphSurface::circle, py::arg("r"))
      .def_readonly("d", &GraphSurface::d)
      .def("params", &GraphSurface::params)
      .def("containment_sup", &GraphSurface::containment_sup, py::arg("N"));

  py::class_<FourierCoefficient>(m, "FourierCoefficient")
      .def_readonly("value", &FourierCoefficient::value)
      .def_readonly("error", &FourierCoefficient::error);

  py::class_<ParabKernelResult>(m, "ParabKernelResult")
      .def_readonly("value", &ParabKernelResult::value)
      .def_readonly("normalized", &ParabKernelResult::normalized);

  py::class_<LatticeShell>(m, "LatticeShell")
      .def_readonly("N", &LatticeShell::N)
      .def_readonly("points", &LatticeShell::points);

  py::class_<SequenceRecipe>(m, "SequenceRecipe")
      .def_static("constant", &SequenceRecipe::constant)
      .def_static("rademacher", &SequenceRecipe::rademacher, py::arg("seed"))
      .def_static("unimodular_random", &SequenceRecipe::unimodular_random, py::arg("seed"))
      .def_static("indicator", &SequenceRecipe::indicator, py::arg("lo"), py::arg("hi"))
      .def_static("smallcap", &SequenceRecipe::smallcap, py::arg("N"))
      .def_static("file", &SequenceRecipe::file, py::arg("path"));

  py::class_<SmallcapResult>(m, "SmallcapResult")
      .def_readonly("lhs", &SmallcapResult::lhs)
      .def_readonly("lhs_stderr", &SmallcapResult::lhs_stderr)
      .def_readonly("m", &SmallcapResult::m)
      .def_readonly("N", &SmallcapResult::N)
      .def_readonly("seed", &SmallcapResult::seed)
      .def_readonly("samples", &SmallcapResult::samples);

  py::class_<DecouplingResult>(m, "DecouplingResult")
      .def_readonly("ratio", &DecouplingResult::ratio)
      .def_readonly("ratio_stderr", &DecouplingResult::ratio_stderr)
      .def_readonly("lhs", &DecouplingResult::lhs)
      .def_readonly("lhs_stderr", &DecouplingResult::lhs_stderr)
      .def_readonly("rhs", &DecouplingResult::rhs)
      .def_readonly("N", &DecouplingResult::N)
      .def_readonly("p", &DecouplingResult::p)
      .def_readonly("seed", &DecouplingResult::seed)
      .def_readonly("samples", &DecouplingResult::samples);

  py::class_<CriterionResult>(m, "CriterionResult")
      .def_readonly("id", &CriterionResult::id)
      .def_readonly("name", &CriterionResult::name)
      .def_readonly("pass_", &CriterionResult::pass)
      .def_readonly("detail", &CriterionResult::detail)
      .def_readonly("seconds", &CriterionResult::seconds);

  m.def("critical_exponents", &critical_exponents, py::arg("d"));
  m.def("conjecture_envelope", &conjecture_envelope, py::arg("d"), py::arg("p"), py::arg("N"),
        py::arg("j") = 0);
  m.def("fit_log_points",
        [](std::vector<std::array<double, 2>> pts) { return fit_log_points(pts); },
        py::arg("points"));

  m.def("eval_point",
        [](const Coefficients& a, const PhaseSystem& sys, std::vector<double> x) {
          return eval_point(a, sys, x);
        },
        py::arg("a"), py::arg("sys"), py::arg("x"));
  m.def("nyquist_counts",
        [](const PhaseSystem& sys, const Coefficients& a, int l, double oversample) {
          return nyquist_counts(sys, a, l, oversample);
        },
        py::arg("sys"), py::arg("a"), py::arg("l"), py::arg("oversample") = 1.0);

  m.def("box_moment", &box_moment, py::arg("a"), py::arg("sys"), py::arg("box"), py::arg("p"),
        py::arg("quad"), py::arg("threads") = 0, rel());
  m.def("surface_moment", &surface_moment, py::arg("a"), py::arg("sys"), py::arg("surface"),
        py::arg("p"), py::arg("quad"), py::arg("threads") = 0, rel());
  m.def("kernel_moment",
        [](const Coefficients& a, const PhaseSystem& sys, double beta, int l, int threads) {
          return kernel_moment(a, sys, DecayKernel{beta}, l, threads);
        },
        py::arg("a"), py::arg("sys"), py::arg("beta"), py::arg("l"), py::arg("threads") = 0,
        rel());
  m.def("conjecture3_normalized",
        [](const Coefficients& a, int d, i64 N, int j, double p, const QuadratureSpec& quad,
           const std::string& norm, int threads) {
          auto n = norm == "l2"   ? Conjecture3Norm::L2
                   : norm == "l6" ? Conjecture3Norm::L6D4
                   : norm == "l9" ? Conjecture3Norm::L9D5
                                  : throw std::domain_error("norm must be l2, l6, or l9");
          return conjecture3_normalized(a, d, N, j, p, quad, n, threads);
        },
        py::arg("a"), py::arg("d"), py::arg("N"), py::arg("j"), py::arg("p"), py::arg("quad"),
        py::arg("norm") = "l2", py::arg("threads") = 0, rel());
  m.def("exponent_fit_over_N", &exponent_fit_over_N, py::arg("quantity"), py::arg("ladder"));
  m.def("exponent_fit_over_j", &exponent_fit_over_j, py::arg("quantity"), py::arg("ladder"));
  m.def("decoupling_ratio",
        [](const std::string& st, i64 N, const Coefficients& a, const QuadratureSpec& quad,
           int threads) { return decoupling_ratio(parse_statement(st), N, a, quad, threads); },
        py::arg("statement"), py::arg("N"), py::arg("a"), py::arg("quad"),
        py::arg("threads") = 0, rel());

  m.def("even_moment_count", &even_moment_count, py::arg("a"), py::arg("sys"), py::arg("l"),
        rel());
  m.def("box_moment_exact", &box_moment_exact, py::arg("a"), py::arg("sys"), py::arg("box"),
        py::arg("l"), rel());
  m.def("sumset", &sumset, py::arg("S"), py::arg("l"));
  m.def("lemma_a35_check",
        [](std::vector<i64> S, std::vector<cplx> values, double i_lo, double i_len, int l) {
          return lemma_a35_check(S, values, i_lo, i_len, l);
        },
        py::arg("S"), py::arg("values"), py::arg("i_lo"), py::arg("i_len"), py::arg("l"));
  m.def("majorant_pair_check", &majorant_pair_check, py::arg("a"), py::arg("sys"), py::arg("l"),
        py::arg("seed"), rel());

  m.def("parab_kernel_bound",
        py::overload_cast<int, i64, double, int>(&parab_kernel_bound), py::arg("d"),
        py::arg("N"), py::arg("beta"), py::arg("threads") = 0, rel());
  m.def("cor_cip_sup", &cor_cip_sup, py::arg("C"), py::arg("D"), py::arg("beta"),
        py::arg("step_factor") = 0.25, rel());
  m.def("l4_kernel_sup", &l4_kernel_sup, py::arg("N"), py::arg("beta"), py::arg("threads") = 0,
        rel());
  m.def("f_c", &f_c, py::arg("C"), py::arg("a"));
  m.def("f_c_amax", &f_c_amax, py::arg("C"));

  m.def("circle_lattice", &circle_lattice, py::arg("N"), py::arg("include_endpoints") = true);
  m.def("arc_max_count", &arc_max_count, py::arg("N"), py::arg("gamma"), rel());
  m.def("pair_count_Ij", &pair_count_Ij, py::arg("N"), py::arg("j"), rel());

  m.def("surface_fourier_coefficient",
        [](const GraphSurface& s, std::vector<i64> xi, i64 panels) {
          return surface_fourier_coefficient(s, xi, panels);
        },
        py::arg("surface"), py::arg("xi"), py::arg("panels"), rel());
  m.def("bessel_oracle",
        [](double r, std::vector<i64> xi) { return bessel_oracle(r, xi); }, py::arg("r"),
        py::arg("xi"));
  m.def("decay_fit", &decay_fit, py::arg("surface"), py::arg("directions"), py::arg("radii"),
        py::arg("threads") = 0, rel());

  m.def("recipe_to_json", &recipe_to_json, py::arg("recipe"));
  m.def("recipe_from_json", &recipe_from_json, py::arg("text"));
  m.def("smallcap_window", &smallcap_window, py::arg("N"));
  m.def("realize",
        py::overload_cast<const SequenceRecipe&, i64, i64>(&realize), py::arg("recipe"),
        py::arg("lo"), py::arg("hi"));
  m.def("realize", py::overload_cast<const SequenceRecipe&>(&realize), py::arg("recipe"));
  m.def("q_box", &q_box, py::arg("d"), py::arg("N"), py::arg("c"));
  m.def("interference_bound", &interference_bound, py::arg("d"), py::arg("N"), py::arg("c"));
  m.def("interference_sampled_min", &interference_sampled_min, py::arg("d"), py::arg("N"),
        py::arg("c"), py::arg("samples"), py::arg("seed"), py::arg("threads") = 0, rel());
  m.def("smallcap_lower_bound", &smallcap_lower_bound, py::arg("N"), py::arg("quad"),
        py::arg("a_override") = std::optional<Coefficients>{}, py::arg("threads") = 0, rel());

  m.def("write_coefficients_csv", &write_coefficients_csv, py::arg("path"), py::arg("a"));
  m.def("read_coefficients_csv", &read_coefficients_csv, py::arg("path"));

  m.def("suite_criteria", &suite_criteria, py::arg("suite"));
  m.def("run_criterion", &run_criterion, py::arg("id"), py::arg("threads") = 0, rel());
  m.def("run_suite", &run_suite, py::arg("suite"), py::arg("max_seconds") = 0.0,
        py::arg("threads") = 0, rel());
  m.def("report_json", &report_json, py::arg("results"));
}
