#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "schwarzspec/discrete.hpp"
#include "schwarzspec/experiments.hpp"
#include "schwarzspec/iteration_lab.hpp"
#include "schwarzspec/schwarz2d.hpp"
#include "schwarzspec/toeplitz.hpp"

namespace py = pybind11;
using namespace schwarzspec;

namespace {

py::array_t<Complex> to_numpy(const DenseMatrix& m) {
  py::array_t<Complex> out({m.rows(), m.cols()});
  auto v = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v(i, j) = m(i, j);
  return out;
}

py::array_t<Complex> to_numpy(const CVector& x) { return py::array_t<Complex>(x.size(), x.data()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Schwarz iteration matrices, their spectra and convergence criteria";

  py::register_exception<RootFindError>(m, "RootFindError", PyExc_RuntimeError);
  py::register_exception<SingularConfiguration>(m, "SingularConfiguration", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  // numerics
  m.def(
      "poly_roots",
      [](const CVector& coeffs, double tol, int max_iter) {
        RootOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        return to_numpy(poly_roots(Polynomial(coeffs), o));
      },
      py::arg("coeffs"), py::arg("tol") = 1e-12, py::arg("max_iter") = 1000,
      "Roots of the polynomial with coefficients given lowest degree first.");
  m.def(
      "lu_det", [](const py::array_t<Complex, py::array::c_style | py::array::forcecast>& a) {
        if (a.ndim() != 2) throw std::invalid_argument("expected a 2D array");
        const auto r = static_cast<std::size_t>(a.shape(0)), c = static_cast<std::size_t>(a.shape(1));
        return lu_det(DenseMatrix(r, c, CVector(a.data(), a.data() + r * c)));
      },
      py::arg("a"));

  // toeplitz_spectrum
  m.def(
      "toeplitz_matrix", [](Complex a, Complex b, int m) { return to_numpy(assemble_dense(ToeplitzBlocks(a, b, m, Degenerate::allow))); },
      py::arg("a"), py::arg("b"), py::arg("m"));
  m.def(
      "charpoly_eval",
      [](Complex a, Complex b, int m, Complex z) {
        const auto e = charpoly_eval(a, b, m, z);
        return py::make_tuple(e.value, e.derivative);
      },
      py::arg("a"), py::arg("b"), py::arg("m"), py::arg("z"));
  m.def(
      "generating_check", [](Complex a, Complex b, Complex t, Complex z, int terms) {
        return generating_check(ToeplitzBlocks(a, b, 1), t, z, terms);
      },
      py::arg("a"), py::arg("b"), py::arg("t"), py::arg("z"), py::arg("terms") = 40);
  m.def("series_growth_bound", &series_growth_bound, py::arg("a"), py::arg("b"), py::arg("z"));
  m.def(
      "q_polynomial", [](Complex c, int m) { return to_numpy(q_polynomial(c, m).coeffs()); }, py::arg("c"), py::arg("m"));
  m.def(
      "q_roots", [](Complex c, int m) {
        const auto d = q_poly_from_c(c, m);
        return py::make_tuple(to_numpy(d.roots), d.reciprocal_pairing_error);
      },
      py::arg("c"), py::arg("m"));

  py::class_<Outlier>(m, "Outlier").def_readonly("value", &Outlier::value).def_readonly("admissible", &Outlier::admissible);
  py::class_<LimitSpectrum>(m, "LimitSpectrum")
      .def_readonly("a", &LimitSpectrum::a)
      .def_readonly("b", &LimitSpectrum::b)
      .def_readonly("outliers", &LimitSpectrum::outliers)
      .def_readonly("sup_modulus", &LimitSpectrum::sup_modulus)
      .def_property_readonly("theta", [](const LimitSpectrum& l) {
        std::vector<double> t;
        for (const auto& s : l.curve_samples) t.push_back(s.theta);
        return t;
      })
      .def_property_readonly("plus", [](const LimitSpectrum& l) {
        CVector v;
        for (const auto& s : l.curve_samples) v.push_back(s.plus);
        return to_numpy(v);
      })
      .def_property_readonly("minus", [](const LimitSpectrum& l) {
        CVector v;
        for (const auto& s : l.curve_samples) v.push_back(s.minus);
        return to_numpy(v);
      })
      .def("distance", &distance_to_limit, py::arg("z"));
  m.def(
      "limiting_spectrum", [](Complex a, Complex b, int samples) { return limiting_spectrum(a, b, samples); }, py::arg("a"),
      py::arg("b"), py::arg("samples") = 4096);

  py::class_<SpectrumReport>(m, "SpectrumReport")
      .def_property_readonly("eigenvalues", [](const SpectrumReport& r) { return to_numpy(r.eigenvalues); })
      .def_readonly("distances", &SpectrumReport::distances)
      .def_readonly("limit", &SpectrumReport::limit)
      .def_readonly("spectral_radius", &SpectrumReport::spectral_radius)
      .def_readonly("max_distance", &SpectrumReport::max_distance)
      .def_readonly("mean_distance", &SpectrumReport::mean_distance)
      .def_readonly("determinant_residual", &SpectrumReport::determinant_residual);
  m.def(
      "spectrum",
      [](Complex a, Complex b, int m, int curve_samples) {
        SpectrumOptions o;
        o.curve_samples = curve_samples;
        return spectrum(ToeplitzBlocks(a, b, m), o);
      },
      py::arg("a"), py::arg("b"), py::arg("m"), py::arg("curve_samples") = 4096);

  // schwarz_1d
  py::enum_<AlphaKind>(m, "AlphaKind")
      .value("impedance", AlphaKind::impedance)
      .value("impedance_shifted", AlphaKind::impedance_shifted)
      .value("general", AlphaKind::general);
  py::class_<SchwarzParams>(m, "SchwarzParams")
      .def(py::init([](double k, double sigma, double delta, double L, int N, const std::string& alpha_mode,
                       std::optional<Complex> alpha) {
             SchwarzParams p;
             p.k = k;
             p.sigma = sigma;
             p.delta = delta;
             p.L = L;
             p.N = N;
             if (alpha) {
               p.alpha = AlphaMode::general(*alpha);
             } else if (alpha_mode == "impedance-shifted") {
               p.alpha = AlphaMode::impedance_shifted();
             } else if (alpha_mode != "impedance") {
               throw std::invalid_argument("alpha_mode must be 'impedance' or 'impedance-shifted'");
             }
             p.validate();
             return p;
           }),
           py::arg("k"), py::arg("sigma"), py::arg("delta"), py::arg("L"), py::arg("N") = 2,
           py::arg("alpha_mode") = "impedance", py::arg("alpha") = py::none())
      .def_readonly("k", &SchwarzParams::k)
      .def_readonly("sigma", &SchwarzParams::sigma)
      .def_readonly("delta", &SchwarzParams::delta)
      .def_readonly("L", &SchwarzParams::L)
      .def_readonly("N", &SchwarzParams::N)
      .def_property_readonly("alpha", &SchwarzParams::alpha_value);
  m.def("zeta_1d", &zeta_1d, py::arg("k"), py::arg("sigma"));
  m.def("zeta_mode", &zeta_mode, py::arg("k"), py::arg("sigma"), py::arg("k_tilde"));
  m.def(
      "coefficients_1d",
      [](const SchwarzParams& p) {
        const auto c = coefficients_1d(p);
        return py::make_tuple(c.a, c.b);
      },
      py::arg("params"));
  py::class_<CriterionValues>(m, "CriterionValues")
      .def_readonly("g_plus", &CriterionValues::g_plus)
      .def_readonly("g_minus", &CriterionValues::g_minus)
      .def_readonly("g", &CriterionValues::g)
      .def_readonly("F_plus_abs", &CriterionValues::F_plus_abs)
      .def_readonly("F_minus_abs", &CriterionValues::F_minus_abs)
      .def_readonly("G_abs", &CriterionValues::G_abs)
      .def_readonly("r1d_bound", &CriterionValues::r1d_bound);
  m.def(
      "criteria", [](const SchwarzParams& p, std::optional<double> k_tilde) { return criteria(p, k_tilde); }, py::arg("params"),
      py::arg("k_tilde") = py::none());
  m.def("r1d_bound", &r1d_bound, py::arg("a"), py::arg("b"));
  m.def("k_scaled_params", &k_scaled_params, py::arg("sigma0"), py::arg("L0"), py::arg("delta0"), py::arg("k"),
        py::arg("N") = 2);

  // iteration_lab
  m.def(
      "iteration_matrix", [](Complex a, Complex b, int N) { return to_numpy(build_iteration_matrix(a, b, N, Degenerate::allow).dense); },
      py::arg("a"), py::arg("b"), py::arg("N"));
  m.def(
      "iterate",
      [](Complex a, Complex b, int N, int steps, std::uint64_t seed) {
        const auto h = iterate(build_iteration_matrix(a, b, N, Degenerate::allow), InterfaceVector::random(N, seed), steps);
        return py::make_tuple(h.norms, h.estimated_rate);
      },
      py::arg("a"), py::arg("b"), py::arg("N"), py::arg("steps"), py::arg("seed") = 1);
  m.def(
      "spectral_radius_curve",
      [](const SchwarzParams& p, const std::vector<int>& Ns) {
        std::vector<py::tuple> out;
        for (const auto& pt : spectral_radius_curve(p, Ns)) out.push_back(py::make_tuple(pt.N, pt.rho, pt.bound));
        return out;
      },
      py::arg("params"), py::arg("N_list"));
  m.def("nilpotency_check", &nilpotency_check, py::arg("k"), py::arg("delta"), py::arg("L"), py::arg("N"));

  // schwarz_2d
  py::enum_<Equation>(m, "Equation").value("helmholtz", Equation::helmholtz).value("maxwell", Equation::maxwell);
  py::class_<ModeContext>(m, "ModeContext")
      .def_readonly("mode_index", &ModeContext::mode_index)
      .def_readonly("k_tilde", &ModeContext::k_tilde)
      .def_readonly("zeta", &ModeContext::zeta)
      .def_readonly("evanescent", &ModeContext::evanescent);
  py::class_<ModeResult>(m, "ModeResult")
      .def_readonly("mode", &ModeResult::mode)
      .def_readonly("factor", &ModeResult::r1d_mode)
      .def_property_readonly("a", [](const ModeResult& r) { return r.coefficients.a; })
      .def_property_readonly("b", [](const ModeResult& r) { return r.coefficients.b; })
      .def_readonly("criteria", &ModeResult::g_values);
  py::class_<ModeSweepReport>(m, "ModeSweepReport")
      .def_readonly("per_mode", &ModeSweepReport::per_mode)
      .def_readonly("sup_factor", &ModeSweepReport::sup_factor)
      .def_readonly("argmax_mode", &ModeSweepReport::argmax_mode)
      .def_readonly("truncation", &ModeSweepReport::truncation)
      .def_readonly("rationale", &ModeSweepReport::rationale)
      .def_readonly("complete", &ModeSweepReport::complete);
  m.def(
      "sup_convergence_factor",
      [](const SchwarzParams& p, double L_hat, Equation eq) { return sup_convergence_factor(p, L_hat, eq); }, py::arg("params"),
      py::arg("L_hat"), py::arg("equation") = Equation::helmholtz);
  m.def(
      "beta_bound",
      [](double sigma0, double L0, double delta0, double k, Equation eq) {
        const auto b = beta_bound(sigma0, L0, delta0, k, eq);
        return py::make_tuple(b.sup, b.argmax_beta);
      },
      py::arg("sigma0"), py::arg("L0"), py::arg("delta0"), py::arg("k"), py::arg("equation") = Equation::helmholtz);
  m.def(
      "maxwell_reduction_residual",
      [](double k, double sigma, double k_tilde, Complex alpha_j, Complex beta_j, double x) {
        MaxwellReductionSample s;
        s.k = k;
        s.sigma = sigma;
        s.k_tilde = k_tilde;
        s.alpha_j = alpha_j;
        s.beta_j = beta_j;
        return maxwell_reduction_residual(s, x);
      },
      py::arg("k"), py::arg("sigma"), py::arg("k_tilde"), py::arg("alpha_j"), py::arg("beta_j"), py::arg("x"));

  // discrete_solver
  py::enum_<BoundaryCase>(m, "BoundaryCase")
      .value("wave_guide", BoundaryCase::wave_guide)
      .value("free_space", BoundaryCase::free_space);
  m.def("pollution_grid_points", &pollution_grid_points, py::arg("k"), py::arg("c") = 3.0);
  m.def(
      "solve_oras",
      [](double k, double sigma, int N, BoundaryCase bc, int n_per_unit, double tol, int max_iter) {
        DiscreteProblem p;
        p.k = k;
        p.sigma = sigma;
        p.N_sub = N;
        p.bc = bc;
        p.n_per_unit = n_per_unit > 0 ? n_per_unit : pollution_grid_points(k);
        const auto rep = solve_oras(p, tol, max_iter);
        return py::dict(py::arg("iterations") = rep.iterations, py::arg("converged") = rep.converged,
                        py::arg("residuals") = rep.relative_residual_history, py::arg("solution") = to_numpy(rep.solution));
      },
      py::arg("k"), py::arg("sigma"), py::arg("N"), py::arg("case") = BoundaryCase::wave_guide, py::arg("n_per_unit") = 0,
      py::arg("tol") = 1e-6, py::arg("max_iter") = 400);
  m.def(
      "scan_counts",
      [](const std::vector<double>& ks, const std::vector<int>& Ns, double sigma, BoundaryCase bc) {
        return scan_counts(ks, Ns, sigma, bc).to_csv();
      },
      py::arg("k_list"), py::arg("N_list"), py::arg("sigma"), py::arg("case"), "Iteration-count table as CSV text.");

  // cli
  m.def("list_experiments", [] {
    std::vector<std::string> names;
    for (const auto& e : list_experiments()) names.push_back(e.name);
    return names;
  });
  m.def(
      "validate_config", [](const std::string& text) { return validate(ExperimentConfig::parse(text)); }, py::arg("text"));
  m.def(
      "run_config",
      [](const std::string& text, const std::filesystem::path& output_dir) {
        const auto r = run(ExperimentConfig::parse(text), output_dir);
        return py::dict(py::arg("exit_code") = r.exit_code, py::arg("files") = r.files,
                        py::arg("diagnostics") = r.diagnostics, py::arg("error") = r.error);
      },
      py::arg("text"), py::arg("output_dir"));
}
