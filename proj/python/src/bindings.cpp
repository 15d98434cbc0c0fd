#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zenopure/engine.hpp"
#include "zenopure/errors.hpp"
#include "zenopure/linalg.hpp"
#include "zenopure/model3q.hpp"
#include "zenopure/trajectories.hpp"

namespace py = pybind11;
using namespace zeno;

namespace
{

Operator make_operator(const Matrix& m, std::optional<std::vector<Index>> factors)
{
	return factors ? Operator(m, std::move(*factors)) : Operator(m);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
	m.doc() = "Purification by repeated probe confirmation";

	auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
	auto invalid = py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
	py::register_exception<DimensionMismatch>(m, "DimensionMismatch", invalid.ptr());
	py::register_exception<NonHermitianInput>(m, "NonHermitianInput", invalid.ptr());
	py::register_exception<BranchUnavailable>(m, "BranchUnavailable", invalid.ptr());
	auto numeric = py::register_exception<NumericError>(m, "NumericError", error.ptr());
	py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", numeric.ptr());
	py::register_exception<ZeroProbability>(m, "ZeroProbability", numeric.ptr());
	py::register_exception<NoDominantEigenvalue>(m, "NoDominantEigenvalue", numeric.ptr());

	py::class_<Operator>(m, "Operator")
		.def(py::init(&make_operator), py::arg("matrix"), py::arg("factors") = py::none())
		.def_static("identity", &Operator::identity, py::arg("factors"))
		.def_static("zero", &Operator::zero, py::arg("factors"))
		.def_property_readonly("matrix", [](const Operator& o) { return o.matrix(); })
		.def_property_readonly("factors", &Operator::factors)
		.def_property_readonly("dim", &Operator::dim)
		.def("adjoint", &Operator::adjoint)
		.def("hermiticity_defect", &Operator::hermiticity_defect)
		.def("__matmul__", [](const Operator& a, const Operator& b) { return a * b; })
		.def("__repr__", [](const Operator& o) { return "<Operator dim=" + std::to_string(o.dim()) + ">"; });

	m.def("kron", &kron, py::arg("a"), py::arg("b"));
	m.def("matrix_exponential", &matrix_exponential, py::arg("h"), py::arg("t"));

	py::class_<Eigensystem>(m, "Eigensystem")
		.def_readonly("eigenvalues", &Eigensystem::eigenvalues)
		.def_readonly("right", &Eigensystem::right)
		.def_readonly("left", &Eigensystem::left)
		.def_readonly("diagonalizable", &Eigensystem::diagonalizable);
	m.def("eig_general", &eig_general, py::arg("v"));

	py::class_<ProbeSpec>(m, "ProbeSpec")
		.def(py::init<Vector, Index>(), py::arg("phi"), py::arg("dim_a"))
		.def_property_readonly("phi", [](const ProbeSpec& p) { return p.phi(); })
		.def_property_readonly("dim_x", &ProbeSpec::dim_x)
		.def_property_readonly("dim_a", &ProbeSpec::dim_a);

	py::class_<DensityMatrix>(m, "DensityMatrix")
		.def(py::init<Operator, double>(), py::arg("op"), py::arg("tol") = DensityMatrix::default_tolerance)
		.def(py::init([](const Matrix& mat, std::optional<std::vector<Index>> factors) {
			     return DensityMatrix(make_operator(mat, std::move(factors)));
		     }),
		     py::arg("matrix"), py::arg("factors") = py::none())
		.def_static("pure", &DensityMatrix::pure, py::arg("psi"), py::arg("factors"))
		.def_property_readonly("op", &DensityMatrix::op)
		.def_property_readonly("matrix", [](const DensityMatrix& d) { return d.matrix(); })
		.def_property_readonly("dim", &DensityMatrix::dim);

	py::class_<SpectralReport>(m, "SpectralReport")
		.def_readonly("eigensystem", &SpectralReport::eigensystem)
		.def_readonly("dominant_index", &SpectralReport::dominant_index)
		.def_readonly("dominant_unique", &SpectralReport::dominant_unique)
		.def_readonly("gap_ratio", &SpectralReport::gap_ratio)
		.def_readonly("asymptotic_state", &SpectralReport::asymptotic_state)
		.def_readonly("yield_coefficient", &SpectralReport::yield_coefficient)
		.def_property_readonly("dominant_magnitude", &SpectralReport::dominant_magnitude);

	py::class_<ProtocolStep>(m, "ProtocolStep")
		.def_readonly("n", &ProtocolStep::n)
		.def_readonly("success_probability", &ProtocolStep::success_probability)
		.def_readonly("state_a", &ProtocolStep::state_a)
		.def_readonly("fidelity", &ProtocolStep::fidelity);

	py::class_<EfficiencyFlags>(m, "EfficiencyFlags")
		.def_readonly("unit_modulus", &EfficiencyFlags::unit_modulus)
		.def_readonly("gap_ratio", &EfficiencyFlags::gap_ratio);

	py::class_<Conditioned>(m, "Conditioned")
		.def_readonly("state_a", &Conditioned::state_a)
		.def_readonly("probability", &Conditioned::probability);

	m.def("build_projector", &build_projector, py::arg("probe"));
	m.def("projected_evolution", &projected_evolution, py::arg("h_tot"), py::arg("tau"), py::arg("probe"));
	m.def("condition_on_probe", &condition_on_probe, py::arg("rho_tot"), py::arg("probe"));
	m.def(
		"run_protocol",
		[](const DensityMatrix& rho, const Operator& h, double tau, const ProbeSpec& probe, int n_steps,
	       std::optional<Vector> target) { return run_protocol(rho, h, tau, probe, n_steps, target).steps; },
		py::arg("rho_tot"), py::arg("h_tot"), py::arg("tau"), py::arg("probe"), py::arg("n_steps"),
		py::arg("target") = py::none());
	m.def("spectral_report", &spectral_report, py::arg("v"), py::arg("rho_a") = py::none());
	m.def("efficiency_check", &efficiency_check, py::arg("report"));
	m.def("predicted_success_probability", &predicted_success_probability, py::arg("report"), py::arg("p0"),
	      py::arg("n"));
	m.def("fidelity", &fidelity, py::arg("rho"), py::arg("target"));

	py::class_<ShotSummary>(m, "ShotSummary")
		.def_readonly("successes_at_step", &ShotSummary::successes_at_step)
		.def_readonly("frequency", &ShotSummary::frequency)
		.def_readonly("final_state_estimate", &ShotSummary::final_state_estimate);
	m.def(
		"run_shots",
		[](const DensityMatrix& rho, const Operator& h, double tau, const ProbeSpec& probe, std::int64_t shots,
	       std::uint64_t seed, int n_steps) {
			py::gil_scoped_release release;
			return run_shots(rho, h, tau, probe, {shots, seed, n_steps});
		},
		py::arg("rho_tot"), py::arg("h_tot"), py::arg("tau"), py::arg("probe"), py::arg("shots"), py::arg("seed"),
		py::arg("n_steps"));

	auto m3 = m.def_submodule("model3q", "Probe qubit coupled to two qubits by exchange");
	py::class_<model3q::ModelParams>(m3, "ModelParams")
		.def(py::init([](double omega, double g, double tau, cx_double alpha, cx_double beta) {
			     return model3q::ModelParams{omega, g, tau, alpha, beta};
		     }),
		     py::arg("omega") = 1.0, py::arg("g") = 0.25, py::arg("tau") = 0.0, py::arg("alpha") = cx_double(1.0),
		     py::arg("beta") = cx_double(0.0))
		.def_readwrite("omega", &model3q::ModelParams::omega)
		.def_readwrite("g", &model3q::ModelParams::g)
		.def_readwrite("tau", &model3q::ModelParams::tau)
		.def_readwrite("alpha", &model3q::ModelParams::alpha)
		.def_readwrite("beta", &model3q::ModelParams::beta)
		.def("validate", &model3q::ModelParams::validate)
		.def("probe", &model3q::ModelParams::probe);

	py::class_<model3q::AnalyticEigenvalues>(m3, "AnalyticEigenvalues")
		.def_readonly("psi_minus", &model3q::AnalyticEigenvalues::psi_minus)
		.def_readonly("phi_minus", &model3q::AnalyticEigenvalues::phi_minus)
		.def_readonly("plus", &model3q::AnalyticEigenvalues::plus)
		.def_readonly("minus", &model3q::AnalyticEigenvalues::minus);

	py::class_<model3q::Conditions>(m3, "Conditions")
		.def_readonly("tuning_ok", &model3q::Conditions::tuning_ok)
		.def_readonly("probe_ok", &model3q::Conditions::probe_ok)
		.def_readonly("coupling_ok", &model3q::Conditions::coupling_ok)
		.def("all", &model3q::Conditions::all);

	m3.def("paper_params", &model3q::paper_params);
	m3.def("bell_psi_minus", [] { return model3q::bell_basis().psi_minus; });
	m3.def("build_hamiltonian", &model3q::build_hamiltonian, py::arg("params"));
	m3.def("analytic_v_phi", &model3q::analytic_v_phi, py::arg("params"));
	m3.def("lambda_psi_minus", &model3q::lambda_psi_minus, py::arg("params"));
	m3.def("analytic_eigenvalues", &model3q::analytic_eigenvalues, py::arg("params"));
	m3.def("check_conditions", &model3q::check_conditions, py::arg("params"));
	m3.def("paper_product_state", &model3q::paper_product_state);
	m3.def("paper_mixed_state", &model3q::paper_mixed_state);
	m3.def("swap_ab", &model3q::swap_ab);
}
