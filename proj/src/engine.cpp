#include "zenopure/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "zenopure/errors.hpp"

namespace zeno
{

namespace
{

void check_target(const Vector& target, Index dim)
{
	if(target.size() != dim)
	{
		throw DimensionMismatch("target has dimension " + std::to_string(target.size()) + ", state has " +
		                        std::to_string(dim));
	}
	if(std::abs(target.norm() - 1.0) > 1e-10)
	{
		throw InvalidArgument("target state is not normalized");
	}
}

// Factors of A inherited from h when its leading factor is X.
std::vector<Index> target_factors(const Operator& h, const ProbeSpec& probe)
{
	const auto& f = h.factors();
	if(f.size() > 1 && f.front() == probe.dim_x())
	{
		return {f.begin() + 1, f.end()};
	}
	return {probe.dim_a()};
}

Matrix hermitian_part(const Matrix& m)
{
	return 0.5 * (m + m.adjoint());
}

} // namespace

ProbeSpec::ProbeSpec(Vector phi_x, Index dim_a)
	: phi_(std::move(phi_x))
	, dim_a_(dim_a)
{
	if(phi_.size() < 1 || dim_a_ < 1)
	{
		throw InvalidArgument("probe dimensions must be positive");
	}
	if(!phi_.allFinite() || std::abs(phi_.norm() - 1.0) > 1e-12)
	{
		throw InvalidArgument("probe state must have unit norm");
	}
}

DensityMatrix::DensityMatrix(Operator op, double tol)
	: op_(std::move(op))
{
	if(op_.hermiticity_defect() > tol)
	{
		throw InvalidArgument("density matrix is not Hermitian");
	}
	const double trace = op_.matrix().trace().real();
	if(std::abs(trace - 1.0) > tol)
	{
		throw InvalidArgument("density matrix trace is " + std::to_string(trace) + ", expected 1");
	}
	Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(op_.matrix()), Eigen::EigenvaluesOnly);
	if(es.eigenvalues().minCoeff() < -tol)
	{
		throw InvalidArgument("density matrix has a negative eigenvalue");
	}
}

DensityMatrix DensityMatrix::pure(const Vector& psi, std::vector<Index> factors)
{
	return DensityMatrix(Operator(outer(psi.normalized()), std::move(factors)));
}

double SpectralReport::dominant_magnitude() const
{
	return dominant_index ? std::abs(eigensystem.eigenvalues(*dominant_index)) : 0.0;
}

Operator build_projector(const ProbeSpec& probe)
{
	const Operator px(outer(probe.phi()), {probe.dim_x()});
	return kron(px, Operator::identity({probe.dim_a()}));
}

Operator probe_compress(const Operator& m, const ProbeSpec& probe)
{
	if(m.dim() != probe.dim_total())
	{
		throw DimensionMismatch("operator dimension " + std::to_string(m.dim()) + " does not match probe split " +
		                        std::to_string(probe.dim_x()) + "x" + std::to_string(probe.dim_a()));
	}
	const Index da = probe.dim_a();
	const Vector& phi = probe.phi();
	Matrix out = Matrix::Zero(da, da);
	for(Index x = 0; x < probe.dim_x(); ++x)
	{
		for(Index y = 0; y < probe.dim_x(); ++y)
		{
			out += std::conj(phi(x)) * phi(y) * m.matrix().block(x * da, y * da, da, da);
		}
	}
	return Operator(std::move(out), target_factors(m, probe));
}

Operator projected_evolution(const Operator& h_tot, double tau, const ProbeSpec& probe)
{
	if(h_tot.dim() != probe.dim_total())
	{
		throw DimensionMismatch("Hamiltonian dimension " + std::to_string(h_tot.dim()) +
		                        " does not match probe split " + std::to_string(probe.dim_x()) + "x" +
		                        std::to_string(probe.dim_a()));
	}
	if(!(tau >= 0.0))
	{
		throw InvalidArgument("tau must be non-negative");
	}
	return probe_compress(matrix_exponential(h_tot, tau), probe);
}

Conditioned condition_on_probe(const DensityMatrix& rho_tot, const ProbeSpec& probe)
{
	const Operator reduced = probe_compress(rho_tot.op(), probe);
	const double p0 = reduced.matrix().trace().real();
	if(!(p0 >= conditioning_floor))
	{
		throw ZeroProbability("zeroth confirmation has probability " + std::to_string(p0) +
		                      "; the probe is orthogonal to the initial state");
	}
	return {DensityMatrix(Operator(hermitian_part(reduced.matrix()) / p0, reduced.factors()), 1e-9), p0};
}

ProtocolTrace run_protocol(const DensityMatrix& rho_tot, const Operator& h_tot, double tau,
                           const ProbeSpec& probe, int n_steps, const std::optional<Vector>& target)
{
	if(n_steps < 0)
	{
		throw InvalidArgument("n_steps must be non-negative");
	}
	if(rho_tot.dim() != probe.dim_total())
	{
		throw DimensionMismatch("initial state dimension does not match probe split");
	}
	if(target)
	{
		check_target(*target, probe.dim_a());
	}

	const Operator v = projected_evolution(h_tot, tau, probe);
	auto [state, p] = condition_on_probe(rho_tot, probe);
	const auto factors = state.op().factors();

	ProtocolTrace trace;
	trace.steps.reserve(static_cast<std::size_t>(n_steps) + 1);
	auto record = [&](int n, const DensityMatrix& s) {
		std::optional<double> f;
		if(target)
		{
			f = fidelity(s, *target);
		}
		trace.steps.push_back({n, p, s, f});
	};
	record(0, state);

	Matrix current = state.matrix();
	for(int n = 1; n <= n_steps; ++n)
	{
		current = v.matrix() * current * v.matrix().adjoint();
		const double survival = current.trace().real();
		p *= survival;
		if(!(p >= underflow_floor) || !(survival > 0.0))
		{
			throw ZeroProbability("success probability underflowed at step " + std::to_string(n));
		}
		current = hermitian_part(current) / survival;
		record(n, DensityMatrix(Operator(current, factors), 1e-9));
	}
	return trace;
}

SpectralReport spectral_report(const Operator& v, const std::optional<DensityMatrix>& rho_a)
{
	SpectralReport report;
	report.eigensystem = eig_general(v);
	const auto& lambda = report.eigensystem.eigenvalues;
	const double top = std::abs(lambda(0));

	if(top > conditioning_floor)
	{
		report.dominant_index = 0;
	}
	report.gap_ratio = lambda.size() > 1 ? (top > conditioning_floor ? std::abs(lambda(1)) / top : 1.0) : 0.0;
	report.dominant_unique =
		report.dominant_index && (lambda.size() == 1 || top - std::abs(lambda(1)) > dominance_tolerance);

	if(report.dominant_unique)
	{
		report.asymptotic_state = report.eigensystem.right_vector(0);
	}
	if(rho_a && report.dominant_index)
	{
		if(rho_a->dim() != v.dim())
		{
			throw DimensionMismatch("rho_A dimension does not match V");
		}
		const Vector v0 = report.eigensystem.left_ket(0);
		report.yield_coefficient = braket(v0, rho_a->matrix() * v0).real();
	}
	return report;
}

EfficiencyFlags efficiency_check(const SpectralReport& report)
{
	if(!report.dominant_index)
	{
		throw NoDominantEigenvalue("spectrum has no nonzero eigenvalue");
	}
	return {std::abs(report.dominant_magnitude() - 1.0) <= dominance_tolerance, report.gap_ratio};
}

double predicted_success_probability(const SpectralReport& report, double p0, int n)
{
	if(!report.yield_coefficient)
	{
		throw InvalidArgument("spectral report was built without rho_A");
	}
	return p0 * std::pow(report.dominant_magnitude(), 2.0 * n) * *report.yield_coefficient;
}

double fidelity(const DensityMatrix& rho, const Vector& target)
{
	if(target.size() != rho.dim())
	{
		throw DimensionMismatch("target has dimension " + std::to_string(target.size()) + ", state has " +
		                        std::to_string(rho.dim()));
	}
	return braket(target, rho.matrix() * target).real();
}

} // namespace zeno
