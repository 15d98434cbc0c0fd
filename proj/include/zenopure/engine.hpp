#pragma once

#include <optional>
#include <vector>

#include "zenopure/linalg.hpp"

namespace zeno
{

/// The probe state |φ⟩_X confirmed at every measurement, together with the
/// X ⊗ A dimension split.
class ProbeSpec
{
public:
	/// Throws InvalidArgument unless ‖phi_x‖ = 1 within 1e-12 and dim_a ≥ 1.
	ProbeSpec(Vector phi_x, Index dim_a);

	[[nodiscard]] const Vector& phi() const { return phi_; }
	[[nodiscard]] Index dim_x() const { return phi_.size(); }
	[[nodiscard]] Index dim_a() const { return dim_a_; }
	[[nodiscard]] Index dim_total() const { return dim_x() * dim_a_; }

private:
	Vector phi_;
	Index dim_a_;
};

/// Hermitian, positive semidefinite, unit-trace operator.
class DensityMatrix
{
public:
	static constexpr double default_tolerance = 1e-10;

	/// Throws InvalidArgument when any invariant fails by more than `tol`.
	explicit DensityMatrix(Operator op, double tol = default_tolerance);

	static DensityMatrix pure(const Vector& psi, std::vector<Index> factors);

	[[nodiscard]] const Operator& op() const { return op_; }
	[[nodiscard]] const Matrix& matrix() const { return op_.matrix(); }
	[[nodiscard]] Index dim() const { return op_.dim(); }

private:
	Operator op_;
};

struct SpectralReport
{
	Eigensystem eigensystem;
	std::optional<Index> dominant_index;
	bool dominant_unique = false;
	double gap_ratio = 0.0;
	std::optional<Vector> asymptotic_state;
	std::optional<double> yield_coefficient;

	/// |λ₀|, or 0 when there is no dominant eigenvalue.
	[[nodiscard]] double dominant_magnitude() const;
};

struct ProtocolStep
{
	int n = 0;
	double success_probability = 0.0;
	DensityMatrix state_a;
	std::optional<double> fidelity;
};

struct ProtocolTrace
{
	std::vector<ProtocolStep> steps;
};

struct EfficiencyFlags
{
	bool unit_modulus = false;
	double gap_ratio = 0.0;
};

/// Dominant magnitudes closer than this are reported as degenerate.
inline constexpr double dominance_tolerance = 1e-9;
/// Post-selection probabilities below these floors throw ZeroProbability.
inline constexpr double conditioning_floor = 1e-14;
inline constexpr double underflow_floor = 1e-300;

/// 𝒪 = |φ⟩⟨φ|_X ⊗ 1_A
Operator build_projector(const ProbeSpec& probe);

/// ⟨φ|_X m |φ⟩_X as an operator on A.
Operator probe_compress(const Operator& m, const ProbeSpec& probe);

/// V_φ(τ) = ⟨φ|_X e^{-i h τ} |φ⟩_X.
Operator projected_evolution(const Operator& h_tot, double tau, const ProbeSpec& probe);

struct Conditioned
{
	DensityMatrix state_a;
	double probability;
};

/// State of A after the zeroth confirmation, and the probability of that
/// confirmation.
Conditioned condition_on_probe(const DensityMatrix& rho_tot, const ProbeSpec& probe);

/// Iterates the confirm/evolve cycle `n_steps` times.
///
/// Step n carries ρ_A(n) = V^n ρ_A V†^n / Tr(...) and the cumulative success
/// probability P(n), with P(0) the probability of the zeroth confirmation.
ProtocolTrace run_protocol(const DensityMatrix& rho_tot, const Operator& h_tot, double tau,
                           const ProbeSpec& probe, int n_steps, const std::optional<Vector>& target = std::nullopt);

SpectralReport spectral_report(const Operator& v, const std::optional<DensityMatrix>& rho_a = std::nullopt);

/// Throws NoDominantEigenvalue when the report has none.
EfficiencyFlags efficiency_check(const SpectralReport& report);

/// Large-N success probability p₀ |λ₀|^{2N} ⟨v₀|ρ_A|v₀⟩. Needs a report
/// built with ρ_A.
double predicted_success_probability(const SpectralReport& report, double p0, int n);

/// ⟨target|ρ|target⟩
double fidelity(const DensityMatrix& rho, const Vector& target);

} // namespace zeno
