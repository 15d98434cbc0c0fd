#pragma once

#include "zenopure/engine.hpp"
#include "zenopure/linalg.hpp"

namespace zeno::model3q
{

/// Probe qubit X coupled to qubits A and B by exchange.
///
/// Basis of each qubit is (↑, ↓) with σ₃|↑⟩ = +|↑⟩; the total space is
/// ordered X ⊗ A ⊗ B and the A ⊗ B block as (↑↑, ↑↓, ↓↑, ↓↓). The probe
/// state is α|↑⟩ + β|↓⟩.
struct ModelParams
{
	double omega = 1.0;
	double g = 0.25;
	double tau = 0.0;
	cx_double alpha{1.0, 0.0};
	cx_double beta{0.0, 0.0};

	/// Throws InvalidArgument unless |α|² + |β|² = 1 within 1e-12 and every
	/// field is finite.
	void validate() const;

	[[nodiscard]] ProbeSpec probe() const;
};

/// Ω = 1, g = Ω/4, Ωτ = 2π, probe |→⟩.
ModelParams paper_params();

struct BellBasis
{
	Vector psi_minus;
	Vector psi_plus;
	Vector up_up;
	Vector down_down;
};

const BellBasis& bell_basis();

Operator build_hamiltonian(const ModelParams& p);

/// Closed-form V_φ(τ) on A ⊗ B.
Operator analytic_v_phi(const ModelParams& p);

/// Singlet eigenvalue e^{-iΩτ}(|β|² + |α|² e^{-iΩτ}); valid at every parameter point.
cx_double lambda_psi_minus(const ModelParams& p);

struct AnalyticEigenvalues
{
	cx_double psi_minus;
	cx_double phi_minus;
	cx_double plus;
	cx_double minus;
};

/// All four eigenvalues in closed form, for α = β = 1/√2 and |Ω|τ = 2nπ.
/// The square root in λ± is the principal complex root.
///
/// Throws BranchUnavailable elsewhere.
AnalyticEigenvalues analytic_eigenvalues(const ModelParams& p);

struct Conditions
{
	bool tuning_ok = false;
	bool probe_ok = false;
	bool coupling_ok = false;

	[[nodiscard]] bool all() const { return tuning_ok && probe_ok && coupling_ok; }
};

Conditions check_conditions(const ModelParams& p);

/// ϱ_tot = |→⟩⟨→|_X ⊗ |↑⟩⟨↑|_A ⊗ |↓⟩⟨↓|_B
DensityMatrix paper_product_state();
/// ϱ_tot = |→⟩⟨→|_X ⊗ (|↑↓⟩⟨↑↓| + |↓↑⟩⟨↓↑|)/2
DensityMatrix paper_mixed_state();

/// Swap of qubits A and B on the 4-dimensional A ⊗ B space.
Operator swap_ab();

} // namespace zeno::model3q
