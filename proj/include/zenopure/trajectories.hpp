#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "zenopure/engine.hpp"

namespace zeno
{

struct ShotConfig
{
	std::int64_t shots = 1;
	std::uint64_t seed = 0;
	int n_steps = 0;
};

struct ShotSummary
{
	/// Survivors after the zeroth confirmation and each of the n_steps cycles.
	std::vector<std::int64_t> successes_at_step;
	std::vector<double> frequency;
	/// Mean conditional state of A over trajectories alive at the last step;
	/// absent when none survive.
	std::optional<DensityMatrix> final_state_estimate;
};

/// Monte Carlo unravelling of the measurement protocol.
///
/// Each shot starts from an eigenvector of ρ_tot drawn with its eigenvalue
/// as weight, then alternates e^{-iHτ} with the two-outcome measurement
/// {𝒪, 1 - 𝒪}. Shot k draws from its own stream keyed by (seed, k), so the
/// result does not depend on the number of worker threads.
ShotSummary run_shots(const DensityMatrix& rho_tot, const Operator& h_tot, double tau, const ProbeSpec& probe,
                      const ShotConfig& cfg);

} // namespace zeno
