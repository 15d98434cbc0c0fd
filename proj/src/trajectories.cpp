#include "zenopure/trajectories.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Eigenvalues>

#include "zenopure/errors.hpp"
#include "zenopure/parallel.hpp"

namespace zeno
{

namespace
{

constexpr std::int64_t block_size = 4096;

std::uint64_t splitmix64(std::uint64_t& state)
{
	std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
	z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
	z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
	return z ^ (z >> 31);
}

// SplitMix64 stream keyed by (seed, shot).
class ShotStream
{
public:
	ShotStream(std::uint64_t seed, std::uint64_t shot)
	{
		std::uint64_t s = seed;
		state_ = splitmix64(s) ^ shot;
		splitmix64(state_);
	}

	/// Uniform in [0, 1).
	double uniform() { return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53; }

private:
	std::uint64_t state_;
};

struct BlockResult
{
	std::vector<std::int64_t> survivors;
	Matrix final_sum;
};

// Born-rule confirmation of the probe; on success psi collapses onto
// |φ⟩ ⊗ χ and χ (normalized) is written to chi.
bool confirm(Vector& psi, Vector& chi, const ProbeSpec& probe, ShotStream& rng)
{
	const Index da = probe.dim_a();
	chi = Vector::Zero(da);
	for(Index x = 0; x < probe.dim_x(); ++x)
	{
		chi += std::conj(probe.phi()(x)) * psi.segment(x * da, da);
	}
	const double p = chi.squaredNorm();
	if(!(rng.uniform() < p))
	{
		return false;
	}
	chi /= std::sqrt(p);
	for(Index x = 0; x < probe.dim_x(); ++x)
	{
		psi.segment(x * da, da) = probe.phi()(x) * chi;
	}
	return true;
}

} // namespace

ShotSummary run_shots(const DensityMatrix& rho_tot, const Operator& h_tot, double tau, const ProbeSpec& probe,
                      const ShotConfig& cfg)
{
	if(cfg.shots < 1)
	{
		throw InvalidArgument("shots must be at least 1");
	}
	if(cfg.n_steps < 0)
	{
		throw InvalidArgument("n_steps must be non-negative");
	}
	if(rho_tot.dim() != probe.dim_total() || h_tot.dim() != probe.dim_total())
	{
		throw DimensionMismatch("state, Hamiltonian and probe split disagree on dimension " +
		                        std::to_string(probe.dim_total()));
	}

	const Matrix u = matrix_exponential(h_tot, tau).matrix();

	Eigen::SelfAdjointEigenSolver<Matrix> ensemble(0.5 * (rho_tot.matrix() + rho_tot.matrix().adjoint()));
	const Eigen::VectorXd weights = ensemble.eigenvalues().cwiseMax(0.0);
	std::vector<double> cumulative(weights.size());
	double total = 0.0;
	for(Index k = 0; k < weights.size(); ++k)
	{
		total += weights(k);
		cumulative[k] = total;
	}

	const std::size_t steps = static_cast<std::size_t>(cfg.n_steps) + 1;
	const Index da = probe.dim_a();
	const auto blocks = static_cast<std::size_t>((cfg.shots + block_size - 1) / block_size);
	std::vector<BlockResult> results(blocks);

	detail::parallel_for(blocks, [&](std::size_t b) {
		BlockResult r{std::vector<std::int64_t>(steps, 0), Matrix::Zero(da, da)};
		const std::int64_t first = static_cast<std::int64_t>(b) * block_size;
		const std::int64_t last = std::min(cfg.shots, first + block_size);
		Vector psi;
		Vector chi;
		for(std::int64_t shot = first; shot < last; ++shot)
		{
			ShotStream rng(cfg.seed, static_cast<std::uint64_t>(shot));
			const double pick = rng.uniform() * total;
			const auto k = std::min<std::size_t>(
				std::upper_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin(),
				cumulative.size() - 1);
			psi = ensemble.eigenvectors().col(static_cast<Index>(k));

			bool alive = confirm(psi, chi, probe, rng);
			for(std::size_t n = 0; alive; ++n)
			{
				++r.survivors[n];
				if(n + 1 == steps)
				{
					r.final_sum += outer(chi);
					break;
				}
				psi = u * psi;
				alive = confirm(psi, chi, probe, rng);
			}
		}
		results[b] = std::move(r);
	});

	ShotSummary summary;
	summary.successes_at_step.assign(steps, 0);
	Matrix final_sum = Matrix::Zero(da, da);
	for(const auto& r : results)
	{
		for(std::size_t n = 0; n < steps; ++n)
		{
			summary.successes_at_step[n] += r.survivors[n];
		}
		final_sum += r.final_sum;
	}
	summary.frequency.reserve(steps);
	for(const auto s : summary.successes_at_step)
	{
		summary.frequency.push_back(static_cast<double>(s) / static_cast<double>(cfg.shots));
	}
	if(const auto alive = summary.successes_at_step.back(); alive > 0)
	{
		std::vector<Index> factors{da};
		const auto& f = h_tot.factors();
		if(f.size() > 1 && f.front() == probe.dim_x())
		{
			factors.assign(f.begin() + 1, f.end());
		}
		Matrix mean = final_sum / static_cast<double>(alive);
		mean = 0.5 * (mean + mean.adjoint());
		mean /= mean.trace().real();
		summary.final_state_estimate = DensityMatrix(Operator(std::move(mean), std::move(factors)), 1e-9);
	}
	return summary;
}

} // namespace zeno
