#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "zenopure/errors.hpp"
#include "zenopure/model3q.hpp"

using namespace zeno;
using namespace zeno::model3q;

namespace
{

const double pi = std::numbers::pi;

ModelParams random_params(std::mt19937_64& rng)
{
	std::uniform_real_distribution<double> u(-2.0, 2.0);
	std::uniform_real_distribution<double> pos(0.0, 8.0);
	ModelParams p;
	p.omega = u(rng);
	p.g = u(rng);
	p.tau = pos(rng);
	const Vector probe = oracle::random_state(2, rng);
	p.alpha = probe(0);
	p.beta = probe(1);
	return p;
}

Matrix excitation_number()
{
	Matrix n = Matrix::Zero(8, 8);
	for(Index i = 0; i < 8; ++i)
	{
		// bit set = ↓, so count the zero bits
		n(i, i) = 3 - __builtin_popcount(static_cast<unsigned>(i));
	}
	return n;
}

// Exchange of A and B on the full X ⊗ A ⊗ B space.
Matrix swap_on_full()
{
	Matrix s = Matrix::Zero(8, 8);
	for(Index x = 0; x < 2; ++x)
		for(Index a = 0; a < 2; ++a)
			for(Index b = 0; b < 2; ++b)
				s(x * 4 + b * 2 + a, x * 4 + a * 2 + b) = 1.0;
	return s;
}

} // namespace

TEST_CASE("Bell basis is orthonormal")
{
	const auto& b = bell_basis();
	const std::vector<Vector> all{b.psi_minus, b.psi_plus, b.up_up, b.down_down};
	for(std::size_t i = 0; i < all.size(); ++i)
		for(std::size_t j = 0; j < all.size(); ++j)
			CHECK(std::abs(braket(all[i], all[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("uncoupled Hamiltonian counts up spins")
{
	ModelParams p;
	p.g = 0.0;
	const auto h = build_hamiltonian(p);
	CHECK(h.factors() == std::vector<Index>{2, 2, 2});
	CHECK(oracle::max_abs(h.matrix() - excitation_number()) < 1e-15);
}

TEST_CASE("Hamiltonian conserves excitations and is A-B symmetric")
{
	ModelParams p;
	p.omega = 1.0;
	p.g = 0.25;
	const Matrix h = build_hamiltonian(p).matrix();
	const Matrix n = excitation_number();
	CHECK(oracle::max_abs(h * n - n * h) < 1e-12);
	const Matrix s = swap_on_full();
	CHECK(oracle::max_abs(s * h * s - h) < 1e-15);
	CHECK(build_hamiltonian(p).hermiticity_defect() == 0.0);
}

TEST_CASE("closed-form V matches the numeric projection")
{
	std::mt19937_64 rng(23);
	for(int trial = 0; trial < 50; ++trial)
	{
		const auto p = random_params(rng);
		const auto numeric = projected_evolution(build_hamiltonian(p), p.tau, p.probe());
		CHECK(oracle::max_abs(numeric.matrix() - analytic_v_phi(p).matrix()) < 1e-10);
	}
}

TEST_CASE("closed-form V special cases")
{
	ModelParams p;
	p.omega = 1.3;
	p.g = 0.0;
	p.tau = 0.9;
	p.alpha = 1.0;
	p.beta = 0.0;
	const Matrix v = analytic_v_phi(p).matrix();
	Matrix off = v;
	off.diagonal().setZero();
	CHECK(oracle::max_abs(off) < 1e-15);
	const auto& psi = bell_basis().psi_minus;
	CHECK(std::abs(braket(psi, v * psi) - std::exp(cx_double(0, -2.0 * p.omega * p.tau))) < 1e-14);

	auto q = paper_params();
	q.tau = 0.0;
	CHECK(oracle::max_abs(analytic_v_phi(q).matrix() - Matrix::Identity(4, 4)) < 1e-15);
}

TEST_CASE("V has the singlet as eigenvector and commutes with the A-B swap")
{
	std::mt19937_64 rng(29);
	const auto& psi = bell_basis().psi_minus;
	const Matrix s = swap_ab().matrix();
	for(int trial = 0; trial < 30; ++trial)
	{
		const auto p = random_params(rng);
		const Matrix v = projected_evolution(build_hamiltonian(p), p.tau, p.probe()).matrix();
		CHECK((v * psi - lambda_psi_minus(p) * psi).norm() < 1e-10);
		CHECK(oracle::max_abs(v * s - s * v) < 1e-12);
	}
}

TEST_CASE("closed-form eigenvalues at the reference point")
{
	const auto ev = analytic_eigenvalues(paper_params());
	CHECK(std::abs(ev.psi_minus) == doctest::Approx(1.0).epsilon(1e-12));
	CHECK(std::abs(ev.phi_minus) == doctest::Approx(0.197).epsilon(1e-3));
	CHECK(std::abs(ev.plus) == doctest::Approx(0.444).epsilon(1e-3));
	CHECK(std::abs(ev.minus) == doctest::Approx(0.444).epsilon(1e-3));
}

TEST_CASE("closed-form eigenvalues at the coupling resonance")
{
	auto p = paper_params();
	p.g = std::numbers::sqrt2 * (pi / 2.0) / p.tau;
	const auto ev = analytic_eigenvalues(p);
	CHECK(std::abs(ev.phi_minus) < 1e-12);
	CHECK(std::abs(ev.plus + 1.0) < 1e-12);
	CHECK(std::abs(ev.minus) < 1e-12);
	CHECK(std::abs(ev.plus) == doctest::Approx(std::abs(ev.psi_minus)));
}

TEST_CASE("closed-form eigenvalues in the decoupled limit")
{
	auto p = paper_params();
	p.g = 0.0;
	const auto ev = analytic_eigenvalues(p);
	for(auto l : {ev.psi_minus, ev.phi_minus, ev.plus, ev.minus})
	{
		CHECK(std::abs(l) == doctest::Approx(1.0).epsilon(1e-12));
	}
}

TEST_CASE("closed-form eigenvalues need the tuned symmetric probe")
{
	auto p = paper_params();
	p.tau = 5.0;
	CHECK_THROWS_AS(analytic_eigenvalues(p), BranchUnavailable);
	p = paper_params();
	p.alpha = 0.6;
	p.beta = 0.8;
	CHECK_THROWS_AS(analytic_eigenvalues(p), BranchUnavailable);
	CHECK_NOTHROW(lambda_psi_minus(p));
}

TEST_CASE("numeric spectrum agrees with the closed form on the tuned branch")
{
	std::mt19937_64 rng(31);
	std::uniform_real_distribution<double> g(-1.0, 1.0);
	std::uniform_int_distribution<int> n(0, 3);
	for(int trial = 0; trial < 40; ++trial)
	{
		auto p = paper_params();
		p.omega = trial % 2 == 0 ? 1.0 : -0.7;
		p.tau = 2.0 * pi * n(rng) / std::abs(p.omega);
		p.g = g(rng);
		const auto ev = analytic_eigenvalues(p);
		std::vector<double> expected{std::abs(ev.psi_minus), std::abs(ev.phi_minus), std::abs(ev.plus),
		                             std::abs(ev.minus)};
		std::sort(expected.rbegin(), expected.rend());
		const auto es = eig_general(projected_evolution(build_hamiltonian(p), p.tau, p.probe()));
		for(Index k = 0; k < 4; ++k)
		{
			CHECK(std::abs(std::abs(es.eigenvalues(k)) - expected[k]) < 1e-8);
		}
	}
}

TEST_CASE("principal branch of the closed-form root matches the numeric eigenvalues")
{
	const auto p = paper_params();
	const auto ev = analytic_eigenvalues(p);
	const auto es = eig_general(projected_evolution(build_hamiltonian(p), p.tau, p.probe()));
	for(auto l : {ev.psi_minus, ev.phi_minus, ev.plus, ev.minus})
	{
		double nearest = 1.0;
		for(Index k = 0; k < 4; ++k)
		{
			nearest = std::min(nearest, std::abs(es.eigenvalues(k) - l));
		}
		CHECK(nearest < 1e-8);
	}
}

TEST_CASE("check_conditions")
{
	const auto ok = check_conditions(paper_params());
	CHECK(ok.tuning_ok);
	CHECK(ok.probe_ok);
	CHECK(ok.coupling_ok);
	CHECK(ok.all());

	auto p = paper_params();
	p.alpha = 1.0;
	p.beta = 0.0;
	CHECK_FALSE(check_conditions(p).probe_ok);

	p = paper_params();
	p.g = std::numbers::sqrt2 * (pi / 2.0) / p.tau;
	CHECK_FALSE(check_conditions(p).coupling_ok);

	p = paper_params();
	p.tau = 0.0;
	CHECK_FALSE(check_conditions(p).tuning_ok);
	p.tau = pi;
	CHECK_FALSE(check_conditions(p).tuning_ok);
	p.tau = 4.0 * pi;
	CHECK(check_conditions(p).tuning_ok);
}

TEST_CASE("satisfied conditions single out the singlet")
{
	std::mt19937_64 rng(37);
	std::uniform_real_distribution<double> g(-1.0, 1.0);
	std::uniform_real_distribution<double> angle(0.1, pi / 2.0 - 0.1);
	std::uniform_int_distribution<int> n(1, 3);
	int tested = 0;
	for(int trial = 0; trial < 60; ++trial)
	{
		auto p = paper_params();
		p.tau = 2.0 * pi * n(rng);
		p.g = g(rng);
		if(trial % 2 == 1)
		{
			const double theta = angle(rng);
			p.alpha = std::cos(theta);
			p.beta = std::sin(theta);
		}
		if(!check_conditions(p).all())
		{
			continue;
		}
		++tested;
		const auto report = spectral_report(projected_evolution(build_hamiltonian(p), p.tau, p.probe()));
		CHECK(report.dominant_unique);
		REQUIRE(report.asymptotic_state);
		CHECK(std::norm(braket(bell_basis().psi_minus, *report.asymptotic_state)) >= 1.0 - 1e-9);
	}
	CHECK(tested > 40);
}

TEST_CASE("ModelParams rejects an unnormalized probe")
{
	ModelParams p;
	p.alpha = 1.0;
	p.beta = 1.0;
	CHECK_THROWS_AS(p.validate(), InvalidArgument);
	CHECK_THROWS_AS(analytic_v_phi(p), InvalidArgument);
}

TEST_CASE("reference initial states")
{
	const auto product = paper_product_state();
	const auto mixed = paper_mixed_state();
	CHECK(product.op().factors() == std::vector<Index>{2, 2, 2});
	CHECK(mixed.op().factors() == std::vector<Index>{2, 2, 2});
	const auto cp = condition_on_probe(product, paper_params().probe());
	const auto cm = condition_on_probe(mixed, paper_params().probe());
	CHECK(cp.probability == doctest::Approx(1.0));
	CHECK(cm.probability == doctest::Approx(1.0));
	CHECK(std::abs(cp.state_a.matrix()(1, 1) - 1.0) < 1e-14);
	CHECK(std::abs(cm.state_a.matrix()(1, 1) - 0.5) < 1e-14);
	CHECK(std::abs(cm.state_a.matrix()(2, 2) - 0.5) < 1e-14);
}
