#include "zenopure/model3q.hpp"

#include <cmath>
#include <numbers>

#include "zenopure/errors.hpp"

namespace zeno::model3q
{

namespace
{

constexpr cx_double I{0.0, 1.0};
const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

Operator qubit(double a, double b, double c, double d)
{
	Matrix m(2, 2);
	m << a, b, c, d;
	return Operator(std::move(m));
}

Operator on_x(const Operator& op)
{
	const auto id = Operator::identity({2});
	return kron(kron(op, id), id);
}

Operator on_a(const Operator& op)
{
	const auto id = Operator::identity({2});
	return kron(kron(id, op), id);
}

Operator on_b(const Operator& op)
{
	const auto id = Operator::identity({2});
	return kron(kron(id, id), op);
}

Vector basis4(cx_double uu, cx_double ud, cx_double du, cx_double dd)
{
	Vector v(4);
	v << uu, ud, du, dd;
	return v;
}

// Distance of x from the nearest integer multiple of period.
double distance_to_multiple(double x, double period)
{
	const double r = std::fmod(std::abs(x), period);
	return std::min(r, period - r);
}

} // namespace

void ModelParams::validate() const
{
	if(!std::isfinite(omega) || !std::isfinite(g) || !std::isfinite(tau) || !std::isfinite(alpha.real()) ||
	   !std::isfinite(alpha.imag()) || !std::isfinite(beta.real()) || !std::isfinite(beta.imag()))
	{
		throw InvalidArgument("model parameters must be finite");
	}
	if(std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
	{
		throw InvalidArgument("probe amplitudes need |alpha|^2 + |beta|^2 = 1");
	}
}

ProbeSpec ModelParams::probe() const
{
	validate();
	Vector phi(2);
	phi << alpha, beta;
	return ProbeSpec(std::move(phi), 4);
}

ModelParams paper_params()
{
	ModelParams p;
	p.omega = 1.0;
	p.g = 0.25;
	p.tau = 2.0 * std::numbers::pi;
	p.alpha = inv_sqrt2;
	p.beta = inv_sqrt2;
	return p;
}

const BellBasis& bell_basis()
{
	static const BellBasis basis{
		basis4(0.0, inv_sqrt2, -inv_sqrt2, 0.0),
		basis4(0.0, inv_sqrt2, inv_sqrt2, 0.0),
		basis4(1.0, 0.0, 0.0, 0.0),
		basis4(0.0, 0.0, 0.0, 1.0),
	};
	return basis;
}

Operator build_hamiltonian(const ModelParams& p)
{
	const auto up = qubit(1, 0, 0, 0); // (1 + σ₃)/2
	const auto raise = qubit(0, 1, 0, 0);
	const auto lower = qubit(0, 0, 1, 0);

	Matrix h = p.omega * (on_x(up).matrix() + on_a(up).matrix() + on_b(up).matrix());
	const Matrix xa = (on_x(raise) * on_a(lower)).matrix();
	const Matrix xb = (on_x(raise) * on_b(lower)).matrix();
	h += p.g * (xa + xa.adjoint() + xb + xb.adjoint());
	return Operator(std::move(h), {2, 2, 2});
}

Operator analytic_v_phi(const ModelParams& p)
{
	p.validate();
	const auto& bell = bell_basis();
	const double a2 = std::norm(p.alpha);
	const double b2 = std::norm(p.beta);
	const cx_double e1 = std::exp(-I * p.omega * p.tau);
	const cx_double e2 = std::exp(-I * 2.0 * p.omega * p.tau);
	const double c = std::cos(std::numbers::sqrt2 * p.g * p.tau);
	const double s = std::sin(std::numbers::sqrt2 * p.g * p.tau);
	const cx_double ab = std::conj(p.alpha) * p.beta;

	auto ketbra = [](const Vector& u, const Vector& v) -> Matrix { return u * v.adjoint(); };

	Matrix v = ketbra(bell.psi_minus, bell.psi_minus) * ((b2 + a2 * e1) * e1);
	v += ketbra(bell.down_down, bell.down_down) * (b2 + a2 * e1 * c);
	v += ketbra(bell.psi_plus, bell.psi_plus) * ((b2 + a2 * e1) * e1 * c);
	v += ketbra(bell.up_up, bell.up_up) * ((b2 * c + a2 * e1) * e2);
	v += -I * (ab * ketbra(bell.down_down, bell.psi_plus) + std::conj(ab) * ketbra(bell.psi_plus, bell.down_down)) *
	     (e1 * s);
	v += -I * (std::conj(ab) * ketbra(bell.up_up, bell.psi_plus) + ab * ketbra(bell.psi_plus, bell.up_up)) *
	     (e2 * s);
	return Operator(std::move(v), {2, 2});
}

cx_double lambda_psi_minus(const ModelParams& p)
{
	const cx_double e1 = std::exp(-I * p.omega * p.tau);
	return e1 * (std::norm(p.beta) + std::norm(p.alpha) * e1);
}

AnalyticEigenvalues analytic_eigenvalues(const ModelParams& p)
{
	p.validate();
	if(std::abs(p.alpha - inv_sqrt2) > 1e-12 || std::abs(p.beta - inv_sqrt2) > 1e-12)
	{
		throw BranchUnavailable("closed-form triplet eigenvalues need alpha = beta = 1/sqrt(2)");
	}
	if(distance_to_multiple(p.omega * p.tau, 2.0 * std::numbers::pi) > 1e-9)
	{
		throw BranchUnavailable("closed-form triplet eigenvalues need |omega| tau = 2 n pi");
	}
	const double x = p.g * p.tau / std::numbers::sqrt2;
	const double sx = std::sin(x);
	const double cx = std::cos(x);
	const cx_double root = std::sqrt(cx_double(1.0 - 9.0 * cx * cx, 0.0));

	AnalyticEigenvalues out;
	out.psi_minus = lambda_psi_minus(p);
	out.phi_minus = cx * cx;
	out.plus = 1.0 - 0.5 * sx * (3.0 * sx + root);
	out.minus = 1.0 - 0.5 * sx * (3.0 * sx - root);
	return out;
}

Conditions check_conditions(const ModelParams& p)
{
	constexpr double tol = 1e-9;
	const double phase = std::abs(p.omega) * p.tau;
	Conditions c;
	c.tuning_ok = phase > tol && distance_to_multiple(phase, 2.0 * std::numbers::pi) <= tol;
	c.probe_ok = std::abs(p.alpha) > 1e-12 && std::abs(p.beta) > 1e-12;
	c.coupling_ok = distance_to_multiple(std::abs(p.g) * p.tau / std::numbers::sqrt2, std::numbers::pi / 2.0) > tol;
	return c;
}

DensityMatrix paper_product_state()
{
	Vector psi = Vector::Zero(8);
	// |→⟩_X ⊗ |↑↓⟩_AB: indices x*4 + 1 for x ∈ {↑, ↓}
	psi(1) = inv_sqrt2;
	psi(5) = inv_sqrt2;
	return DensityMatrix::pure(psi, {2, 2, 2});
}

DensityMatrix paper_mixed_state()
{
	Vector plus(2);
	plus << inv_sqrt2, inv_sqrt2;
	Matrix ab = Matrix::Zero(4, 4);
	ab(1, 1) = 0.5;
	ab(2, 2) = 0.5;
	const Operator rho = kron(Operator(outer(plus)), Operator(ab, {2, 2}));
	return DensityMatrix(rho);
}

Operator swap_ab()
{
	Matrix s = Matrix::Zero(4, 4);
	s(0, 0) = 1.0;
	s(1, 2) = 1.0;
	s(2, 1) = 1.0;
	s(3, 3) = 1.0;
	return Operator(std::move(s), {2, 2});
}

} // namespace zeno::model3q
