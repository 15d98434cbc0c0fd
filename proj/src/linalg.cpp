#include "zenopure/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "zenopure/errors.hpp"

namespace zeno
{

namespace
{

Index product(const std::vector<Index>& factors)
{
	return std::accumulate(factors.begin(), factors.end(), Index{1}, std::multiplies<>{});
}

void check_shape(const Matrix& entries, const std::vector<Index>& factors)
{
	if(entries.rows() != entries.cols())
	{
		throw DimensionMismatch("operator must be square, got " + std::to_string(entries.rows()) + "x" +
		                        std::to_string(entries.cols()));
	}
	if(entries.rows() < 1)
	{
		throw DimensionMismatch("operator dimension must be positive");
	}
	if(factors.empty() || std::any_of(factors.begin(), factors.end(), [](Index f) { return f < 1; }))
	{
		throw DimensionMismatch("subsystem dimensions must be positive");
	}
	if(product(factors) != entries.rows())
	{
		throw DimensionMismatch("subsystem dimensions multiply to " + std::to_string(product(factors)) +
		                        ", operator has dimension " + std::to_string(entries.rows()));
	}
	if(!entries.allFinite())
	{
		throw InvalidArgument("operator has non-finite entries");
	}
}

// Descending |λ|, then Re λ, then Im λ; differences below the degeneracy
// tolerance count as ties.
bool spectral_before(cx_double a, cx_double b)
{
	if(std::abs(std::abs(a) - std::abs(b)) > degeneracy_tolerance)
	{
		return std::abs(a) > std::abs(b);
	}
	if(std::abs(a.real() - b.real()) > degeneracy_tolerance)
	{
		return a.real() > b.real();
	}
	if(std::abs(a.imag() - b.imag()) > degeneracy_tolerance)
	{
		return a.imag() > b.imag();
	}
	return false;
}

double condition_number(const Matrix& m)
{
	Eigen::JacobiSVD<Matrix> svd(m);
	const auto& s = svd.singularValues();
	const double smallest = s(s.size() - 1);
	if(smallest == 0.0)
	{
		return std::numeric_limits<double>::infinity();
	}
	return s(0) / smallest;
}

// Left eigenvectors one eigenvalue at a time from the spectrum of v†; used
// when the right eigenvectors do not form a basis.
Matrix left_vectors_by_matching(const Matrix& v, const Vector& eigenvalues, const Matrix& right)
{
	Eigen::ComplexEigenSolver<Matrix> adj(v.adjoint());
	if(adj.info() != Eigen::Success)
	{
		throw ConvergenceFailure("eigenvalue iteration for the adjoint did not converge");
	}
	const Index n = eigenvalues.size();
	Matrix left(n, n);
	std::vector<bool> used(n, false);
	for(Index i = 0; i < n; ++i)
	{
		Index best = -1;
		double best_dist = std::numeric_limits<double>::infinity();
		for(Index j = 0; j < n; ++j)
		{
			const double dist = std::abs(std::conj(adj.eigenvalues()(j)) - eigenvalues(i));
			if(!used[j] && dist < best_dist)
			{
				best = j;
				best_dist = dist;
			}
		}
		used[best] = true;
		Vector ket = adj.eigenvectors().col(best).normalized();
		const cx_double overlap = braket(ket, right.col(i));
		if(std::abs(overlap) > 1e-8)
		{
			ket /= std::conj(overlap);
		}
		left.row(i) = ket.adjoint();
	}
	return left;
}

} // namespace

Operator::Operator(Matrix entries)
	: Operator(entries, {entries.rows()})
{
}

Operator::Operator(Matrix entries, std::vector<Index> factors)
	: entries_(std::move(entries))
	, factors_(std::move(factors))
{
	check_shape(entries_, factors_);
}

Operator Operator::identity(std::vector<Index> factors)
{
	const Index d = product(factors);
	return Operator(Matrix::Identity(d, d), std::move(factors));
}

Operator Operator::zero(std::vector<Index> factors)
{
	const Index d = product(factors);
	return Operator(Matrix::Zero(d, d), std::move(factors));
}

Operator Operator::adjoint() const
{
	return Operator(entries_.adjoint(), factors_);
}

double Operator::hermiticity_defect() const
{
	return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

Operator operator*(const Operator& a, const Operator& b)
{
	if(a.dim() != b.dim())
	{
		throw DimensionMismatch("cannot multiply operators of dimension " + std::to_string(a.dim()) + " and " +
		                        std::to_string(b.dim()));
	}
	return Operator(a.matrix() * b.matrix(), a.factors());
}

Operator kron(const Operator& a, const Operator& b)
{
	const Index db = b.dim();
	Matrix out(a.dim() * db, a.dim() * db);
	for(Index i = 0; i < a.dim(); ++i)
	{
		for(Index j = 0; j < a.dim(); ++j)
		{
			out.block(i * db, j * db, db, db) = a(i, j) * b.matrix();
		}
	}
	std::vector<Index> factors = a.factors();
	factors.insert(factors.end(), b.factors().begin(), b.factors().end());
	return Operator(std::move(out), std::move(factors));
}

Operator matrix_exponential(const Operator& h, double t)
{
	const double defect = h.hermiticity_defect();
	if(defect > hermitian_tolerance)
	{
		throw NonHermitianInput("matrix_exponential needs a Hermitian generator (‖h - h†‖_max = " +
		                        std::to_string(defect) + ")");
	}
	const Matrix sym = 0.5 * (h.matrix() + h.matrix().adjoint());
	Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
	if(es.info() != Eigen::Success)
	{
		throw ConvergenceFailure("Hermitian eigensolver did not converge");
	}
	const Vector phases = (cx_double(0.0, -t) * es.eigenvalues().cast<cx_double>()).array().exp();
	return Operator(es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint(), h.factors());
}

Eigensystem eig_general(const Operator& v)
{
	Eigen::ComplexEigenSolver<Matrix> solver(v.matrix());
	if(solver.info() != Eigen::Success)
	{
		throw ConvergenceFailure("Schur iteration did not converge");
	}

	const Index n = v.dim();
	std::vector<Index> order(n);
	std::iota(order.begin(), order.end(), Index{0});
	const Vector& raw = solver.eigenvalues();
	std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return spectral_before(raw(a), raw(b)); });

	Eigensystem out;
	out.eigenvalues.resize(n);
	out.right.resize(n, n);
	for(Index k = 0; k < n; ++k)
	{
		out.eigenvalues(k) = raw(order[k]);
		out.right.col(k) = solver.eigenvectors().col(order[k]).normalized();
	}

	bool defective = condition_number(out.right) > conditioning_limit;
	for(Index i = 0; i < n && !defective; ++i)
	{
		for(Index j = i + 1; j < n && !defective; ++j)
		{
			if(std::abs(out.eigenvalues(i) - out.eigenvalues(j)) <= degeneracy_tolerance &&
			   std::abs(braket(out.right.col(i), out.right.col(j))) > 1.0 - 1e-8)
			{
				defective = true;
			}
		}
	}
	out.diagonalizable = !defective;

	if(out.diagonalizable)
	{
		out.left = out.right.inverse();
	}
	else
	{
		out.left = left_vectors_by_matching(v.matrix(), out.eigenvalues, out.right);
	}
	return out;
}

} // namespace zeno
