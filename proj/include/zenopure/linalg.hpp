#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace zeno
{

using cx_double = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Dense square operator on a tensor-product space.
///
/// `factors` lists the subsystem dimensions in tensor order (X first, then
/// A, ...). Composite indices are row-major: for a ⊗ b the basis index is
/// i_a * dim(b) + i_b.
class Operator
{
public:
	/// Single-factor operator.
	explicit Operator(Matrix entries);
	Operator(Matrix entries, std::vector<Index> factors);

	static Operator identity(std::vector<Index> factors);
	static Operator zero(std::vector<Index> factors);

	[[nodiscard]] Index dim() const { return entries_.rows(); }
	[[nodiscard]] const std::vector<Index>& factors() const { return factors_; }
	[[nodiscard]] const Matrix& matrix() const { return entries_; }

	[[nodiscard]] cx_double operator()(Index row, Index col) const { return entries_(row, col); }

	[[nodiscard]] Operator adjoint() const;

	/// Largest entry of |A - A†|.
	[[nodiscard]] double hermiticity_defect() const;

private:
	Matrix entries_;
	std::vector<Index> factors_;
};

Operator operator*(const Operator& a, const Operator& b);

/// Tensor product a ⊗ b; factors are concatenated.
Operator kron(const Operator& a, const Operator& b);

/// Tolerance on ‖h - h†‖_max accepted by matrix_exponential.
inline constexpr double hermitian_tolerance = 1e-10;

/// e^{-i h t} for Hermitian h, through its spectral decomposition.
///
/// Throws NonHermitianInput when ‖h - h†‖_max exceeds hermitian_tolerance.
Operator matrix_exponential(const Operator& h, double t);

/// Spectral decomposition of a general (non-normal) square matrix.
///
/// Column n of `right` is |u_n⟩ with unit norm; row n of `left` is ⟨v_n|
/// scaled so that ⟨v_n|u_m⟩ = δ_nm. Eigenvalues are ordered by descending
/// magnitude, then descending real part, then descending imaginary part.
struct Eigensystem
{
	Vector eigenvalues;
	Matrix right;
	Matrix left;
	bool diagonalizable = true;

	[[nodiscard]] Index size() const { return eigenvalues.size(); }
	[[nodiscard]] Vector right_vector(Index n) const { return right.col(n); }
	/// The ket |v_n⟩ whose bra is row n of `left`.
	[[nodiscard]] Vector left_ket(Index n) const { return left.row(n).adjoint(); }
};

/// Eigenvalues closer than this are treated as coincident.
inline constexpr double degeneracy_tolerance = 1e-10;
/// Eigenvector matrices worse conditioned than this are declared defective.
inline constexpr double conditioning_limit = 1e8;

/// Throws ConvergenceFailure if the Schur iteration does not converge.
Eigensystem eig_general(const Operator& v);

/// Vector overlap ⟨a|b⟩.
inline cx_double braket(const Vector& a, const Vector& b)
{
	return a.dot(b);
}

/// |ψ⟩⟨ψ|
inline Matrix outer(const Vector& psi)
{
	return psi * psi.adjoint();
}

} // namespace zeno
