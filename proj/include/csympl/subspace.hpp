#ifndef CSYMPL_SUBSPACE_HPP
#define CSYMPL_SUBSPACE_HPP

#include <complex>

#include <Eigen/Dense>

namespace csympl
{

enum class Field
{
  Real,
  Complex
};

// Linear subspace of R^m or C^m given by a basis matrix of full column rank. Real subspaces
// keep a real basis (zero imaginary part).
class Subspace
{
public:
  // The zero subspace.
  Subspace(int ambient_dim, Field field);

  // Rejects rank-deficient bases (numerical rank by SVD at relative tolerance tol) and, for
  // Field::Real, bases with nonzero imaginary part.
  Subspace(const Eigen::MatrixXcd &basis, Field field, double tol = 1e-9);

  static Subspace real(const Eigen::MatrixXd &basis, double tol = 1e-9);
  static Subspace complex(const Eigen::MatrixXcd &basis, double tol = 1e-9);

  // Span of the columns, which need not be independent; rank decided at tolerance tol.
  static Subspace span_of(const Eigen::MatrixXcd &vectors, Field field, double tol = 1e-9);

  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  Field field() const { return field_; }

  const Eigen::MatrixXcd &basis() const { return basis_; }
  Eigen::MatrixXd real_basis() const;

  // Orthonormal basis (Euclidean for real subspaces, Hermitian for complex ones); real when
  // the subspace is real.
  const Eigen::MatrixXcd &orthonormal_basis() const { return orthonormal_; }
  Eigen::MatrixXd real_orthonormal_basis() const;

  Eigen::MatrixXcd projector() const { return orthonormal_ * orthonormal_.adjoint(); }

  // Largest relative norm of the component of a column of `vectors` orthogonal to this
  // subspace; 0 when every column lies in it.
  double residual_outside(const Eigen::MatrixXcd &vectors) const;

  // Spans coincide: equal dimension and mutual projection residuals below tol.
  bool same_span(const Subspace &other, double tol = 1e-9) const;

  // Euclidean orthogonal complement, in the same field.
  Subspace orthogonal_complement() const;

private:
  int ambient_dim_;
  Field field_;
  Eigen::MatrixXcd basis_;
  Eigen::MatrixXcd orthonormal_;
};

// Numerical rank by singular values relative to the largest one.
int numerical_rank(const Eigen::MatrixXcd &m, double tol = 1e-9);
int numerical_rank(const Eigen::MatrixXd &m, double tol = 1e-9);

// Orthonormal basis of the null space of a real matrix (columns), relative tolerance tol.
Eigen::MatrixXd real_null_space(const Eigen::MatrixXd &m, double tol = 1e-9);

}  // namespace csympl

#endif
