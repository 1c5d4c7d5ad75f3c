#include "csympl/subspace.hpp"

#include "csympl/errors.hpp"

namespace csympl
{

namespace
{

Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd &basis, Field field)
{
  const auto m = basis.rows();
  const auto r = basis.cols();
  if (r == 0)
    return Eigen::MatrixXcd::Zero(m, 0);
  if (field == Field::Real) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis.real());
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, r);
    return q.cast<std::complex<double>>();
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(m, r);
}

}  // namespace

int numerical_rank(const Eigen::MatrixXcd &m, double tol)
{
  if (m.size() == 0)
    return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto &s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0)
    return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0))
      ++rank;
  return rank;
}

int numerical_rank(const Eigen::MatrixXd &m, double tol)
{
  if (m.size() == 0)
    return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto &s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0)
    return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0))
      ++rank;
  return rank;
}

Eigen::MatrixXd real_null_space(const Eigen::MatrixXd &m, double tol)
{
  const auto n = m.cols();
  if (m.rows() == 0)
    return Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto &s = svd.singularValues();
  const double cutoff = s.size() > 0 ? tol * s(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff && s(i) > 0.0)
      ++rank;
  return svd.matrixV().rightCols(n - rank);
}

Subspace::Subspace(int ambient_dim, Field field)
    : ambient_dim_(ambient_dim), field_(field), basis_(Eigen::MatrixXcd::Zero(ambient_dim, 0)),
      orthonormal_(Eigen::MatrixXcd::Zero(ambient_dim, 0))
{
}

Subspace::Subspace(const Eigen::MatrixXcd &basis, Field field, double tol)
    : ambient_dim_(static_cast<int>(basis.rows())), field_(field), basis_(basis)
{
  if (field == Field::Real && basis.size() > 0 && basis.imag().cwiseAbs().maxCoeff() != 0.0)
    throw InvalidInput("real subspace given a basis with nonzero imaginary part");
  if (basis.cols() > basis.rows() || numerical_rank(basis, tol) != basis.cols())
    throw InvalidInput("subspace basis is not of full column rank");
  orthonormal_ = orthonormalize(basis_, field_);
}

Subspace Subspace::real(const Eigen::MatrixXd &basis, double tol)
{
  return Subspace(basis.cast<std::complex<double>>(), Field::Real, tol);
}

Subspace Subspace::complex(const Eigen::MatrixXcd &basis, double tol)
{
  return Subspace(basis, Field::Complex, tol);
}

Subspace Subspace::span_of(const Eigen::MatrixXcd &vectors, Field field, double tol)
{
  const auto m = vectors.rows();
  if (vectors.cols() == 0)
    return Subspace(static_cast<int>(m), field);
  if (field == Field::Real) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(vectors.real(), Eigen::ComputeThinU);
    const auto &s = svd.singularValues();
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > tol * s(0) && s(i) > 0.0)
        ++r;
    return Subspace::real(svd.matrixU().leftCols(r));
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vectors, Eigen::ComputeThinU);
  const auto &s = svd.singularValues();
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0) && s(i) > 0.0)
      ++r;
  return Subspace::complex(svd.matrixU().leftCols(r));
}

Eigen::MatrixXd Subspace::real_basis() const
{
  if (field_ != Field::Real)
    throw InvalidInput("real basis requested from a complex subspace");
  return basis_.real();
}

Eigen::MatrixXd Subspace::real_orthonormal_basis() const
{
  if (field_ != Field::Real)
    throw InvalidInput("real basis requested from a complex subspace");
  return orthonormal_.real();
}

double Subspace::residual_outside(const Eigen::MatrixXcd &vectors) const
{
  double worst = 0.0;
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    const Eigen::VectorXcd v = vectors.col(j);
    const double norm = v.norm();
    if (norm == 0.0)
      continue;
    const Eigen::VectorXcd out = v - orthonormal_ * (orthonormal_.adjoint() * v);
    worst = std::max(worst, out.norm() / norm);
  }
  return worst;
}

bool Subspace::same_span(const Subspace &other, double tol) const
{
  if (ambient_dim_ != other.ambient_dim_ || dim() != other.dim())
    return false;
  return residual_outside(other.orthonormal_) <= tol && other.residual_outside(orthonormal_) <= tol;
}

Subspace Subspace::orthogonal_complement() const
{
  const auto m = ambient_dim_;
  const auto r = dim();
  if (r == 0)
    return Subspace(Eigen::MatrixXcd::Identity(m, m), field_);
  if (field_ == Field::Real) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(orthonormal_.real());
    Eigen::MatrixXd q = qr.householderQ();
    return Subspace::real(q.rightCols(m - r));
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(orthonormal_);
  Eigen::MatrixXcd q = qr.householderQ();
  return Subspace::complex(q.rightCols(m - r));
}

}  // namespace csympl
