#include "csympl/generators.hpp"

#include <cmath>

#include "csympl/errors.hpp"

namespace csympl
{

namespace gen
{

namespace
{

Eigen::MatrixXd gaussian(Rng &rng, int rows, int cols)
{
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i)
      m(i, j) = rng.normal();
  return m;
}

Eigen::MatrixXcd complex_gaussian(Rng &rng, int rows, int cols)
{
  Eigen::MatrixXcd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i)
      m(i, j) = rng.complex_normal();
  return m;
}

Eigen::MatrixXcd wedge_of_covectors(const Eigen::RowVectorXcd &a, const Eigen::RowVectorXcd &b)
{
  // (a ^ b)(u, v) = a(u) b(v) - a(v) b(u)
  return a.transpose() * b - b.transpose() * a;
}

}  // namespace

Eigen::MatrixXd invertible(Rng &rng, int m, double max_cond)
{
  for (;;) {
    Eigen::MatrixXd p = gaussian(rng, m, m);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(p);
    const auto &s = svd.singularValues();
    if (s(m - 1) > 0.0 && s(0) / s(m - 1) <= max_cond)
      return p;
  }
}

Eigen::MatrixXcd complex_antisymmetric(Rng &rng, int m)
{
  const Eigen::MatrixXcd g = complex_gaussian(rng, m, m);
  return (g - g.transpose()) / std::sqrt(2.0);
}

CSymplecticInstance c_symplectic(Rng &rng, int n)
{
  Eigen::MatrixXd p = invertible(rng, 4 * n);
  ComplexTwoForm omega = pullback(p, canonical_form(n));
  return {std::move(omega), std::move(p)};
}

ComplexTwoForm real_symplectic(Rng &rng, int m)
{
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k + 1 < m; k += 2) {
    j(k, k + 1) = 1.0;
    j(k + 1, k) = -1.0;
  }
  const Eigen::MatrixXd p = invertible(rng, m);
  return pullback(p, ComplexTwoForm(j.cast<cplx>()));
}

ComplexTwoForm real_half_rank(Rng &rng, int m)
{
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k + 1 < m / 2; k += 2) {
    j(k, k + 1) = 1.0;
    j(k + 1, k) = -1.0;
  }
  const Eigen::MatrixXd p = invertible(rng, m);
  return pullback(p, ComplexTwoForm(j.cast<cplx>()));
}

ComplexTwoForm low_rank_complex(Rng &rng, int m)
{
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m, m);
  for (int r = 0; r < m / 4 - 1; ++r)
    a += wedge_of_covectors(complex_gaussian(rng, 1, m), complex_gaussian(rng, 1, m));
  return ComplexTwoForm(a);
}

ComplexTwoForm perturbed_c_symplectic(Rng &rng, int n, double size)
{
  const auto inst = c_symplectic(rng, n);
  const double scale = inst.omega.max_norm();
  return inst.omega + ComplexTwoForm(size * scale * complex_antisymmetric(rng, 4 * n));
}

StructuredForm form_of_type_20(Rng &rng, int n)
{
  const int m = 4 * n;
  const int k = 2 * n;
  // dz_a = dx_a + i dy_a in coordinates (x_1, y_1, ..., x_k, y_k).
  Eigen::MatrixXcd dz = Eigen::MatrixXcd::Zero(k, m);
  for (int a = 0; a < k; ++a) {
    dz(a, 2 * a) = 1.0;
    dz(a, 2 * a + 1) = cplx(0.0, 1.0);
  }
  Eigen::MatrixXcd c;
  for (;;) {
    c = complex_antisymmetric(rng, k);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c);
    const auto &s = svd.singularValues();
    if (s(k - 1) > 1e-2 * s(0))
      break;
  }
  const ComplexTwoForm standard_form(dz.transpose() * c * dz);
  const Eigen::MatrixXd p = invertible(rng, m);
  const Eigen::MatrixXd j0 = ComplexStructure::standard(m).matrix();
  ComplexStructure structure(p.fullPivLu().solve(j0 * p), 1e-6);
  return {std::move(structure), pullback(p, standard_form)};
}

Subspace random_maximal_isotropic(Rng &rng, const ComplexTwoForm &omega, double tol)
{
  const int m = omega.dim();
  Eigen::MatrixXd vectors(m, 0);
  Subspace current(m, Field::Real);
  for (int step = 0; step < m; ++step) {
    const Subspace orth = omega_orthogonal(current, omega, tol);
    if (orth.dim() <= current.dim())
      break;
    // Random direction of the orthogonal, with its component inside U removed.
    const Eigen::MatrixXd ob = orth.real_orthonormal_basis();
    Eigen::VectorXd w = ob * gaussian(rng, ob.cols(), 1);
    if (current.dim() > 0) {
      const Eigen::MatrixXd cb = current.real_orthonormal_basis();
      w -= cb * (cb.transpose() * w);
    }
    w.normalize();
    vectors.conservativeResize(m, vectors.cols() + 1);
    vectors.col(vectors.cols() - 1) = w;
    current = Subspace::real(vectors);
  }
  return current;
}

ComplexTwoForm form_without_02(Rng &rng, const ComplexStructure &structure)
{
  const ComplexTwoForm g(complex_antisymmetric(rng, structure.dim()));
  const auto parts = hodge_decompose(g.to_kform(), structure);
  return ComplexTwoForm::from_kform(parts.component(2) + parts.component(1));
}

ComplexTwoForm form_of_type_02(Rng &rng, const ComplexStructure &structure)
{
  const ComplexTwoForm g(complex_antisymmetric(rng, structure.dim()));
  const auto parts = hodge_decompose(g.to_kform(), structure);
  return ComplexTwoForm::from_kform(parts.component(0));
}

}  // namespace gen
}  // namespace csympl
