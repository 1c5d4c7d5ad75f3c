#include "csympl/csymplectic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "csympl/errors.hpp"

namespace csympl
{

namespace
{

const cplx kI{0.0, 1.0};

double max_abs(const Eigen::MatrixXcd &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Subspace require_real(const Subspace &U, int ambient, const char *what)
{
  if (U.field() != Field::Real)
    throw InvalidInput(std::string(what) + ": subspace must be real");
  if (U.ambient_dim() != ambient)
    throw InvalidInput(std::string(what) + ": ambient dimension mismatch");
  return U;
}

}  // namespace

ComplexStructure::ComplexStructure(const Eigen::MatrixXd &matrix, double tol) : matrix_(matrix)
{
  if (matrix.rows() != matrix.cols() || matrix.rows() % 2 != 0 || matrix.rows() == 0)
    throw InvalidInput("complex structure must be a square matrix of even positive size");
  const auto m = matrix.rows();
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  const double defect = (matrix * matrix + Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
  if (defect > tol * scale * scale)
    throw InvalidInput("complex structure does not square to -Id (defect " + std::to_string(defect) + ")");
}

ComplexStructure ComplexStructure::standard(int dim)
{
  if (dim <= 0 || dim % 2 != 0)
    throw InvalidInput("standard complex structure needs an even positive dimension");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k < dim; k += 2) {
    j(k + 1, k) = 1.0;
    j(k, k + 1) = -1.0;
  }
  return ComplexStructure(j);
}

Eigen::MatrixXcd ComplexStructure::holomorphic_basis() const
{
  // (Id - i I) / 2 projects onto the +i eigenspace: I (v - i I v) = i (v - i I v).
  const auto m = matrix_.rows();
  const Eigen::MatrixXcd proj =
      (Eigen::MatrixXcd::Identity(m, m) - kI * matrix_.cast<cplx>()) / 2.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(proj, Eigen::ComputeFullU);
  return svd.matrixU().leftCols(m / 2);
}

Eigen::MatrixXcd q_block()
{
  Eigen::MatrixXcd q(4, 4);
  // clang-format off
  q << 0.0,  0.0,  1.0,  kI,
       0.0,  0.0,  kI,  -1.0,
      -1.0, -kI,   0.0,  0.0,
      -kI,   1.0,  0.0,  0.0;
  // clang-format on
  return q;
}

ComplexTwoForm canonical_form(int n)
{
  if (n < 1)
    throw InvalidInput("canonical_form: n must be positive");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(4 * n, 4 * n);
  const Eigen::MatrixXcd q = q_block();
  for (int b = 0; b < n; ++b)
    a.block(4 * b, 4 * b, 4, 4) = q;
  return ComplexTwoForm(a);
}

RankCriterion is_c_symplectic_rank(const ComplexTwoForm &omega, double tol)
{
  RankCriterion out;
  const int m = omega.dim();
  if (m == 0 || m % 4 != 0) {
    out.reason = "dimension not 4n";
    return out;
  }
  const auto kernel = form_kernel(omega, tol);
  out.kernel_dim = kernel.kernel.dim();
  out.conditioning_warning = kernel.conditioning_warning;
  const int half = m / 2;
  if (out.kernel_dim > 0) {
    const Eigen::MatrixXcd &k = kernel.kernel.orthonormal_basis();
    Eigen::MatrixXd parts(m, 2 * k.cols());
    parts << k.real(), k.imag();
    out.real_span_dim = numerical_rank(parts, tol);
  }
  else {
    out.real_span_dim = 0;
  }
  if (out.kernel_dim != half) {
    out.reason = "kernel dimension " + std::to_string(out.kernel_dim) + " != " + std::to_string(half);
    return out;
  }
  // W + conj(W) has real form of dimension 2 dim W - dim(W cap conj W); it is all of R^m
  // exactly when W contains no real vector.
  if (out.real_span_dim != m) {
    out.reason = "kernel contains real vectors";
    return out;
  }
  out.holds = true;
  return out;
}

PowerCriterion is_c_symplectic_power(const ComplexTwoForm &omega, double tol)
{
  PowerCriterion out;
  const int m = omega.dim();
  if (m == 0 || m % 4 != 0) {
    out.reason = "dimension not 4n";
    return out;
  }
  const int n = m / 4;
  const double scale = omega.max_norm();
  if (scale == 0.0) {
    out.reason = "zero form";
    return out;
  }
  // Normalise first so that powers stay O(1).
  const ComplexTwoForm unit = (1.0 / scale) * omega;
  out.top_power_norm = power(unit, n + 1).max_norm();
  const KForm base = unit.to_kform();
  const KForm mixed = wedge(base, base.conj());
  KForm acc = mixed;
  for (int i = 1; i < n; ++i)
    acc = wedge(acc, mixed);
  out.mixed_power_norm = acc.max_norm();
  if (out.top_power_norm > tol) {
    out.reason = "Omega^{n+1} does not vanish";
    return out;
  }
  if (out.mixed_power_norm <= tol) {
    out.reason = "(Omega ^ conj Omega)^n vanishes";
    return out;
  }
  out.holds = true;
  return out;
}

bool is_c_symplectic(const ComplexTwoForm &omega, double tol)
{
  return is_c_symplectic_rank(omega, tol).holds && is_c_symplectic_power(omega, tol).holds;
}

ComplexStructure induced_complex_structure(const ComplexTwoForm &omega, double tol)
{
  const auto rank = is_c_symplectic_rank(omega, tol);
  if (!rank.holds)
    throw InvalidInput("not c-symplectic (rank criterion: " + rank.reason + ")");
  const auto power_test = is_c_symplectic_power(omega, tol);
  if (!power_test.holds)
    throw InvalidInput("not c-symplectic (power criterion: " + power_test.reason + ")");

  const int m = omega.dim();
  const int half = m / 2;
  const Eigen::MatrixXcd k = form_kernel(omega, tol).kernel.orthonormal_basis();
  // Columns: conj(ker) with eigenvalue +i, then ker with eigenvalue -i.
  Eigen::MatrixXcd basis(m, m);
  basis << k.conjugate(), k;
  Eigen::VectorXcd eig(m);
  eig.head(half).setConstant(kI);
  eig.tail(half).setConstant(-kI);
  const Eigen::MatrixXcd full = basis * eig.asDiagonal() * basis.fullPivLu().inverse();
  const double imag = full.imag().cwiseAbs().maxCoeff();
  if (imag > 1e-6 * std::max(1.0, full.real().cwiseAbs().maxCoeff()))
    throw ConsistencyError("induced complex structure is not real (imaginary part " + std::to_string(imag) + ")");
  return ComplexStructure(full.real(), 1e-6);
}

CSymplecticSpace::CSymplecticSpace(ComplexTwoForm omega, double tol)
    : omega_(std::move(omega)), kernel_(form_kernel(omega_, tol).kernel),
      structure_(induced_complex_structure(omega_, tol))
{
}

const KForm &HodgeComponents::operator()(int p, int q) const
{
  if (p + q != degree_ || p < 0 || q < 0)
    throw InvalidInput("Hodge type does not match the form degree");
  return component(p);
}

KForm HodgeComponents::sum() const
{
  KForm total = by_p_.front();
  for (std::size_t p = 1; p < by_p_.size(); ++p)
    total += by_p_[p];
  return total;
}

HodgeComponents hodge_decompose(const KForm &a, const ComplexStructure &structure)
{
  const int m = a.dim();
  if (m != structure.dim())
    throw InvalidInput("hodge_decompose: dimension mismatch");
  const int k = a.degree();
  const int half = m / 2;

  // Coordinates adapted to the type decomposition: (1,0) vectors first, then (0,1).
  Eigen::MatrixXcd frame(m, m);
  const Eigen::MatrixXcd hol = structure.holomorphic_basis();
  frame << hol, hol.conjugate();
  const Eigen::MatrixXcd inverse = frame.fullPivLu().inverse();
  const KForm adapted = pullback(frame, a);

  const IndexMask holo_mask = (IndexMask{1} << half) - 1;
  std::vector<KForm> by_p;
  by_p.reserve(static_cast<std::size_t>(k + 1));
  const auto masks = adapted.masks();
  for (int p = 0; p <= k; ++p) {
    KForm piece(m, k);
    for (std::size_t r = 0; r < masks.size(); ++r)
      if (std::popcount(masks[r] & holo_mask) == p)
        piece.coeff(masks[r]) = adapted.coeffs()[r];
    by_p.push_back(pullback(inverse, piece));
  }
  return HodgeComponents(k, std::move(by_p));
}

Eigen::MatrixXd c_symplectic_basis(const ComplexTwoForm &omega, double tol)
{
  const int m = omega.dim();
  const ComplexStructure structure = induced_complex_structure(omega, tol);
  const Eigen::MatrixXd &I = structure.matrix();
  const Eigen::MatrixXcd &A = omega.matrix();
  const Eigen::MatrixXd R = A.real();
  const double scale = omega.max_norm();

  Eigen::MatrixXd work = Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd basis(m, m);
  int filled = 0;

  while (filled < m) {
    const auto r = work.cols();
    // Pivot u1: largest contraction iota_u Omega among working vectors.
    Eigen::Index j1 = 0;
    double best = -1.0;
    for (Eigen::Index j = 0; j < r; ++j) {
      const double norm = (A.transpose() * work.col(j).cast<cplx>()).norm();
      if (norm > best) {
        best = norm;
        j1 = j;
      }
    }
    const Eigen::VectorXd u1 = work.col(j1);
    const Eigen::VectorXd v1 = I * u1;

    // Pivot u2: largest |Omega(u1, s_j)|, then rescale within span(u2, I u2).
    const Eigen::RowVectorXcd row = u1.cast<cplx>().transpose() * A;
    Eigen::Index j2 = 0;
    double best_pair = -1.0;
    for (Eigen::Index j = 0; j < r; ++j) {
      const double v = std::abs((row * work.col(j).cast<cplx>()).value());
      if (v > best_pair) {
        best_pair = v;
        j2 = j;
      }
    }
    if (best_pair <= tol * scale)
      throw ConsistencyError("c_symplectic_basis: no vector pairs nontrivially with u1");
    Eigen::VectorXd u2 = work.col(j2);
    const cplx c = (row * u2.cast<cplx>()).value();
    const cplx w = 1.0 / c;
    u2 = w.real() * u2 + w.imag() * (I * u2);
    const Eigen::VectorXd v2 = I * u2;

    basis.col(filled) = u1;
    basis.col(filled + 1) = v1;
    basis.col(filled + 2) = u2;
    basis.col(filled + 3) = v2;
    filled += 4;
    if (filled == m)
      break;

    // Project the working set onto the Omega-orthogonal of U along U. U is I-invariant, so
    // the orthogonal for Re Omega coincides with the orthogonal for Omega.
    const Eigen::MatrixXd U = basis.middleCols(filled - 4, 4);
    const Eigen::MatrixXd gram = U.transpose() * R.transpose() * U;
    const Eigen::MatrixXd coupling = U.transpose() * R.transpose() * work;
    const Eigen::MatrixXd projected = work - U * gram.fullPivLu().solve(coupling);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(projected);
    const auto keep = r - 4;
    std::vector<Eigen::Index> chosen(static_cast<std::size_t>(keep));
    for (Eigen::Index i = 0; i < keep; ++i)
      chosen[static_cast<std::size_t>(i)] = qr.colsPermutation().indices()(i);
    std::sort(chosen.begin(), chosen.end());
    Eigen::MatrixXd next(m, keep);
    for (Eigen::Index i = 0; i < keep; ++i)
      next.col(i) = projected.col(chosen[static_cast<std::size_t>(i)]).normalized();
    work = next;
  }
  return basis;
}

double c_symplectic_basis_residual(const ComplexTwoForm &omega, const Eigen::MatrixXd &basis)
{
  const Eigen::MatrixXcd b = basis.cast<cplx>();
  const Eigen::MatrixXcd reduced = b.transpose() * omega.matrix() * b;
  return max_abs(reduced - canonical_form(omega.dim() / 4).matrix()) / omega.max_norm();
}

bool is_c_isotropic(const Subspace &U, const ComplexTwoForm &omega, double tol)
{
  require_real(U, omega.dim(), "is_c_isotropic");
  if (U.dim() == 0)
    return true;
  const Eigen::MatrixXcd &b = U.orthonormal_basis();
  const double scale = omega.max_norm();
  return max_abs(b.transpose() * omega.matrix() * b) <= tol * scale;
}

bool is_c_lagrangian(const Subspace &U, const ComplexTwoForm &omega, double tol)
{
  return is_c_isotropic(U, omega, tol) && 2 * U.dim() == omega.dim();
}

Subspace omega_orthogonal(const Subspace &U, const ComplexTwoForm &omega, double tol)
{
  require_real(U, omega.dim(), "omega_orthogonal");
  const int m = omega.dim();
  if (U.dim() == 0)
    return Subspace::real(Eigen::MatrixXd::Identity(m, m));
  // Omega(w, u) = w^T (A u); real and imaginary parts give the linear conditions on w.
  const Eigen::MatrixXcd au = omega.matrix() * U.orthonormal_basis();
  Eigen::MatrixXd constraints(2 * au.cols(), m);
  constraints << au.real().transpose(), au.imag().transpose();
  return Subspace::real(real_null_space(constraints, tol));
}

QuotientModel quotient_complex_structure(const CSymplecticSpace &space, const Subspace &L, double tol)
{
  require_real(L, space.dim(), "quotient_complex_structure");
  if (!is_c_lagrangian(L, space.omega(), tol))
    throw InvalidInput("quotient_complex_structure: subspace is not c-Lagrangian");
  Subspace complement = L.orthogonal_complement();
  const Eigen::MatrixXd kb = complement.real_orthonormal_basis();
  const Eigen::MatrixXd quotient = kb.transpose() * space.structure().matrix() * kb;
  return QuotientModel{std::move(complement), kb.transpose(), ComplexStructure(quotient, 1e-6)};
}

}  // namespace csympl
