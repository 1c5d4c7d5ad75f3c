#ifndef CSYMPL_CSYMPLECTIC_HPP
#define CSYMPL_CSYMPLECTIC_HPP

#include <map>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "csympl/exterior_algebra.hpp"
#include "csympl/subspace.hpp"

namespace csympl
{

// Real endomorphism I of R^m with I^2 = -Id.
class ComplexStructure
{
public:
  // Rejects odd m and matrices with max|I^2 + Id| above tol * max(1, max|I|^2).
  explicit ComplexStructure(const Eigen::MatrixXd &matrix, double tol = kDefaultTol);

  // The standard structure on R^{2k} with coordinates (x_1, y_1, ..., x_k, y_k):
  // x_j -> y_j, y_j -> -x_j.
  static ComplexStructure standard(int dim);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXd &matrix() const { return matrix_; }

  // Orthonormal bases of the +i and -i eigenspaces in C^m; the second is the conjugate of
  // the first.
  Eigen::MatrixXcd holomorphic_basis() const;
  Eigen::MatrixXcd antiholomorphic_basis() const { return holomorphic_basis().conjugate(); }

  double distance(const ComplexStructure &other) const
  {
    return (matrix_ - other.matrix_).cwiseAbs().maxCoeff();
  }

private:
  Eigen::MatrixXd matrix_;
};

// 4x4 block of the canonical c-symplectic form in a basis (u1, I u1, u2, I u2). It is
// dz1 ^ dz2 for the standard structure on R^4.
Eigen::MatrixXcd q_block();
// blkdiag(Q, ..., Q) on R^{4n}.
ComplexTwoForm canonical_form(int n);

struct RankCriterion
{
  bool holds = false;
  int kernel_dim = -1;
  int real_span_dim = -1;  // real rank of [Re K, Im K] for a kernel basis K
  bool conditioning_warning = false;
  std::string reason;
};

struct PowerCriterion
{
  bool holds = false;
  double top_power_norm = 0.0;  // max|Omega^{n+1}| / max|Omega|^{n+1}
  double mixed_power_norm = 0.0;  // max|(Omega ^ conj Omega)^n| / max|Omega|^{2n}
  std::string reason;
};

// dim ker Omega = 2n in C^{4n} and the kernel contains no real vector.
RankCriterion is_c_symplectic_rank(const ComplexTwoForm &omega, double tol = kDefaultTol);

// Omega^{n+1} = 0 and (Omega ^ conj Omega)^n != 0, norms relative to max|Omega|.
PowerCriterion is_c_symplectic_power(const ComplexTwoForm &omega, double tol = kDefaultTol);

// Both criteria.
bool is_c_symplectic(const ComplexTwoForm &omega, double tol = kDefaultTol);

// The unique I with ker Omega as its -i eigenspace, so that Omega(I u, v) = i Omega(u, v).
// Throws InvalidInput naming the failing criterion when omega is not c-symplectic.
ComplexStructure induced_complex_structure(const ComplexTwoForm &omega, double tol = kDefaultTol);

// (V, Omega) with the induced structure and the kernel cached at construction.
class CSymplecticSpace
{
public:
  explicit CSymplecticSpace(ComplexTwoForm omega, double tol = kDefaultTol);

  int dim() const { return omega_.dim(); }
  int n() const { return omega_.dim() / 4; }
  const ComplexTwoForm &omega() const { return omega_; }
  const ComplexStructure &structure() const { return structure_; }
  const Subspace &half_kernel() const { return kernel_; }

private:
  ComplexTwoForm omega_;
  Subspace kernel_;
  ComplexStructure structure_;
};

// Type decomposition of a k-form with respect to a complex structure.
class HodgeComponents
{
public:
  HodgeComponents(int degree, std::vector<KForm> by_p) : degree_(degree), by_p_(std::move(by_p)) {}

  int degree() const { return degree_; }
  // Component of type (p, degree - p).
  const KForm &component(int p) const { return by_p_.at(static_cast<std::size_t>(p)); }
  const KForm &operator()(int p, int q) const;
  KForm sum() const;

private:
  int degree_;
  std::vector<KForm> by_p_;
};

HodgeComponents hodge_decompose(const KForm &a, const ComplexStructure &structure);

// Real basis B with B^T A B = blkdiag(Q, ..., Q), by symplectic Gram-Schmidt with pivoting.
Eigen::MatrixXd c_symplectic_basis(const ComplexTwoForm &omega, double tol = kDefaultTol);

// max|B^T A B - blkdiag(Q..Q)| / max|A|.
double c_symplectic_basis_residual(const ComplexTwoForm &omega, const Eigen::MatrixXd &basis);

bool is_c_isotropic(const Subspace &U, const ComplexTwoForm &omega, double tol = kDefaultTol);

// Isotropic of half the real dimension; maximality among isotropic subspaces is equivalent
// to dim 2n since Re Omega is a nondegenerate real symplectic form.
bool is_c_lagrangian(const Subspace &U, const ComplexTwoForm &omega, double tol = kDefaultTol);

// Real subspace { w : Omega(w, u) = 0 for all u in U }. It contains U when U is isotropic,
// and equals U exactly when U is c-Lagrangian.
Subspace omega_orthogonal(const Subspace &U, const ComplexTwoForm &omega, double tol = kDefaultTol);

// V / L modelled on the Euclidean orthogonal complement K of L; pi is orthogonal projection,
// written in an orthonormal basis of K.
struct QuotientModel
{
  Subspace complement;  // K, real, orthonormal basis
  Eigen::MatrixXd projection;  // (m - dim L) x m, rows are the basis of K
  ComplexStructure structure;  // on K coordinates; pi o I_Omega = structure o pi
};

// Throws InvalidInput when L is not c-Lagrangian.
QuotientModel quotient_complex_structure(const CSymplecticSpace &space, const Subspace &L,
                                         double tol = kDefaultTol);

}  // namespace csympl

#endif
