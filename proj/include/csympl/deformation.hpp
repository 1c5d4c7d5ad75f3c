#ifndef CSYMPL_DEFORMATION_HPP
#define CSYMPL_DEFORMATION_HPP

#include <vector>

#include <Eigen/Dense>

#include "csympl/csymplectic.hpp"

namespace csympl
{

// V -> V/L for a c-Lagrangian L, with V/L modelled on the orthogonal complement K.
class LagrangianProjection
{
public:
  // Throws InvalidInput when fiber is not c-Lagrangian for space.omega().
  LagrangianProjection(CSymplecticSpace space, Subspace fiber, double tol = kDefaultTol);

  const CSymplecticSpace &space() const { return space_; }
  const Subspace &fiber() const { return fiber_; }
  const QuotientModel &quotient() const { return quotient_; }

  int dim() const { return space_.dim(); }
  int base_dim() const { return static_cast<int>(quotient_.projection.rows()); }
  // m x k orthonormal basis of K; projection() * base_basis() = Id.
  Eigen::MatrixXd base_basis() const { return quotient_.projection.transpose(); }
  // m x (m - k) orthonormal basis of L; projection() * fiber_basis() = 0.
  const Eigen::MatrixXd &fiber_basis() const { return fiber_basis_; }
  const Eigen::MatrixXd &projection() const { return quotient_.projection; }
  const ComplexStructure &base_structure() const { return quotient_.structure; }

private:
  CSymplecticSpace space_;
  Subspace fiber_;
  Eigen::MatrixXd fiber_basis_;
  QuotientModel quotient_;
};

// Real linear map s : K -> V with projection o s = Id.
class LinearSection
{
public:
  LinearSection(LagrangianProjection projection, Eigen::MatrixXd map, double tol = 1e-9);

  // s = inclusion of K plus a shift into the fiber: map = Kb + Lb * offset.
  static LinearSection with_fiber_offset(LagrangianProjection projection,
                                         const Eigen::MatrixXd &offset);

  const LagrangianProjection &projection() const { return projection_; }
  const Eigen::MatrixXd &map() const { return map_; }

private:
  LagrangianProjection projection_;
  Eigen::MatrixXd map_;
};

// Max coefficient norms of the type components of a 2-form. The p-th entry is (p, 2-p).
struct TypeNorms
{
  double norm20 = 0.0;
  double norm11 = 0.0;
  double norm02 = 0.0;
};

TypeNorms type_norms(const ComplexTwoForm &form, const ComplexStructure &structure);

struct SectionForm
{
  ComplexTwoForm form;  // s^* Omega on K coordinates
  TypeNorms types;  // with respect to the quotient structure
};

// Throws ConsistencyError when the (0,2) part exceeds tol * max(1, max|form|).
SectionForm section_form(const LinearSection &s, double tol = kDefaultTol);

// Omega + t pi^* gamma. Throws InvalidInput when the (0,2) part of gamma exceeds
// tol * max(1, max|gamma|), and ConsistencyError when the result fails either c-symplectic
// criterion.
ComplexTwoForm deform(const LagrangianProjection &p, const ComplexTwoForm &gamma, cplx t,
                      double tol = kDefaultTol);

// Omega_t = Omega + t pi^* gamma with gamma validated once.
class DeformationFamily
{
public:
  DeformationFamily(LagrangianProjection projection, ComplexTwoForm gamma,
                    double tol = kDefaultTol);

  const LagrangianProjection &projection() const { return projection_; }
  const ComplexTwoForm &gamma() const { return gamma_; }
  // pi^* gamma on V.
  const ComplexTwoForm &pulled_back_gamma() const { return pulled_; }

  // Omega itself at t = 0; no c-symplectic check.
  ComplexTwoForm at(cplx t) const;

private:
  LagrangianProjection projection_;
  ComplexTwoForm gamma_;
  ComplexTwoForm pulled_;
};

std::vector<cplx> default_t_samples();

struct PreservanceSample
{
  cplx t;
  bool c_symplectic = false;
  double fiber_isotropy = 0.0;  // (a) max|Lb^T A_t Lb| / max|A_t|
  double fiber_structure = 0.0;  // (b) I_t|_L versus I_0|_L, including invariance of L
  double quotient_structure = 0.0;  // (c) inherited structures on K
};

struct PreservanceReport
{
  std::vector<PreservanceSample> samples;
  double max_fiber_isotropy = 0.0;
  double max_fiber_structure = 0.0;
  double max_quotient_structure = 0.0;
  bool pass = false;

  double max_residual() const;
};

// Residuals are infinite for samples where Omega_t fails to be c-symplectic.
PreservanceReport verify_preservance(const DeformationFamily &family,
                                     const std::vector<cplx> &t_samples = default_t_samples(),
                                     double tol = 1e-9);

struct HolomorphizedSection
{
  ComplexTwoForm eta;  // s^* Omega
  ComplexTwoForm omega_prime;  // Omega - pi^* eta
  double graph_vanishing = 0.0;  // (i) max|S^T A' S| / max|A'|
  double graph_lagrangian = 0.0;  // (ii) invariance of s(K) under I', zero if c-Lagrangian
  bool graph_is_lagrangian = false;
  double intertwining = 0.0;  // (iii) max|I' S - S I_quot|
  bool pass = false;

  double max_residual() const;
};

HolomorphizedSection holomorphize_section(const LinearSection &s, double tol = 1e-9);

}  // namespace csympl

#endif
