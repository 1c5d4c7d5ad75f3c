#ifndef CSYMPL_GENERATORS_HPP
#define CSYMPL_GENERATORS_HPP

#include <Eigen/Dense>

#include "csympl/csymplectic.hpp"
#include "csympl/random.hpp"

namespace csympl::gen
{

// Gaussian m x m matrix, redrawn until its 2-norm condition number is at most max_cond.
Eigen::MatrixXd invertible(Rng &rng, int m, double max_cond = 1e3);

Eigen::MatrixXcd complex_antisymmetric(Rng &rng, int m);

struct CSymplecticInstance
{
  ComplexTwoForm omega;  // pullback(change_of_basis, blkdiag(Q..Q))
  Eigen::MatrixXd change_of_basis;
};

// Every c-symplectic form arises as a pullback of blkdiag(Q, ..., Q).
CSymplecticInstance c_symplectic(Rng &rng, int n);

// Pullback of the standard real symplectic form e^12 + e^34 + ...
ComplexTwoForm real_symplectic(Rng &rng, int m);

// Real form of rank m/2: its complexified kernel has the right dimension but is real.
ComplexTwoForm real_half_rank(Rng &rng, int m);

// Sum of (m/4 - 1) products of random complex 1-forms: kernel too large.
ComplexTwoForm low_rank_complex(Rng &rng, int m);

// c-symplectic instance plus a Gaussian perturbation of relative size `size`.
ComplexTwoForm perturbed_c_symplectic(Rng &rng, int n, double size = 1e-3);

struct StructuredForm
{
  ComplexStructure structure;  // J = P^{-1} J0 P
  ComplexTwoForm omega;  // nondegenerate (2,0)-form for J
};

// A random structure J with a random nondegenerate J-(2,0)-form on R^{4n}.
StructuredForm form_of_type_20(Rng &rng, int n);

// Maximal isotropic subspace grown from random vectors in successive Omega-orthogonals.
// Does not use the induced complex structure.
Subspace random_maximal_isotropic(Rng &rng, const ComplexTwoForm &omega, double tol = kDefaultTol);

// Random 2-form on K coordinates of type (2,0)+(1,1) for the given structure.
ComplexTwoForm form_without_02(Rng &rng, const ComplexStructure &structure);

// Random 2-form of pure type (0,2) for the given structure (zero when dim < 4).
ComplexTwoForm form_of_type_02(Rng &rng, const ComplexStructure &structure);

}  // namespace csympl::gen

#endif
