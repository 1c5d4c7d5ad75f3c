#include <gtest/gtest.h>

#include "csympl/deformation.hpp"
#include "csympl/errors.hpp"
#include "csympl/generators.hpp"
#include "oracles.hpp"

using namespace csympl;

namespace
{

template <class M>
double max_abs(const Eigen::MatrixBase<M> &m)
{
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

// Canonical form on R^{4n} fibered over the z_{2j+1} coordinates.
LagrangianProjection canonical_projection(int n)
{
  const int m = 4 * n;
  Eigen::MatrixXd fiber = Eigen::MatrixXd::Zero(m, 2 * n);
  for (int j = 0; j < n; ++j) {
    fiber(4 * j + 2, 2 * j) = 1.0;
    fiber(4 * j + 3, 2 * j + 1) = 1.0;
  }
  return LagrangianProjection(CSymplecticSpace(canonical_form(n)), Subspace::real(fiber));
}

LagrangianProjection random_projection(Rng &rng, int n)
{
  CSymplecticSpace space(gen::c_symplectic(rng, n).omega);
  Subspace L = gen::random_maximal_isotropic(rng, space.omega());
  return LagrangianProjection(std::move(space), std::move(L));
}

Eigen::MatrixXd random_real(Rng &rng, int rows, int cols)
{
  Eigen::MatrixXd v(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i)
      v(i, j) = rng.normal();
  return v;
}

}  // namespace

TEST(Projection, RejectsNonLagrangianFiber)
{
  Eigen::MatrixXd mixed = Eigen::MatrixXd::Zero(4, 2);
  mixed(0, 0) = 1.0;
  mixed(2, 1) = 1.0;
  EXPECT_THROW(LagrangianProjection(CSymplecticSpace(canonical_form(1)), Subspace::real(mixed)),
               InvalidInput);
}

TEST(Section, RejectsMapsThatAreNotRightInverses)
{
  const LagrangianProjection p = canonical_projection(1);
  EXPECT_THROW(LinearSection(p, 2.0 * p.base_basis()), InvalidInput);
  EXPECT_NO_THROW(LinearSection(p, p.base_basis()));
}

TEST(SectionForm, ComplexLinearSectionIsPureTwoZero)
{
  const LagrangianProjection p = canonical_projection(2);
  // s(v) = v + A v with A: e_x1 -> e_x4, e_y1 -> e_y4, which commutes with the structure.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(8, 8);
  a(6, 0) = 1.0;
  a(7, 1) = 1.0;
  const LinearSection s(p, (Eigen::MatrixXd::Identity(8, 8) + a) * p.base_basis());
  const SectionForm f = section_form(s);
  EXPECT_GT(f.types.norm20, 0.1);
  EXPECT_LE(f.types.norm11, 1e-12);
  EXPECT_LE(f.types.norm02, 1e-12);
}

TEST(SectionForm, EqualsPullbackAndHasNoZeroTwoPart)
{
  Rng rng(41);
  for (int n : {1, 2, 3}) {
    const LagrangianProjection p = random_projection(rng, n);
    const LinearSection s = LinearSection::with_fiber_offset(p, random_real(rng, 2 * n, 2 * n));
    const SectionForm f = section_form(s);
    const Eigen::MatrixXcd ref =
      s.map().transpose().cast<cplx>() * p.space().omega().matrix() * s.map().cast<cplx>();
    EXPECT_LE(max_abs(f.form.matrix() - ref), 1e-12 * std::max(1.0, max_abs(ref)));
    EXPECT_LE(f.types.norm02, 1e-9 * std::max(1.0, f.form.max_norm()));
  }
}

TEST(SectionForm, ThreeTermExpansionInTheFiberOffset)
{
  Rng rng(42);
  for (int n : {1, 2}) {
    const LagrangianProjection p = random_projection(rng, n);
    const Eigen::MatrixXd off = random_real(rng, 2 * n, 2 * n);
    const Eigen::MatrixXcd A = p.space().omega().matrix();
    const Eigen::MatrixXcd kb = p.base_basis().cast<cplx>();
    const Eigen::MatrixXcd tau = (p.fiber_basis() * off).cast<cplx>();
    const Eigen::MatrixXcd expect =
      kb.transpose() * A * kb + kb.transpose() * A * tau + tau.transpose() * A * kb;
    EXPECT_LE(max_abs(tau.transpose() * A * tau), 1e-12 * max_abs(A) * std::max(1.0, max_abs(off)) * max_abs(off));
    const SectionForm f = section_form(LinearSection::with_fiber_offset(p, off));
    EXPECT_LE(max_abs(f.form.matrix() - expect), 1e-10 * std::max(1.0, max_abs(expect)));
  }
}

TEST(SectionForm, AffineInTheFiberOffset)
{
  Rng rng(43);
  const LagrangianProjection p = random_projection(rng, 2);
  const Eigen::MatrixXd base = random_real(rng, 4, 4), dir = random_real(rng, 4, 4);
  const auto eta = [&](const Eigen::MatrixXd &off) {
    return section_form(LinearSection::with_fiber_offset(p, off)).form.matrix();
  };
  const Eigen::MatrixXcd e0 = eta(base), e1 = eta(base + dir);
  for (double lambda : {-2.0, 0.5, 3.0}) {
    const Eigen::MatrixXcd el = eta(base + lambda * dir);
    EXPECT_LE(max_abs(el - e0 - lambda * (e1 - e0)), 1e-10 * std::max(1.0, max_abs(e0)));
  }
}

TEST(Deform, ZeroParameterReturnsOmegaExactly)
{
  Rng rng(44);
  const LagrangianProjection p = random_projection(rng, 2);
  const ComplexTwoForm gamma = gen::form_without_02(rng, p.base_structure());
  const ComplexTwoForm w = deform(p, gamma, 0.0);
  EXPECT_TRUE(w.matrix() == p.space().omega().matrix());
  const DeformationFamily fam(p, gamma);
  EXPECT_TRUE(fam.at(0.0).matrix() == p.space().omega().matrix());
}

TEST(Deform, KaehlerTypeTermKeepsCSymplectic)
{
  const LagrangianProjection p = canonical_projection(1);
  // dx1 ^ dy1 on the base is of type (1,1).
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(2, 2);
  g(0, 1) = 1.0;
  g(1, 0) = -1.0;
  for (cplx t : default_t_samples()) {
    const ComplexTwoForm w = deform(p, ComplexTwoForm(g), t);
    EXPECT_TRUE(is_c_symplectic_rank(w).holds);
    EXPECT_TRUE(is_c_symplectic_power(w).holds);
  }
}

TEST(Deform, PureZeroTwoTermIsRejectedAndBreaksCSymplecticity)
{
  Rng rng(45);
  const LagrangianProjection p = canonical_projection(2);
  const ComplexTwoForm g = gen::form_of_type_02(rng, p.base_structure());
  ASSERT_GT(g.max_norm(), 1e-3);
  EXPECT_THROW(deform(p, g, 1.0), InvalidInput);
  const Eigen::MatrixXcd pr = p.projection().cast<cplx>();
  const ComplexTwoForm raw(p.space().omega().matrix() + pr.transpose() * g.matrix() * pr);
  EXPECT_FALSE(is_c_symplectic_power(raw).holds);
  EXPECT_FALSE(is_c_symplectic_rank(raw).holds);
}

TEST(Deform, FamilyIsAffineInT)
{
  Rng rng(46);
  const LagrangianProjection p = random_projection(rng, 2);
  const DeformationFamily fam(p, gen::form_without_02(rng, p.base_structure()));
  const cplx t(0.7, -1.3);
  const Eigen::MatrixXcd expect = p.space().omega().matrix() + t * fam.pulled_back_gamma().matrix();
  EXPECT_LE(max_abs(fam.at(t).matrix() - expect), 1e-12 * max_abs(expect));
}

TEST(Preservance, TrivialSamplesHaveZeroResidual)
{
  Rng rng(47);
  const LagrangianProjection exact = canonical_projection(2);
  const ComplexTwoForm gamma = gen::form_without_02(rng, exact.base_structure());
  const PreservanceReport at_zero = verify_preservance(DeformationFamily(exact, gamma), {0.0});
  EXPECT_TRUE(at_zero.pass);
  EXPECT_EQ(at_zero.max_residual(), 0.0);
  const PreservanceReport no_gamma = verify_preservance(DeformationFamily(exact, ComplexTwoForm::zero(4)));
  EXPECT_TRUE(no_gamma.pass);
  EXPECT_EQ(no_gamma.max_residual(), 0.0);
  // On a fiber known only to roundoff, isotropy and invariance residuals are those of Omega itself.
  const LagrangianProjection p = random_projection(rng, 2);
  const PreservanceReport r =
    verify_preservance(DeformationFamily(p, gen::form_without_02(rng, p.base_structure())), {0.0});
  EXPECT_LE(r.max_fiber_structure, 1e-13);
  EXPECT_EQ(r.max_quotient_structure, 0.0);
  EXPECT_LE(r.max_fiber_isotropy, 1e-13);
}

TEST(Preservance, RandomFamiliesPreserveFiberAndQuotientStructures)
{
  Rng rng(48);
  for (int n : {1, 2})
    for (int trial = 0; trial < 10; ++trial) {
      const LagrangianProjection p = random_projection(rng, n);
      const DeformationFamily fam(p, gen::form_without_02(rng, p.base_structure()));
      const std::vector<cplx> ts = {1.0, -1.0, cplx(0, 1), cplx(0, -1), cplx(2.0, 3.0)};
      const PreservanceReport r = verify_preservance(fam, ts);
      EXPECT_TRUE(r.pass) << r.max_residual();
      EXPECT_EQ(r.samples.size(), ts.size());
    }
}

TEST(Preservance, FiberStructureAgreesWithRealPartOracle)
{
  Rng rng(49);
  for (int trial = 0; trial < 10; ++trial) {
    const LagrangianProjection p = random_projection(rng, 2);
    const DeformationFamily fam(p, gen::form_without_02(rng, p.base_structure()));
    const Eigen::MatrixXd lb = p.fiber().real_orthonormal_basis();
    const Eigen::MatrixXd kb = p.base_basis();
    const Eigen::MatrixXd i0 = oracle::induced_from_real_parts(p.space().omega().matrix());
    for (cplx t : default_t_samples()) {
      const Eigen::MatrixXd it = oracle::induced_from_real_parts(fam.at(t).matrix());
      const Eigen::MatrixXd out = it * lb - lb * (lb.transpose() * it * lb);
      EXPECT_LE(max_abs(out), 1e-8);
      EXPECT_LE(max_abs(lb.transpose() * (it - i0) * lb), 1e-8);
      EXPECT_LE(max_abs(kb.transpose() * (it - i0) * kb), 1e-8);
    }
  }
}

TEST(Holomorphize, ComplexLinearIsotropicSectionIsAFixedPoint)
{
  const LagrangianProjection p = canonical_projection(2);
  const HolomorphizedSection h = holomorphize_section(LinearSection(p, p.base_basis()));
  EXPECT_LE(h.eta.max_norm(), 1e-15);
  EXPECT_TRUE(h.omega_prime.matrix() == p.space().omega().matrix());
  EXPECT_TRUE(h.pass);
}

TEST(Holomorphize, RandomSectionsBecomeHolomorphicLagrangian)
{
  Rng rng(50);
  for (int n : {1, 2})
    for (int trial = 0; trial < 10; ++trial) {
      const LagrangianProjection p = random_projection(rng, n);
      const LinearSection s = LinearSection::with_fiber_offset(p, random_real(rng, 2 * n, 2 * n));
      const HolomorphizedSection h = holomorphize_section(s);
      EXPECT_TRUE(h.pass) << h.max_residual();
      EXPECT_TRUE(h.graph_is_lagrangian);
      EXPECT_TRUE(oracle::sampled_maximal(h.omega_prime.matrix(), s.map(), rng));
      const Eigen::MatrixXd ip = oracle::induced_from_real_parts(h.omega_prime.matrix());
      const Eigen::MatrixXd lhs = ip * s.map();
      const Eigen::MatrixXd rhs = s.map() * p.base_structure().matrix();
      EXPECT_LE(max_abs(lhs - rhs), 1e-7 * std::max(1.0, max_abs(lhs)));
    }
}
