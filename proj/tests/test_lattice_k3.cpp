#include <gtest/gtest.h>

#include <cmath>

#include "csympl/errors.hpp"
#include "csympl/lattice_k3.hpp"

using namespace csympl;
using namespace csympl::lattice;

namespace
{

std::pair<int, int> eigen_signature(const Eigen::MatrixXd &g)
{
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues();
  int pos = 0, neg = 0;
  for (double v : ev)
    (v > 0 ? pos : neg) += std::abs(v) > 1e-9 ? 1 : 0;
  return {pos, neg};
}

IntVector unit(int rank, int i)
{
  IntVector v(static_cast<std::size_t>(rank), 0);
  v[static_cast<std::size_t>(i)] = 1;
  return v;
}

IntVector random_vector(Rng &rng, int rank, int bound)
{
  IntVector v(static_cast<std::size_t>(rank));
  for (auto &x : v)
    x = rng.uniform_int(-bound, bound);
  return v;
}

IntVector combine(const IntVector &a, const Integer &ca, const IntVector &b, const Integer &cb)
{
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = ca * a[i] + cb * b[i];
  return out;
}

}  // namespace

TEST(Lattice, BuildingBlocks)
{
  const IntegralLattice u = hyperbolic_plane();
  EXPECT_EQ(u.determinant(), -1);
  EXPECT_EQ(u.signature(), std::make_pair(1, 1));
  const IntegralLattice e8 = e8_negative();
  EXPECT_EQ(e8.rank(), 8);
  EXPECT_EQ(e8.determinant(), 1);
  EXPECT_TRUE(e8.is_even());
  EXPECT_EQ(e8.signature(), std::make_pair(0, 8));
  for (int i = 0; i < 8; ++i)
    EXPECT_EQ(e8.gram()[i][i], -2);
}

TEST(Lattice, StandardK3IsEvenUnimodularOfSignature3_19)
{
  const IntegralLattice k3 = standard_k3_lattice();
  EXPECT_EQ(k3.rank(), 22);
  EXPECT_TRUE(k3.is_even());
  EXPECT_TRUE(k3.is_unimodular());
  EXPECT_EQ(abs(k3.determinant()), 1);
  EXPECT_EQ(k3.signature(), std::make_pair(3, 19));
  EXPECT_EQ(eigen_signature(k3.gram_double()), std::make_pair(3, 19));
  EXPECT_NEAR(k3.gram_double().determinant(), static_cast<double>(k3.determinant()), 1e-6);
}

TEST(Lattice, DeterminantAndSignatureMatchFloatingPointOracle)
{
  Rng rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    const int r = 2 + trial % 5;
    IntMatrix g(static_cast<std::size_t>(r), IntVector(static_cast<std::size_t>(r)));
    for (int i = 0; i < r; ++i)
      for (int j = i; j < r; ++j)
        g[i][j] = g[j][i] = rng.uniform_int(-4, 4);
    const IntegralLattice L(g);
    const Eigen::MatrixXd gd = L.gram_double();
    EXPECT_EQ(L.determinant(), static_cast<long long>(std::llround(gd.determinant())));
    if (L.determinant() != 0)
      EXPECT_EQ(L.signature(), eigen_signature(gd));
  }
}

TEST(Lattice, RejectsNonSymmetricGram)
{
  EXPECT_THROW(IntegralLattice(IntMatrix{{0, 1}, {2, 0}}), InvalidInput);
  EXPECT_THROW(IntegralLattice(IntMatrix{{0, 1}}), InvalidInput);
}

TEST(Lattice, ArbitraryPrecisionEntries)
{
  const Integer big = Integer(1) << 80;
  const IntegralLattice L(IntMatrix{{big, 1}, {1, 0}});
  EXPECT_EQ(L.determinant(), -1);
  EXPECT_EQ(L.norm({1, 1}), big + 2);
}

TEST(Primitive, IsotropyAndContent)
{
  const IntegralLattice k3 = standard_k3_lattice();
  EXPECT_TRUE(is_primitive_isotropic(k3, unit(22, 0)));
  IntVector twice = unit(22, 0);
  twice[0] = 2;
  EXPECT_FALSE(is_primitive_isotropic(k3, twice));
  const IntVector diag = combine(unit(22, 0), 1, unit(22, 1), 1);
  EXPECT_FALSE(is_primitive_isotropic(k3, diag));
  EXPECT_THROW(is_primitive_isotropic(k3, IntVector(22, 0)), InvalidInput);
  EXPECT_EQ(content(to_int_vector({-6, 4, 0, 10})), 2);
}

TEST(DualVector, PairsToOne)
{
  EXPECT_EQ(dual_vector(hyperbolic_plane(), {1, 0}), (IntVector{0, 1}));
  const IntegralLattice k3 = standard_k3_lattice();
  Rng rng(62);
  for (int trial = 0; trial < 50; ++trial) {
    const IntVector e = random_primitive_isotropic(rng);
    const IntVector b = dual_vector(k3, e);
    EXPECT_EQ(k3.pairing(b, e), 1);
  }
  IntVector twice = unit(22, 2);
  twice[2] = 3;
  EXPECT_THROW(dual_vector(k3, twice), InvalidInput);
}

TEST(SquareMinusTwo, HyperbolicPlaneExample)
{
  const IntegralLattice u = hyperbolic_plane();
  const IntVector a = square_minus_two(u, {1, 0}, {0, 1});
  EXPECT_EQ(a, (IntVector{-1, 1}));
  EXPECT_EQ(find_section_class(u, {1, 0}), (IntVector{-1, 1}));
}

TEST(SquareMinusTwo, NormTwoInputSubtractsTwiceE)
{
  // In U + U with e = (1,0,0,0), b = (0,1,1,1) has (b,e) = 1 and (b,b) = 2, so c = 2.
  const IntegralLattice uu = orthogonal_sum({hyperbolic_plane(), hyperbolic_plane()});
  const IntVector e{1, 0, 0, 0}, b{0, 1, 1, 1};
  ASSERT_EQ(uu.norm(b), 2);
  const IntVector a = square_minus_two(uu, e, b);
  EXPECT_EQ(a, (IntVector{-2, 1, 1, 1}));
  EXPECT_EQ(uu.norm(a), -2);
  EXPECT_EQ(uu.pairing(a, e), 1);
}

TEST(SquareMinusTwo, RandomPairsInK3)
{
  const IntegralLattice k3 = standard_k3_lattice();
  Rng rng(63);
  for (int trial = 0; trial < 100; ++trial) {
    const IntVector e = random_primitive_isotropic(rng);
    const IntVector b0 = dual_vector(k3, e);
    const IntVector x = random_vector(rng, 22, 3);
    // b = b0 + x - (x, e) b0 still pairs to 1 with e.
    const IntVector b = combine(combine(b0, 1, x, 1), 1, b0, -k3.pairing(x, e));
    ASSERT_EQ(k3.pairing(b, e), 1);
    const IntVector a = square_minus_two(k3, e, b);
    EXPECT_EQ(k3.pairing(a, e), 1);
    EXPECT_EQ(k3.norm(a), -2);
    const IntVector s = find_section_class(k3, e);
    EXPECT_EQ(k3.pairing(s, e), 1);
    EXPECT_EQ(k3.norm(s), -2);
  }
}

TEST(SquareMinusTwo, RejectsBadInputs)
{
  const IntegralLattice odd(IntMatrix{{0, 1}, {1, 1}});
  EXPECT_THROW(square_minus_two(odd, {1, 0}, {0, 1}), InvalidInput);
  EXPECT_THROW(find_section_class(odd, {1, 0}), InvalidInput);
  const IntegralLattice u = hyperbolic_plane();
  EXPECT_THROW(square_minus_two(u, {1, 0}, {1, 2}), InvalidInput);
  EXPECT_THROW(square_minus_two(u, {1, 1}, {0, 1}), InvalidInput);
  EXPECT_THROW(find_section_class(u, {2, 0}), InvalidInput);
}

TEST(Isometry, TransvectionsAndRandomIsometriesPreservePairings)
{
  const IntegralLattice k3 = standard_k3_lattice();
  Rng rng(64);
  IntVector a(22, 0);
  a[3] = 1;
  a[10] = -1;
  const IntVector f = unit(22, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const IntVector x = random_vector(rng, 22, 5), y = random_vector(rng, 22, 5);
    EXPECT_EQ(k3.pairing(eichler_transvection(k3, f, a, x), eichler_transvection(k3, f, a, y)),
              k3.pairing(x, y));
    const IntMatrix g = random_k3_isometry(rng);
    EXPECT_EQ(k3.pairing(lattice::apply(g, x), lattice::apply(g, y)), k3.pairing(x, y));
    for (int j = 0; j < 22; ++j)
      EXPECT_EQ(lattice::apply(g, unit(22, j)), g[j]);
    EXPECT_TRUE(is_primitive_isotropic(k3, g[0]));
  }
  EXPECT_THROW(eichler_transvection(k3, f, unit(22, 1), unit(22, 1)), InvalidInput);
}

TEST(Period, ValidationOfClasses)
{
  const IntegralLattice uu = orthogonal_sum({hyperbolic_plane(), hyperbolic_plane()});
  // Omega = p + i q with p = (1,1,0,0), q = (0,0,1,1): (p,p) = (q,q) = 2, (p,q) = 0.
  Eigen::VectorXcd omega(4);
  omega << 1.0, 1.0, std::complex<double>(0, 1), std::complex<double>(0, 1);
  EXPECT_NO_THROW(PeriodPoint(uu, omega));
  Eigen::VectorXcd bad = omega;
  bad(2) = 0.0;
  EXPECT_THROW(PeriodPoint(uu, bad), InvalidInput);
  EXPECT_THROW(PeriodPoint(uu, omega.conjugate() * 0.0), InvalidInput);
  EXPECT_THROW(PeriodPoint(uu, omega.head(3)), InvalidInput);
}

TEST(Twistor, ParameterSatisfiesSubstitution)
{
  const IntegralLattice k3 = standard_k3_lattice();
  Rng rng(65);
  for (int trial = 0; trial < 20; ++trial) {
    const IntMatrix g = random_k3_isometry(rng);
    const PeriodPoint p = random_period_point(rng, g);
    const IntVector s = find_section_class(k3, g[0]);
    const auto t = twistor_parameter(k3, s, g[0], p.omega_class());
    EXPECT_LE(twistor_substitution_residual(k3, s, g[0], p.omega_class(), t), 1e-12);
    const Eigen::VectorXcd shifted = p.omega_class() - t * to_double(g[0]).cast<std::complex<double>>();
    const Eigen::VectorXd gs = k3.gram_double() * to_double(s);
    EXPECT_NEAR(std::abs(gs.cast<std::complex<double>>().dot(shifted)), 0.0,
                1e-10 * std::max(1.0, shifted.norm() * gs.norm()));
  }
  EXPECT_THROW(twistor_parameter(k3, unit(22, 0), unit(22, 0), Eigen::VectorXcd::Zero(22)), InvalidInput);
}

TEST(Twistor, CurvePlaneIsPositiveWithConstantGram)
{
  const IntegralLattice k3 = standard_k3_lattice();
  Rng rng(66);
  const IntMatrix g = random_k3_isometry(rng);
  const PeriodPoint p = random_period_point(rng, g);
  const TwistorPlane base = twistor_curve_plane(p, g[0], 0.0, 0.0);
  EXPECT_GT(base.gram.determinant(), 0.0);
  EXPECT_GT(base.gram(0, 0), 0.0);
  const Eigen::VectorXd re = 2.0 * p.omega_class().real();
  EXPECT_LE((base.v1 - re).cwiseAbs().maxCoeff(), 1e-14);
  for (double x : {-2.0, 0.5, 1.7})
    for (double y : {-1.0, 2.0}) {
      const TwistorPlane pl = twistor_curve_plane(p, g[0], x, y);
      EXPECT_LE((pl.gram - base.gram).cwiseAbs().maxCoeff(), 1e-9 * base.gram.cwiseAbs().maxCoeff());
    }
  EXPECT_THROW(twistor_curve_plane(p, unit(22, 3) , 0.0, 0.0), InvalidInput);
  IntVector nonisotropic = g[0];
  nonisotropic[6] += 1;
  EXPECT_THROW(twistor_curve_plane(p, nonisotropic, 0.0, 0.0), InvalidInput);
}
