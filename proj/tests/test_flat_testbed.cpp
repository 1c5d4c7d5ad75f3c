#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "csympl/deformation.hpp"
#include "csympl/errors.hpp"
#include "csympl/flat_testbed.hpp"
#include "oracles.hpp"

using namespace csympl;
using namespace csympl::testbed;

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SmoothSection sample_section(std::uint64_t seed)
{
  Rng rng(seed);
  return SmoothSection::random(rng, 3);
}

// Max error of the finite-difference d against the analytic d of a field on axes {0, 2}.
template <class Field, class Exact>
double fd_error(int n, Field field_at, Exact exact_at)
{
  const TorusGrid grid(n, {0, 2});
  std::vector<KForm> values;
  for (std::size_t node = 0; node < grid.size(); ++node)
    values.push_back(field_at(grid.point(node)));
  const FormField d = exterior_derivative_fd(FormField(grid, TensorKind::Form, std::move(values)));
  double err = 0.0;
  for (std::size_t node = 0; node < grid.size(); ++node)
    err = std::max(err, (d[node] - exact_at(grid.point(node))).max_norm());
  return err;
}

}  // namespace

TEST(TorusGrid, ValidatesResolutionAndWrapsIndices)
{
  EXPECT_THROW(TorusGrid(7, {0, 1}), InvalidInput);
  EXPECT_THROW(TorusGrid(6, {0, 1}), InvalidInput);
  const TorusGrid g = TorusGrid::base(8);
  EXPECT_EQ(g.size(), 64u);
  for (std::size_t node = 0; node < g.size(); ++node)
    EXPECT_EQ(g.node(g.multi_index(node)), node);
  const std::size_t last = g.node({7, 3});
  EXPECT_EQ(g.multi_index(g.shifted(last, 0, 1))[0], 0);
  EXPECT_EQ(g.point(g.node({4, 2}))[1], 0.25);
  EXPECT_EQ(g.point(g.node({4, 2}))[2], 0.0);
  EXPECT_TRUE(g.depends_on(1));
  EXPECT_FALSE(g.depends_on(2));
}

TEST(SmoothSection, RejectsNonGaussianIntegerWindings)
{
  EXPECT_THROW(SmoothSection(0.5, 0.0, {}), InvalidInput);
  EXPECT_THROW(SmoothSection(0.0, cplx(0.0, 0.3), {}), InvalidInput);
  EXPECT_NO_THROW(SmoothSection(cplx(1, 2), cplx(-2, 1), {}));
}

TEST(SmoothSection, GradientMatchesCentralDifferencesAndWindingsArePeriods)
{
  const SmoothSection s(cplx(1, 1), cplx(0, 2), sample_section(3).modes());
  const double h = 1e-5;
  for (double x : {0.1, 0.37, 0.8})
    for (double y : {0.05, 0.6}) {
      const auto g = s.gradient(x, y);
      const cplx gx = (s.value(x + h, y) - s.value(x - h, y)) / (2 * h);
      const cplx gy = (s.value(x, y + h) - s.value(x, y - h)) / (2 * h);
      EXPECT_NEAR(std::abs(g[0] - gx), 0.0, 1e-6 * std::max(1.0, std::abs(gx)));
      EXPECT_NEAR(std::abs(g[1] - gy), 0.0, 1e-6 * std::max(1.0, std::abs(gy)));
      EXPECT_NEAR(std::abs(s.value(x + 1, y) - s.value(x, y) - s.winding_x()), 0.0, 1e-10);
      EXPECT_NEAR(std::abs(s.value(x, y + 1) - s.value(x, y) - s.winding_y()), 0.0, 1e-10);
    }
}

TEST(SectionForm, MatchesHandDerivedCoefficient)
{
  const SmoothSection s = sample_section(4);
  for (double x : {0.0, 0.3})
    for (double y : {0.2, 0.9}) {
      const auto g = s.gradient(x, y);
      const KForm eta = section_form_at(s, x, y);
      EXPECT_EQ(eta.dim(), kBaseDim);
      EXPECT_NEAR(std::abs(eta({0, 1}) - oracle::section_form_xy(g[0], g[1])), 0.0, 1e-12);
    }
}

TEST(SectionForm, ConstantAndLinearHolomorphicSectionsGiveZero)
{
  const SmoothSection constant(0.0, 0.0, {{0, 0, cplx(2, 1)}});
  const SectionFormField c = sample_section_form(constant, 16);
  const cplx m(1, 2);
  const SmoothSection linear(m, cplx(0, 1) * m, {});
  const SectionFormField l = sample_section_form(linear, 16);
  for (std::size_t node = 0; node < c.eta.size(); ++node) {
    EXPECT_LE(c.eta[node].max_norm(), 1e-15);
    EXPECT_LE(l.eta[node].max_norm(), 1e-15);
  }
  const SectionCertificate cert = verify_section_holomorphic(linear, 16);
  EXPECT_LE(cert.max_residual, 1e-12);
  EXPECT_TRUE(cert.flagged.empty());
}

TEST(SectionForm, NoZeroTwoPartOnTwoDimensionalBase)
{
  EXPECT_LE(sample_section_form(sample_section(5), 32).max_02, 1e-12);
}

TEST(Structure, AgreesWithHandDerivedFormula)
{
  const SmoothSection s = sample_section(6);
  const SectionFormField f = sample_section_form(s, 16);
  for (cplx t : {cplx(-1.0), cplx(0.5, 2.0)}) {
    const InducedField I = deformed_structure_field(f.eta, t);
    ASSERT_TRUE(I.flagged.empty());
    for (std::size_t node = 0; node < f.eta.size(); node += 7) {
      const Eigen::Matrix4d ref = oracle::structure_with_base_term(t * f.eta[node]({0, 1}));
      EXPECT_LE((I.structure[node] - ref).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
    }
  }
}

TEST(Structure, FiberAndQuotientStructuresAreUnchangedPointwise)
{
  const SectionFormField f = sample_section_form(sample_section(7), 16);
  const InducedField I = deformed_structure_field(f.eta, -1.0);
  const Eigen::Matrix4d j = ComplexStructure::standard(4).matrix();
  for (std::size_t node = 0; node < f.eta.size(); ++node) {
    const Eigen::MatrixXd &m = I.structure[node];
    EXPECT_LE(m.block(0, 2, 2, 2).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((m.block(2, 2, 2, 2) - j.block(2, 2, 2, 2)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((m.block(0, 0, 2, 2) - j.block(0, 0, 2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Structure, PointwiseAgreementWithDeformationModule)
{
  const SmoothSection s = sample_section(8);
  const LagrangianProjection p(CSymplecticSpace(standard_form()), fiber_subspace());
  const Eigen::MatrixXd c = p.base_basis().topRows(2);
  const SectionFormField f = sample_section_form(s, 16);
  const InducedField I = deformed_structure_field(f.eta, -1.0);
  for (std::size_t node = 0; node < f.eta.size(); node += 5) {
    const auto pt = f.eta.grid().point(node);
    const LinearSection sec(p, Eigen::MatrixXd(s.differential(pt[0], pt[1]) * c));
    const HolomorphizedSection h = holomorphize_section(sec);
    const Eigen::MatrixXcd eta_k = c.transpose().cast<cplx>() *
                                   ComplexTwoForm::from_kform(f.eta[node]).matrix() * c.cast<cplx>();
    EXPECT_LE((h.eta.matrix() - eta_k).cwiseAbs().maxCoeff(), 1e-12);
    const Eigen::MatrixXd ip = induced_complex_structure(h.omega_prime).matrix();
    EXPECT_LE((ip - I.structure[node]).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(h.pass);
  }
}

TEST(ExteriorDerivative, ConstantFieldsAreClosedExactly)
{
  const TorusGrid g = TorusGrid::base(8);
  const FormField omega(g, TensorKind::Form, std::vector<KForm>(g.size(), standard_form().to_kform()));
  const FormField d_omega = exterior_derivative_fd(omega);
  for (const KForm &d : d_omega.values())
    EXPECT_EQ(d.max_norm(), 0.0);
}

TEST(ExteriorDerivative, SecondOrderAccurateOnASingleMode)
{
  // alpha = sin(2 pi (x1 + 2 x2)) dy1 ^ dy2.
  const auto field = [](const std::array<double, 4> &p) {
    return KForm::monomial(4, {1, 3}, std::sin(kTwoPi * (p[0] + 2 * p[2])));
  };
  const auto exact = [](const std::array<double, 4> &p) {
    const double c = kTwoPi * std::cos(kTwoPi * (p[0] + 2 * p[2]));
    return KForm::monomial(4, {0, 1, 3}, c) + KForm::monomial(4, {2, 1, 3}, 2.0 * c);
  };
  const double e16 = fd_error(16, field, exact), e32 = fd_error(32, field, exact);
  EXPECT_GT(e16, 0.0);
  EXPECT_NEAR(std::log2(e16 / e32), 2.0, 0.1);
}

TEST(ExteriorDerivative, ExactFormIsClosedToSecondOrder)
{
  // beta = d(f dy2) with f = sin(2 pi (x1 + 2 x2)), coefficients sampled analytically.
  const auto field = [](const std::array<double, 4> &p) {
    const double c = kTwoPi * std::cos(kTwoPi * (p[0] + 2 * p[2]));
    return KForm::monomial(4, {0, 3}, c) + KForm::monomial(4, {2, 3}, 2.0 * c);
  };
  const auto zero = [](const std::array<double, 4> &) { return KForm(4, 3); };
  const double e16 = fd_error(16, field, zero), e32 = fd_error(32, field, zero);
  EXPECT_LT(e32, e16);
  EXPECT_NEAR(std::log2(e16 / e32), 2.0, 0.1);
}

TEST(Nijenhuis, ConstantStructureHasZeroTorsion)
{
  const TorusGrid g = TorusGrid::base(8);
  const StructureField f(g, TensorKind::Endomorphism,
                         std::vector<Eigen::MatrixXd>(g.size(), ComplexStructure::standard(4).matrix()));
  EXPECT_EQ(nijenhuis_norm(f).max_norm, 0.0);
}

TEST(Nijenhuis, ClosedDeformationIsIntegrable)
{
  const SectionFormField f = sample_section_form(sample_section(9), 32);
  const InducedField I = deformed_structure_field(f.eta, -1.0);
  EXPECT_LE(nijenhuis_norm(I.structure).max_norm, 1e-8);
  const FormField d_omega = exterior_derivative_fd(deformed_form_field(f.eta, -1.0));
  for (const KForm &d : d_omega.values())
    EXPECT_LE(d.max_norm(), 1e-10);
}

TEST(Nijenhuis, TwistedClosedFieldDecaysAtSecondOrder)
{
  const SmoothSection s = sample_section(10);
  const auto norm = [&](int n) {
    const FormField w = twisted_form_field(s, -1.0, n, 0.01);
    const FormField dw = exterior_derivative_fd(w);
    for (const KForm &d : dw.values())
      EXPECT_LE(d.max_norm(), 1e-10);
    return nijenhuis_norm(structure_field(w).structure).max_norm;
  };
  const double n16 = norm(16), n32 = norm(32);
  EXPECT_GT(n16, 1e-3);
  EXPECT_NEAR(std::log2(n16 / n32), 2.0, 0.3);
}

TEST(Nijenhuis, NonClosedControlConvergesToContinuumValue)
{
  const double limit = oracle::nonclosed_nijenhuis_limit(-1.0, 1.0);
  EXPECT_NEAR(limit, kTwoPi, 1e-6);
  const double n32 = nijenhuis_norm(structure_field(nonclosed_form_field(-1.0, 1.0, 32)).structure).max_norm;
  const double n64 = nijenhuis_norm(structure_field(nonclosed_form_field(-1.0, 1.0, 64)).structure).max_norm;
  EXPECT_LT(std::abs(n64 - limit), std::abs(n32 - limit));
  EXPECT_NEAR(n64 / limit, 1.0, 1e-2);
  const double half = nijenhuis_norm(structure_field(nonclosed_form_field(-1.0, 0.5, 64)).structure).max_norm;
  EXPECT_NEAR(half / oracle::nonclosed_nijenhuis_limit(-1.0, 0.5), 1.0, 1e-2);
}

TEST(Certificate, RandomSectionsAreHolomorphicLagrangian)
{
  for (std::uint64_t seed : {11u, 12u}) {
    const SectionCertificate c = verify_section_holomorphic(sample_section(seed), 32);
    EXPECT_LE(c.max_residual, 1e-8);
    EXPECT_LE(c.max_02, 1e-12);
    EXPECT_TRUE(c.flagged.empty());
    EXPECT_EQ(c.per_node.size(), 32u * 32u);
  }
}

TEST(Csv, WritesHeaderAndOneRowPerNode)
{
  const TorusGrid g = TorusGrid::base(8);
  const std::vector<double> col(g.size(), 1.5);
  std::ostringstream out;
  write_node_csv(out, g, {"value"}, {&col});
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), static_cast<long>(g.size() + 1));
  EXPECT_NE(text.substr(0, text.find('\n')).find("value"), std::string::npos);
}
