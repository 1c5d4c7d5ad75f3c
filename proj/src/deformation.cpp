#include "csympl/deformation.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "csympl/errors.hpp"

namespace csympl
{

namespace
{

double max_abs(const Eigen::MatrixXcd &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const Eigen::MatrixXd &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

LagrangianProjection::LagrangianProjection(CSymplecticSpace space, Subspace fiber, double tol)
  : space_(std::move(space)),
    fiber_(std::move(fiber)),
    fiber_basis_(fiber_.real_orthonormal_basis()),
    quotient_(quotient_complex_structure(space_, fiber_, tol))
{
}

LinearSection::LinearSection(LagrangianProjection projection, Eigen::MatrixXd map, double tol)
  : projection_(std::move(projection)), map_(std::move(map))
{
  const int m = projection_.dim();
  const int k = projection_.base_dim();
  if (map_.rows() != m || map_.cols() != k)
    throw InvalidInput("LinearSection: map must be dim x base_dim");
  const Eigen::MatrixXd e = projection_.projection() * map_ - Eigen::MatrixXd::Identity(k, k);
  if (max_abs(e) > tol * std::max(1.0, max_abs(map_)))
    throw InvalidInput("LinearSection: projection o map is not the identity");
}

LinearSection LinearSection::with_fiber_offset(LagrangianProjection projection,
                                               const Eigen::MatrixXd &offset)
{
  Eigen::MatrixXd map = projection.base_basis() + projection.fiber_basis() * offset;
  return LinearSection(std::move(projection), std::move(map));
}

TypeNorms type_norms(const ComplexTwoForm &form, const ComplexStructure &structure)
{
  const auto parts = hodge_decompose(form.to_kform(), structure);
  return {parts.component(2).max_norm(), parts.component(1).max_norm(),
          parts.component(0).max_norm()};
}

SectionForm section_form(const LinearSection &s, double tol)
{
  const auto &p = s.projection();
  ComplexTwoForm form = pullback(s.map(), p.space().omega());
  const TypeNorms types = type_norms(form, p.base_structure());
  if (types.norm02 > tol * std::max(1.0, form.max_norm())) {
    std::ostringstream msg;
    msg << "section_form: (0,2) component " << types.norm02 << " exceeds tolerance";
    throw ConsistencyError(msg.str());
  }
  return {std::move(form), types};
}

namespace
{

void require_no_02(const LagrangianProjection &p, const ComplexTwoForm &gamma, double tol)
{
  if (gamma.dim() != p.base_dim())
    throw InvalidInput("deform: gamma must live on the base");
  const TypeNorms types = type_norms(gamma, p.base_structure());
  if (types.norm02 > tol * std::max(1.0, gamma.max_norm())) {
    std::ostringstream msg;
    msg << "deform: gamma has a (0,2) component of norm " << types.norm02;
    throw InvalidInput(msg.str());
  }
}

}  // namespace

ComplexTwoForm deform(const LagrangianProjection &p, const ComplexTwoForm &gamma, cplx t,
                      double tol)
{
  require_no_02(p, gamma, tol);
  if (t == cplx(0.0))
    return p.space().omega();
  ComplexTwoForm result =
    p.space().omega() + t * pullback(p.projection(), gamma);
  const auto rank = is_c_symplectic_rank(result, tol);
  const auto power = is_c_symplectic_power(result, tol);
  if (!rank.holds || !power.holds)
    throw ConsistencyError("deform: result is not c-symplectic (" +
                           (rank.holds ? power.reason : rank.reason) + ")");
  return result;
}

DeformationFamily::DeformationFamily(LagrangianProjection projection, ComplexTwoForm gamma,
                                     double tol)
  : projection_(std::move(projection)), gamma_(std::move(gamma))
{
  require_no_02(projection_, gamma_, tol);
  pulled_ = pullback(projection_.projection(), gamma_);
}

ComplexTwoForm DeformationFamily::at(cplx t) const
{
  if (t == cplx(0.0))
    return projection_.space().omega();
  return projection_.space().omega() + t * pulled_;
}

std::vector<cplx> default_t_samples()
{
  return {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1), cplx(0.5, 0.5)};
}

double PreservanceReport::max_residual() const
{
  return std::max({max_fiber_isotropy, max_fiber_structure, max_quotient_structure});
}

PreservanceReport verify_preservance(const DeformationFamily &family,
                                     const std::vector<cplx> &t_samples, double tol)
{
  const auto &p = family.projection();
  const Eigen::MatrixXd &lb = p.fiber_basis();
  const Eigen::MatrixXd kb = p.base_basis();
  const Eigen::MatrixXd &i0 = p.space().structure().matrix();
  const Eigen::MatrixXd fiber0 = lb.transpose() * i0 * lb;
  const Eigen::MatrixXd quot0 = kb.transpose() * i0 * kb;

  PreservanceReport report;
  for (const cplx t : t_samples) {
    PreservanceSample sample;
    sample.t = t;
    const ComplexTwoForm omega_t = family.at(t);
    const double scale = std::max(omega_t.max_norm(), std::numeric_limits<double>::min());
    sample.fiber_isotropy = max_abs(Eigen::MatrixXcd(lb.transpose() * omega_t.matrix() * lb)) / scale;
    sample.c_symplectic = is_c_symplectic(omega_t, kDefaultTol);
    if (!sample.c_symplectic) {
      sample.fiber_structure = kInf;
      sample.quotient_structure = kInf;
    } else {
      const Eigen::MatrixXd it =
        t == cplx(0.0) ? i0 : induced_complex_structure(omega_t, kDefaultTol).matrix();
      const Eigen::MatrixXd fiber_t = lb.transpose() * it * lb;
      const double invariance = max_abs(Eigen::MatrixXd(it * lb - lb * fiber_t));
      sample.fiber_structure = std::max(invariance, max_abs(Eigen::MatrixXd(fiber_t - fiber0)));
      sample.quotient_structure =
        max_abs(Eigen::MatrixXd(kb.transpose() * it * kb - quot0));
    }
    report.max_fiber_isotropy = std::max(report.max_fiber_isotropy, sample.fiber_isotropy);
    report.max_fiber_structure = std::max(report.max_fiber_structure, sample.fiber_structure);
    report.max_quotient_structure =
      std::max(report.max_quotient_structure, sample.quotient_structure);
    report.samples.push_back(sample);
  }
  report.pass = std::all_of(report.samples.begin(), report.samples.end(),
                            [](const PreservanceSample &s) { return s.c_symplectic; }) &&
                report.max_residual() <= tol;
  return report;
}

double HolomorphizedSection::max_residual() const
{
  return std::max({graph_vanishing, graph_lagrangian, intertwining});
}

HolomorphizedSection holomorphize_section(const LinearSection &s, double tol)
{
  const auto &p = s.projection();
  const Eigen::MatrixXd &map = s.map();
  HolomorphizedSection out;
  out.eta = section_form(s).form;
  out.omega_prime = deform(p, out.eta, cplx(-1.0, 0.0));

  const double scale =
    std::max(out.omega_prime.max_norm(), std::numeric_limits<double>::min());
  out.graph_vanishing =
    pullback(map, out.omega_prime).max_norm() / scale;

  const Subspace graph = Subspace::real(map);
  out.graph_is_lagrangian = is_c_lagrangian(graph, out.omega_prime, tol);
  const Eigen::MatrixXd ip = induced_complex_structure(out.omega_prime).matrix();
  const Eigen::MatrixXd image = ip * map;
  out.graph_lagrangian = out.graph_is_lagrangian ? graph.residual_outside(image.cast<cplx>()) : kInf;

  out.intertwining =
    max_abs(Eigen::MatrixXd(image - map * p.base_structure().matrix()));
  out.pass = out.graph_is_lagrangian && out.max_residual() <= tol;
  return out;
}

}  // namespace csympl
