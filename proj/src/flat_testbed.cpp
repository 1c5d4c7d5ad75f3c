#include "csympl/flat_testbed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "csympl/errors.hpp"

namespace csympl::testbed
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI(0.0, 1.0);

bool is_integer(double v) { return std::floor(v) == v; }

ComplexTwoForm base_pulled_back(const KForm &eta_base)
{
  // pi : R^4 -> R^2 keeps (x1, y1).
  Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(kBaseDim, kTotalDim);
  pi(0, 0) = 1.0;
  pi(1, 1) = 1.0;
  return pullback(pi, ComplexTwoForm::from_kform(eta_base));
}

}  // namespace

TorusGrid::TorusGrid(int resolution, std::vector<int> axes) : n_(resolution), axes_(std::move(axes))
{
  if (n_ < 8 || n_ % 2 != 0)
    throw InvalidInput("TorusGrid: resolution must be even and at least 8");
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (axes_[i] < 0 || axes_[i] >= kTotalDim)
      throw InvalidInput("TorusGrid: axis out of range");
    if (i > 0 && axes_[i] <= axes_[i - 1])
      throw InvalidInput("TorusGrid: axes must be strictly increasing");
  }
  size_ = 1;
  for (std::size_t i = 0; i < axes_.size(); ++i)
    size_ *= static_cast<std::size_t>(n_);
}

bool TorusGrid::depends_on(int axis) const
{
  return std::find(axes_.begin(), axes_.end(), axis) != axes_.end();
}

std::vector<int> TorusGrid::multi_index(std::size_t node) const
{
  std::vector<int> index(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    index[i] = static_cast<int>(node % static_cast<std::size_t>(n_));
    node /= static_cast<std::size_t>(n_);
  }
  return index;
}

std::size_t TorusGrid::node(const std::vector<int> &index) const
{
  std::size_t node = 0;
  for (std::size_t i = axes_.size(); i-- > 0;) {
    const int wrapped = ((index[i] % n_) + n_) % n_;
    node = node * static_cast<std::size_t>(n_) + static_cast<std::size_t>(wrapped);
  }
  return node;
}

std::size_t TorusGrid::shifted(std::size_t node_id, int axis, int step) const
{
  const auto it = std::find(axes_.begin(), axes_.end(), axis);
  if (it == axes_.end())
    throw InvalidInput("TorusGrid::shifted: axis is not a grid axis");
  auto index = multi_index(node_id);
  index[static_cast<std::size_t>(it - axes_.begin())] += step;
  return node(index);
}

std::array<double, kTotalDim> TorusGrid::point(std::size_t node_id) const
{
  std::array<double, kTotalDim> p{};
  const auto index = multi_index(node_id);
  for (std::size_t i = 0; i < axes_.size(); ++i)
    p[static_cast<std::size_t>(axes_[i])] = index[i] * spacing();
  return p;
}

SmoothSection::SmoothSection(cplx winding_x, cplx winding_y, std::vector<Mode> modes)
  : winding_x_(winding_x), winding_y_(winding_y), modes_(std::move(modes))
{
  for (const cplx w : {winding_x_, winding_y_})
    if (!is_integer(w.real()) || !is_integer(w.imag()))
      throw InvalidInput("SmoothSection: windings must be Gaussian integers");
}

SmoothSection SmoothSection::random(Rng &rng, int max_mode, double amplitude)
{
  std::vector<Mode> modes;
  for (int k2 = -max_mode; k2 <= max_mode; ++k2)
    for (int k1 = -max_mode; k1 <= max_mode; ++k1) {
      const double decay = 1.0 / (1.0 + k1 * k1 + k2 * k2);
      modes.push_back({k1, k2, amplitude * decay * rng.complex_normal()});
    }
  return SmoothSection(0.0, 0.0, std::move(modes));
}

cplx SmoothSection::value(double x1, double y1) const
{
  cplx s = winding_x_ * x1 + winding_y_ * y1;
  for (const auto &m : modes_)
    s += m.coeff * std::exp(kI * (kTwoPi * (m.k1 * x1 + m.k2 * y1)));
  return s;
}

std::array<cplx, 2> SmoothSection::gradient(double x1, double y1) const
{
  std::array<cplx, 2> g{winding_x_, winding_y_};
  for (const auto &m : modes_) {
    const cplx e = m.coeff * std::exp(kI * (kTwoPi * (m.k1 * x1 + m.k2 * y1))) * kI * kTwoPi;
    g[0] += e * static_cast<double>(m.k1);
    g[1] += e * static_cast<double>(m.k2);
  }
  return g;
}

Eigen::Matrix<double, 4, 2> SmoothSection::differential(double x1, double y1) const
{
  const auto g = gradient(x1, y1);
  Eigen::Matrix<double, 4, 2> d;
  d << 1.0, 0.0, 0.0, 1.0, g[0].real(), g[1].real(), g[0].imag(), g[1].imag();
  return d;
}

ComplexTwoForm standard_form() { return ComplexTwoForm(q_block()); }

Subspace fiber_subspace()
{
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(kTotalDim, 2);
  b(2, 0) = 1.0;
  b(3, 1) = 1.0;
  return Subspace::real(b);
}

KForm section_form_at(const SmoothSection &sigma, double x1, double y1)
{
  const Eigen::MatrixXd d = sigma.differential(x1, y1);
  return pullback(d, standard_form()).to_kform();
}

SectionFormField sample_section_form(const SmoothSection &sigma, int resolution)
{
  const TorusGrid grid = TorusGrid::base(resolution);
  const ComplexStructure base = ComplexStructure::standard(kBaseDim);
  std::vector<KForm> values;
  values.reserve(grid.size());
  double max_02 = 0.0;
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const auto p = grid.point(node);
    KForm eta = section_form_at(sigma, p[0], p[1]);
    max_02 = std::max(max_02, hodge_decompose(eta, base).component(0).max_norm());
    values.push_back(std::move(eta));
  }
  return {FormField(grid, TensorKind::Form, std::move(values)), max_02};
}

FormField exterior_derivative_fd(const FormField &field)
{
  if (field.size() == 0)
    throw InvalidInput("exterior_derivative_fd: empty field");
  const int dim = field[0].dim();
  const int degree = field[0].degree();
  const KForm zero(dim, degree);
  std::vector<KForm> out;
  out.reserve(field.size());
  for (std::size_t node = 0; node < field.size(); ++node) {
    KForm d = degree + 1 <= dim ? KForm(dim, degree + 1) : wedge(KForm(dim, 1), zero);
    if (!d.collapsed())
      for (int a : field.grid().axes()) {
        if (a >= dim)
          throw InvalidInput("exterior_derivative_fd: grid axis outside the form's dimension");
        d += wedge(KForm::monomial(dim, {a}), field.derivative(node, a, zero));
      }
    out.push_back(std::move(d));
  }
  return FormField(field.grid(), TensorKind::Form, std::move(out));
}

InducedField structure_field(const FormField &omega)
{
  std::vector<Eigen::MatrixXd> values;
  values.reserve(omega.size());
  std::vector<std::size_t> flagged;
  for (std::size_t node = 0; node < omega.size(); ++node) {
    const ComplexTwoForm form = ComplexTwoForm::from_kform(omega[node]);
    try {
      values.push_back(induced_complex_structure(form).matrix());
    } catch (const InvalidInput &) {
      flagged.push_back(node);
      values.push_back(Eigen::MatrixXd::Constant(form.dim(), form.dim(),
                                                 std::numeric_limits<double>::quiet_NaN()));
    }
  }
  return {StructureField(omega.grid(), TensorKind::Endomorphism, std::move(values)),
          std::move(flagged)};
}

FormField deformed_form_field(const FormField &eta, cplx t)
{
  const ComplexTwoForm omega = standard_form();
  std::vector<KForm> values;
  values.reserve(eta.size());
  for (std::size_t node = 0; node < eta.size(); ++node)
    values.push_back((omega + t * base_pulled_back(eta[node])).to_kform());
  return FormField(eta.grid(), TensorKind::Form, std::move(values));
}

InducedField deformed_structure_field(const FormField &eta, cplx t)
{
  return structure_field(deformed_form_field(eta, t));
}

FormField twisted_form_field(const SmoothSection &sigma, cplx t, int resolution, double epsilon)
{
  const TorusGrid grid = TorusGrid::base(resolution);
  const ComplexTwoForm omega = standard_form();
  std::vector<KForm> values;
  values.reserve(grid.size());
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const auto p = grid.point(node);
    const double x1 = p[0], y1 = p[1];
    Eigen::MatrixXd dphi = Eigen::MatrixXd::Identity(kTotalDim, kTotalDim);
    dphi(0, 1) = kTwoPi * epsilon * std::cos(kTwoPi * y1);
    dphi(2, 0) = kTwoPi * epsilon * std::cos(kTwoPi * x1);
    const KForm eta = section_form_at(sigma, x1 + epsilon * std::sin(kTwoPi * y1), y1);
    const ComplexTwoForm at_image = omega + t * base_pulled_back(eta);
    values.push_back(pullback(dphi, at_image).to_kform());
  }
  return FormField(grid, TensorKind::Form, std::move(values));
}

FormField nonclosed_form_field(cplx t, double amplitude, int resolution)
{
  const TorusGrid grid(resolution, {2});
  const ComplexTwoForm omega = standard_form();
  std::vector<KForm> values;
  values.reserve(grid.size());
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const double x2 = grid.point(node)[2];
    const cplx c = t * amplitude * std::cos(kTwoPi * x2);
    values.push_back(omega.to_kform() + KForm::monomial(kTotalDim, {0, 1}, c));
  }
  return FormField(grid, TensorKind::Form, std::move(values));
}

NijenhuisResult nijenhuis_norm(const StructureField &field)
{
  NijenhuisResult result;
  result.per_node.assign(field.size(), 0.0);
  if (field.size() == 0)
    return result;
  const int m = static_cast<int>(field[0].rows());
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(m, m);
  std::vector<Eigen::MatrixXd> di(static_cast<std::size_t>(m));
  for (std::size_t node = 0; node < field.size(); ++node) {
    const Eigen::MatrixXd &I = field[node];
    for (int c = 0; c < m; ++c)
      di[static_cast<std::size_t>(c)] = field.derivative(node, c, zero);
    double worst = 0.0;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        // N^d_ab = I^c_a d_c I^d_b - I^c_b d_c I^d_a + I^d_e d_b I^e_a - I^d_e d_a I^e_b
        Eigen::VectorXd n = Eigen::VectorXd::Zero(m);
        for (int c = 0; c < m; ++c) {
          const auto &dc = di[static_cast<std::size_t>(c)];
          n += I(c, a) * dc.col(b) - I(c, b) * dc.col(a);
        }
        n += I * di[static_cast<std::size_t>(b)].col(a) - I * di[static_cast<std::size_t>(a)].col(b);
        worst = std::max(worst, n.norm());
      }
    result.per_node[node] = worst;
    result.max_norm = std::max(result.max_norm, worst);
  }
  return result;
}

SectionCertificate verify_section_holomorphic(const SmoothSection &sigma, int resolution, cplx t)
{
  const auto sampled = sample_section_form(sigma, resolution);
  const auto induced = deformed_structure_field(sampled.eta, t);
  const Eigen::Matrix2d j = ComplexStructure::standard(kBaseDim).matrix();
  const TorusGrid &grid = sampled.eta.grid();
  SectionCertificate cert;
  cert.max_02 = sampled.max_02;
  cert.flagged = induced.flagged;
  cert.per_node.assign(grid.size(), 0.0);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const auto p = grid.point(node);
    const Eigen::Matrix<double, 4, 2> d = sigma.differential(p[0], p[1]);
    const Eigen::Matrix<double, 4, 2> r = induced.structure[node] * d - d * j;
    const double res = r.cwiseAbs().maxCoeff();
    cert.per_node[node] = std::isnan(res) ? std::numeric_limits<double>::infinity() : res;
    cert.max_residual = std::max(cert.max_residual, cert.per_node[node]);
  }
  return cert;
}

void write_node_csv(std::ostream &out, const TorusGrid &grid, const std::vector<std::string> &names,
                    const std::vector<const std::vector<double> *> &columns)
{
  out << "node,x1,y1,x2,y2";
  for (const auto &n : names)
    out << ',' << n;
  out << '\n';
  out.precision(17);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const auto p = grid.point(node);
    out << node << ',' << p[0] << ',' << p[1] << ',' << p[2] << ',' << p[3];
    for (const auto *col : columns)
      out << ',' << (*col)[node];
    out << '\n';
  }
}

}  // namespace csympl::testbed
