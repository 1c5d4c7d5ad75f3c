#ifndef CSYMPL_FLAT_TESTBED_HPP
#define CSYMPL_FLAT_TESTBED_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csympl/csymplectic.hpp"
#include "csympl/random.hpp"

namespace csympl::testbed
{

// Total space X = C^2 / Z^4 with coordinates (x1, y1, x2, y2) in [0,1)^4, z1 = x1 + i y1 on
// the base E = C / Z^2 and z2 = x2 + i y2 on the fiber. Omega = dz1 ^ dz2.
inline constexpr int kTotalDim = 4;
inline constexpr int kBaseDim = 2;

// Periodic grid with N nodes per coordinate along the axes a field depends on; along the
// remaining coordinates the field is constant.
class TorusGrid
{
public:
  // Rejects odd N, N < 8, and axes that are out of range, unsorted or repeated.
  TorusGrid(int resolution, std::vector<int> axes);

  static TorusGrid base(int resolution) { return TorusGrid(resolution, {0, 1}); }

  int resolution() const { return n_; }
  double spacing() const { return 1.0 / n_; }
  const std::vector<int> &axes() const { return axes_; }
  bool depends_on(int axis) const;
  std::size_t size() const { return size_; }

  // Multi-index over the dependent axes, in the order of axes(); the first axis varies
  // fastest.
  std::vector<int> multi_index(std::size_t node) const;
  std::size_t node(const std::vector<int> &index) const;
  // Neighbour of node along an ambient coordinate axis (which must be dependent), wrapping.
  std::size_t shifted(std::size_t node, int axis, int step) const;
  // Ambient coordinates of the node; non-dependent coordinates are 0.
  std::array<double, kTotalDim> point(std::size_t node) const;

private:
  int n_;
  std::vector<int> axes_;
  std::size_t size_;
};

enum class TensorKind
{
  Form,  // KForm values
  Endomorphism,  // real square matrices, column a is the image of e_a
};

// Values of a tensor field at the nodes of a grid. Value must support a - b and s * a.
template <class Value>
class GridField
{
public:
  GridField(TorusGrid grid, TensorKind kind, std::vector<Value> values)
    : grid_(std::move(grid)), kind_(kind), values_(std::move(values))
  {
  }

  const TorusGrid &grid() const { return grid_; }
  TensorKind kind() const { return kind_; }
  std::size_t size() const { return values_.size(); }
  const Value &operator[](std::size_t node) const { return values_[node]; }
  const std::vector<Value> &values() const { return values_; }

  // Centered difference along an ambient axis at a node, O(h^2). Zero along axes the field
  // does not depend on; `zero` supplies the zero value of the right shape.
  Value derivative(std::size_t node, int axis, const Value &zero) const
  {
    if (!grid_.depends_on(axis))
      return zero;
    const Value &fwd = values_[grid_.shifted(node, axis, 1)];
    const Value &bwd = values_[grid_.shifted(node, axis, -1)];
    return (0.5 * grid_.resolution()) * (fwd - bwd);
  }

private:
  TorusGrid grid_;
  TensorKind kind_;
  std::vector<Value> values_;
};

using FormField = GridField<KForm>;
using StructureField = GridField<Eigen::MatrixXd>;

// s(x1, y1) = a x1 + b y1 + sum_k c_k exp(2 pi i (k1 x1 + k2 y1)) with a, b Gaussian integers,
// so that s is a well-defined map E -> C / Z^2. The section is sigma(z1) = (z1, s(z1)).
class SmoothSection
{
public:
  struct Mode
  {
    int k1;
    int k2;
    std::complex<double> coeff;
  };

  SmoothSection() = default;
  // Rejects windings with non-integer real or imaginary parts.
  SmoothSection(std::complex<double> winding_x, std::complex<double> winding_y,
                std::vector<Mode> modes);

  // Modes with max(|k1|, |k2|) <= max_mode and coefficients complex Gaussian scaled by
  // amplitude / (1 + |k|^2); no winding.
  static SmoothSection random(Rng &rng, int max_mode, double amplitude = 1.0);

  const std::vector<Mode> &modes() const { return modes_; }
  std::complex<double> winding_x() const { return winding_x_; }
  std::complex<double> winding_y() const { return winding_y_; }

  std::complex<double> value(double x1, double y1) const;
  // (ds/dx1, ds/dy1), exact.
  std::array<std::complex<double>, 2> gradient(double x1, double y1) const;
  // d sigma as a real 4 x 2 matrix: [Id; Re grad; Im grad].
  Eigen::Matrix<double, 4, 2> differential(double x1, double y1) const;

private:
  std::complex<double> winding_x_ = 0.0;
  std::complex<double> winding_y_ = 0.0;
  std::vector<Mode> modes_;
};

// The constant form dz1 ^ dz2 on R^4.
ComplexTwoForm standard_form();
// The base fiber decomposition: fiber span(e_x2, e_y2), base structure standard on (x1, y1).
Subspace fiber_subspace();

// eta = sigma^* Omega at one base point, as a 2-form on R^2.
KForm section_form_at(const SmoothSection &sigma, double x1, double y1);

struct SectionFormField
{
  FormField eta;  // 2-forms on the base, base grid
  double max_02 = 0.0;  // largest (0,2) component for the standard base structure
};

SectionFormField sample_section_form(const SmoothSection &sigma, int resolution);

// d of a field of k-forms on R^4 (or R^2 for fields on base axes only), centered
// differences, periodic.
FormField exterior_derivative_fd(const FormField &field);

// Pointwise induced structures of a field of c-symplectic 2-forms on R^4.
struct InducedField
{
  StructureField structure;
  std::vector<std::size_t> flagged;  // nodes where the form is not c-symplectic
};

InducedField structure_field(const FormField &omega);

// Omega + t pi^* eta on the grid of eta.
FormField deformed_form_field(const FormField &eta, std::complex<double> t);

// Pointwise structures of Omega + t pi^* eta.
InducedField deformed_structure_field(const FormField &eta, std::complex<double> t);

// phi^*(Omega + t pi^* eta) for the diffeomorphism
// phi(x1, y1, x2, y2) = (x1 + eps sin 2 pi y1, y1, x2 + eps sin 2 pi x1, y2).
// Closed, and its structure is integrable; unlike the untwisted field the centered-difference
// Nijenhuis tensor does not cancel identically.
FormField twisted_form_field(const SmoothSection &sigma, std::complex<double> t, int resolution,
                             double epsilon);

// Omega + t A cos(2 pi x2) dx1 ^ dy1 on a grid along x2: not closed, and its structure is not
// integrable.
FormField nonclosed_form_field(std::complex<double> t, double amplitude, int resolution);

struct NijenhuisResult
{
  double max_norm = 0.0;
  std::vector<double> per_node;  // max over coordinate pairs at each node
};

// N(e_a, e_b) = [I e_a, I e_b] - I[I e_a, e_b] - I[e_a, I e_b] for coordinate fields, with
// centered differences of I; Euclidean norm of the vector N(e_a, e_b), maximized over a < b.
NijenhuisResult nijenhuis_norm(const StructureField &field);

struct SectionCertificate
{
  double max_residual = 0.0;  // max over nodes of max|I'(sigma) d sigma - d sigma J|
  double max_02 = 0.0;
  std::vector<double> per_node;
  std::vector<std::size_t> flagged;
};

// At t: I' is the structure of Omega + t pi^* eta; holomorphic at t = -1.
SectionCertificate verify_section_holomorphic(const SmoothSection &sigma, int resolution,
                                              std::complex<double> t = -1.0);

// One CSV row per node: node, coordinates, then the named columns.
void write_node_csv(std::ostream &out, const TorusGrid &grid,
                    const std::vector<std::string> &names,
                    const std::vector<const std::vector<double> *> &columns);

}  // namespace csympl::testbed

#endif
