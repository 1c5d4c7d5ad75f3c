#ifndef CSYMPL_EXTERIOR_ALGEBRA_HPP
#define CSYMPL_EXTERIOR_ALGEBRA_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "csympl/subspace.hpp"

namespace csympl
{

using cplx = std::complex<double>;

// Default comparison tolerance, relative to the largest coefficient magnitude involved.
inline constexpr double kDefaultTol = 1e-9;

// Multi-indices are bit masks; bit i set means coordinate i occurs. Sorted order is implied.
using IndexMask = std::uint64_t;

inline constexpr int kMaxDim = 32;

std::uint64_t binomial(int n, int k);

// Position of a k-subset mask in colexicographic order, which is also the numeric order of
// the masks. This is the storage index of the coefficient.
std::size_t colex_rank(IndexMask mask);

// Exterior k-form on R^m with complex coefficients, stored densely over sorted
// multi-indices. Antisymmetry is structural: only sorted multi-indices are stored.
class KForm
{
public:
  // Zero form. Rejects degree > dim; such forms only arise, collapsed to zero, as results of
  // wedge and power.
  KForm(int dim, int degree);

  // Degree exceeds the dimension: the form is identically zero and stores nothing.
  bool collapsed() const { return degree_ > dim_; }

  static KForm scalar(int dim, cplx value);

  // Form coeff * e^{i1} ^ ... ^ e^{ik}. Indices may be in any order (the sign of the sorting
  // permutation is applied); a repeated index gives the zero form.
  static KForm monomial(int dim, std::span<const int> indices, cplx coeff = 1.0);
  static KForm monomial(int dim, std::initializer_list<int> indices, cplx coeff = 1.0)
  {
    return monomial(dim, std::span<const int>(indices.begin(), indices.size()), coeff);
  }

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return coeffs_.size(); }

  // Coefficient of a sorted multi-index given as a mask with `degree` bits set.
  cplx coeff(IndexMask mask) const { return coeffs_[colex_rank(mask)]; }
  cplx &coeff(IndexMask mask) { return coeffs_[colex_rank(mask)]; }

  // Coefficient for an arbitrary index tuple, with the permutation sign applied.
  cplx operator()(std::span<const int> indices) const;
  cplx operator()(std::initializer_list<int> indices) const
  {
    return (*this)(std::span<const int>(indices.begin(), indices.size()));
  }

  const std::vector<cplx> &coeffs() const { return coeffs_; }

  // Masks of all stored multi-indices, in storage order.
  std::vector<IndexMask> masks() const;

  // Evaluate on the columns of an m x k matrix of (possibly complex) vectors.
  cplx evaluate(const Eigen::MatrixXcd &vectors) const;

  double max_norm() const;
  bool is_zero(double tol = 0.0) const { return max_norm() <= tol; }

  KForm conj() const;

  KForm &operator+=(const KForm &other);
  KForm &operator-=(const KForm &other);
  KForm &operator*=(cplx s);

  friend KForm operator+(KForm a, const KForm &b) { return a += b; }
  friend KForm operator-(KForm a, const KForm &b) { return a -= b; }
  friend KForm operator*(cplx s, KForm a) { return a *= s; }
  friend KForm operator*(KForm a, cplx s) { return a *= s; }

  // Coefficientwise comparison, tolerance relative to the larger of the two max norms (an
  // absolute floor of tol applies when both are zero).
  bool approx_equal(const KForm &other, double tol = kDefaultTol) const;

private:
  struct Unchecked
  {
  };
  KForm(int dim, int degree, Unchecked);
  void coeff_sorted_assign(std::span<const int> indices, cplx value);

  friend KForm wedge(const KForm &, const KForm &);

  int dim_;
  int degree_;
  std::vector<cplx> coeffs_;
};

// Complex bilinear antisymmetric form on R^m, omega(u, v) = u^T A v.
class ComplexTwoForm
{
public:
  ComplexTwoForm() : ComplexTwoForm(Eigen::MatrixXcd::Zero(0, 0)) {}

  // Rejects non-square input and input whose symmetric part exceeds tol relative to the
  // matrix norm; the stored matrix is the exact antisymmetrization (A - A^T) / 2.
  explicit ComplexTwoForm(const Eigen::MatrixXcd &matrix, double tol = kDefaultTol);

  static ComplexTwoForm zero(int dim) { return ComplexTwoForm(Eigen::MatrixXcd::Zero(dim, dim)); }
  static ComplexTwoForm from_kform(const KForm &form);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXcd &matrix() const { return matrix_; }

  cplx operator()(const Eigen::VectorXcd &u, const Eigen::VectorXcd &v) const
  {
    return u.transpose() * matrix_ * v;
  }

  KForm to_kform() const;
  double max_norm() const { return matrix_.cwiseAbs().maxCoeff(); }

  ComplexTwoForm conj() const { return ComplexTwoForm(matrix_.conjugate()); }

  friend ComplexTwoForm operator+(const ComplexTwoForm &a, const ComplexTwoForm &b);
  friend ComplexTwoForm operator-(const ComplexTwoForm &a, const ComplexTwoForm &b);
  friend ComplexTwoForm operator*(cplx s, const ComplexTwoForm &a);

private:
  struct Trusted
  {
  };
  ComplexTwoForm(Eigen::MatrixXcd matrix, Trusted) : matrix_(std::move(matrix)) {}

  Eigen::MatrixXcd matrix_;
};

// Exterior product. When deg a + deg b exceeds the dimension the result is the collapsed
// zero form: it carries the formal degree but has no coefficients.
KForm wedge(const KForm &a, const KForm &b);

// Interior product iota_v a, of degree deg a - 1. Rejects degree-0 forms.
KForm contract(const Eigen::VectorXcd &v, const KForm &a);

// k-fold wedge of a 2-form with itself (collapsed zero form when 2k > dim).
KForm power(const ComplexTwoForm &a, int k);

// (f^* a)(v_1..v_k) = a(f v_1, ..., f v_k) for f : R^{cols} -> R^{rows}.
KForm pullback(const Eigen::MatrixXcd &f, const KForm &a);
inline KForm pullback(const Eigen::MatrixXd &f, const KForm &a)
{
  return pullback(Eigen::MatrixXcd(f.cast<cplx>()), a);
}
ComplexTwoForm pullback(const Eigen::MatrixXd &f, const ComplexTwoForm &a);
ComplexTwoForm pullback(const Eigen::MatrixXcd &f, const ComplexTwoForm &a);

struct FormKernel
{
  Subspace kernel;  // Hermitian-orthonormal basis of ker A in C^m
  Eigen::VectorXd singular_values;  // descending
  double threshold = 0.0;  // absolute cutoff applied to singular values
  bool conditioning_warning = false;  // some singular value within 10x of the cutoff
};

// Null space of the matrix of a 2-form by singular-value thresholding: singular values
// below tol * (largest singular value) count as zero.
FormKernel form_kernel(const ComplexTwoForm &a, double tol = kDefaultTol);

}  // namespace csympl

#endif
