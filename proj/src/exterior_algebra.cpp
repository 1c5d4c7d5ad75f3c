#include "csympl/exterior_algebra.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <string>

#include "csympl/errors.hpp"

namespace csympl
{

namespace
{

constexpr int kBinomRows = 65;

constexpr std::array<std::array<std::uint64_t, kBinomRows>, kBinomRows> make_binomials()
{
  std::array<std::array<std::uint64_t, kBinomRows>, kBinomRows> t{};
  for (int n = 0; n < kBinomRows; ++n) {
    t[n][0] = 1;
    for (int k = 1; k <= n; ++k)
      t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
  }
  return t;
}

constexpr auto kBinomials = make_binomials();

// Next mask with the same popcount in increasing numeric order (Gosper's hack).
IndexMask next_combination(IndexMask v)
{
  const IndexMask t = v | (v - 1);
  return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

IndexMask first_combination(int k) { return k == 0 ? 0 : ((IndexMask{1} << k) - 1); }

template <class F>
void for_each_combination(int dim, int k, F &&f)
{
  if (k > dim)
    return;
  if (k == 0) {
    f(IndexMask{0});
    return;
  }
  const IndexMask end = IndexMask{1} << dim;
  for (IndexMask m = first_combination(k); m < end; m = next_combination(m)) {
    f(m);
    if (k == dim)
      break;
  }
}

// Sign of the shuffle that sorts the concatenation (I, J) for disjoint I and J: (-1) to the
// number of pairs i in I, j in J with i > j.
int shuffle_sign(IndexMask I, IndexMask J)
{
  int inversions = 0;
  while (J) {
    const int j = std::countr_zero(J);
    inversions += std::popcount(I >> (j + 1));
    J &= J - 1;
  }
  return (inversions & 1) ? -1 : 1;
}

std::vector<int> mask_indices(IndexMask m)
{
  std::vector<int> idx;
  while (m) {
    idx.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return idx;
}

void check_dim(int dim)
{
  if (dim < 1 || dim > kMaxDim)
    throw InvalidInput("form dimension must lie in [1, " + std::to_string(kMaxDim) + "]");
}

}  // namespace

std::uint64_t binomial(int n, int k)
{
  if (k < 0 || n < 0 || k > n)
    return 0;
  return kBinomials[n][k];
}

std::size_t colex_rank(IndexMask mask)
{
  std::size_t rank = 0;
  int j = 0;
  while (mask) {
    const int b = std::countr_zero(mask);
    rank += kBinomials[b][j + 1];
    mask &= mask - 1;
    ++j;
  }
  return rank;
}

KForm::KForm(int dim, int degree) : dim_(dim), degree_(degree)
{
  check_dim(dim);
  if (degree < 0 || degree > dim)
    throw InvalidInput("form degree must lie in [0, dim]");
  coeffs_.assign(binomial(dim, degree), cplx{0.0, 0.0});
}

KForm::KForm(int dim, int degree, Unchecked) : dim_(dim), degree_(degree)
{
  coeffs_.assign(binomial(dim, degree), cplx{0.0, 0.0});
}

KForm KForm::scalar(int dim, cplx value)
{
  KForm f(dim, 0);
  f.coeffs_[0] = value;
  return f;
}

KForm KForm::monomial(int dim, std::span<const int> indices, cplx coeff)
{
  KForm f(dim, static_cast<int>(indices.size()));
  f.coeff_sorted_assign(indices, coeff);
  return f;
}

cplx KForm::operator()(std::span<const int> indices) const
{
  if (static_cast<int>(indices.size()) != degree_)
    throw InvalidInput("index tuple length differs from form degree");
  IndexMask mask = 0;
  int inversions = 0;
  for (std::size_t a = 0; a < indices.size(); ++a) {
    const int i = indices[a];
    if (i < 0 || i >= dim_)
      throw InvalidInput("index out of range");
    if (mask & (IndexMask{1} << i))
      return 0.0;
    mask |= IndexMask{1} << i;
    for (std::size_t b = a + 1; b < indices.size(); ++b)
      if (indices[b] < i)
        ++inversions;
  }
  const cplx c = coeff(mask);
  return (inversions & 1) ? -c : c;
}

void KForm::coeff_sorted_assign(std::span<const int> indices, cplx value)
{
  IndexMask mask = 0;
  int inversions = 0;
  for (std::size_t a = 0; a < indices.size(); ++a) {
    const int i = indices[a];
    if (i < 0 || i >= dim_)
      throw InvalidInput("index out of range");
    if (mask & (IndexMask{1} << i))
      return;  // repeated index: zero form
    mask |= IndexMask{1} << i;
    for (std::size_t b = a + 1; b < indices.size(); ++b)
      if (indices[b] < i)
        ++inversions;
  }
  coeff(mask) = (inversions & 1) ? -value : value;
}

std::vector<IndexMask> KForm::masks() const
{
  std::vector<IndexMask> out;
  out.reserve(coeffs_.size());
  for_each_combination(dim_, degree_, [&](IndexMask m) { out.push_back(m); });
  return out;
}

cplx KForm::evaluate(const Eigen::MatrixXcd &vectors) const
{
  if (vectors.rows() != dim_ || vectors.cols() != degree_)
    throw InvalidInput("evaluate: expected a dim x degree matrix of vectors");
  if (collapsed())
    return 0.0;
  if (degree_ == 0)
    return coeffs_[0];
  cplx total = 0.0;
  Eigen::MatrixXcd minor(degree_, degree_);
  std::size_t r = 0;
  for_each_combination(dim_, degree_, [&](IndexMask m) {
    const cplx c = coeffs_[r++];
    if (c == 0.0)
      return;
    int row = 0;
    for (int i : mask_indices(m))
      minor.row(row++) = vectors.row(i);
    total += c * minor.determinant();
  });
  return total;
}

double KForm::max_norm() const
{
  double n = 0.0;
  for (const auto &c : coeffs_)
    n = std::max(n, std::abs(c));
  return n;
}

KForm KForm::conj() const
{
  KForm out = *this;
  for (auto &c : out.coeffs_)
    c = std::conj(c);
  return out;
}

KForm &KForm::operator+=(const KForm &other)
{
  if (dim_ != other.dim_ || degree_ != other.degree_)
    throw InvalidInput("adding forms of different dimension or degree");
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    coeffs_[i] += other.coeffs_[i];
  return *this;
}

KForm &KForm::operator-=(const KForm &other)
{
  if (dim_ != other.dim_ || degree_ != other.degree_)
    throw InvalidInput("subtracting forms of different dimension or degree");
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    coeffs_[i] -= other.coeffs_[i];
  return *this;
}

KForm &KForm::operator*=(cplx s)
{
  for (auto &c : coeffs_)
    c *= s;
  return *this;
}

bool KForm::approx_equal(const KForm &other, double tol) const
{
  if (dim_ != other.dim_ || degree_ != other.degree_)
    return false;
  const double scale = std::max({max_norm(), other.max_norm(), 1.0});
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (std::abs(coeffs_[i] - other.coeffs_[i]) > tol * scale)
      return false;
  return true;
}

KForm wedge(const KForm &a, const KForm &b)
{
  if (a.dim() != b.dim())
    throw InvalidInput("wedge: dimension mismatch");
  const int dim = a.dim();
  const int degree = a.degree() + b.degree();
  KForm out(dim, degree, KForm::Unchecked{});
  if (degree > dim)
    return out;
  const auto a_masks = a.masks();
  const auto b_masks = b.masks();
  for (std::size_t i = 0; i < a_masks.size(); ++i) {
    const cplx ca = a.coeffs_[i];
    if (ca == 0.0)
      continue;
    for (std::size_t j = 0; j < b_masks.size(); ++j) {
      if (a_masks[i] & b_masks[j])
        continue;
      const cplx cb = b.coeffs_[j];
      if (cb == 0.0)
        continue;
      const IndexMask u = a_masks[i] | b_masks[j];
      out.coeffs_[colex_rank(u)] += static_cast<double>(shuffle_sign(a_masks[i], b_masks[j])) * ca * cb;
    }
  }
  return out;
}

KForm contract(const Eigen::VectorXcd &v, const KForm &a)
{
  if (a.degree() == 0)
    throw InvalidInput("contract: cannot contract a 0-form");
  if (v.size() != a.dim())
    throw InvalidInput("contract: vector length differs from form dimension");
  KForm out(a.dim(), a.degree() - 1);
  if (a.collapsed())
    return out;
  for (IndexMask J : out.masks()) {
    cplx acc = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
      const IndexMask bit = IndexMask{1} << i;
      if (J & bit || v(i) == 0.0)
        continue;
      const int below = std::popcount(J & (bit - 1));
      const cplx c = a.coeff(J | bit);
      acc += (below & 1) ? -v(i) * c : v(i) * c;
    }
    out.coeff(J) = acc;
  }
  return out;
}

KForm power(const ComplexTwoForm &a, int k)
{
  if (k < 1)
    throw InvalidInput("power: exponent must be positive");
  const KForm base = a.to_kform();
  KForm acc = base;
  for (int i = 1; i < k; ++i)
    acc = wedge(acc, base);
  return acc;
}

KForm pullback(const Eigen::MatrixXcd &f, const KForm &a)
{
  if (f.rows() != a.dim())
    throw InvalidInput("pullback: map target dimension differs from form dimension");
  const int src = static_cast<int>(f.cols());
  // The pullback would vanish, but a form of that degree is not representable on the source.
  if (a.degree() > src)
    throw InvalidInput("pullback: form degree exceeds source dimension");
  KForm out(src, a.degree());
  const int k = a.degree();
  if (k == 0) {
    out.coeff(0) = a.coeff(0);
    return out;
  }
  const auto target_masks = a.masks();
  Eigen::MatrixXcd minor(k, k);
  for (IndexMask J : out.masks()) {
    const auto cols = mask_indices(J);
    cplx acc = 0.0;
    for (std::size_t r = 0; r < target_masks.size(); ++r) {
      const cplx c = a.coeffs()[r];
      if (c == 0.0)
        continue;
      const auto rows = mask_indices(target_masks[r]);
      for (int p = 0; p < k; ++p)
        for (int q = 0; q < k; ++q)
          minor(p, q) = f(rows[p], cols[q]);
      acc += c * minor.determinant();
    }
    out.coeff(J) = acc;
  }
  return out;
}

ComplexTwoForm::ComplexTwoForm(const Eigen::MatrixXcd &matrix, double tol)
{
  if (matrix.rows() != matrix.cols())
    throw InvalidInput("2-form matrix must be square");
  if (matrix.size() > 0) {
    const double scale = matrix.cwiseAbs().maxCoeff();
    const double sym = (matrix + matrix.transpose()).cwiseAbs().maxCoeff() / 2.0;
    if (sym > tol * std::max(scale, 1e-300) && sym > 0.0)
      throw InvalidInput("2-form matrix is not antisymmetric");
  }
  matrix_ = (matrix - matrix.transpose()) / 2.0;
}

ComplexTwoForm ComplexTwoForm::from_kform(const KForm &form)
{
  if (form.degree() != 2)
    throw InvalidInput("from_kform: expected a 2-form");
  const int m = form.dim();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const cplx c = form.coeff((IndexMask{1} << i) | (IndexMask{1} << j));
      a(i, j) = c;
      a(j, i) = -c;
    }
  return ComplexTwoForm(std::move(a), Trusted{});
}

KForm ComplexTwoForm::to_kform() const
{
  const int m = dim();
  KForm f(m, 2);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      f.coeff((IndexMask{1} << i) | (IndexMask{1} << j)) = matrix_(i, j);
  return f;
}

ComplexTwoForm operator+(const ComplexTwoForm &a, const ComplexTwoForm &b)
{
  if (a.dim() != b.dim())
    throw InvalidInput("adding 2-forms of different dimension");
  return ComplexTwoForm(a.matrix_ + b.matrix_, ComplexTwoForm::Trusted{});
}

ComplexTwoForm operator-(const ComplexTwoForm &a, const ComplexTwoForm &b)
{
  if (a.dim() != b.dim())
    throw InvalidInput("subtracting 2-forms of different dimension");
  return ComplexTwoForm(a.matrix_ - b.matrix_, ComplexTwoForm::Trusted{});
}

ComplexTwoForm operator*(cplx s, const ComplexTwoForm &a)
{
  return ComplexTwoForm(s * a.matrix_, ComplexTwoForm::Trusted{});
}

ComplexTwoForm pullback(const Eigen::MatrixXcd &f, const ComplexTwoForm &a)
{
  if (f.rows() != a.dim())
    throw InvalidInput("pullback: map target dimension differs from form dimension");
  const Eigen::MatrixXcd m = f.transpose() * a.matrix() * f;
  return ComplexTwoForm((m - m.transpose()) / 2.0);
}

ComplexTwoForm pullback(const Eigen::MatrixXd &f, const ComplexTwoForm &a)
{
  return pullback(Eigen::MatrixXcd(f.cast<cplx>()), a);
}

FormKernel form_kernel(const ComplexTwoForm &a, double tol)
{
  const int m = a.dim();
  FormKernel out{Subspace(m, Field::Complex), Eigen::VectorXd::Zero(m), 0.0, false};
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.matrix(), Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  const double top = m > 0 ? out.singular_values(0) : 0.0;
  out.threshold = tol * top;
  int rank = 0;
  for (int i = 0; i < m; ++i) {
    const double s = out.singular_values(i);
    if (top > 0.0 && s > out.threshold)
      ++rank;
    if (top > 0.0 && s > out.threshold / 10.0 && s < out.threshold * 10.0)
      out.conditioning_warning = true;
  }
  out.kernel = Subspace::complex(svd.matrixV().rightCols(m - rank));
  return out;
}

}  // namespace csympl
