#include "csympl/io.hpp"

#include <limits>
#include <string>

#include "csympl/errors.hpp"

namespace csympl::io
{

namespace
{

const Json &field(const Json &j, const char *key)
{
  if (!j.is_object() || !j.contains(key))
    throw InvalidInput(std::string("json: missing field '") + key + "'");
  return j.at(key);
}

int int_field(const Json &j, const char *key)
{
  const Json &v = field(j, key);
  if (!v.is_number_integer())
    throw InvalidInput(std::string("json: field '") + key + "' must be an integer");
  return v.get<int>();
}

Eigen::MatrixXd square_from_json(const Json &j, int dim)
{
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw InvalidInput("json: matrix has the wrong number of rows");
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const Json &row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw InvalidInput("json: matrix has the wrong number of columns");
    for (int k = 0; k < dim; ++k)
      m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
  }
  return m;
}

}  // namespace

Json matrix_to_json(const Eigen::MatrixXd &m)
{
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd real_matrix_from_json(const Json &j)
{
  if (!j.is_array() || j.empty())
    throw InvalidInput("json: matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json &row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw InvalidInput("json: ragged matrix");
    for (Eigen::Index k = 0; k < cols; ++k)
      m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
  }
  return m;
}

Json to_json(const KForm &form)
{
  Json coeffs = Json::array();
  if (!form.collapsed()) {
    const auto masks = form.masks();
    for (std::size_t r = 0; r < masks.size(); ++r) {
      const cplx c = form.coeffs()[r];
      if (c == cplx(0.0))
        continue;
      Json idx = Json::array();
      for (int i = 0; i < form.dim(); ++i)
        if (masks[r] >> i & 1U)
          idx.push_back(i);
      coeffs.push_back({{"idx", idx}, {"re", c.real()}, {"im", c.imag()}});
    }
  }
  return {{"dim", form.dim()}, {"degree", form.degree()}, {"coeffs", coeffs}};
}

KForm kform_from_json(const Json &j)
{
  const int dim = int_field(j, "dim");
  const int degree = int_field(j, "degree");
  if (dim < 0 || dim > kMaxDim || degree < 0 || degree > dim)
    throw InvalidInput("json: invalid form dimension or degree");
  KForm form(dim, degree);
  for (const Json &c : field(j, "coeffs")) {
    std::vector<int> idx = field(c, "idx").get<std::vector<int>>();
    if (static_cast<int>(idx.size()) != degree)
      throw InvalidInput("json: index tuple has the wrong length");
    for (int i : idx)
      if (i < 0 || i >= dim)
        throw InvalidInput("json: index out of range");
    form += KForm::monomial(dim, idx, cplx(field(c, "re").get<double>(), field(c, "im").get<double>()));
  }
  return form;
}

Json to_json(const ComplexTwoForm &form)
{
  return {{"dim", form.dim()},
          {"matrix_re", matrix_to_json(form.matrix().real())},
          {"matrix_im", matrix_to_json(form.matrix().imag())}};
}

ComplexTwoForm two_form_from_json(const Json &j)
{
  const int dim = int_field(j, "dim");
  const Eigen::MatrixXd re = square_from_json(field(j, "matrix_re"), dim);
  const Eigen::MatrixXd im = square_from_json(field(j, "matrix_im"), dim);
  Eigen::MatrixXcd m(dim, dim);
  m.real() = re;
  m.imag() = im;
  return ComplexTwoForm(m);
}

Json to_json(const ComplexStructure &structure)
{
  return {{"dim", structure.dim()}, {"matrix", matrix_to_json(structure.matrix())}};
}

ComplexStructure structure_from_json(const Json &j)
{
  const int dim = int_field(j, "dim");
  return ComplexStructure(square_from_json(field(j, "matrix"), dim));
}

Json to_json(const Subspace &subspace)
{
  const bool real = subspace.field() == Field::Real;
  Json basis = Json::array();
  for (int k = 0; k < subspace.dim(); ++k) {
    Json col = Json::array();
    for (int i = 0; i < subspace.ambient_dim(); ++i) {
      const cplx c = subspace.basis()(i, k);
      if (real)
        col.push_back(c.real());
      else
        col.push_back(Json::array({c.real(), c.imag()}));
    }
    basis.push_back(std::move(col));
  }
  return {{"ambient", subspace.ambient_dim()}, {"field", real ? "R" : "C"}, {"basis", basis}};
}

Subspace subspace_from_json(const Json &j)
{
  const int ambient = int_field(j, "ambient");
  const std::string f = field(j, "field").get<std::string>();
  if (f != "R" && f != "C")
    throw InvalidInput("json: field must be \"R\" or \"C\"");
  const Json &basis = field(j, "basis");
  if (!basis.is_array())
    throw InvalidInput("json: basis must be an array of columns");
  const Field fld = f == "R" ? Field::Real : Field::Complex;
  if (basis.empty())
    return Subspace(ambient, fld);
  Eigen::MatrixXcd b(ambient, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Json &col = basis[k];
    if (!col.is_array() || static_cast<int>(col.size()) != ambient)
      throw InvalidInput("json: basis column has the wrong length");
    for (int i = 0; i < ambient; ++i) {
      const Json &v = col[static_cast<std::size_t>(i)];
      b(i, static_cast<Eigen::Index>(k)) =
        v.is_array() ? cplx(v.at(0).get<double>(), v.at(1).get<double>()) : cplx(v.get<double>());
    }
  }
  return Subspace(b, fld);
}

namespace
{

Json integer_to_json(const lattice::Integer &x)
{
  if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max())
    return x.convert_to<long long>();
  return x.str();
}

lattice::Integer integer_from_json(const Json &j)
{
  if (j.is_number_integer())
    return lattice::Integer(j.get<long long>());
  if (j.is_string()) {
    const std::string text = j.get<std::string>();
    const bool digits = !text.empty() &&
                        text.find_first_not_of("0123456789", text[0] == '-' ? 1 : 0) == std::string::npos &&
                        text != "-";
    if (!digits)
      throw InvalidInput("json: lattice entry \"" + text + "\" is not a decimal integer");
    return lattice::Integer(text);
  }
  throw InvalidInput("json: lattice entries must be integers");
}

}  // namespace

Json to_json(const lattice::IntVector &v)
{
  Json a = Json::array();
  for (const auto &x : v)
    a.push_back(integer_to_json(x));
  return a;
}

lattice::IntVector int_vector_from_json(const Json &j)
{
  if (!j.is_array())
    throw InvalidInput("json: integer vector must be an array");
  lattice::IntVector v;
  for (const Json &x : j)
    v.push_back(integer_from_json(x));
  return v;
}

Json to_json(const lattice::IntegralLattice &lattice)
{
  Json gram = Json::array();
  for (const auto &row : lattice.gram())
    gram.push_back(to_json(row));
  return {{"rank", lattice.rank()}, {"gram", gram}};
}

lattice::IntegralLattice lattice_from_json(const Json &j)
{
  const int rank = int_field(j, "rank");
  const Json &gram = field(j, "gram");
  if (!gram.is_array() || static_cast<int>(gram.size()) != rank)
    throw InvalidInput("json: gram must have rank rows");
  lattice::IntMatrix g;
  for (const Json &row : gram) {
    g.push_back(int_vector_from_json(row));
    if (static_cast<int>(g.back().size()) != rank)
      throw InvalidInput("json: gram rows must have rank entries");
  }
  return lattice::IntegralLattice(std::move(g));
}

}  // namespace csympl::io
