#ifndef CSYMPL_IO_HPP
#define CSYMPL_IO_HPP

#include <json.hpp>

#include "csympl/csymplectic.hpp"
#include "csympl/lattice_k3.hpp"

namespace csympl::io
{

using Json = nlohmann::json;

// {"dim", "degree", "coeffs": [{"idx": [...], "re", "im"}]}, zero coefficients omitted.
Json to_json(const KForm &form);
KForm kform_from_json(const Json &j);

// {"dim", "matrix_re", "matrix_im"}, row-major nested arrays.
Json to_json(const ComplexTwoForm &form);
ComplexTwoForm two_form_from_json(const Json &j);

// {"dim", "matrix"}.
Json to_json(const ComplexStructure &structure);
ComplexStructure structure_from_json(const Json &j);

// {"ambient", "field": "R" | "C", "basis": [column, ...]}; complex columns as [re, im] pairs.
Json to_json(const Subspace &subspace);
Subspace subspace_from_json(const Json &j);

// {"rank", "gram"}; entries as JSON integers, or decimal strings when out of int64 range.
Json to_json(const lattice::IntegralLattice &lattice);
lattice::IntegralLattice lattice_from_json(const Json &j);
Json to_json(const lattice::IntVector &v);
lattice::IntVector int_vector_from_json(const Json &j);

Json matrix_to_json(const Eigen::MatrixXd &m);
Eigen::MatrixXd real_matrix_from_json(const Json &j);

}  // namespace csympl::io

#endif
