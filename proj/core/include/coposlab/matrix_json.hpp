#pragma once

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>
#include <variant>

#include "coposlab/sym_matrix.hpp"

namespace coposlab {

using Json = nlohmann::json;

// Raised for malformed matrix documents; what() names the offending
// location, e.g. "entries[2][1].r".
class MatrixFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using AnyMatrix = std::variant<SymMatrixF, SymMatrixQ>;

Json rational_to_json(const Rational& q);  // [num, den]
Rational rational_from_json(const Json& j, const std::string& where);
Json qsqrt2_to_json(const QSqrt2& x);  // {"r": [num, den], "s": [num, den]}
QSqrt2 qsqrt2_from_json(const Json& j, const std::string& where);

// {"n", "flavor", "entries"} with the full matrix written out.
Json matrix_to_json(const SymMatrixF& a);
Json matrix_to_json(const SymMatrixQ& a);

// Accepts the full matrix (must be symmetric) or the upper triangle
// (row i holds columns i..n-1).
AnyMatrix matrix_from_json(const Json& j);
AnyMatrix read_matrix_file(const std::string& path);
SymMatrixF as_float(const AnyMatrix& m);

}  // namespace coposlab
