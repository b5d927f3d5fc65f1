#include "coposlab/matrix_json.hpp"

#include <fstream>
#include <sstream>

namespace coposlab {

namespace {

Json integer_to_json(const Integer& z) {
  if (fits_int64(z)) return Json(to_int64(z));
  return Json(z.get_str());
}

Integer integer_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()));
  if (j.is_number_unsigned()) return Integer(std::to_string(j.get<std::uint64_t>()));
  if (j.is_string()) {
    Integer z;
    const std::string s = j.get<std::string>();
    if (s.empty() || z.set_str(s, 10) != 0) throw MatrixFormatError(where + ": bad integer string");
    return z;
  }
  throw MatrixFormatError(where + ": expected an integer");
}

}  // namespace

Json rational_to_json(const Rational& q) {
  return Json::array({integer_to_json(q.get_num()), integer_to_json(q.get_den())});
}

Rational rational_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw MatrixFormatError(where + ": expected [num, den]");
  Integer num = integer_from_json(j[0], where + "[0]");
  Integer den = integer_from_json(j[1], where + "[1]");
  if (den == 0) throw MatrixFormatError(where + ": zero denominator");
  return make_rational(num, den);
}

Json qsqrt2_to_json(const QSqrt2& x) {
  return Json{{"r", rational_to_json(x.rat())}, {"s", rational_to_json(x.irr())}};
}

QSqrt2 qsqrt2_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw MatrixFormatError(where + ": expected {\"r\":[..],\"s\":[..]}");
  Rational r(0), s(0);
  if (j.contains("r")) r = rational_from_json(j["r"], where + ".r");
  if (j.contains("s")) s = rational_from_json(j["s"], where + ".s");
  if (!j.contains("r") && !j.contains("s")) throw MatrixFormatError(where + ": missing r and s");
  return QSqrt2(r, s);
}

Json matrix_to_json(const SymMatrixF& a) {
  Json rows = Json::array();
  for (int i = 0; i < a.n(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < a.n(); ++j) row.push_back(a(i, j));
    rows.push_back(row);
  }
  return Json{{"n", a.n()}, {"flavor", "float"}, {"entries", rows}};
}

Json matrix_to_json(const SymMatrixQ& a) {
  Json rows = Json::array();
  for (int i = 0; i < a.n(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < a.n(); ++j) row.push_back(qsqrt2_to_json(a(i, j)));
    rows.push_back(row);
  }
  return Json{{"n", a.n()}, {"flavor", "exact"}, {"entries", rows}};
}

namespace {

template <typename T, typename Parse>
SymMatrix<T> parse_entries(const Json& rows, int n, Parse parse) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    throw MatrixFormatError("entries: expected " + std::to_string(n) + " rows");
  bool upper = true, full = true;
  for (int i = 0; i < n; ++i) {
    if (!rows[i].is_array()) throw MatrixFormatError("entries[" + std::to_string(i) + "]: expected an array");
    int len = static_cast<int>(rows[i].size());
    upper = upper && len == n - i;
    full = full && len == n;
  }
  if (!upper && !full) throw MatrixFormatError("entries: rows must be full (n each) or upper triangular (n-i each)");
  if (n == 1) upper = false;
  SymMatrix<T> m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = upper ? i : 0; j < n; ++j) {
      const int col = upper ? j - i : j;
      const std::string where = "entries[" + std::to_string(i) + "][" + std::to_string(col) + "]";
      T v = parse(rows[i][col], where);
      if (!upper && j < i) {
        if (!(m(i, j) == v)) throw MatrixFormatError(where + ": matrix is not symmetric");
        continue;
      }
      m.set(i, j, v);
    }
  }
  return m;
}

}  // namespace

AnyMatrix matrix_from_json(const Json& j) {
  if (!j.is_object()) throw MatrixFormatError("document: expected an object");
  if (!j.contains("n") || !j["n"].is_number_integer()) throw MatrixFormatError("n: missing or not an integer");
  const int n = j["n"].get<int>();
  if (n < 1) throw MatrixFormatError("n: must be at least 1");
  std::string flavor = "float";
  if (j.contains("flavor")) {
    if (!j["flavor"].is_string()) throw MatrixFormatError("flavor: expected a string");
    flavor = j["flavor"].get<std::string>();
  }
  if (!j.contains("entries")) throw MatrixFormatError("entries: missing");
  if (flavor == "float") {
    return parse_entries<double>(j["entries"], n, [](const Json& e, const std::string& where) {
      if (!e.is_number()) throw MatrixFormatError(where + ": expected a number");
      return e.get<double>();
    });
  }
  if (flavor == "exact") {
    return parse_entries<QSqrt2>(j["entries"], n, [](const Json& e, const std::string& where) {
      if (e.is_number_integer()) return QSqrt2(Rational(integer_from_json(e, where)));
      return qsqrt2_from_json(e, where);
    });
  }
  throw MatrixFormatError("flavor: must be \"exact\" or \"float\"");
}

AnyMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MatrixFormatError(path + ": cannot open");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw MatrixFormatError(path + ": JSON parse error at byte " + std::to_string(e.byte));
  }
  try {
    return matrix_from_json(j);
  } catch (const MatrixFormatError& e) {
    throw MatrixFormatError(path + ": " + e.what());
  }
}

SymMatrixF as_float(const AnyMatrix& m) {
  if (const auto* f = std::get_if<SymMatrixF>(&m)) return *f;
  return to_float(std::get<SymMatrixQ>(m));
}

}  // namespace coposlab
