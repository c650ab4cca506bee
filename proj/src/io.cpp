#include "relcalc/io.hpp"

#include <fstream>
#include <sstream>

namespace relcalc {

namespace {

Json encode_data(const Matrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  return data;
}

Matrix decode_data(const Json& data, Eigen::Index rows, Eigen::Index cols) {
  if (!data.is_array() || data.size() != static_cast<std::size_t>(rows * cols)) {
    throw Error(ErrorCode::Parse, "matrix data length does not match its shape");
  }
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j, ++k) {
      const Json& e = data[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw Error(ErrorCode::Parse, "matrix entries must be [re, im] pairs");
      }
      m(i, j) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

Eigen::Index get_index(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 0) {
    throw Error(ErrorCode::Parse, std::string("missing or invalid \"") + key + "\"");
  }
  return static_cast<Eigen::Index>(j[key].get<long long>());
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  if (m.rows() == m.cols()) return Json{{"n", m.rows()}, {"data", encode_data(m)}};
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", encode_data(m)}};
}

Matrix matrix_from_json(const Json& j) {
  if (j.is_object() && j.contains("n")) {
    const Eigen::Index n = get_index(j, "n");
    return decode_data(j.at("data"), n, n);
  }
  return decode_data(j.contains("data") ? j.at("data") : Json(), get_index(j, "rows"), get_index(j, "cols"));
}

Json herm_to_json(const HermMatrix& m) { return matrix_to_json(m.matrix()); }

HermMatrix herm_from_json(const Json& j) { return HermMatrix(matrix_from_json(j)); }

Json subspace_to_json(const Subspace& s) {
  return Json{{"n", s.ambient()}, {"d", s.dim()}, {"basis", encode_data(s.basis())}};
}

Subspace subspace_from_json(const Json& j) {
  const Eigen::Index n = get_index(j, "n");
  const Eigen::Index d = get_index(j, "d");
  if (!j.contains("basis")) throw Error(ErrorCode::Parse, "subspace without \"basis\"");
  return Subspace(n, decode_data(j.at("basis"), n, d));
}

Json relation_to_json(const LinearRelation& r) {
  return Json{{"n", r.n()}, {"repr", "graph"}, {"graph", subspace_to_json(r.graph())}};
}

Json relation_to_json(const NonnegRelation& r) {
  return Json{{"n", r.n()}, {"repr", "cayley"}, {"T", herm_to_json(r.cayley())}};
}

namespace {

std::string repr_of(const Json& j) {
  if (!j.is_object() || !j.contains("repr") || !j["repr"].is_string()) {
    throw Error(ErrorCode::Parse, "relation without \"repr\"");
  }
  return j["repr"].get<std::string>();
}

}  // namespace

LinearRelation relation_from_json(const Json& j) {
  const Eigen::Index n = get_index(j, "n");
  const std::string repr = repr_of(j);
  if (repr == "graph") {
    Subspace g = subspace_from_json(j.at("graph"));
    if (g.ambient() != 2 * n) throw Error(ErrorCode::DimensionMismatch, "graph must live in C^{2n}");
    return LinearRelation(n, std::move(g));
  }
  if (repr == "cayley") return uncayley(nonneg_from_json(j));
  throw Error(ErrorCode::Parse, "unknown relation repr \"" + repr + "\"");
}

NonnegRelation nonneg_from_json(const Json& j, const Tolerance& tol) {
  const Eigen::Index n = get_index(j, "n");
  const std::string repr = repr_of(j);
  if (repr == "cayley") {
    HermMatrix t = herm_from_json(j.at("T"));
    if (t.dim() != n) throw Error(ErrorCode::DimensionMismatch, "T dimension differs from n");
    return NonnegRelation(t, tol);
  }
  if (repr == "graph") return cayley(relation_from_json(j), tol);
  if (repr == "operator") {
    HermMatrix a = herm_from_json(j.at("A"));
    if (a.dim() != n) throw Error(ErrorCode::DimensionMismatch, "A dimension differs from n");
    return NonnegRelation::from_operator(a, tol);
  }
  throw Error(ErrorCode::Parse, "unknown relation repr \"" + repr + "\"");
}

Json partial_contraction_to_json(const PartialContraction& q) {
  return Json{{"n", q.n},
              {"dom", subspace_to_json(q.dom)},
              {"action", Json{{"rows", q.action.rows()}, {"cols", q.action.cols()}, {"data", encode_data(q.action)}}}};
}

PartialContraction partial_contraction_from_json(const Json& j, const Tolerance& tol) {
  PartialContraction q;
  q.n = get_index(j, "n");
  q.dom = subspace_from_json(j.at("dom"));
  q.action = matrix_from_json(j.at("action"));
  q.validate(tol);
  return q;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IO, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IO, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::IO, "write failed for " + path);
}

}  // namespace relcalc
