#pragma once

// JSON encodings for matrices, subspaces, relations and partial contractions.
//   matrix:    {"n": int, "data": row-major [[re, im], ...]}
//   rectangular matrix: {"rows": int, "cols": int, "data": ...}
//   subspace:  {"n": int, "d": int, "basis": n×d row-major data}
//   relation:  {"n": int, "repr": "graph", "graph": subspace of C^{2n}}
//              {"n": int, "repr": "cayley", "T": matrix}
//              {"n": int, "repr": "operator", "A": PSD matrix}  (input only)
//   partial contraction: {"n": int, "dom": subspace, "action": rectangular matrix}

#include <string>

#include <json.hpp>

#include "relcalc/extensions.hpp"

namespace relcalc {

using Json = nlohmann::json;

Json matrix_to_json(const Matrix& m);
/// Square matrix in the {"n", "data"} form, or rectangular with {"rows", "cols"}.
Matrix matrix_from_json(const Json& j);
Json herm_to_json(const HermMatrix& m);
HermMatrix herm_from_json(const Json& j);

Json subspace_to_json(const Subspace& s);
Subspace subspace_from_json(const Json& j);

Json relation_to_json(const LinearRelation& r);
Json relation_to_json(const NonnegRelation& r);
/// Either representation; a "cayley" record is converted with uncayley.
LinearRelation relation_from_json(const Json& j);
/// Any representation; a "graph" record is converted with cayley(), an
/// "operator" record with from_operator().
NonnegRelation nonneg_from_json(const Json& j, const Tolerance& tol = {});

Json partial_contraction_to_json(const PartialContraction& q);
PartialContraction partial_contraction_from_json(const Json& j, const Tolerance& tol = {});

/// Throws IO on failure.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace relcalc
