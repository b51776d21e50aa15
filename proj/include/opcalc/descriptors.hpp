#pragma once

// JSON descriptions of sets, functions and operators.
//
//   set       {"kind": "box", "lo": [..], "hi": [..]}      null or "-inf"/"inf" for open sides
//             {"kind": "ball", "center": [..], "radius": r}
//             {"kind": "affine", "point": [..], "basis": [[..], ..]}
//             {"kind": "epigraph", "function": "exp" | "square"}
//   function  {"kind": "quadratic", "a": a, "b": [..]}     a/2 |x|^2 + <b, x>
//             {"kind": "abs", "dim": d}  {"kind": "exp", "dim": d}  {"kind": "linear", "c": [..]}
//             {"kind": "indicator", "set": <set>}
//   operator  {"kind": "identity", "dim": d}  {"kind": "linear", "matrix": [[..], ..]}
//             {"kind": "projection", "set": <set>}  {"kind": "prox", "function": <function>}
//             {"kind": "translation", "v": [..]}
//             {"kind": "average", "weights": [..], "members": [<operator>, ..]}
//             {"kind": "resolvent_of", "operator": <operator>, "inverse": bool}
//
// Every operator is represented by its resolvent, a firmly nonexpansive map. "resolvent_of"
// with inverse = true gives J_{A^-1} = Id - J_A.

#include "opcalc/convex_sets.hpp"
#include "opcalc/operators.hpp"
#include "opcalc/prox.hpp"

#include <json.hpp>

namespace opcalc {

using Json = nlohmann::json;

Vector parse_vector(const Json& j, const std::string& path);
Matrix parse_matrix(const Json& j, const std::string& path);

ConvexSetPtr parse_set(const Json& j, const std::string& path = "set");
ConvexFunctionPtr parse_function(const Json& j, const std::string& path = "function");

struct OperatorSpec {
  FirmlyNonexpansiveMap resolvent;
  HintBox hint;  // region where the interesting part of the graph lives
};

OperatorSpec parse_operator(const Json& j, const std::string& path = "operator");

Json to_json(const Vector& v);

}  // namespace opcalc
