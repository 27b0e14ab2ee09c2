#pragma once

// JSON forms of problems, witnesses and realizations. Complex numbers are
// [re, im] arrays; matrices are arrays of rows.
//
// Problem file:
//   {"delta": 0.3, "lambda": [[0.5, 0], ...], "z": [[0.55, 0], ...],
//    "tolerances": {"tol_feas": 1e-9, "tol_cert": 1e-8, "tol_r": 1e-4}}
// The tolerances block is optional.

#include <string>

#include <json.hpp>

#include "dpick/feasibility.hpp"
#include "dpick/operators.hpp"
#include "dpick/realization.hpp"

namespace dpick {

using Json = nlohmann::ordered_json;

struct ProblemFile {
  PickProblem problem;
  FeasibilityOptions options;
};

/// Throws ParseError naming the offending field.
ProblemFile parse_problem(const Json& j);
/// Reads and parses a file; unreadable files and JSON syntax errors also
/// raise ParseError (field "<file>" or "<document>").
ProblemFile load_problem(const std::string& path);

Json to_json(cplx v);
Json to_json(const ComplexVector& v);
Json to_json(const ComplexMatrix& m);
Json to_json(const Nodes& v);

cplx complex_from_json(const Json& j, const std::string& field);
ComplexVector vector_from_json(const Json& j, const std::string& field);
ComplexMatrix matrix_from_json(const Json& j, const std::string& field);

Json problem_to_json(const PickProblem& p);
Json kernel_to_json(const DPSzegoKernel& g);
Json witness_to_json(const FeasibilityWitness& w);

Json realization_to_json(const Realization& r);
/// Inverse of realization_to_json; throws ParseError.
Realization realization_from_json(const Json& j);

}  // namespace dpick
