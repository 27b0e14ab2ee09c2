#include "dpick/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dpick/errors.hpp"

namespace dpick {

namespace {

double number_from_json(const Json& j, const std::string& field) {
  if (!j.is_number()) throw ParseError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(field, "number is not finite");
  return v;
}

const Json& require(const Json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(key, "missing");
  return j.at(key);
}

Nodes nodes_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError(field, "expected an array of [re, im] pairs");
  Nodes out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(complex_from_json(j[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

int int_from_json(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ParseError(field, "expected an integer");
  return j.get<int>();
}

}  // namespace

Json to_json(cplx v) { return Json::array({v.real(), v.imag()}); }

Json to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Json to_json(const ComplexMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const Nodes& v) {
  Json out = Json::array();
  for (const auto& c : v) out.push_back(to_json(c));
  return out;
}

cplx complex_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ParseError(field, "expected a [re, im] pair");
  return {number_from_json(j[0], field + "[0]"), number_from_json(j[1], field + "[1]")};
}

ComplexVector vector_from_json(const Json& j, const std::string& field) {
  const Nodes v = nodes_from_json(j, field);
  ComplexVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError(field, "expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  ComplexMatrix out(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const std::string rf = field + "[" + std::to_string(i) + "]";
    const ComplexVector row = vector_from_json(j[static_cast<std::size_t>(i)], rf);
    if (row.size() != rows) throw ParseError(rf, "row length does not match a square matrix");
    out.row(i) = row.transpose();
  }
  return out;
}

ProblemFile parse_problem(const Json& j) {
  if (!j.is_object()) throw ParseError("<document>", "expected a JSON object");
  const double delta = number_from_json(require(j, "delta"), "delta");
  const Nodes lambda = nodes_from_json(require(j, "lambda"), "lambda");
  const Nodes z = nodes_from_json(require(j, "z"), "z");
  if (!(delta > 0.0 && delta < 1.0)) throw ParseError("delta", "must lie in (0, 1)");
  if (lambda.empty()) throw ParseError("lambda", "at least one node is required");
  if (z.size() != lambda.size()) throw ParseError("z", "length differs from lambda");
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const double r = std::abs(lambda[i]);
    if (!(r > delta && r < 1.0)) {
      throw ParseError("lambda[" + std::to_string(i) + "]", "node outside the annulus");
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (std::abs(lambda[i] - lambda[k]) <= 1e-12) {
        throw ParseError("lambda[" + std::to_string(i) + "]", "repeats an earlier node");
      }
    }
  }

  FeasibilityOptions opts;
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    if (!t.is_object()) throw ParseError("tolerances", "expected an object");
    auto positive = [&](const char* key, double& dst) {
      if (!t.contains(key)) return;
      const std::string field = std::string("tolerances.") + key;
      const double v = number_from_json(t.at(key), field);
      if (!(v > 0.0)) throw ParseError(field, "must be positive");
      dst = v;
    };
    positive("tol_feas", opts.tol_feas);
    positive("tol_cert", opts.tol_cert);
    positive("tol_r", opts.tol_r);
    if (t.contains("max_iterations")) {
      opts.max_iterations = int_from_json(t.at("max_iterations"), "tolerances.max_iterations");
      if (opts.max_iterations < 1) throw ParseError("tolerances.max_iterations", "must be positive");
    }
  }
  return {PickProblem(delta, lambda, z), opts};
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("<file>", "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("<document>", std::string("malformed JSON: ") + e.what());
  }
  return parse_problem(j);
}

Json problem_to_json(const PickProblem& p) {
  Json j;
  j["delta"] = p.delta();
  j["lambda"] = to_json(p.lambda());
  j["z"] = to_json(p.z());
  return j;
}

Json kernel_to_json(const DPSzegoKernel& g) {
  Json j;
  j["g"] = to_json(g.g().matrix());
  j["min_eig_g"] = g.report().min_eig_g;
  j["min_eig_cert1"] = g.report().min_eig_cert1;
  j["min_eig_cert2"] = g.report().min_eig_cert2;
  return j;
}

Json witness_to_json(const FeasibilityWitness& w) {
  Json j;
  j["verdict"] = to_string(w.verdict);
  j["residual"] = std::isfinite(w.residual) ? Json(w.residual) : Json(nullptr);
  j["iterations"] = w.iterations;
  if (w.A) j["A"] = to_json(w.A->matrix());
  if (w.B) j["B"] = to_json(w.B->matrix());
  if (w.certificate) {
    j["certificate"] = kernel_to_json(*w.certificate);
    j["certificate"]["pick_min_eig"] = w.certificate_min_eig;
  }
  return j;
}

Json realization_to_json(const Realization& r) {
  Json j;
  j["a"] = to_json(r.a);
  j["beta"] = to_json(r.beta);
  j["gamma"] = to_json(r.gamma);
  j["D"] = to_json(r.D);
  j["r1"] = r.r1;
  j["r2"] = r.r2;
  j["delta"] = r.delta;
  return j;
}

Realization realization_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("<document>", "expected a JSON object");
  Realization r;
  r.a = complex_from_json(require(j, "a"), "a");
  r.beta = vector_from_json(require(j, "beta"), "beta");
  r.gamma = vector_from_json(require(j, "gamma"), "gamma");
  r.D = matrix_from_json(require(j, "D"), "D");
  r.r1 = int_from_json(require(j, "r1"), "r1");
  r.r2 = int_from_json(require(j, "r2"), "r2");
  r.delta = number_from_json(require(j, "delta"), "delta");
  const int m = r.r1 + r.r2;
  if (r.r1 < 0 || r.r2 < 0) throw ParseError("r1", "block sizes must be nonnegative");
  if (r.beta.size() != m) throw ParseError("beta", "length differs from r1 + r2");
  if (r.gamma.size() != m) throw ParseError("gamma", "length differs from r1 + r2");
  if (r.D.rows() != m) throw ParseError("D", "size differs from r1 + r2");
  return r;
}

}  // namespace dpick
