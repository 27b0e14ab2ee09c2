#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "dpick/feasibility.hpp"

namespace dpick::cli {

enum ExitCode : int {
  kOk = 0,
  kSuiteFailure = 1,
  kInvalidInput = 2,
  kInfeasible = 3,
  kUndecided = 4,
};

/// Flags shared by the subcommands; unset optionals keep file or library
/// defaults.
struct Flags {
  std::optional<double> tol_feas;
  std::optional<double> tol_cert;
  std::optional<double> tol_r;
  std::optional<int> max_iterations;
  std::uint64_t seed = 0;
  int budget = 2000;
  std::string format = "json";
};

FeasibilityOptions apply_flags(FeasibilityOptions opts, const Flags& f);

int cmd_solve(const std::string& path, const Flags& f, std::ostream& out);
int cmd_realize(const std::string& path, const Flags& f, std::ostream& out);
int cmd_extremal(const std::string& path, bool at_rstar, const Flags& f, std::ostream& out);
int cmd_dpnorm(const std::string& function, double delta, const Flags& f, std::ostream& out);

/// case_id: "all", "2.5", "5.4", "5.5" or "5.6"; delta restricts the
/// parametrized cases to one value.
int cmd_examples(const std::string& case_id, std::optional<double> delta, const Flags& f,
                 std::ostream& out);

struct SweepSpec {
  std::string path;     // problem file, or empty when case_id is set
  std::string case_id;  // "5.4" or "5.5" regenerate the data per delta
  std::string parameter = "delta";  // "delta" or "scale"
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
  bool with_rstar = false;
};

int cmd_sweep(const SweepSpec& s, const Flags& f, std::ostream& out);

/// Data of the worked examples.
PickProblem example_54(double delta);
PickProblem example_55(double delta);

}  // namespace dpick::cli
