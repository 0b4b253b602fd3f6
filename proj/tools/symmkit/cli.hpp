#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "symmkit/algfile.hpp"
#include "symmkit/expr.hpp"
#include "symmkit/problem.hpp"

namespace symmkit::cli {

struct RunConfig {
  std::string command;
  std::string subcommand;  // algebra table|adjoint|killing|series
  std::string input;
  std::string target;      // transform NAME
  std::optional<std::string> fixture;
  std::optional<std::string> algebra;  // classify / transform: the .alg file
  int degree = 3;
  bool json = false;
  bool split_arbitrary = false;
  bool unrestricted = false;
  bool probe = true;
  std::map<std::string, std::string> params;
  std::vector<std::string> assume_positive;
  std::vector<std::string> check_invariants;
};

struct Finding {
  std::string kind;
  std::string location;  // file:line where the claim comes from, when known
  std::string message;
};

struct Report {
  std::string command;
  std::string input;
  std::string text;
  nlohmann::json results = nlohmann::json::object();
  std::vector<Finding> findings;

  void line(const std::string& s = "") { text += s + "\n"; }
  void finding(std::string kind, std::string location, std::string message);
  nlohmann::json to_json() const;
  int exit_code() const { return findings.empty() ? 0 : 1; }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Report run_determining(const RunConfig& cfg);
Report run_symmetries(const RunConfig& cfg);
Report run_equivalence(const RunConfig& cfg);
Report run_algebra(const RunConfig& cfg);
Report run_optimal(const RunConfig& cfg);
Report run_classify(const RunConfig& cfg);
Report run_transform(const RunConfig& cfg);

Report dispatch(const RunConfig& cfg);

// parses argv, runs the command and prints the report; returns the exit code
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

// helpers shared with the tests
ProblemSpec load_problem(const RunConfig& cfg);
AlgebraFile load_algebra(const std::string& path, const RunConfig& cfg);
std::string default_algebra_path(const std::string& pde_path);
nlohmann::json field_json(const VectorField& v);

}  // namespace symmkit::cli
