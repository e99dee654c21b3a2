#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace entmon::cli {

enum ExitCode : int { kSuccess = 0, kUnexpected = 1, kUsage = 2 };

struct CertifyOptions {
  std::string measure;
  std::uint64_t seed = 0;
  std::optional<std::size_t> trials;
  std::optional<double> tol;
  std::vector<std::string> dims;  // "2,3" per profile
  std::vector<std::size_t> ensemble_sizes;
  std::optional<std::size_t> rounds;
  std::optional<std::size_t> outcomes;
  std::size_t threads = 0;
  std::string format = "report";  // report | summary
  bool timings = false;
};

/// Report on `out`, human summary on `err`. 0 iff the verdict matches the
/// measure's declared expectation.
int cmd_certify(const CertifyOptions& opt, std::ostream& out, std::ostream& err);

struct EvalOptions {
  std::string measure;
  std::string state_path;
  bool bits = false;
};

int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err);

struct GenOptions {
  std::string family;
  std::size_t d = 2;
  double fidelity = 1.0;
  std::string dims = "2,2";
  std::optional<std::size_t> rank;
  std::optional<std::size_t> terms;
  std::size_t size = 2;
  std::string site = "B";
  std::uint64_t seed = 0;
};

/// StateFile on `out`.
int cmd_gen(const GenOptions& opt, std::ostream& out, std::ostream& err);

/// Re-runs the certification embedded in a report and compares every worst
/// violation and witness to 1e-12.
int cmd_verify_report(const std::string& path, std::ostream& out, std::ostream& err);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace entmon::cli
