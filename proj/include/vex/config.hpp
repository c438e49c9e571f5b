#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vex/problem.hpp"
#include "vex/transform.hpp"

namespace vex {

// Minimal TOML-style config value: number, boolean, quoted string, or array
// of numbers.  Everything the problem files need, nothing more.
struct ConfigValue {
  enum class Kind { number, boolean, string, array };

  Kind kind = Kind::number;
  double num = 0.0;
  bool flag = false;
  std::string str;
  std::vector<double> arr;
};

using ConfigTable = std::map<std::string, std::map<std::string, ConfigValue>>;

// Parses [section] headers, key = value lines, # comments.  Duplicate keys
// and unterminated strings are config errors with line numbers.
ConfigTable parse_config(const std::string& text);

struct Overrides {
  std::optional<double> eta;
  std::optional<double> p1;
  std::optional<int> analysis_dim;
  std::optional<uint64_t> seed;
};

struct LoadedProblem {
  ProblemSpec spec;
  std::string name;
  std::string path;
  uint64_t seed = 0;
  std::string content_hash;
  // Candidate function of the [norms] section, when declared.
  std::optional<GridFunction> norm_candidate;
  // Rebuilds the same problem with n nodes per axis; unavailable (throws)
  // when any field was loaded from a csv table.
  bool resamplable = false;
  std::function<ProblemSpec(int)> resample;
};

// Field values in problem files are numbers (constants), expression strings
// over x, y, pi, or "csv:<relative path>" table references.
LoadedProblem load_problem(const std::string& path, const Overrides& ov = {});

// Emits the reduced problem in the same schema: the config at `path`, nodal
// fields in sidecar csv tables next to it.  Returns every file written.
std::vector<std::string> write_reduced_problem(const std::string& path,
                                               const ReduceResult& red);

}  // namespace vex
