#pragma once

// Command-line front end: run configuration, sequence generators, and dispatch.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vdlab/funcspace.hpp"

namespace vdlab::cli {

inline constexpr const char* kCommands[] = {"jensen", "fmt", "mason", "rh", "logrh",
                                            "taut", "bubble", "gromov", "currents"};

struct RunConfig {
  std::string command;
  std::string map;
  std::vector<std::string> divisors;  // divisor specs; boundary point lists for logrh and taut
  std::vector<std::string> bubbles;   // `attach ; map`
  std::vector<double> r_grid;
  std::optional<double> tol;
  int mesh = 128;
  std::string seq;
  std::string out_csv;
  std::string out_json;
  bool exact = false;
  unsigned seed = 1;
  bool no_timestamp = false;
  std::string a;
  std::string b;
  std::optional<int> degree;
  double bound = 1.0;
  int tail = 30;
  int count = 20;

  /// Throws Error(InvalidArgument) on out-of-range fields.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Exit statuses of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitIdentityViolation = 2;

/// Parses flags, reading `--config` first so that flags override file entries. Returns the
/// exit status when parsing ends the program (help, or a parse error), nullopt otherwise.
std::optional<int> parse_command_line(int argc, const char* const* argv, RunConfig& out, std::ostream& msg);

/// Reads `r` or `r1,r2,...`.
std::vector<double> parse_radii(const std::string& text);

struct SequenceSpec {
  std::string name;
  std::string map_template;  // e.g. `1:(2z)^n+1`
  std::vector<int> indices;
};

/// `name:[1:(2z)^n],n=1..50` or `name:[1:nz],n=10,100,1000`. Templates: nz, z+1/n, z/n,
/// z^n, (2z)^n, (2z)^n+c with c an exact coefficient.
SequenceSpec parse_sequence(const std::string& text);

/// The maps of a sequence, with exact coefficients.
std::vector<RationalMap> build_sequence(const SequenceSpec& spec);

/// Runs the configured command, writes report files and returns the exit status. Progress
/// and the verdict line go to `log`; the JSON report goes to stdout-like `out` when no
/// `--out-json` path is set.
int run(const RunConfig& config, std::ostream& out, std::ostream& log);

}  // namespace vdlab::cli
