#ifndef GOG_COMMON_HPP
#define GOG_COMMON_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gog {

// Thrown on malformed input data (bad tables, dangling ids, schema errors).
struct invalid_input : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a computation exceeds its budget. Carries the stage name so
// drivers can report where they stopped instead of guessing an answer.
struct budget_exhausted : std::runtime_error {
  std::string stage;
  explicit budget_exhausted(std::string st)
      : std::runtime_error("budget exhausted at stage: " + st), stage(std::move(st)) {}
};

// Thrown when an operation's mathematical hypothesis fails on the input
// (e.g. a tree handed to blowup_vertex with a finite edge group).
struct hypothesis_violation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Cert { Yes, No, Unknown };

inline const char* to_string(Cert c) {
  switch (c) {
    case Cert::Yes: return "yes";
    case Cert::No: return "no";
    default: return "unknown";
  }
}

struct Budgets {
  int radius = 6;        // ball/search radius for tree expansions
  long steps = 200000;   // generic step budget for saturations and closures
  int oracle_bound = 64; // bounded-search depth for the free-splitting oracle
};

// Outcome of a structural validation: pass, or the first violated rule
// together with a human-readable witness.
struct ValidationReport {
  bool ok = true;
  std::string rule;
  std::string witness;

  static ValidationReport pass() { return {}; }
  static ValidationReport fail(std::string r, std::string w) {
    return ValidationReport{false, std::move(r), std::move(w)};
  }
};

} // namespace gog

#endif
