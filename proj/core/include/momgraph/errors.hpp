#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace momgraph {

enum class ErrorKind {
  InvalidGraph,
  NotOrientable,
  OddLeadCount,
  NotBalanced,
  MissingVertexCoupling,
  InvalidCoupling,
  IndexMismatch,
  GraphHasLeads,
  LeadToLeadPath,
  ToleranceFailure,
  AtEmbeddedEigenvalue,
  ContinuationDiverged,
  VertexHit,
  ExplosionCap,
  DomainViolation,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for every library failure; `kind()` discriminates.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// Report-style validation result: empty means admissible.
struct Violation {
  std::string code;
  std::string message;
};

class ValidationReport {
public:
  void add(std::string code, std::string message);

  bool ok() const noexcept { return violations_.empty(); }
  bool has(std::string_view code) const;
  const std::vector<Violation>& violations() const noexcept { return violations_; }
  std::string summary() const;

private:
  std::vector<Violation> violations_;
};

}  // namespace momgraph
