#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "momgraph/coupling.hpp"
#include "momgraph/evolution.hpp"
#include "momgraph/spectra.hpp"
#include "momgraph_cli/document.hpp"

namespace momgraph::cli {

enum class Command { Validate, Orient, Spectrum, Count, Embedded, Resonances, Evolve, Decompose, Example };
enum class Format { Csv, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;

struct RunSpec {
  Command command = Command::Validate;
  Format format = Format::Csv;

  double lambda = 20.0;
  std::vector<double> lambdas;  // count; falls back to `lambda` when empty
  double phase_tol = kPhaseTol;
  double sv_tol = kRankTol;

  double ell = 1.0;
  double delta = 1e-3;
  int n_lo = 1;
  int n_hi = 5;
  int steps = 32;

  double a = 1.0;
  std::size_t edge = 0;
  double lo = -1.0;
  double hi = 0.0;
  double samples_per_unit = 32.0;
  std::size_t cap = kRouteCap;
  bool normalize = true;

  std::string example;  // example: name to print; empty lists all
};

std::optional<Command> parse_command(const std::string& s);

/// Parses "a..b" or a single integer.
std::pair<int, int> parse_range(const std::string& s);

/// Runs one command. Results go to `out`, diagnostics to `err`. Returns
/// kExitOk, kExitFailure (computation error) or kExitInvalid (bad input).
int run(const RunSpec& spec, const std::optional<Document>& doc, std::ostream& out, std::ostream& err);

/// RFC 4180 quoting: fields containing comma, quote or newline are quoted.
std::string csv_field(const std::string& s);

}  // namespace momgraph::cli
