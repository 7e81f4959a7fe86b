#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "momgraph/coupling.hpp"
#include "momgraph/graph.hpp"

namespace momgraph::cli {

/// Graph plus optional vertex couplings, as read from a graph document.
/// `couplings` may be empty (enough for validate / orient / decompose);
/// otherwise it holds exactly one entry per vertex in vertex order.
struct Document {
  std::string name;
  std::string description;
  MetricGraph graph;
  std::vector<VertexCoupling> couplings;

  bool has_operator() const noexcept { return !couplings.empty(); }
};

/// Thrown for malformed or inadmissible documents. `location` is either
/// "line:column" (syntax) or a JSON pointer (semantic).
class DocumentError : public std::runtime_error {
public:
  DocumentError(std::string location, const std::string& message)
      : std::runtime_error(location.empty() ? message : location + ": " + message),
        location_(std::move(location)) {}

  const std::string& location() const noexcept { return location_; }

private:
  std::string location_;
};

Document parse_document(const std::string& text, double unitarity_tol = kUnitarityTol);

std::string serialize_document(const Document& doc);

Document document_from_operator(std::string name, std::string description, const MomentumOperator& op);

/// Built-in examples as documents, in a fixed order.
std::vector<Document> emit_examples();

std::optional<Document> find_example(const std::string& name);

}  // namespace momgraph::cli
