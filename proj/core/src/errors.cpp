#include "momgraph/errors.hpp"

#include <algorithm>

namespace momgraph {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidGraph: return "InvalidGraph";
    case ErrorKind::NotOrientable: return "NotOrientable";
    case ErrorKind::OddLeadCount: return "OddLeadCount";
    case ErrorKind::NotBalanced: return "NotBalanced";
    case ErrorKind::MissingVertexCoupling: return "MissingVertexCoupling";
    case ErrorKind::InvalidCoupling: return "InvalidCoupling";
    case ErrorKind::IndexMismatch: return "IndexMismatch";
    case ErrorKind::GraphHasLeads: return "GraphHasLeads";
    case ErrorKind::LeadToLeadPath: return "LeadToLeadPath";
    case ErrorKind::ToleranceFailure: return "ToleranceFailure";
    case ErrorKind::AtEmbeddedEigenvalue: return "AtEmbeddedEigenvalue";
    case ErrorKind::ContinuationDiverged: return "ContinuationDiverged";
    case ErrorKind::VertexHit: return "VertexHit";
    case ErrorKind::ExplosionCap: return "ExplosionCap";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

void ValidationReport::add(std::string code, std::string message) {
  violations_.push_back({std::move(code), std::move(message)});
}

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(violations_.begin(), violations_.end(),
                     [&](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations_) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

}  // namespace momgraph
