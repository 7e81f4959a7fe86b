#include "momgraph_cli/run.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "json.hpp"
#include "momgraph/orientation.hpp"
#include "momgraph/two_loop.hpp"

namespace momgraph::cli {
namespace {

using ojson = nlohmann::ordered_json;

// Thrown for bad parameters or a document that cannot serve the command.
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x);
}

bool is_input_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidGraph:
    case ErrorKind::NotOrientable:
    case ErrorKind::OddLeadCount:
    case ErrorKind::NotBalanced:
    case ErrorKind::MissingVertexCoupling:
    case ErrorKind::InvalidCoupling:
    case ErrorKind::IndexMismatch:
    case ErrorKind::GraphHasLeads:
    case ErrorKind::LeadToLeadPath:
    case ErrorKind::InvalidArgument:
      return true;
    default:
      return false;
  }
}

const Document& need_doc(const std::optional<Document>& doc) {
  if (!doc) throw InvalidInput("this command needs a graph document (--input or --example)");
  return *doc;
}

MomentumOperator need_operator(const std::optional<Document>& doc) {
  const auto& d = need_doc(doc);
  if (!d.has_operator()) throw InvalidInput("the document has no couplings");
  return assemble(d.graph, d.couplings);
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw InvalidInput(fmt::format("{} must be positive", what));
}

class Table {
public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void row(std::vector<std::string> r) { rows_.push_back(std::move(r)); }

  void write(std::ostream& out) const {
    line(out, header_);
    for (const auto& r : rows_) line(out, r);
  }

private:
  static void line(std::ostream& out, const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_field(r[i]);
    out << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void emit(const RunSpec& spec, std::ostream& out, const Table& t, const ojson& j) {
  if (spec.format == Format::Csv) {
    t.write(out);
  } else {
    out << j.dump(2) << '\n';
  }
}

ojson path_json(const FreePath& p) {
  auto steps = ojson::array();
  for (const auto& s : p.steps) steps.push_back(ojson{{"edge", index(s.edge)}, {"forward", s.forward}});
  ojson j{{"kind", p.kind == PathKind::Loop ? "loop" : "lead-to-lead"}, {"steps", std::move(steps)}};
  if (p.kind == PathKind::Loop) j["length"] = p.total_length;
  return j;
}

void paths_table(Table& t, const PathDecomposition& d) {
  for (std::size_t i = 0; i < d.paths.size(); ++i) {
    const auto& p = d.paths[i];
    for (std::size_t s = 0; s < p.steps.size(); ++s) {
      t.row({std::to_string(i), p.kind == PathKind::Loop ? "loop" : "lead-to-lead", num(p.total_length),
             std::to_string(s), std::to_string(index(p.steps[s].edge)), p.steps[s].forward ? "1" : "0"});
    }
  }
}

ojson spectrum_json(const SpectrumResult& r) {
  auto pts = ojson::array();
  for (const auto& p : r.points) pts.push_back(ojson{{"k", p.k}, {"multiplicity", p.multiplicity}});
  return pts;
}

Table spectrum_table(const SpectrumResult& r) {
  Table t({"k", "multiplicity"});
  for (const auto& p : r.points) t.row({num(p.k), std::to_string(p.multiplicity)});
  return t;
}

int cmd_validate(const RunSpec& spec, const Document& d, std::ostream& out, std::ostream& err) {
  const auto& g = d.graph;
  const bool balanced = is_balanced(g);
  Table t({"key", "value"});
  t.row({"vertices", std::to_string(g.vertex_count())});
  t.row({"finite_edges", std::to_string(g.finite_edges().size())});
  t.row({"leads", std::to_string(g.leads().size())});
  t.row({"total_length", num(total_length(g))});
  t.row({"balanced", balanced ? "true" : "false"});
  t.row({"operator", d.has_operator() ? "true" : "false"});
  emit(spec, out, t,
       ojson{{"vertices", g.vertex_count()},
             {"finite_edges", g.finite_edges().size()},
             {"leads", g.leads().size()},
             {"total_length", total_length(g)},
             {"balanced", balanced},
             {"operator", d.has_operator()}});
  if (!balanced) {
    err << "error: graph is not balanced (in-degree differs from out-degree at some vertex)\n";
    return kExitInvalid;
  }
  return kExitOk;
}

int cmd_orient(const RunSpec& spec, const Document& d, std::ostream& out, std::ostream& err) {
  const auto ug = forget_orientation(d.graph);
  Orientation o;
  try {
    o = orient(ug);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotOrientable || e.kind() == ErrorKind::OddLeadCount) {
      const std::string what = e.what();
      err << "error: " << (what.rfind("not balanced orientable", 0) == 0 ? what : "not balanced orientable: " + what) << '\n';
      return kExitInvalid;
    }
    throw;
  }
  Table t({"edge", "kind", "start", "end", "length"});
  for (const auto& e : o.graph.finite_edges()) {
    t.row({std::to_string(index(e.id)), "finite", std::to_string(index(e.start)), std::to_string(index(e.end)), num(e.length)});
  }
  for (const auto& l : o.graph.leads()) {
    const bool in = l.direction == LeadDirection::Incoming;
    const auto a = std::to_string(index(l.anchor));
    t.row({std::to_string(index(l.id)), in ? "lead-in" : "lead-out", in ? "" : a, in ? a : "", "inf"});
  }
  Document oriented{d.name, d.description, o.graph, {}};
  auto paths = ojson::array();
  for (const auto& p : o.decomposition.paths) paths.push_back(path_json(p));
  emit(spec, out, t, ojson{{"graph", ojson::parse(serialize_document(oriented))}, {"paths", std::move(paths)}});
  return kExitOk;
}

int cmd_decompose(const RunSpec& spec, const Document& d, std::ostream& out) {
  const auto dec = decompose_free_paths(d.graph);
  Table t({"path", "kind", "length", "step", "edge", "forward"});
  paths_table(t, dec);
  auto paths = ojson::array();
  for (const auto& p : dec.paths) paths.push_back(path_json(p));
  ojson j{{"paths", std::move(paths)}};
  if (d.has_operator()) {
    auto comps = ojson::array();
    for (const auto& c : decompose_operator(assemble(d.graph, d.couplings))) {
      auto edges = ojson::array(), vertices = ojson::array();
      for (const auto e : c.edge_map) edges.push_back(index(e));
      for (const auto v : c.vertex_map) vertices.push_back(index(v));
      comps.push_back(ojson{{"edges", std::move(edges)}, {"vertices", std::move(vertices)}});
    }
    j["components"] = std::move(comps);
  }
  emit(spec, out, t, j);
  return kExitOk;
}

int cmd_spectrum(const RunSpec& spec, const std::optional<Document>& doc, std::ostream& out) {
  require_positive(spec.lambda, "--lambda");
  const auto op = need_operator(doc);
  const auto r = real_spectrum(SecularSystem(op), spec.lambda, spec.phase_tol);
  emit(spec, out, spectrum_table(r),
       ojson{{"lambda", spec.lambda}, {"total", r.total_multiplicity()}, {"points", spectrum_json(r)}});
  return kExitOk;
}

int cmd_count(const RunSpec& spec, const std::optional<Document>& doc, std::ostream& out) {
  const auto lambdas = spec.lambdas.empty() ? std::vector<double>{spec.lambda} : spec.lambdas;
  for (const double l : lambdas) require_positive(l, "--lambda");
  const SecularSystem s(need_operator(doc));
  Table t({"lambda", "count", "weyl"});
  auto rows = ojson::array();
  for (const double l : lambdas) {
    const auto n = counting_function(s, l);
    const double weyl = s.total_length() * l / std::numbers::pi;
    t.row({num(l), std::to_string(n), num(weyl)});
    rows.push_back(ojson{{"lambda", l}, {"count", n}, {"weyl", weyl}});
  }
  emit(spec, out, t, rows);
  return kExitOk;
}

int cmd_embedded(const RunSpec& spec, const std::optional<Document>& doc, std::ostream& out) {
  require_positive(spec.lambda, "--lambda");
  const auto op = need_operator(doc);
  const auto r = embedded_eigenvalues(op, spec.lambda, spec.sv_tol);
  auto efs = ojson::array();
  for (const auto& ef : r.eigenfunctions) {
    auto amps = ojson::array();
    for (Eigen::Index i = 0; i < ef.amplitudes.size(); ++i) {
      amps.push_back(ojson::array({ef.amplitudes[i].real(), ef.amplitudes[i].imag()}));
    }
    efs.push_back(ojson{{"k", ef.k.real()}, {"amplitudes", std::move(amps)}});
  }
  emit(spec, out, spectrum_table(r.spectrum),
       ojson{{"lambda", spec.lambda}, {"points", spectrum_json(r.spectrum)}, {"eigenfunctions", std::move(efs)}});
  return kExitOk;
}

int cmd_resonances(const RunSpec& spec, std::ostream& out) {
  require_positive(spec.ell, "--ell");
  if (!std::isfinite(spec.delta)) throw InvalidInput("--delta must be finite");
  if (spec.steps < 1) throw InvalidInput("--steps must be at least 1");
  if (spec.n_lo > spec.n_hi) throw InvalidInput("--n range is empty");
  Table t({"n", "delta", "re_k", "im_k"});
  auto rows = ojson::array();
  for (int n = spec.n_lo; n <= spec.n_hi; ++n) {
    const Complex k = continue_resonance(spec.ell, spec.delta, n, spec.steps);
    t.row({std::to_string(n), num(spec.delta), num(k.real()), num(k.imag())});
    rows.push_back(ojson{{"n", n}, {"delta", spec.delta}, {"re_k", k.real()}, {"im_k", k.imag()}});
  }
  emit(spec, out, t, ojson{{"ell", spec.ell}, {"roots", std::move(rows)}});
  return kExitOk;
}

int cmd_evolve(const RunSpec& spec, const std::optional<Document>& doc, std::ostream& out) {
  require_positive(spec.samples_per_unit, "--samples-per-unit");
  if (!std::isfinite(spec.a)) throw InvalidInput("--a must be finite");
  if (!(spec.lo < spec.hi)) throw InvalidInput("--lo must be below --hi");
  const auto op = need_operator(doc);
  const EdgeId e = edge_id(spec.edge);
  if (!op.graph().has_edge(e)) throw InvalidInput(fmt::format("unknown edge {}", spec.edge));
  if (!contains(op.graph(), {e, spec.lo}) || !contains(op.graph(), {e, spec.hi})) {
    throw InvalidInput("bump support leaves its edge");
  }
  WavePacket psi{{bump(e, spec.lo, spec.hi)}};
  if (spec.normalize) psi = normalized(psi);
  const auto moved = evolve(op, psi, spec.a, spec.cap);
  Table t({"edge", "x", "re", "im"});
  auto rows = ojson::array();
  for (const auto& p : sample_points(moved, spec.samples_per_unit)) {
    const Complex v = evaluate(moved, p);
    t.row({std::to_string(index(p.edge)), num(p.coordinate), num(v.real()), num(v.imag())});
    rows.push_back(ojson{{"edge", index(p.edge)}, {"x", p.coordinate}, {"re", v.real()}, {"im", v.imag()}});
  }
  if (spec.format == Format::Csv) {
    t.write(out);
  } else {
    out << ojson{{"a", spec.a}, {"norm_in", packet_norm(psi)}, {"norm_out", packet_norm(moved)}, {"samples", std::move(rows)}}.dump(2)
        << '\n';
  }
  return kExitOk;
}

int cmd_example(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  if (spec.example.empty()) {
    Table t({"name", "description"});
    auto names = ojson::array();
    for (const auto& d : emit_examples()) {
      t.row({d.name, d.description});
      names.push_back(ojson{{"name", d.name}, {"description", d.description}});
    }
    emit(spec, out, t, names);
    return kExitOk;
  }
  const auto d = find_example(spec.example);
  if (!d) {
    err << "error: unknown example '" << spec.example << "'\n";
    return kExitInvalid;
  }
  out << serialize_document(*d);
  return kExitOk;
}

}  // namespace

std::optional<Command> parse_command(const std::string& s) {
  static const std::pair<const char*, Command> names[] = {
      {"validate", Command::Validate}, {"orient", Command::Orient},         {"spectrum", Command::Spectrum},
      {"count", Command::Count},       {"embedded", Command::Embedded},     {"resonances", Command::Resonances},
      {"evolve", Command::Evolve},     {"decompose", Command::Decompose},   {"example", Command::Example}};
  for (const auto& [n, c] : names) {
    if (s == n) return c;
  }
  return std::nullopt;
}

std::pair<int, int> parse_range(const std::string& s) {
  auto to_int = [&](const std::string& t) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (t.empty() || used != t.size()) throw std::invalid_argument("bad range '" + s + "'");
    return v;
  };
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const int v = to_int(s);
    return {v, v};
  }
  return {to_int(s.substr(0, dots)), to_int(s.substr(dots + 2))};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

int run(const RunSpec& spec, const std::optional<Document>& doc, std::ostream& out, std::ostream& err) {
  try {
    switch (spec.command) {
      case Command::Validate:
        return cmd_validate(spec, need_doc(doc), out, err);
      case Command::Orient:
        return cmd_orient(spec, need_doc(doc), out, err);
      case Command::Decompose:
        return cmd_decompose(spec, need_doc(doc), out);
      case Command::Spectrum:
        return cmd_spectrum(spec, doc, out);
      case Command::Count:
        return cmd_count(spec, doc, out);
      case Command::Embedded:
        return cmd_embedded(spec, doc, out);
      case Command::Resonances:
        return cmd_resonances(spec, out);
      case Command::Evolve:
        return cmd_evolve(spec, doc, out);
      case Command::Example:
        return cmd_example(spec, out, err);
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return is_input_error(e.kind()) ? kExitInvalid : kExitFailure;
  }
  return kExitFailure;
}

}  // namespace momgraph::cli
