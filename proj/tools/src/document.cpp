#include "momgraph_cli/document.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "json.hpp"

#include "momgraph/builtins.hpp"

namespace momgraph::cli {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string line_col(const std::string& text, std::size_t byte) {
  // nlohmann reports the 1-based offset just past the last character read,
  // so the column points at the end of the offending token
  const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

std::string ptr(const std::string& base, const std::string& key) { return base + "/" + key; }
std::string ptr(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw DocumentError(where.empty() ? "/" : where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw DocumentError(ptr(where, key), "unknown key '" + key + "'");
    }
  }
}

const json& need(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw DocumentError(where.empty() ? "/" : where, std::string("missing key '") + key + "'");
  return obj.at(key);
}

std::size_t as_index(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw DocumentError(where, "expected a non-negative integer");
  return v.get<std::size_t>();
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw DocumentError(where, "expected a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw DocumentError(where, "expected a string");
  return v.get<std::string>();
}

const json& as_array(const json& v, const std::string& where) {
  if (!v.is_array()) throw DocumentError(where, "expected an array");
  return v;
}

std::vector<EdgeId> edge_list(const json& v, const std::string& where) {
  std::vector<EdgeId> out;
  for (std::size_t i = 0; i < as_array(v, where).size(); ++i) out.push_back(edge_id(as_index(v[i], ptr(where, i))));
  return out;
}

Complex as_complex(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) throw DocumentError(where, "expected a [re, im] pair");
  return {as_number(v[0], ptr(where, 0)), as_number(v[1], ptr(where, 1))};
}

ComplexMatrix as_matrix(const json& v, const std::string& where) {
  as_array(v, where);
  const std::size_t rows = v.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    as_array(v[r], ptr(where, r));
    if (r == 0) cols = v[r].size();
    if (v[r].size() != cols) throw DocumentError(ptr(where, r), "ragged matrix row");
  }
  if (rows != cols) {
    throw DocumentError(where, "unbalanced vertex: coupling matrix is " + std::to_string(rows) + "x" +
                                   std::to_string(cols));
  }
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = as_complex(v[r][c], ptr(ptr(where, r), c));
    }
  }
  return m;
}

ojson complex_json(Complex z) { return ojson::array({z.real(), z.imag()}); }

}  // namespace

Document parse_document(const std::string& text, double unitarity_tol) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DocumentError(line_col(text, e.byte), "syntax error");
  }
  only_keys(root, "", {"name", "description", "vertices", "finite_edges", "leads", "couplings"});

  Document doc;
  if (root.contains("name")) doc.name = as_string(root["name"], "/name");
  if (root.contains("description")) doc.description = as_string(root["description"], "/description");
  const std::size_t nv = as_index(need(root, "", "vertices"), "/vertices");

  std::vector<FiniteEdge> edges;
  std::vector<Lead> leads;
  std::set<std::size_t> ids;
  std::map<std::size_t, std::string> where_id;
  auto take_id = [&](const json& v, const std::string& where) {
    const std::size_t id = as_index(v, where);
    if (!ids.insert(id).second) throw DocumentError(where, "duplicate edge id " + std::to_string(id));
    where_id[id] = where;
    return edge_id(id);
  };
  auto vertex = [&](const json& v, const std::string& where) {
    const std::size_t j = as_index(v, where);
    if (j >= nv) throw DocumentError(where, "unknown vertex " + std::to_string(j));
    return vertex_id(j);
  };

  if (root.contains("finite_edges")) {
    const auto& arr = as_array(root["finite_edges"], "/finite_edges");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string at = ptr("/finite_edges", i);
      only_keys(arr[i], at, {"id", "start", "end", "length"});
      FiniteEdge e{take_id(need(arr[i], at, "id"), ptr(at, "id")), vertex(need(arr[i], at, "start"), ptr(at, "start")),
                   vertex(need(arr[i], at, "end"), ptr(at, "end")), as_number(need(arr[i], at, "length"), ptr(at, "length"))};
      if (!(e.length > 0.0) || !std::isfinite(e.length)) throw DocumentError(ptr(at, "length"), "length must be positive and finite");
      edges.push_back(e);
    }
  }
  if (root.contains("leads")) {
    const auto& arr = as_array(root["leads"], "/leads");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string at = ptr("/leads", i);
      only_keys(arr[i], at, {"id", "anchor", "direction"});
      const EdgeId id = take_id(need(arr[i], at, "id"), ptr(at, "id"));
      const VertexId anchor = vertex(need(arr[i], at, "anchor"), ptr(at, "anchor"));
      const std::string dir = as_string(need(arr[i], at, "direction"), ptr(at, "direction"));
      if (dir != "in" && dir != "out") throw DocumentError(ptr(at, "direction"), "direction must be \"in\" or \"out\"");
      leads.push_back({id, anchor, dir == "in" ? LeadDirection::Incoming : LeadDirection::Outgoing});
    }
  }
  std::size_t expect = 0;
  for (const std::size_t id : ids) {
    if (id != expect++) throw DocumentError(where_id[id], "edge ids must be numbered 0..n-1 without gaps");
  }

  doc.graph = MetricGraph(nv, std::move(edges), std::move(leads));
  if (const auto rep = validate_graph(doc.graph); !rep.ok()) throw DocumentError("/", rep.summary());

  if (root.contains("couplings")) {
    const auto& arr = as_array(root["couplings"], "/couplings");
    std::vector<std::optional<VertexCoupling>> slot(nv);
    std::vector<std::string> slot_at(nv);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string at = ptr("/couplings", i);
      only_keys(arr[i], at, {"vertex", "out_order", "in_order", "matrix"});
      const VertexId v = vertex(need(arr[i], at, "vertex"), ptr(at, "vertex"));
      if (slot[index(v)]) throw DocumentError(ptr(at, "vertex"), "duplicate coupling for vertex " + std::to_string(index(v)));
      VertexCoupling c{v, edge_list(need(arr[i], at, "out_order"), ptr(at, "out_order")),
                       edge_list(need(arr[i], at, "in_order"), ptr(at, "in_order")),
                       as_matrix(need(arr[i], at, "matrix"), ptr(at, "matrix"))};
      auto same_set = [](std::vector<EdgeId> a, std::vector<EdgeId> b) {
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        return a == b;
      };
      if (!same_set(c.out_order, doc.graph.outgoing(v))) {
        throw DocumentError(ptr(at, "out_order"), "must list exactly the edges leaving the vertex");
      }
      if (!same_set(c.in_order, doc.graph.incoming(v))) {
        throw DocumentError(ptr(at, "in_order"), "must list exactly the edges entering the vertex");
      }
      if (static_cast<std::size_t>(c.matrix.rows()) != c.out_order.size()) {
        throw DocumentError(ptr(at, "matrix"), "unbalanced vertex: matrix size does not match the edge ends");
      }
      if (const auto rep = validate_coupling(c, unitarity_tol); !rep.ok()) {
        throw DocumentError(ptr(at, "matrix"), rep.summary());
      }
      slot_at[index(v)] = at;
      slot[index(v)] = std::move(c);
    }
    if (!arr.empty()) {
      for (std::size_t j = 0; j < nv; ++j) {
        if (!slot[j]) throw DocumentError("/couplings", "missing coupling for vertex " + std::to_string(j));
        doc.couplings.push_back(std::move(*slot[j]));
      }
      try {
        (void)assemble(doc.graph, doc.couplings, unitarity_tol);
      } catch (const Error& e) {
        throw DocumentError("/couplings", e.what());
      }
    }
  }
  return doc;
}

std::string serialize_document(const Document& doc) {
  ojson root;
  if (!doc.name.empty()) root["name"] = doc.name;
  if (!doc.description.empty()) root["description"] = doc.description;
  root["vertices"] = doc.graph.vertex_count();
  auto edges = ojson::array();
  for (const auto& e : doc.graph.finite_edges()) {
    edges.push_back(ojson{{"id", index(e.id)}, {"start", index(e.start)}, {"end", index(e.end)}, {"length", e.length}});
  }
  root["finite_edges"] = std::move(edges);
  auto leads = ojson::array();
  for (const auto& l : doc.graph.leads()) {
    leads.push_back(ojson{{"id", index(l.id)},
                          {"anchor", index(l.anchor)},
                          {"direction", l.direction == LeadDirection::Incoming ? "in" : "out"}});
  }
  root["leads"] = std::move(leads);
  if (doc.has_operator()) {
    auto cs = ojson::array();
    for (const auto& c : doc.couplings) {
      auto ids = [](const std::vector<EdgeId>& v) {
        auto a = ojson::array();
        for (const auto e : v) a.push_back(index(e));
        return a;
      };
      auto m = ojson::array();
      for (Eigen::Index r = 0; r < c.matrix.rows(); ++r) {
        auto row = ojson::array();
        for (Eigen::Index k = 0; k < c.matrix.cols(); ++k) row.push_back(complex_json(c.matrix(r, k)));
        m.push_back(std::move(row));
      }
      cs.push_back(ojson{{"vertex", index(c.vertex)}, {"out_order", ids(c.out_order)}, {"in_order", ids(c.in_order)}, {"matrix", std::move(m)}});
    }
    root["couplings"] = std::move(cs);
  }
  return root.dump(2) + "\n";
}

Document document_from_operator(std::string name, std::string description, const MomentumOperator& op) {
  Document d{std::move(name), std::move(description), op.graph(), {}};
  d.couplings.assign(op.couplings().begin(), op.couplings().end());
  return d;
}

std::vector<Document> emit_examples() {
  std::vector<Document> out;
  for (const auto& ex : builtin_examples()) out.push_back(document_from_operator(ex.name, ex.description, ex.op));
  return out;
}

std::optional<Document> find_example(const std::string& name) {
  for (auto& d : emit_examples()) {
    if (d.name == name) return d;
  }
  return std::nullopt;
}

}  // namespace momgraph::cli
