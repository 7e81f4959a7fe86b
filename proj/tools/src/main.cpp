#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "momgraph_cli/run.hpp"

using namespace momgraph::cli;

namespace {

std::optional<Document> load(const std::string& path, const std::string& builtin, double unitarity_tol) {
  if (!builtin.empty()) {
    auto d = find_example(builtin);
    if (!d) throw DocumentError("", "unknown built-in example '" + builtin + "'");
    return d;
  }
  if (path.empty()) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DocumentError("", "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_document(text.str(), unitarity_tol);
  } catch (const DocumentError& e) {
    throw DocumentError(path + ":" + e.location(), std::string(e.what()).substr(e.location().size() + 2));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Momentum operators on oriented metric graphs"};
  app.require_subcommand(1);
  app.fallthrough();

  RunSpec spec;
  std::string input, builtin, output, format = "csv", n_range = "1..5";
  double unitarity_tol = momgraph::kUnitarityTol;
  bool keep_amplitude = false;

  app.add_option("-i,--input", input, "Graph document (JSON)");
  app.add_option("--builtin", builtin, "Use a built-in example instead of a document");
  app.add_option("-f,--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("-o,--output", output, "Write results to this file instead of stdout");
  app.add_option("--unitarity-tol", unitarity_tol, "Tolerance for ||U*U - I||")->capture_default_str();

  auto with_document = [&](CLI::App* sub) { sub->add_option("document", input, "Graph document (JSON)"); };

  auto* validate = app.add_subcommand("validate", "Check a document and report balance");
  with_document(validate);
  auto* orient = app.add_subcommand("orient", "Find a balanced orientation of the underlying graph");
  with_document(orient);
  auto* decompose = app.add_subcommand("decompose", "Free-path cover and irreducible components");
  with_document(decompose);

  auto* spectrum = app.add_subcommand("spectrum", "Real eigenvalues in (-lambda, lambda)");
  with_document(spectrum);
  spectrum->add_option("-l,--lambda", spec.lambda)->capture_default_str();
  spectrum->add_option("--phase-tol", spec.phase_tol)->capture_default_str();

  auto* count = app.add_subcommand("count", "Eigenvalue counting function N(lambda)");
  with_document(count);
  count->add_option("-l,--lambda", spec.lambdas, "One or more window half-widths")->required();

  auto* embedded = app.add_subcommand("embedded", "Embedded eigenvalues of a graph with leads");
  with_document(embedded);
  embedded->add_option("-l,--lambda", spec.lambda)->capture_default_str();
  embedded->add_option("--sv-tol", spec.sv_tol, "Singular value threshold for the kernel")->capture_default_str();

  auto* resonances = app.add_subcommand("resonances", "Resonances of the two-loop graph with l1 = l3 = ell, l2 = ell + delta");
  resonances->add_option("--ell", spec.ell)->capture_default_str();
  resonances->add_option("--delta", spec.delta)->capture_default_str();
  resonances->add_option("--n", n_range, "Seed range a..b around k = pi n / ell")->capture_default_str();
  resonances->add_option("--steps", spec.steps, "Continuation steps")->capture_default_str();

  auto* evolve = app.add_subcommand("evolve", "Apply U(a) to a bump packet and sample the result");
  with_document(evolve);
  evolve->add_option("-a,--a", spec.a, "Group parameter")->capture_default_str();
  evolve->add_option("--edge", spec.edge, "Edge carrying the initial bump")->capture_default_str();
  evolve->add_option("--lo", spec.lo, "Bump support start")->capture_default_str();
  evolve->add_option("--hi", spec.hi, "Bump support end")->capture_default_str();
  evolve->add_option("--samples-per-unit", spec.samples_per_unit)->capture_default_str();
  evolve->add_option("--cap", spec.cap, "Maximum number of routes per point")->capture_default_str();
  evolve->add_flag("--raw", keep_amplitude, "Keep the bump's unit peak instead of normalizing");

  auto* example = app.add_subcommand("example", "List built-in examples or print one as a document");
  example->add_option("name", spec.example);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  spec.command = *parse_command(app.get_subcommands().front()->get_name());
  spec.format = format == "json" ? Format::Json : Format::Csv;
  spec.normalize = !keep_amplitude;
  try {
    std::tie(spec.n_lo, spec.n_hi) = parse_range(n_range);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: --n: " << e.what() << '\n';
    return kExitInvalid;
  }

  std::optional<Document> doc;
  try {
    doc = load(input, builtin, unitarity_tol);
  } catch (const DocumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  std::ostringstream result;
  const int code = run(spec, doc, result, std::cerr);
  if (output.empty()) {
    std::cout << result.str();
  } else if (!result.str().empty()) {
    std::ofstream f(output, std::ios::binary);
    f << result.str();
    if (!f) {
      std::cerr << "error: cannot write " << output << '\n';
      return kExitFailure;
    }
  }
  return code;
}
