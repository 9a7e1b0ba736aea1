// wildknot: build order knots and stage curves, run verification suites.
//
// Exit codes: 0 clean, 1 violations, 2 input errors, 3 precision errors.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "suites.hpp"
#include "wildknot/embedding.hpp"
#include "wildknot/errors.hpp"
#include "wildknot/io.hpp"
#include "wildknot/lo_knot.hpp"
#include "wildknot/tower.hpp"

namespace {

using namespace wildknot;
using nlohmann::json;

constexpr int kExitClean = 0;
constexpr int kExitViolations = 1;
constexpr int kExitInput = 2;
constexpr int kExitPrecision = 3;

constexpr double kDisplayRadius = 3.0;  // major radius when drawing T_1 in R^3

void emit(const std::optional<std::string>& path, const std::string& text) {
  if (path) {
    write_text_file(*path, text);
  } else {
    std::cout << text;
  }
}

void list_suites() {
  for (const auto& s : cli::suite_catalog()) {
    std::cout << s.name << "\n  " << s.summary << "\n";
    for (const auto& st : s.statements) std::cout << "    - " << st << "\n";
  }
}

int embed_order(const std::string& input, std::optional<std::size_t> n,
                const std::optional<std::string>& output) {
  const auto p = order_from_json(read_text_file(input));
  const std::size_t m = n.value_or(p.size());
  if (m > p.size()) {
    throw InputError("--n " + std::to_string(m) + " exceeds the " + std::to_string(p.size()) +
                     " elements of " + input);
  }
  const auto state = embed_prefix(p, m);
  const auto rep = verify_embedding(state);
  emit(output, embedding_to_json(state, &rep));
  if (!rep.ok()) {
    for (const auto& f : rep.failures) std::cerr << "violation: " << f << "\n";
    return kExitViolations;
  }
  return kExitClean;
}

Curve3 display_curve(const Curve3& flat) {
  Curve3 c;
  c.params = flat.params;
  c.closed = true;
  for (const auto& p : flat.points) {
    const double R = kDisplayRadius + p.x;
    c.points.push_back({R * std::cos(p.z), R * std::sin(p.z), p.y});
  }
  return c;
}

int build_knot(const std::string& input, std::optional<std::size_t> n, std::size_t depth,
               std::size_t resolution, const std::string& prefix,
               const std::optional<std::string>& dense_path) {
  if (resolution < 64) throw InputError("--resolution must be >= 64");
  const std::string text = read_text_file(input);
  json probe;
  try {
    probe = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(input + ": malformed JSON at byte " + std::to_string(e.byte));
  }
  if (probe.is_object() && probe.contains("ranks")) {
    const auto p = order_from_json(text);
    const std::size_t m = n.value_or(p.size());
    if (m > p.size()) throw InputError("--n exceeds the number of elements in the order");
    const auto state = embed_prefix(p, m);
    const auto g = assemble_lo_knot(state, resolution);
    write_text_file(prefix + ".json", geometry_to_json(g));
    write_text_file(prefix + ".obj",
                    curve_to_obj(g.curve, "order knot, " + std::to_string(g.singularities.size()) +
                                              " singular balls, resolution " + std::to_string(resolution)));
    std::cout << "wrote " << prefix << ".obj and " << prefix << ".json: " << g.curve.size() << " points, "
              << g.singularities.size() << " singular balls\n";
    return kExitClean;
  }
  if (probe.is_object() && probe.contains("angles")) {
    if (depth < 1) throw InputError("--depth must be >= 1");
    const auto x = sequence_from_json(text);
    const auto dense = dense_path ? sequence_from_json(read_text_file(*dense_path)) : dense_sequence(x.size());
    const auto y = interleave(x, dense);
    // The stage-d curve lives in a tower one stage deeper.
    const auto params = default_schedule(depth + 1);
    if (y.size() < depth + 1) {
      throw InputError("a stage-" + std::to_string(depth) + " curve needs " + std::to_string(depth + 1) +
                       " interleaved angles; the input gives " + std::to_string(y.size()));
    }
    const auto c = limit_curve(params, y, depth, resolution);
    char note[160];
    std::snprintf(note, sizeof note, "stage %zu curve; sup distance to the limit knot <= %.17g", c.stage,
                  c.error_bound);
    write_text_file(prefix + ".json", stage_curve_to_json(c, params, y));
    write_text_file(prefix + ".obj",
                    curve_to_obj(display_curve(c.curve),
                                 std::string(note) + "\ndrawn in R^3 as ((3 + b1) cos t, (3 + b1) sin t, b2)"));
    std::cout << "wrote " << prefix << ".obj and " << prefix << ".json: " << note << "\n";
    return kExitClean;
  }
  throw InputError(input + ": expected an order (\"ranks\") or a sequence (\"angles\")");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wildknot: knots from linear orders and from sequences of rotations"};
  app.set_help_all_flag("--help-all");
  bool list_only = false;
  app.add_flag("--list-suites", list_only, "Describe the verification suites");

  std::string input;
  std::optional<std::string> output;
  std::optional<std::size_t> n;

  auto* embed = app.add_subcommand("embed-order", "Embed an order JSON into [0, 1] with exact rationals");
  embed->add_option("--input", input, "Order JSON")->required();
  embed->add_option("--n", n, "Number of elements to embed (default: all)");
  embed->add_option("--output", output, "State JSON path (default: stdout)");

  std::size_t depth = 2;
  std::size_t resolution = 10000;
  std::string prefix = "knot";
  std::optional<std::string> dense;
  auto* build = app.add_subcommand("build-knot", "Write OBJ and JSON geometry for an order or a sequence");
  build->add_option("--input", input, "Order JSON or sequence JSON")->required();
  build->add_option("--n", n, "Order elements to use (default: all)");
  build->add_option("--depth", depth, "Stage of the sequence curve")->capture_default_str();
  build->add_option("--resolution", resolution, "Sampling resolution (>= 64)")->capture_default_str();
  build->add_option("--output", prefix, "Output prefix for .obj and .json")->capture_default_str();
  build->add_option("--dense", dense, "Sequence JSON replacing the golden-ratio dense sequence");

  cli::SuiteConfig cfg;
  std::string suite;
  std::optional<std::size_t> vdepth, samples;
  std::optional<double> tol;
  bool verify_list = false;
  auto* verify = app.add_subcommand("verify", "Run a verification suite and write a JSON report");
  verify->add_option("suite", suite, "Suite name (see --list-suites)");
  verify->add_flag("--list-suites", verify_list, "Describe the verification suites");
  verify->add_option("--n", cfg.n, "Largest prefix size")->capture_default_str();
  verify->add_option("--orders", cfg.orders, "Number of random prefixes")->capture_default_str();
  verify->add_option("--depth", vdepth, "Tower depth (suite default when omitted)");
  verify->add_option("--samples", samples, "Samples per check (suite default when omitted)");
  verify->add_option("--pairs", cfg.pairs, "Random sequences or sequence pairs")->capture_default_str();
  verify->add_option("--resolution", cfg.resolution, "Curve resolution")->capture_default_str();
  verify->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  verify->add_option("--tol", tol, "Tolerance override");
  verify->add_option("--output", output, "Report path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitClean : kExitInput;
  }

  try {
    if (list_only || verify_list) {
      list_suites();
      return kExitClean;
    }
    if (embed->parsed()) return embed_order(input, n, output);
    if (build->parsed()) return build_knot(input, n, depth, resolution, prefix, dense);
    if (verify->parsed()) {
      if (suite.empty()) throw InputError("verify: missing suite name (see --list-suites)");
      if (!cli::suite_exists(suite)) throw InputError("verify: unknown suite '" + suite + "' (see --list-suites)");
      cfg.depth = vdepth;
      cfg.samples = samples;
      cfg.tol = tol;
      if (cfg.depth && *cfg.depth < 1) throw InputError("--depth must be >= 1");
      if (cfg.resolution < 64) throw InputError("--resolution must be >= 64");
      const json rep = cli::run_suite(suite, cfg);
      emit(output, rep.dump(2) + "\n");
      std::cerr << suite << ": " << rep["violations"].get<std::size_t>() << " violations\n";
      return rep["ok"].get<bool>() ? kExitClean : kExitViolations;
    }
    std::cout << app.help();
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << "\n";
    return kExitInput;
  } catch (const PrecisionError& e) {
    std::cerr << "precision error: " << e.what() << "\n";
    return kExitPrecision;
  }
}
