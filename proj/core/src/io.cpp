#include "wildknot/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wildknot/errors.hpp"

namespace wildknot {

using nlohmann::json;

namespace {

json parse_document(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string(what) + ": malformed JSON at byte " + std::to_string(e.byte) +
                     ": " + e.what());
  }
}

const json& require(const json& j, const char* key, const char* what) {
  if (!j.is_object()) throw InputError(std::string(what) + ": top level must be an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string(what) + ": missing field \"" + key + "\"");
  return *it;
}

std::size_t as_index(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InputError(where + ": expected a non-negative integer, got " + v.dump());
  }
  return v.get<std::size_t>();
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) throw InputError(where + ": expected a number, got " + v.dump());
  return v.get<double>();
}

json rational_json(const Rational& q) {
  return {{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

Rational rational_from(const json& v, const std::string& where) {
  if (!v.is_object() || !v.contains("num") || !v.contains("den")) {
    throw InputError(where + ": expected {\"num\", \"den\"}");
  }
  auto text = [&](const json& x) {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_number_integer()) return std::to_string(x.get<long long>());
    throw InputError(where + ": numerator and denominator must be integers or strings");
  };
  Rational q;
  try {
    q = Rational(mpz_class(text(v["num"])), mpz_class(text(v["den"])));
  } catch (const std::invalid_argument&) {
    throw InputError(where + ": not an integer");
  }
  if (q.get_den() == 0) throw InputError(where + ": zero denominator");
  q.canonicalize();
  return q;
}

json vec_json(const Vec3& p) { return json::array({p.x, p.y, p.z}); }

json order_json(const LoStarPrefix& p) {
  json succ = json::array();
  for (const auto& [a, b] : p.succ()) succ.push_back({a, b});
  return {{"ranks", p.ranks()}, {"succ", succ}};
}

LoStarPrefix order_from(const json& j, const char* what) {
  const json& ranks = require(j, "ranks", what);
  if (!ranks.is_array()) throw InputError(std::string(what) + ": \"ranks\" must be an array");
  std::vector<std::size_t> r;
  r.reserve(ranks.size());
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    r.push_back(as_index(ranks[i], "ranks[" + std::to_string(i) + "]"));
  }
  LinearOrderPrefix order;
  try {
    order = LinearOrderPrefix(std::move(r));
  } catch (const InputError& e) {
    throw InputError(std::string(what) + ": ranks: " + e.what());
  }
  if (j.contains("lostar_stage")) {
    return to_lostar(order, as_index(j["lostar_stage"], "lostar_stage"));
  }
  std::set<ElementPair> succ;
  if (auto it = j.find("succ"); it != j.end()) {
    if (!it->is_array()) throw InputError(std::string(what) + ": \"succ\" must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& e = (*it)[i];
      const std::string where = "succ[" + std::to_string(i) + "]";
      if (!e.is_array() || e.size() != 2) throw InputError(where + ": expected a pair [a, b]");
      succ.insert({as_index(e[0], where + "[0]"), as_index(e[1], where + "[1]")});
    }
  } else {
    succ = successor(order);
  }
  return LoStarPrefix(std::move(order), std::move(succ));
}

}  // namespace

LoStarPrefix order_from_json(const std::string& text) {
  return order_from(parse_document(text, "order"), "order");
}

std::string order_to_json(const LoStarPrefix& p) {
  json j = order_json(p);
  j["schema"] = kOrderSchema;
  return j.dump(2) + "\n";
}

CircleSeq sequence_from_json(const std::string& text) {
  const json j = parse_document(text, "sequence");
  const json& a = require(j, "angles", "sequence");
  if (!a.is_array()) throw InputError("sequence: \"angles\" must be an array");
  std::vector<double> v;
  for (std::size_t i = 0; i < a.size(); ++i) {
    v.push_back(as_double(a[i], "angles[" + std::to_string(i) + "]"));
  }
  return circle_seq(v);
}

std::string sequence_to_json(const CircleSeq& x) {
  json a = json::array();
  for (std::size_t i = 0; i < x.size(); ++i) a.push_back(x[i]);
  return json{{"schema", kSequenceSchema}, {"angles", a}}.dump(2) + "\n";
}

std::string embedding_to_json(const EmbeddingState& s, const EmbeddingReport* report) {
  json elems = json::array();
  for (std::size_t m = 0; m < s.size(); ++m) {
    elems.push_back({{"element", m},
                     {"f", rational_json(s.f[m])},
                     {"V", {{"lo", rational_json(s.V[m].lo)}, {"hi", rational_json(s.V[m].hi)}}},
                     {"f_approx", s.f[m].get_d()}});
  }
  json j{{"schema", kEmbeddingSchema}, {"n", s.size()}, {"order", order_json(s.order)},
         {"elements", elems}};
  if (report) {
    j["verification"] = {{"ok", report->ok()},
                         {"disjoint_and_centred", report->disjoint_and_centred},
                         {"successor_contact", report->successor_contact},
                         {"order_preserved", report->order_preserved},
                         {"inside_unit", report->inside_unit},
                         {"covered_measure", rational_json(report->covered_measure)},
                         {"largest_gap", rational_json(report->largest_gap)},
                         {"failures", report->failures}};
  }
  return j.dump(2) + "\n";
}

EmbeddingState embedding_from_json(const std::string& text) {
  const json j = parse_document(text, "embedding");
  EmbeddingState s;
  s.order = order_from(require(j, "order", "embedding"), "embedding.order");
  const json& elems = require(j, "elements", "embedding");
  if (!elems.is_array()) throw InputError("embedding: \"elements\" must be an array");
  if (elems.size() > s.order.size()) throw InputError("embedding: more elements than the order");
  for (std::size_t m = 0; m < elems.size(); ++m) {
    const std::string where = "elements[" + std::to_string(m) + "]";
    const json& e = elems[m];
    if (!e.is_object() || !e.contains("f") || !e.contains("V")) {
      throw InputError(where + ": expected f and V");
    }
    s.f.push_back(rational_from(e["f"], where + ".f"));
    const json& v = e["V"];
    if (!v.is_object() || !v.contains("lo") || !v.contains("hi")) {
      throw InputError(where + ".V: expected lo and hi");
    }
    s.V.push_back({rational_from(v["lo"], where + ".V.lo"), rational_from(v["hi"], where + ".V.hi")});
  }
  s.order = s.order.restrict_to(s.f.size());
  return s;
}

std::string params_to_json(const TowerParams& p) {
  json knots = json::array();
  for (auto id : p.knot_table) knots.push_back(knot_name(id));
  return json{{"schema", kParamsSchema}, {"depth", p.depth}, {"eps", p.eps},
              {"lambda", p.lam},       {"lipschitz", p.lip}, {"knots", knots}}
             .dump(2) + "\n";
}

TowerParams params_from_json(const std::string& text) {
  const json j = parse_document(text, "tower params");
  TowerParams p;
  p.depth = as_index(require(j, "depth", "tower params"), "depth");
  auto list = [&](const char* key) {
    const json& a = require(j, key, "tower params");
    if (!a.is_array()) throw InputError(std::string("tower params: \"") + key + "\" must be an array");
    std::vector<double> v;
    for (std::size_t i = 0; i < a.size(); ++i) {
      v.push_back(as_double(a[i], std::string(key) + "[" + std::to_string(i) + "]"));
    }
    return v;
  };
  p.eps = list("eps");
  p.lam = list("lambda");
  p.lip = list("lipschitz");
  const json& knots = require(j, "knots", "tower params");
  if (!knots.is_array()) throw InputError("tower params: \"knots\" must be an array");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const std::string name = knots[i].is_string() ? knots[i].get<std::string>() : "";
    bool found = false;
    for (std::size_t t = 0; t < 5 && !found; ++t) {
      if (knot_name(knot_from_table(t)) == name) {
        p.knot_table.push_back(knot_from_table(t));
        found = true;
      }
    }
    if (!found) throw InputError("knots[" + std::to_string(i) + "]: unknown knot " + knots[i].dump());
  }
  p.validate();
  return p;
}

std::string geometry_to_json(const KnotGeometry& g) {
  json pts = json::array();
  for (const auto& p : g.curve.points) pts.push_back(vec_json(p));
  json sing = json::array();
  for (std::size_t i = 0; i < g.singularities.size(); ++i) {
    const auto& s = g.singularities[i];
    json e{{"element", s.index},          {"position", vec_json(s.position)},
           {"ball_radius", s.ball_radius}, {"f", rational_json(s.f)},
           {"wall_lo", rational_json(s.wall_lo)}, {"wall_hi", rational_json(s.wall_hi)}};
    if (i < g.trefoil_counts.size()) e["trefoils"] = g.trefoil_counts[i];
    if (i < g.arc_ranges.size()) e["arc"] = {g.arc_ranges[i].first, g.arc_ranges[i].second};
    sing.push_back(std::move(e));
  }
  return json{{"schema", kGeometrySchema}, {"kind", "order-knot"}, {"closed", g.curve.closed},
              {"stage", g.stage},         {"points", pts},       {"params", g.curve.params},
              {"singularities", sing}}
             .dump(2) + "\n";
}

std::string stage_curve_to_json(const StageCurve& c, const TowerParams& p, const CircleSeq& x) {
  json pts = json::array();
  for (const auto& q : c.curve.points) pts.push_back(vec_json(q));
  json angles = json::array();
  for (std::size_t i = 0; i < x.size(); ++i) angles.push_back(x[i]);
  return json{{"schema", kGeometrySchema},
              {"kind", "stage-curve"},
              {"coordinates", "flat (b1, b2, t) in the unit solid torus"},
              {"closed", c.curve.closed},
              {"stage", c.stage},
              {"error_bound", c.error_bound},
              {"sequence", angles},
              {"params", json::parse(params_to_json(p))},
              {"points", pts},
              {"grid", c.curve.params},
              {"singularities", json::array()}}
             .dump(2) + "\n";
}

std::string curve_to_obj(const Curve3& c, const std::string& comment) {
  std::ostringstream out;
  out.precision(17);
  if (!comment.empty()) {
    std::istringstream lines(comment);
    for (std::string line; std::getline(lines, line);) out << "# " << line << "\n";
  }
  for (const auto& p : c.points) out << "v " << p.x << ' ' << p.y << ' ' << p.z << "\n";
  if (c.size() >= 2) {
    out << "l";
    for (std::size_t i = 1; i <= c.size(); ++i) out << ' ' << i;
    if (c.closed) out << " 1";
    out << "\n";
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("write failed: " + path);
}

}  // namespace wildknot
