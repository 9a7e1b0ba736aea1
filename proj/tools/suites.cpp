#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>

#include "wildknot/embedding.hpp"
#include "wildknot/errors.hpp"
#include "wildknot/io.hpp"
#include "wildknot/order.hpp"
#include "wildknot/tower.hpp"
#include "wildknot/transport.hpp"

namespace wildknot::cli {

using nlohmann::json;

namespace {

constexpr const char* kReportSchema = "wildknot.report/1";

json vec(const Vec3& p) { return json::array({p.x, p.y, p.z}); }

json angles(const CircleSeq& x) {
  json a = json::array();
  for (std::size_t i = 0; i < x.size(); ++i) a.push_back(x[i]);
  return a;
}

// One named check accumulated over many samples.
struct Check {
  std::string id;
  std::string statement;
  std::size_t tested = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;
  std::vector<std::pair<double, json>> witnesses;

  void record(double ratio, bool violated, const json& w, std::size_t count = 1) {
    tested += count;
    if (violated) ++violations;
    max_ratio = std::max(max_ratio, ratio);
    witness(ratio, w);
  }

  void witness(double ratio, const json& w) {
    witnesses.emplace_back(ratio, w);
    std::stable_sort(witnesses.begin(), witnesses.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    if (witnesses.size() > 5) witnesses.pop_back();
  }

  json to_json() const {
    json w = json::array();
    for (const auto& [r, j] : witnesses) w.push_back(j);
    return {{"id", id},
            {"statement", statement},
            {"tested", tested},
            {"violations", violations},
            {"max_ratio", max_ratio},
            {"witnesses", w}};
  }
};

class Report {
 public:
  Check& check(const std::string& id, const std::string& statement) {
    auto it = index_.find(id);
    if (it == index_.end()) {
      it = index_.emplace(id, checks_.size()).first;
      Check c;
      c.id = id;
      c.statement = statement;
      checks_.push_back(std::move(c));
    }
    return checks_[it->second];
  }

  json finish(const std::string& suite, const json& config) const {
    json cs = json::array();
    std::size_t v = 0;
    for (const auto& c : checks_) {
      cs.push_back(c.to_json());
      v += c.violations;
    }
    return {{"schema", kReportSchema}, {"suite", suite}, {"config", config},
            {"checks", cs},            {"violations", v}, {"ok", v == 0}};
  }

 private:
  std::deque<Check> checks_;  // stable references
  std::map<std::string, std::size_t> index_;
};

CircleSeq random_sequence(std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-kPi, kPi);
  std::vector<double> v(count);
  for (auto& a : v) a = U(rng);
  return circle_seq(v);
}

// A point of T_{eps_{n+1}}, biased toward the rotated windows of stages <= n.
Vec3 domain_point(const TowerParams& P, const CircleSeq& x, std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> V(0.0, 1.0);
  const double e = P.eps[n + 1];
  const double r = e * std::sqrt(V(rng)), a = kTwoPi * V(rng);
  const std::size_t k = rng() % (n + 1);
  const double s = V(rng) < 0.4 ? kTwoPi * V(rng) : x[k] + P.lam[k] * 1.2 * (2 * V(rng) - 1);
  return {r * std::cos(a), r * std::sin(a), Angle::canonical(s)};
}

double rel_tol(const SuiteConfig& cfg) { return cfg.tol.value_or(kRelTol); }

json base_config(const SuiteConfig& cfg) {
  json c{{"seed", cfg.seed}};
  if (cfg.tol) c["tol"] = *cfg.tol;
  return c;
}

// ---- suites ----------------------------------------------------------------

json embedding_props(const SuiteConfig& cfg) {
  if (cfg.n < 1) throw InputError("--n must be >= 1");
  std::mt19937_64 rng(cfg.seed);
  Report rep;
  auto& disjoint = rep.check("disjoint-centred", "intervals V_m pairwise disjoint, f(m) the midpoint");
  auto& contact = rep.check("successor-contact", "sup V_a = inf V_b iff (a, b) is a flagged successor pair");
  auto& order = rep.check("order-preserved", "f(a) < f(b) iff a precedes b");
  auto& unit = rep.check("inside-unit", "every V_m lies in [0, 1)");
  auto& stable = rep.check("prefix-stability",
                           "prefixes agreeing on 0..n give identical f(m), V_m for m <= n");

  std::uniform_int_distribution<std::size_t> size(1, cfg.n);
  for (std::size_t i = 0; i < cfg.orders; ++i) {
    LoStarPrefix p;
    if (i % 2 == 0) {
      p = random_lostar_prefix(size(rng), rng);
    } else {
      const std::size_t m = size(rng);
      const std::size_t l = std::uniform_int_distribution<std::size_t>(0, m / 2)(rng);
      std::vector<std::size_t> ranks(l);
      for (std::size_t j = 0; j < l; ++j) ranks[j] = j;
      std::shuffle(ranks.begin(), ranks.end(), rng);
      p = to_lostar(LinearOrderPrefix(ranks), std::max(m, l));
    }
    const auto state = embed_prefix(p, p.size());
    const auto v = verify_embedding(state);
    const json w{{"order", json::parse(order_to_json(p))}, {"failures", v.failures}};
    disjoint.record(v.disjoint_and_centred ? 0.0 : 1.0, !v.disjoint_and_centred, w);
    contact.record(v.successor_contact ? 0.0 : 1.0, !v.successor_contact, w);
    order.record(v.order_preserved ? 0.0 : 1.0, !v.order_preserved, w);
    unit.record(v.inside_unit ? 0.0 : 1.0, !v.inside_unit, w);

    const auto base = random_lostar_prefix(size(rng), rng);
    const auto q1 = random_extension(base, std::uniform_int_distribution<std::size_t>(0, cfg.n)(rng), rng);
    const auto q2 = random_extension(base, std::uniform_int_distribution<std::size_t>(0, cfg.n)(rng), rng);
    const bool same = verify_prefix_stability(q1, q2, base.size() - 1);
    stable.record(same ? 0.0 : 1.0, !same,
                  json{{"p", json::parse(order_to_json(q1))}, {"q", json::parse(order_to_json(q2))},
                       {"n", base.size() - 1}});
  }
  json c = base_config(cfg);
  c["n"] = cfg.n;
  c["orders"] = cfg.orders;
  return rep.finish("embedding-props", c);
}

json tower_lipschitz(const SuiteConfig& cfg) {
  const std::size_t depth = cfg.depth.value_or(3);
  const std::size_t samples = cfg.samples.value_or(1000);
  const double tol = rel_tol(cfg);
  const auto P = default_schedule(depth);
  const auto model = make_tower_model(P);
  Report rep;

  std::vector<std::string> why;
  const bool holds = P.inequalities_hold(&why);
  rep.check("schedule", "eps_0 = 1, eps_n <= 2^-n, 4 lam_{n+1} < 2 eps_{n+1} < lam_n < eps_n, L_n < 2^(2^-n)")
      .record(holds ? 0.0 : 1.0, !holds, json{{"params", json::parse(params_to_json(P))}, {"failed", why}});

  for (std::size_t k = 0; k < depth; ++k) {
    const auto est = sample_stage_bilipschitz(P, k, samples, cfg.seed + k);
    const double L = P.lip[k];
    const double ratio = std::max(est.max_ratio / L, 1.0 / (est.min_ratio * L));
    rep.check("stage-bilipschitz[" + std::to_string(k) + "]",
              "local ratios of g_" + std::to_string(k) + " within [1/L, L], L = L_" + std::to_string(k))
        .record(ratio, ratio > 1.0 + tol,
                json{{"max_ratio", est.max_ratio}, {"min_ratio", est.min_ratio}, {"L", L}},
                est.pairs_used);
  }

  std::mt19937_64 rng(cfg.seed);
  for (std::size_t p = 0; p < cfg.pairs; ++p) {
    const auto x = random_sequence(depth + 1, rng);
    for (std::size_t n = 0; n < depth; ++n) {
      const auto est = sample_tower_lipschitz(TowerEvaluator(model, x, n), samples, rng());
      rep.check("tower-lipschitz[" + std::to_string(n) + "]",
                "sampled Lipschitz ratio of hat g_" + std::to_string(n) + " at most 5")
          .record(est.max_ratio / 5.0, est.max_ratio > 5.0 * (1.0 + tol),
                  json{{"x", angles(x)}, {"max_ratio", est.max_ratio}}, est.pairs_used);
    }
  }
  json c = base_config(cfg);
  c["depth"] = depth;
  c["samples"] = samples;
  c["pairs"] = cfg.pairs;
  return rep.finish("tower-lipschitz", c);
}

json intertwine(const SuiteConfig& cfg) {
  const std::size_t depth = cfg.depth.value_or(2);
  const std::size_t samples = cfg.samples.value_or(500);
  const double tol = cfg.tol.value_or(1e-8);
  const auto P = default_schedule(depth);
  const auto model = make_tower_model(P);
  std::mt19937_64 rng(cfg.seed);
  Report rep;
  for (std::size_t p = 0; p < cfg.pairs; ++p) {
    const auto x = random_sequence(depth + 1, rng);
    const auto xp = random_sequence(depth + 1, rng);
    const TransportPair tp(model, x, xp);
    for (std::size_t n = 0; n < depth; ++n) {
      auto& c = rep.check("intertwine[" + std::to_string(n) + "]",
                          "|H_n hat g_n(q) - hat g'_n theta^{x'_n - x_n}(q)| below tol on T_{eps_" +
                              std::to_string(n + 1) + "}");
      for (std::size_t i = 0; i < samples; ++i) {
        const Vec3 q = domain_point(P, x, n, rng);
        const double r = intertwining_residual(tp, n, q);
        c.record(r / tol, !(r < tol), json{{"x", angles(x)}, {"x_prime", angles(xp)}, {"q", vec(q)}, {"residual", r}});
      }
    }
  }
  json c = base_config(cfg);
  c["depth"] = depth;
  c["samples"] = samples;
  c["pairs"] = cfg.pairs;
  c["tol"] = tol;
  return rep.finish("intertwine", c);
}

json inequalities(const SuiteConfig& cfg) {
  const std::size_t depth = cfg.depth.value_or(2);
  const std::size_t samples = cfg.samples.value_or(1000);
  const auto P = default_schedule(depth);
  const auto model = make_tower_model(P);
  std::mt19937_64 rng(cfg.seed);
  Report rep;
  for (std::size_t p = 0; p < cfg.pairs; ++p) {
    const auto x = random_sequence(depth + 1, rng);
    const auto xp = random_sequence(depth + 1, rng);
    const TransportPair tp(model, x, xp);
    for (std::size_t n = 0; n <= depth; ++n) {
      for (std::size_t k = 0; n + k <= depth; ++k) {
        const auto r = verify_inequalities(tp, n, k, samples, rng());
        for (const auto& ck : r.checks) {
          auto& c = rep.check(ck.id + "[n=" + std::to_string(n) + ",k=" + std::to_string(k) + "]",
                              ck.statement);
          c.tested += ck.tested;
          c.violations += ck.violations;
          for (const auto& w : ck.witnesses) {
            c.witness(w.bound > 0 ? w.lhs / w.bound : 0.0,
                      json{{"x", angles(x)}, {"x_prime", angles(xp)}, {"point", vec(w.x)},
                           {"other", vec(w.z)}, {"lhs", w.lhs}, {"bound", w.bound}});
          }
          c.max_ratio = std::max(c.max_ratio, ck.max_ratio);
        }
      }
    }
  }
  json c = base_config(cfg);
  c["depth"] = depth;
  c["samples"] = samples;
  c["pairs"] = cfg.pairs;
  return rep.finish("inequalities", c);
}

json cauchy(const SuiteConfig& cfg) {
  const std::size_t depth = cfg.depth.value_or(3);
  const double tol = rel_tol(cfg);
  const auto P = default_schedule(depth);
  const auto model = make_tower_model(P);
  std::mt19937_64 rng(cfg.seed);
  Report rep;
  for (std::size_t p = 0; p < cfg.pairs; ++p) {
    const auto x = random_sequence(depth + 1, rng);
    const auto grid = stage_grid(P, {&x}, cfg.resolution);
    std::vector<StageCurve> cs;
    for (std::size_t n = 0; n < depth; ++n) cs.push_back(limit_curve(TowerEvaluator(model, x, n), grid));
    for (std::size_t n = 0; n + 1 < depth; ++n) {
      const double d = flat_sup_dist(cs[n].curve, cs[n + 1].curve);
      const double bound = 10.0 * P.lam[n + 1];
      rep.check("stage-step[" + std::to_string(n) + "]",
                "sup distance of hat f_" + std::to_string(n) + " and hat f_" + std::to_string(n + 1) +
                    " at most 10 lam_" + std::to_string(n + 1))
          .record(d / bound, d > bound * (1.0 + tol), json{{"x", angles(x)}, {"sup", d}, {"bound", bound}});
      double tail = 0.0;
      for (std::size_t k = n + 1; k < depth; ++k) tail += P.lam[k];
      const double dt = flat_sup_dist(cs[n].curve, cs[depth - 1].curve);
      rep.check("stage-tail[" + std::to_string(n) + "]",
                "sup distance of hat f_" + std::to_string(n) +
                    " and the deepest stage curve at most 10 times the sum of later lam_k")
          .record(dt / (10.0 * tail), dt > 10.0 * tail * (1.0 + tol),
                  json{{"x", angles(x)}, {"sup", dt}, {"bound", 10.0 * tail}});
    }
  }

  // Transported Cauchy sequences need resolvable stage membership.
  const std::size_t tdepth = std::min<std::size_t>(depth, 2);
  const auto tmodel = make_tower_model(default_schedule(tdepth));
  const std::size_t count = cfg.samples.value_or(50);
  const auto& tp_params = tmodel->params();
  std::uniform_real_distribution<double> V(0.0, 1.0);
  for (std::size_t p = 0; p < cfg.pairs; ++p) {
    const auto x = random_sequence(tdepth + 1, rng);
    const auto xp = random_sequence(tdepth + 1, rng);
    const TransportPair tp(tmodel, x, xp);
    auto& c = rep.check("transported-core",
                        "d(H z_m, H z_{m+1}) <= 100 (d_path(z_m, z_{m+1}) + sup_{j>n} |x'_j - x_j| + "
                        "eps_{n+1}) along z_n = hat f_n(s)");
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t w = rng() % tdepth;
      const double s = Angle::canonical(i % 2 == 0 ? kTwoPi * V(rng)
                                                   : x[w] + tp_params.lam[w] * 1.2 * (2 * V(rng) - 1));
      const auto r = transport_cauchy(tp, core_sequence(tp, s));
      for (std::size_t m = 0; m < r.bounds.size(); ++m) {
        const double ratio = r.bounds[m] > 0 ? r.transported[m] / r.bounds[m] : 0.0;
        c.record(ratio, r.transported[m] > r.bounds[m] * (1.0 + kRelTol) + kAbsTol,
                 json{{"x", angles(x)}, {"x_prime", angles(xp)}, {"s", s},
                      {"m", m}, {"transported", r.transported[m]}, {"bound", r.bounds[m]}});
      }
    }
  }
  json c = base_config(cfg);
  c["depth"] = depth;
  c["resolution"] = cfg.resolution;
  c["pairs"] = cfg.pairs;
  c["samples"] = count;
  return rep.finish("cauchy", c);
}

json continuity(const SuiteConfig& cfg) {
  const std::size_t depth = cfg.depth.value_or(3);
  const std::size_t k = depth - 1;
  const double tol = rel_tol(cfg);
  const auto P = default_schedule(depth);
  const auto model = make_tower_model(P);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> V(0.0, 1.0);
  Report rep;
  auto& c = rep.check("continuity[" + std::to_string(k) + "]",
                      "|x_n - x'_n| < eps_k / (3 2^n (k+1)) for n <= k implies stage-k curves within eps_k");
  for (std::size_t p = 0; p < cfg.pairs; ++p) {
    const auto x = random_sequence(depth + 1, rng);
    auto xp = x;
    for (std::size_t j = 0; j <= k; ++j) {
      const double d = P.eps[k] / (3.0 * std::ldexp(1.0, static_cast<int>(j)) * static_cast<double>(k + 1));
      xp.values[j] = Angle(x[j] + (0.5 + 0.499 * V(rng)) * d * (V(rng) < 0.5 ? -1.0 : 1.0));
    }
    const auto r = reduction_continuity_check(model, x, xp, k, cfg.resolution, tol);
    const bool bad = !r.precondition_ok || !r.ok;
    c.record(r.sup_distance / r.eps_k, bad,
             json{{"x", angles(x)}, {"x_prime", angles(xp)}, {"sup", r.sup_distance}, {"eps_k", r.eps_k},
                  {"precondition_ok", r.precondition_ok}});
  }
  json cf = base_config(cfg);
  cf["depth"] = depth;
  cf["k"] = k;
  cf["resolution"] = cfg.resolution;
  cf["pairs"] = cfg.pairs;
  return rep.finish("continuity", cf);
}

}  // namespace

const std::vector<SuiteInfo>& suite_catalog() {
  static const std::vector<SuiteInfo> cat = {
      {"embedding-props",
       "exact rational embedding of random LO* prefixes (flags --n, --orders)",
       {"the intervals V_m are pairwise disjoint and centred on f(m)",
        "sup V_a = inf V_b exactly when (a, b) is a flagged successor pair",
        "f preserves the order; every V_m lies in [0, 1)",
        "prefixes that agree on 0..n produce identical f(m) and V_m for m <= n"}},
      {"tower-lipschitz",
       "schedule validity and sampled Lipschitz constants (default depth 3, 1000 pairs per stage)",
       {"eps_0 = 1, eps_n <= 2^-n, 4 lam_{n+1} < 2 eps_{n+1} < lam_n < eps_n and L_n < 2^(2^-n)",
        "each stage g_k is locally L_k-bilipschitz on T_{eps_{k+1}}",
        "each composite hat g_n is 5-Lipschitz"}},
      {"intertwine",
       "the transport homeomorphisms intertwine the two towers (default depth 2, 500 points per stage)",
       {"H_n hat g_n = hat g'_n theta^{x'_n - x_n} on T_{eps_{n+1}}, residual below --tol (default 1e-8)"}},
      {"inequalities",
       "metric estimates for the transport homeomorphisms (default depth 2, 1000 pairs per check)",
       {"x, z in Im hat g_{n-1}: d(H_n x, H_n z) <= 25 d_path(x, z) + 5 |x'_n - x_n|",
        "x in Im hat g_{n+k}: d(H_n x, H_{n+k} x) <= 10 sup_{m>=n} |x'_m - x_m| + 20 eps_n",
        "x in Im hat g_{n+k-1}: d(H_n x, H_{n+k} x) <= 15 sup_{m>=n} |x'_m - x_m| + 50 eps_n",
        "x in Im hat g_n minus Im hat g_{n+1}, z in Im hat g_{n+1}: "
        "d(H x, H z) <= 100 (d_path(x, z) + sup_{m>n} |x'_m - x_m| + eps_{n+1})"}},
      {"cauchy",
       "stage curves converge and transported sequences stay Cauchy (default depth 3)",
       {"sup distance of hat f_n and hat f_{n+1} at most 10 lam_{n+1}",
        "transported core sequences obey the modulus of the limit-modulus estimate"}},
      {"continuity",
       "continuity of the sequence-to-knot map at stage k = depth - 1 (default depth 3)",
       {"|x_n - x'_n| < eps_k / (3 2^n (k+1)) for all n <= k gives stage-k curves within eps_k"}},
  };
  return cat;
}

bool suite_exists(const std::string& name) {
  for (const auto& s : suite_catalog()) {
    if (s.name == name) return true;
  }
  return false;
}

json run_suite(const std::string& name, const SuiteConfig& cfg) {
  if (name == "embedding-props") return embedding_props(cfg);
  if (name == "tower-lipschitz") return tower_lipschitz(cfg);
  if (name == "intertwine") return intertwine(cfg);
  if (name == "inequalities") return inequalities(cfg);
  if (name == "cauchy") return cauchy(cfg);
  if (name == "continuity") return continuity(cfg);
  throw InputError("unknown suite: " + name);
}

}  // namespace wildknot::cli
