// Acceptance run: one PASS/FAIL line per criterion, with timing.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "oracles.hpp"
#include "wildknot/embedding.hpp"
#include "wildknot/errors.hpp"
#include "wildknot/lo_knot.hpp"
#include "wildknot/metric.hpp"
#include "wildknot/order.hpp"
#include "wildknot/tower.hpp"
#include "wildknot/transport.hpp"

using namespace wildknot;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

CircleSeq random_sequence(std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-kPi, kPi);
  std::vector<double> v(count);
  for (auto& a : v) a = U(rng);
  return circle_seq(v);
}

Vec3 domain_point(const TowerParams& P, const CircleSeq& x, std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> V(0.0, 1.0);
  const double r = P.eps[n + 1] * std::sqrt(V(rng)), a = kTwoPi * V(rng);
  const std::size_t k = rng() % (n + 1);
  const double s = V(rng) < 0.4 ? kTwoPi * V(rng) : x[k] + P.lam[k] * 1.2 * (2 * V(rng) - 1);
  return {r * std::cos(a), r * std::sin(a), Angle::canonical(s)};
}

// 1. exact embedding properties and prefix stability
Outcome embedding_exactness() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> size(1, 50);
  std::size_t bad = 0, bad_stable = 0;
  for (int i = 0; i < 200; ++i) {
    const auto p = random_lostar_prefix(size(rng), rng);
    const auto st = embed_prefix(p, p.size());
    std::vector<mpq_class> lo, hi;
    for (const auto& v : st.V) {
      lo.push_back(v.lo);
      hi.push_back(v.hi);
    }
    const auto verdict = oracle::check_embedding(p.ranks(), p.succ(), st.f, lo, hi);
    const auto rep = verify_embedding(st);
    // disjoint and centred, successor contact, order preserved
    if (!verdict.all() || !rep.ok()) ++bad;
  }
  for (int i = 0; i < 100; ++i) {
    const auto base = random_lostar_prefix(size(rng), rng);
    const auto q1 = random_extension(base, rng() % 30, rng);
    const auto q2 = random_extension(base, rng() % 30, rng);
    if (!verify_prefix_stability(q1, q2, base.size() - 1)) ++bad_stable;
  }
  return {bad == 0 && bad_stable == 0,
          fmt("200 prefixes: %g failures; 100 agreeing pairs: %g unstable; tol exact", double(bad),
              double(bad_stable))};
}

// 2. recover(assemble(embed(P))) has the ranks of P
Outcome round_trip() {
  std::mt19937_64 rng(202);
  std::size_t bad = 0, total = 0;
  for (std::size_t n = 1; n <= 20; ++n) {
    for (int t = 0; t < 3; ++t, ++total) {
      const auto p = random_lostar_prefix(n, rng);
      const auto g = assemble_lo_knot(embed_prefix(p, n), 10000);
      if (recover_order(g).ranks() != p.ranks()) ++bad;
    }
  }
  return {bad == 0, fmt("%g prefixes with n <= 20 at resolution 1e4: %g mismatches", double(total), double(bad))};
}

// 3. agreeing prefixes with |V_n| < eps/2 give knots within eps
Outcome lo_continuity() {
  std::mt19937_64 rng(303);
  std::size_t bad = 0;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 4 + rng() % 12;
    const auto base = random_lostar_prefix(n + 1, rng);
    const auto p = random_extension(base, 1 + rng() % 10, rng);
    const auto q = random_extension(base, 1 + rng() % 10, rng);
    const auto rep = lo_reduction_check(p, q, n, 0.0, 10000);
    const bool ok = rep.agree_on_prefix && rep.continuity_checked && rep.v_n < rep.eps / 2 &&
                    rep.hausdorff < rep.eps;
    if (!ok) ++bad;
    worst = std::max(worst, rep.hausdorff / rep.eps);
  }
  return {bad == 0, fmt("20 pairs: %g failures, max hausdorff/eps = %.4g", double(bad), worst)};
}

// 4. schedule and sampled Lipschitz constants
Outcome tower_lipschitz() {
  const std::size_t depth = 3;
  const double tol = 1e-6;
  const auto P = default_schedule(depth);
  bool ok = P.inequalities_hold();
  double worst_stage = 0.0, worst_tower = 0.0;
  for (std::size_t k = 0; k < depth; ++k) {
    const auto est = sample_stage_bilipschitz(P, k, 1000, 40 + k);
    const double r = std::max(est.max_ratio / P.lip[k], 1.0 / (est.min_ratio * P.lip[k]));
    worst_stage = std::max(worst_stage, r);
    if (r > 1.0 + tol) ok = false;
  }
  const auto model = make_tower_model(P);
  std::mt19937_64 rng(404);
  for (int t = 0; t < 3; ++t) {
    const auto x = random_sequence(depth + 1, rng);
    for (std::size_t n = 0; n < depth; ++n) {
      const auto est = sample_tower_lipschitz(TowerEvaluator(model, x, n), 1000, rng());
      worst_tower = std::max(worst_tower, est.max_ratio);
      if (est.max_ratio > 5.0 * (1.0 + tol)) ok = false;
    }
  }
  return {ok, std::string(P.inequalities_hold() ? "schedule holds" : "schedule FAILS") +
                  fmt("; depth 3, 1000 pairs per stage: max ratio/L_k = %.4g; max Lip(hat g_n) = %.4g "
                      "(bound 5, tol 1e-6)",
                      worst_stage, worst_tower)};
}

// 5. consecutive stage curves within 10 lam_{n+1}
Outcome cauchy_chain() {
  const std::size_t depth = 3;
  const auto P = default_schedule(depth);
  const auto model = make_tower_model(P);
  std::mt19937_64 rng(505);
  bool ok = true;
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    const auto x = random_sequence(depth + 1, rng);
    const auto grid = stage_grid(P, {&x}, 10000);
    std::vector<StageCurve> cs;
    for (std::size_t n = 0; n < depth; ++n) cs.push_back(limit_curve(TowerEvaluator(model, x, n), grid));
    for (std::size_t n = 0; n + 1 < depth; ++n) {
      const double d = flat_sup_dist(cs[n].curve, cs[n + 1].curve);
      const double bound = 10.0 * P.lam[n + 1];
      worst = std::max(worst, d / bound);
      if (d > bound * (1 + 1e-6)) ok = false;
    }
  }
  return {ok, fmt("stages 0..2 at resolution 1e4: max sup/(10 lam_{n+1}) = %.4g", worst)};
}

// 6. intertwining residual
Outcome intertwining() {
  const std::size_t depth = 2;
  const auto P = default_schedule(depth);
  const auto model = make_tower_model(P);
  std::mt19937_64 rng(606);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const auto x = random_sequence(depth + 1, rng);
    const auto xp = random_sequence(depth + 1, rng);
    const TransportPair tp(model, x, xp);
    for (std::size_t n = 0; n < depth; ++n) {
      for (int i = 0; i < 500; ++i) worst = std::max(worst, intertwining_residual(tp, n, domain_point(P, x, n, rng)));
    }
  }
  return {worst < 1e-8, fmt("10 pairs x 500 points per stage at depth 2: max residual %.3g (tol 1e-8)", worst)};
}

// 7. the transport inequalities
Outcome inequality_suite() {
  const std::size_t depth = 2;
  const auto model = make_tower_model(default_schedule(depth));
  std::mt19937_64 rng(707);
  std::size_t violations = 0, tested = 0;
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    const auto x = random_sequence(depth + 1, rng);
    const auto xp = random_sequence(depth + 1, rng);
    const TransportPair tp(model, x, xp);
    for (std::size_t n = 0; n <= depth; ++n) {
      for (std::size_t k = 0; n + k <= depth; ++k) {
        const auto rep = verify_inequalities(tp, n, k, 1000, rng());
        for (const auto& c : rep.checks) {
          violations += c.violations;
          tested += c.tested;
          worst = std::max(worst, c.max_ratio);
        }
      }
    }
  }
  return {violations == 0,
          fmt("depth 2, %g samples: %g violations, max lhs/bound = %.4g (tol bound*(1+1e-6)+1e-9)", double(tested),
              double(violations), worst)};
}

// 8. continuity of the sequence-to-knot map at k = 2
Outcome continuity() {
  const std::size_t depth = 3, k = 2;
  const auto P = default_schedule(depth);
  const auto model = make_tower_model(P);
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> V(0.0, 1.0);
  bool ok = true;
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    const auto x = random_sequence(depth + 1, rng);
    auto xp = x;
    for (std::size_t j = 0; j <= k; ++j) {
      const double d = P.eps[k] / (3.0 * std::ldexp(1.0, static_cast<int>(j)) * static_cast<double>(k + 1));
      xp.values[j] = Angle(x[j] + 0.999 * V(rng) * d * (V(rng) < 0.5 ? -1.0 : 1.0));
    }
    const auto r = reduction_continuity_check(model, x, xp, k, 10000, 1e-6);
    if (!r.precondition_ok || !r.ok) ok = false;
    worst = std::max(worst, r.sup_distance / r.eps_k);
  }
  return {ok, fmt("k = 2, 5 perturbed pairs: max sup/eps_k = %.4g (tol 1e-6)", worst)};
}

// 9. hausdorff against the brute-force oracle
Outcome hausdorff_oracle() {
  std::mt19937_64 rng(909);
  std::size_t bad = 0;
  for (int t = 0; t < 50; ++t) {
    const auto a = oracle::random_cloud(1 + rng() % 200, rng, 1.0 + (t % 5));
    const auto b = oracle::random_cloud(1 + rng() % 200, rng, 1.0);
    if (hausdorff(a, b) != oracle::hausdorff(a, b)) ++bad;
  }
  return {bad == 0, fmt("50 cloud pairs of <= 200 points: %g mismatches (exact equality)", double(bad))};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const Criterion all[] = {
      {1, "embedding exactness", 10, embedding_exactness},
      {2, "order round trip", 30, round_trip},
      {3, "order-to-knot continuity", 60, lo_continuity},
      {4, "tower schedule and Lipschitz bounds", 120, tower_lipschitz},
      {5, "Cauchy chain of stage curves", 60, cauchy_chain},
      {6, "intertwining identity", 120, intertwining},
      {7, "transport inequality suite", 300, inequality_suite},
      {8, "continuity modulus", 60, continuity},
      {9, "hausdorff oracle equivalence", 5, hausdorff_oracle},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s %d %s: %s [%.2f s, limit %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs, c.limit_s, in_time ? "" : ", too slow");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
