#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wildknot/errors.hpp"
#include "wildknot/tower.hpp"

using namespace wildknot;

namespace {

const TowerParams& schedule3() {
  static const TowerParams p = default_schedule(3);
  return p;
}

std::shared_ptr<const TowerModel> model3() {
  static const auto m = make_tower_model(schedule3());
  return m;
}

const TowerParams& schedule2() {
  static const TowerParams p = default_schedule(2);
  return p;
}

std::shared_ptr<const TowerModel> model2() {
  static const auto m = make_tower_model(schedule2());
  return m;
}

// The schedule inequalities written out directly.
bool schedule_ok(const TowerParams& p) {
  if (p.eps[0] != 1.0) return false;
  for (std::size_t n = 0; n <= p.depth; ++n) {
    if (p.eps[n] > std::ldexp(1.0, -static_cast<int>(n))) return false;
  }
  for (std::size_t n = 0; n < p.depth; ++n) {
    if (!(2 * p.eps[n + 1] < p.lam[n] && p.lam[n] < p.eps[n])) return false;
    if (n + 1 < p.depth && !(4 * p.lam[n + 1] < 2 * p.eps[n + 1])) return false;
    if (!(p.lip[n] > 1.0 && p.lip[n] < std::pow(2.0, std::ldexp(1.0, -static_cast<int>(n))))) return false;
  }
  return true;
}

Vec3 random_domain_point(const TowerParams& P, const CircleSeq& x, std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> V(0, 1);
  const double r = P.eps[n + 1] * std::sqrt(V(rng)), a = kTwoPi * V(rng);
  const std::size_t k = rng() % (n + 1);
  const double s = V(rng) < 0.3 ? kTwoPi * V(rng) : x[k] + P.lam[k] * 1.2 * (2 * V(rng) - 1);
  return {r * std::cos(a), r * std::sin(a), Angle::canonical(s)};
}

}  // namespace

TEST_CASE("default schedules satisfy the inequalities") {
  for (std::size_t d = 1; d <= 3; ++d) {
    const auto p = default_schedule(d);
    CHECK(p.inequalities_hold());
    CHECK(schedule_ok(p));
    CHECK(p.lam[0] <= 0.5);
    CHECK_NOTHROW(p.validate());
  }
  CHECK_THROWS_AS(default_schedule(4), PrecisionError);
}

TEST_CASE("the 8^-n schedule") {
  TowerParams p;
  p.depth = 4;
  for (std::size_t n = 0; n <= 4; ++n) p.eps.push_back(std::pow(8.0, -static_cast<double>(n)));
  for (std::size_t n = 0; n < 4; ++n) {
    p.lam.push_back(std::pow(8.0, -static_cast<double>(n)) / 3);
    p.lip.push_back(default_lipschitz(n));
    p.knot_table.push_back(knot_from_table(n));
  }
  // 4 lam_{n+1} = (4/3) eps_{n+1} < 2 eps_{n+1} and 2 eps_{n+1} = eps_n / 4 < lam_n.
  CHECK(schedule_ok(p));
  CHECK(p.inequalities_hold());

  auto bad = p;
  bad.lam[1] = 0.9 * bad.eps[1];
  std::vector<std::string> why;
  CHECK_FALSE(bad.inequalities_hold(&why));
  CHECK_FALSE(why.empty());
  CHECK_THROWS_AS(bad.validate(), InputError);

  auto ragged = p;
  ragged.lam.pop_back();
  CHECK_THROWS_AS(ragged.validate(), InputError);
}

TEST_CASE("Lipschitz constants") {
  double prod = 1.0;
  for (std::size_t n = 0; n < 60; ++n) {
    const double L = default_lipschitz(n);
    prod *= L;
    if (n > 40) continue;  // L rounds to 1 in double further out
    CHECK(L > 1.0);
    CHECK(L < std::pow(2.0, std::ldexp(1.0, -static_cast<int>(n))));
    CHECK(core_speed(L) > 1.0);
    CHECK(core_speed(L) < L);
  }
  CHECK(prod < 5.0);
}

TEST_CASE("knotted cores") {
  const auto& P = schedule3();
  for (std::size_t n = 0; n < 3; ++n) {
    const auto c = knotted_core(n, P, 4000);
    REQUIRE(c.params.back() == kPi);
    CHECK(c.points.back() == Vec3{0, 0, kPi});
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double s = c.params[i];
      const Vec3& p = c.points[i];
      if (std::abs(s) >= P.lam[n]) {
        CHECK(p == Vec3{0, 0, s});
      } else {
        CHECK(std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z) <= P.lam[n] * (1 + 1e-12));
      }
    }
  }
  const auto c0 = knotted_core(0, P, 4000);
  std::vector<Vec3> window;
  for (std::size_t i = 0; i < c0.size(); ++i) {
    if (std::abs(c0.params[i]) < P.lam[0]) window.push_back(c0.points[i]);
  }
  CHECK(oracle::crossings(window, {1.0, 0.31, 0.17}) >= 3);
  CHECK_THROWS_AS(knotted_core(0, P, 64), GeometryError);
}

TEST_CASE("stage maps: outside the window is the identity on the core") {
  const auto& P = schedule3();
  for (std::size_t k = 0; k < 3; ++k) {
    const StageMap st(P, k);
    CHECK(st.core(kPi) == Vec3{0, 0, kPi});
    CHECK(st.core(-2.0) == Vec3{0, 0, -2.0});
    const Vec3 q{0.3 * P.eps[k + 1], -0.2 * P.eps[k + 1], 1.0};
    const Vec3 p = st.forward(q);
    CHECK(std::hypot(p.x, p.y) == doctest::Approx(std::hypot(q.x, q.y)).epsilon(1e-12));
    CHECK(p.z == q.z);
  }
}

TEST_CASE("sampled local bilipschitz constants of the stages") {
  const auto& P = schedule3();
  for (std::size_t k = 0; k < 3; ++k) {
    const auto est = sample_stage_bilipschitz(P, k, 1000, 100 + k);
    CHECK(est.max_ratio <= P.lip[k]);
    CHECK(est.min_ratio >= 1.0 / P.lip[k]);
  }
}

TEST_CASE("composites are 5-Lipschitz") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-kPi, kPi);
  for (int t = 0; t < 2; ++t) {
    const auto x = circle_seq({U(rng), U(rng), U(rng), U(rng)});
    for (std::size_t n = 0; n < 3; ++n) {
      CHECK(sample_tower_lipschitz(TowerEvaluator(model3(), x, n), 500, rng()).max_ratio <= 5.0);
    }
  }
}

TEST_CASE("zero rotations compose the bare stages") {
  const auto x = circle_seq({0, 0, 0, 0});
  const auto& P = schedule3();
  std::mt19937_64 rng(8);
  for (std::size_t n = 0; n < 3; ++n) {
    const TowerEvaluator ev(model3(), x, n);
    for (int i = 0; i < 100; ++i) {
      const Vec3 q = random_domain_point(P, x, n, rng);
      Vec3 p = q;
      for (std::size_t k = n + 1; k-- > 0;) p = StageMap(P, k).forward(p);
      CHECK(ev.forward(q) == p);
    }
  }
}

TEST_CASE("a constant shift conjugates the tower by the rotation") {
  const auto& P = schedule2();
  std::mt19937_64 rng(9);
  const auto x = circle_seq({0.4, -1.1, 2.0});
  const double c = 0.9;
  const auto xc = circle_seq({0.4 + c, -1.1 + c, 2.0 + c});
  for (std::size_t n = 0; n < 2; ++n) {
    const TowerEvaluator ev(model2(), x, n), evc(model2(), xc, n);
    for (int i = 0; i < 200; ++i) {
      const Vec3 q = random_domain_point(P, xc, n, rng);
      const Vec3 a = evc.forward(q);
      const Vec3 b = flat_rotate(ev.forward(flat_rotate(q, -c)), c);
      CHECK(flat_dist(a, b) < 1e-9);
    }
  }
}

TEST_CASE("tower inversion") {
  const auto& P = schedule2();
  std::mt19937_64 rng(10);
  const auto x = circle_seq({0.3, -1.0, 2.0});
  for (std::size_t n = 0; n < 2; ++n) {
    const TowerEvaluator ev(model2(), x, n);
    const double tol = inversion_tolerance(ev);
    for (int i = 0; i < 300; ++i) {
      const Vec3 q = random_domain_point(P, x, n, rng);
      const Vec3 back = invert_tower(ev, ev.forward(q), tol);
      CHECK(flat_dist(back, q) <= 1e-4 * P.eps[n + 1] + 1e-12);
    }
    for (double s : {-2.5, 0.0, 1.0, x[0], x[n] + 0.3 * P.lam[n]}) {
      const Vec3 back = invert_tower(ev, ev.core_point(s), tol);
      CHECK(std::hypot(back.x, back.y) <= 1e-4 * P.eps[n + 1] + 1e-12);
      CHECK(s1_dist(Angle(back.z), Angle(s)) <= 1e-9);
    }
    // Far from every window the stage maps are isometries of the fibre.
    const double s_far = Angle::canonical(x[0] + kPi);
    CHECK_THROWS_AS(invert_tower(ev, {3 * P.eps[n + 1], 0, s_far}, tol), GeometryError);
  }
}

TEST_CASE("stage curves form a Cauchy chain") {
  const auto& P = schedule3();
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(-kPi, kPi);
  for (int t = 0; t < 2; ++t) {
    const auto x = circle_seq({U(rng), U(rng), U(rng), U(rng)});
    const auto grid = stage_grid(P, {&x}, 10000);
    std::vector<StageCurve> cs;
    for (std::size_t n = 0; n < 3; ++n) cs.push_back(limit_curve(TowerEvaluator(model3(), x, n), grid));
    for (std::size_t n = 0; n + 1 < 3; ++n) {
      CHECK(flat_sup_dist(cs[n].curve, cs[n + 1].curve) <= 10 * P.lam[n + 1]);
    }
    CHECK(cs[2].error_bound == doctest::Approx(limit_error_bound(P, 2)));
    CHECK(limit_error_bound(P, 0) > limit_error_bound(P, 1));
  }
}

TEST_CASE("stage 0 with zero rotations is the knotted core") {
  const auto& P = schedule3();
  const auto x = circle_seq({0, 0, 0, 0});
  const auto c = limit_curve(P, x, 0, 2000);
  const StageMap st(P, 0);
  for (std::size_t i = 0; i < c.curve.size(); ++i) CHECK(c.curve.points[i] == st.core(c.curve.params[i]));
}

TEST_CASE("deep stage curves separate distant parameters") {
  const auto& P = schedule3();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(-kPi, kPi), V(0, 1);
  const auto x = circle_seq({U(rng), U(rng), U(rng), U(rng)});
  const TowerEvaluator ev(model3(), x, 2);
  const double ratio = P.eps[2] / P.eps[1];
  for (int i = 0; i < 500; ++i) {
    const std::size_t k = rng() % 3;
    const double s = V(rng) < 0.5 ? U(rng) : x[k] + P.lam[k] * (2 * V(rng) - 1);
    const double t = V(rng) < 0.5 ? U(rng) : x[k] + P.lam[k] * (2 * V(rng) - 1);
    const double d = s1_dist(Angle(s), Angle(t));
    if (d < 20 * P.eps[1]) continue;
    const double img = flat_dist(ev.core_point(s), ev.core_point(t));
    CHECK(img >= ratio * d - 20 * P.eps[3]);
    CHECK(img > 0);
  }
}

TEST_CASE("dense sequence and interleaving") {
  const auto z = dense_sequence(50);
  for (std::size_t k = 0; k < 50; ++k) {
    const double expect = kTwoPi * std::fmod(static_cast<double>(k) * (1 + std::sqrt(5.0)) / 2, 1.0);
    CHECK(s1_dist(z.values[k], Angle(expect)) < 1e-12);
  }
  const auto y = interleave(circle_seq({0.5}), circle_seq({1.0, 2.0}));
  REQUIRE(y.size() == 2);
  CHECK(y[0] == 1.0);
  CHECK(y[1] == 0.5);
  CHECK(interleave(CircleSeq{}, z).size() == 0);
  CHECK_THROWS_AS(interleave(circle_seq({1, 2, 3}), circle_seq({1})), InputError);

  const auto x = circle_seq({0.1, -0.2, 0.3});
  const auto [xx, zz] = deinterleave(interleave(x, z));
  CHECK(xx.values == x.values);
  for (std::size_t k = 0; k < 3; ++k) CHECK(zz.values[k] == z.values[k]);
  CHECK_THROWS_AS(deinterleave(circle_seq({1, 2, 3})), InputError);
}

TEST_CASE("continuity of the sequence-to-knot map") {
  const auto& P = schedule3();
  const auto x = circle_seq({0.2, -0.4, 1.3, 2.2});
  const std::size_t k = 2;

  const auto same = reduction_continuity_check(model3(), x, x, k, 2000);
  CHECK(same.precondition_ok);
  CHECK(same.sup_distance == 0.0);

  auto xp = x;
  for (std::size_t n = 0; n <= k; ++n) {
    const double delta = P.eps[k] / (3.0 * std::ldexp(1.0, static_cast<int>(n)) * (k + 1));
    xp.values[n] = Angle(x[n] + (n % 2 ? -0.5 : 0.5) * delta);
  }
  const auto rep = reduction_continuity_check(model3(), x, xp, k, 10000);
  CHECK(rep.precondition_ok);
  CHECK(rep.ok);
  CHECK(rep.sup_distance <= P.eps[k] * (1 + 1e-6));
  CHECK(rep.limit_bound == doctest::Approx(21 * P.eps[k]));

  auto bad = x;
  bad.values[0] = Angle(x[0] + 2 * rep.delta[0]);
  const auto viol = reduction_continuity_check(model3(), x, bad, k, 2000);
  CHECK_FALSE(viol.precondition_ok);
  CHECK(viol.violated_slots == std::vector<std::size_t>{0});
}

TEST_CASE("flat coordinate helpers") {
  CHECK(flat_dist({0, 0, kPi - 0.1}, {0, 0, -kPi + 0.1}) == doctest::Approx(0.2));
  CHECK(flat_rotate({0.1, 0.2, 3.0}, 1.0).z == doctest::Approx(4.0 - kTwoPi));
  const auto tp = to_torus({0.1, 0.2, 0.3}, 0.5);
  CHECK(to_flat(tp) == Vec3{0.1, 0.2, 0.3});
  CHECK_THROWS_AS(to_torus({1, 0, 0}, 0.5), InputError);
}
