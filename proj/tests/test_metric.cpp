#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wildknot/errors.hpp"
#include "wildknot/metric.hpp"

using namespace wildknot;

TEST_CASE("circle arc metric") {
  CHECK(s1_dist(Angle(kPi), Angle(-kPi)) == 0.0);
  CHECK(s1_dist(Angle(0), Angle(kPi / 2)) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(s1_dist(Angle(-3), Angle(3)) == doctest::Approx(kTwoPi - 6).epsilon(1e-12));
  CHECK(Angle(-kPi).value() == kPi);
}

TEST_CASE("circle group law") {
  for (double x : {-3.0, -1.0, 0.0, 0.5, 3.1}) CHECK(s1_add(Angle(x), Angle(0)).value() == doctest::Approx(x));
  CHECK(s1_add(Angle(kPi / 2), Angle(kPi)).value() == doctest::Approx(-kPi / 2));
  CHECK(s1_add(Angle(2), Angle(2)).value() == doctest::Approx(4 - kTwoPi));
  CHECK(s1_sub(Angle(1), Angle(1)).value() == 0.0);
  CHECK(s1_neg(Angle(1)).value() == doctest::Approx(-1));
}

TEST_CASE("arc metric agrees with an independent formula") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-10, 10);
  for (int i = 0; i < 1000; ++i) {
    const double a = U(rng), b = U(rng);
    CHECK(s1_dist(Angle(a), Angle(b)) == doctest::Approx(oracle::arc(a, b)).epsilon(1e-9));
  }
}

TEST_CASE("solid torus product metric") {
  const auto p = make_torus_point(0, 0, Angle(0), 1);
  CHECK(torus_dist(p, p) == 0.0);
  CHECK(torus_dist(p, make_torus_point(0, 0, Angle(kPi / 2), 1)) == doctest::Approx(kPi / 2));
  CHECK(torus_dist(make_torus_point(0.1, 0, Angle(0), 1), p) == doctest::Approx(0.1));
  CHECK_THROWS_AS(make_torus_point(2, 0, Angle(0), 1), InputError);
}

TEST_CASE("rotation is an isometry") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-0.7, 0.7), T(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    const auto p = make_torus_point(U(rng), U(rng), Angle(T(rng)), 1);
    const auto q = make_torus_point(U(rng), U(rng), Angle(T(rng)), 1);
    const Angle s(T(rng));
    CHECK(torus_dist(rotate(p, s), rotate(q, s)) == doctest::Approx(torus_dist(p, q)).epsilon(1e-12));
  }
}

TEST_CASE("hausdorff small cases") {
  const std::vector<Vec3> a{{0, 0, 0}};
  const std::vector<Vec3> b{{0, 0, 0}, {1, 0, 0}};
  CHECK(hausdorff(a, a) == 0.0);
  CHECK(hausdorff(a, b) == 1.0);
  CHECK(hausdorff(b, a) == 1.0);
}

TEST_CASE("hausdorff of concentric circles") {
  std::vector<Vec3> c1, c2;
  for (int i = 0; i < 720; ++i) {
    const double t = kTwoPi * i / 720;
    c1.push_back({std::cos(t), std::sin(t), 0});
    c2.push_back({1.1 * std::cos(t), 1.1 * std::sin(t), 0});
  }
  const double h = hausdorff(c1, c2);
  CHECK(h == oracle::hausdorff(c1, c2));
  CHECK(h == doctest::Approx(0.1).epsilon(1e-3));
}

TEST_CASE("hausdorff equals the exhaustive oracle") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 300, m = 1 + rng() % 300;
    const auto A = oracle::random_cloud(n, rng);
    auto B = oracle::random_cloud(m, rng, trial % 3 == 0 ? 0.01 : 1.0);
    if (trial % 5 == 0) B.insert(B.end(), A.begin(), A.end());
    CHECK(hausdorff(A, B) == oracle::hausdorff(A, B));
  }
}

TEST_CASE("hausdorff is symmetric and satisfies the triangle inequality") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto A = oracle::random_cloud(50, rng), B = oracle::random_cloud(60, rng), C = oracle::random_cloud(70, rng);
    CHECK(hausdorff(A, B) == hausdorff(B, A));
    CHECK(hausdorff(A, C) <= hausdorff(A, B) + hausdorff(B, C) + 1e-15);
  }
}

TEST_CASE("sup distance of sampled curves") {
  Curve3 f, g, r;
  const double c = 0.37, phi = 0.8;
  for (int i = 0; i < 500; ++i) {
    const double t = kTwoPi * i / 500;
    f.params.push_back(t);
    f.points.push_back({std::cos(t), std::sin(t), 0});
    g.params.push_back(t);
    g.points.push_back({std::cos(t), std::sin(t), c});
    r.params.push_back(t);
    r.points.push_back({std::cos(t + phi), std::sin(t + phi), 0});
  }
  CHECK(sup_dist(f, f) == 0.0);
  CHECK(sup_dist(f, g) == doctest::Approx(c).epsilon(1e-14));
  CHECK(sup_dist(f, r) == doctest::Approx(2 * std::sin(phi / 2)).epsilon(1e-12));
  Curve3 shorter = f;
  shorter.params.pop_back();
  shorter.points.pop_back();
  CHECK_THROWS_AS(sup_dist(f, shorter), InputError);
}

namespace {

std::vector<TorusPoint> axis_samples() {
  std::vector<TorusPoint> s;
  for (int i = 0; i < 50; ++i) s.push_back(make_torus_point(0.2, 0.1, Angle(-1 + 0.04 * i), 1));
  for (int i = 0; i < 50; ++i) s.push_back(make_torus_point(-0.5 + 0.02 * i, 0.1, Angle(2), 1));
  return s;
}

}  // namespace

TEST_CASE("bilipschitz estimates of isometries and disk scaling") {
  const auto s = axis_samples();
  auto d = [](const TorusPoint& p, const TorusPoint& q) { return torus_dist(p, q); };

  const auto id = estimate_bilipschitz<TorusPoint>(s, [](const TorusPoint& p) { return p; }, d, d, 500, 1);
  CHECK(id.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(id.min_ratio == doctest::Approx(1.0).epsilon(1e-12));

  const auto rot = estimate_bilipschitz<TorusPoint>(
      s, [](const TorusPoint& p) { return rotate(p, Angle(2.5)); }, d, d, 500, 2);
  CHECK(rot.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rot.min_ratio == doctest::Approx(1.0).epsilon(1e-12));

  const auto scale = estimate_bilipschitz<TorusPoint>(
      s,
      [](const TorusPoint& p) { return make_torus_point(0.5 * p.disk.x, 0.5 * p.disk.y, p.angle, 1); },
      d, d, 500, 3);
  CHECK(scale.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(scale.min_ratio == doctest::Approx(0.5).epsilon(1e-12));
}
