#pragma once

// Circle and solid-torus arithmetic, the metrics used throughout the library
// (arc metric on S^1, product metric on D^2_r x S^1, Hausdorff, sup) and a
// sampled Lipschitz / colipschitz estimator.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "wildknot/errors.hpp"
#include "wildknot/vec3.hpp"

namespace wildknot {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Point of S^1 = [-pi, pi] / {-pi ~ pi}, stored in the canonical range (-pi, pi].
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians) : value_(canonical(radians)) {}

  double value() const { return value_; }

  static double canonical(double radians);

  friend bool operator==(const Angle&, const Angle&) = default;

 private:
  double value_ = 0.0;
};

// Group law induced from multiplication of unit complex numbers.
Angle s1_add(Angle a, Angle b);
Angle s1_sub(Angle a, Angle b);
Angle s1_neg(Angle a);

/// Arc-length metric on S^1 (total length 2*pi).
double s1_dist(Angle a, Angle b);

/// |a| for a point of S^1, i.e. s1_dist(a, 0).
inline double s1_abs(Angle a) { return s1_dist(a, Angle{}); }

struct DiskPoint {
  double x = 0.0;
  double y = 0.0;
  double r = 1.0;  // radius of the ambient disk D^2_r

  double norm() const;
};

/// Point of the solid torus T_r = D^2_r x S^1.
struct TorusPoint {
  DiskPoint disk;
  Angle angle;

  double radius() const { return disk.r; }
};

/// Checked constructor: throws InputError when |b| exceeds r beyond float slack.
TorusPoint make_torus_point(double x, double y, Angle angle, double r);

/// Product metric sqrt(|b_p - b_q|^2 + d_{S^1}(t_p, t_q)^2). Throws on radius mismatch.
double torus_dist(const TorusPoint& p, const TorusPoint& q);

/// Rotation theta^s(b, t) = (b, t + s); an isometry of every T_r.
TorusPoint rotate(const TorusPoint& p, Angle s);

/// The same point viewed in a torus of a different (not smaller) radius.
TorusPoint with_radius(const TorusPoint& p, double r);

using PointCloud = std::vector<Vec3>;

/// Hausdorff distance between finite point sets. Uniform-grid nearest
/// neighbour search with early termination; tiny inputs use a direct scan.
/// The result equals the exhaustive max-min over all pairs bit for bit.
double hausdorff(std::span<const Vec3> a, std::span<const Vec3> b);

/// sup_a inf_b |a - b|.
double directed_hausdorff(std::span<const Vec3> a, std::span<const Vec3> b);

/// Sampled parametrized curve in R^3.
struct Curve3 {
  std::vector<double> params;
  std::vector<Vec3> points;
  bool closed = false;

  std::size_t size() const { return points.size(); }
  double polyline_length() const;
  double max_segment() const;
};

/// Sampled curve with values in a solid torus.
struct TorusCurve {
  std::vector<double> params;
  std::vector<TorusPoint> points;

  std::size_t size() const { return points.size(); }
};

/// max_i |f(s_i) - g(s_i)| over a shared parameter grid; throws InputError on grid mismatch.
double sup_dist(const Curve3& f, const Curve3& g);
double sup_dist(const TorusCurve& f, const TorusCurve& g);

struct LipschitzEstimate {
  double max_ratio = 0.0;  // lower bound for the Lipschitz constant
  double min_ratio = std::numeric_limits<double>::infinity();
  std::size_t pairs_used = 0;
};

/// Ratio d_Y(f p, f q) / d_X(p, q) over all adjacent sample pairs plus
/// `pair_budget` uniformly random pairs. Coincident pairs are skipped.
template <class Point, class Map, class DomainMetric, class ImageMetric>
LipschitzEstimate estimate_bilipschitz(std::span<const Point> samples, Map&& map,
                                       DomainMetric&& domain_metric,
                                       ImageMetric&& image_metric,
                                       std::size_t pair_budget, std::uint64_t seed) {
  if (pair_budget < 1) throw InputError("estimate_bilipschitz: pair_budget must be >= 1");
  if (samples.size() < 2) throw InputError("estimate_bilipschitz: need at least two samples");

  std::vector<decltype(map(samples[0]))> images;
  images.reserve(samples.size());
  for (const auto& p : samples) images.push_back(map(p));

  LipschitzEstimate est;
  auto visit = [&](std::size_t i, std::size_t j) {
    const double d = domain_metric(samples[i], samples[j]);
    if (!(d > 0.0)) return;
    const double r = image_metric(images[i], images[j]) / d;
    est.max_ratio = std::max(est.max_ratio, r);
    est.min_ratio = std::min(est.min_ratio, r);
    ++est.pairs_used;
  };
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) visit(i, i + 1);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
  for (std::size_t k = 0; k < pair_budget; ++k) visit(pick(rng), pick(rng));

  if (est.pairs_used == 0) throw InputError("estimate_bilipschitz: all sample pairs coincide");
  return est;
}

}  // namespace wildknot
