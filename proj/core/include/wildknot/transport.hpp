#pragma once

// Partial rotations of solid tori and the homeomorphisms H_n carrying the
// tower of one rotation sequence onto the tower of another, with sampled
// checks of the identities and inequalities they satisfy.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wildknot/tower.hpp"

namespace wildknot {

/// H_eps^s: rotates the fibre over b by (1 - 2 max(0, |b|/eps - 1/2)) s.
/// Throws InputError when |b| > eps.
TorusPoint partial_rotation(double eps, Angle s, const TorusPoint& p);
Vec3 partial_rotation(double eps, double s, const Vec3& p);

class TransportPair {
 public:
  /// Both sequences need depth + 1 values.
  TransportPair(std::shared_ptr<const TowerModel> model, CircleSeq x, CircleSeq x_prime);
  TransportPair(const TowerParams& params, CircleSeq x, CircleSeq x_prime);

  const TowerParams& params() const { return model_->params(); }
  std::size_t depth() const { return model_->depth(); }
  const CircleSeq& x() const { return x_; }
  const CircleSeq& x_prime() const { return xp_; }
  /// hat g_n for x and for x'.
  const TowerEvaluator& tower(std::size_t n) const { return ev_.at(n); }
  const TowerEvaluator& tower_prime(std::size_t n) const { return evp_.at(n); }

  /// x'_m - x_m as a signed angle.
  double shift(std::size_t m) const;
  /// max over from <= m <= depth of |x'_m - x_m|.
  double sup_shift(std::size_t from) const;

  /// Number c of stages whose image contains p: p is in Im hat g_j iff j < c.
  std::size_t membership(const Vec3& p) const;

  /// H_n(p) for p in T_1; n <= depth. H_depth stands in for H_infinity.
  Vec3 apply(std::size_t n, const Vec3& p) const;

  /// Path metric of Im hat g_n between p and q, measured along the image of
  /// the straight segment between their preimages. Throws GeometryError when
  /// either point is outside the image.
  double path_distance(std::size_t n, const Vec3& p, const Vec3& q,
                       std::size_t segments = 256) const;

 private:
  std::shared_ptr<const TowerModel> model_;
  CircleSeq x_;
  CircleSeq xp_;
  std::vector<TowerEvaluator> ev_;
  std::vector<TowerEvaluator> evp_;
};

Vec3 transport_homeo(const TransportPair& tp, std::size_t n, const Vec3& p);

/// |H_n(hat g_n(q)) - hat g'_n(theta^{x'_n - x_n}(q))| for q in T_{eps_{n+1}}.
double intertwining_residual(const TransportPair& tp, std::size_t n, const Vec3& q);

/// Bounds are checked as lhs <= bound * (1 + kRelTol) + kAbsTol.
inline constexpr double kRelTol = 1e-6;
inline constexpr double kAbsTol = 1e-9;

struct InequalityWitness {
  Vec3 x;
  Vec3 z;
  double lhs = 0.0;
  double bound = 0.0;
};

struct InequalityCheck {
  std::string id;
  std::string statement;
  std::size_t tested = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;  // max lhs / bound
  std::vector<InequalityWitness> witnesses;  // worst cases, at most 5
};

struct InequalityReport {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<InequalityCheck> checks;

  std::size_t violations() const;
  bool ok() const { return violations() == 0; }
};

/// Samples the image sets each inequality quantifies over and evaluates
/// both sides. Inequalities that need stages beyond the depth are skipped.
///  transport-lipschitz: x, z in Im hat g_{n-1} (n >= 1):
///      d(H_n x, H_n z) <= 25 d_path(x, z) + 5 |x'_n - x_n|
///  stage-drift: x in Im hat g_{n+k} (k >= 1):
///      d(H_n x, H_{n+k} x) <= 10 sup_{m>=n} |x'_m - x_m| + 20 eps_n
///  stage-drift-outer: x in Im hat g_{n+k-1} (k >= 1):
///      d(H_n x, H_{n+k} x) <= 15 sup_{m>=n} |x'_m - x_m| + 50 eps_n
///  limit-modulus: x in Im hat g_n minus Im hat g_{n+1}, z in Im hat g_{n+1}:
///      d(H x, H z) <= 100 (d_path(x, z) + sup_{m>n} |x'_m - x_m| + eps_{n+1})
/// Throws InputError unless n + k <= depth.
InequalityReport verify_inequalities(const TransportPair& tp, std::size_t n, std::size_t k,
                                     std::size_t sample_budget, std::uint64_t seed = 1);

struct StagedPoint {
  Vec3 point;
  std::size_t stage = 0;
};

struct CauchyReport {
  std::vector<double> increments;     // d(z_m, z_{m+1})
  std::vector<double> transported;    // d(H z_m, H z_{m+1})
  std::vector<double> bounds;
  std::vector<double> modulus;        // sup_{j >= m} transported[j]
  std::size_t violations = 0;
  double max_ratio = 0.0;

  bool ok() const { return violations == 0; }
};

/// Transports a sequence with nondecreasing stage tags and checks each
/// transported increment against 100 (d_path + sup_{j>n} |x'_j - x_j| + eps_{n+1})
/// with n the stage of the earlier point. Throws InputError on decreasing
/// tags and GeometryError when a point lies outside its tagged stage image.
CauchyReport transport_cauchy(const TransportPair& tp, const std::vector<StagedPoint>& seq);

/// The points hat f_n(s) for n = 0 .. depth-1, tagged with their stage.
std::vector<StagedPoint> core_sequence(const TransportPair& tp, double s);

}  // namespace wildknot
