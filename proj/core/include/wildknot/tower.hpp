#pragma once

// Towers of knotted solid tori. Stage k is an embedding g_k of the thin
// torus T_{eps_{k+1}} into T_{eps_k} around a core f_k that follows the
// circle except inside the window |s| < lambda_k, where it ties the k-th
// tabulated knot. Compositions of rotated stages give the curves f^x.
//
// Points of a solid torus T_r = D^2_r x S^1 are handled in flat coordinates
// (b1, b2, t) stored in a Vec3, with t in (-pi, pi].

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wildknot/frame.hpp"
#include "wildknot/long_knot.hpp"
#include "wildknot/metric.hpp"

namespace wildknot {

struct TowerParams {
  std::size_t depth = 0;
  std::vector<double> eps;  // eps_0 .. eps_depth
  std::vector<double> lam;  // lambda_0 .. lambda_{depth-1}
  std::vector<double> lip;  // L_0 .. L_{depth-1}
  std::vector<KnotId> knot_table;

  /// Exact check of eps_0 = 1, eps_n <= 2^-n, 4 lam_{n+1} < 2 eps_{n+1} < lam_n < eps_n
  /// and L_n < 2^(2^-n). Failed clauses are appended to `why` when given.
  bool inequalities_hold(std::vector<std::string>* why = nullptr) const;
  /// Throws InputError on inconsistent list lengths or failed inequalities.
  void validate() const;
};

/// L_n = 1 + (2^(2^-n) - 1) / 2.
double default_lipschitz(std::size_t n);
/// Speed of the knotted core at stage n, halfway between 1 and L_n.
double core_speed(double lip);

/// Smallest eps allowed on a stage that still has to be evaluated.
inline constexpr double kPrecisionFloor = 1e-12;
/// Absolute slack of stage-image membership tests (a few ulps of O(1) coordinates).
inline constexpr double kMembershipFloor = 1e-15;

/// Schedule with lam_0 = 1/2, lam_{n+1} = eps_{n+1}/4 and eps_{n+1} the largest
/// power of two passing the inequalities, 20*eps_{n+1} tubularity of f_n, the
/// local bilipschitz bound L_n and safety * C_n <= eps_n^2 / eps_{n+1}, where C_n
/// is the measured colipschitz constant of g_n. Throws PrecisionError when
/// some eps_n with n < depth drops below kPrecisionFloor.
TowerParams default_schedule(std::size_t depth, double safety = 2.0);

struct CircleSeq {
  std::vector<Angle> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i].value(); }
};

CircleSeq circle_seq(const std::vector<double>& radians);

// ---- flat torus coordinates ------------------------------------------------

/// Product metric of D^2 x S^1 on flat coordinates.
double flat_dist(const Vec3& p, const Vec3& q);
/// theta^s.
Vec3 flat_rotate(const Vec3& p, double s);
inline double disk_norm(const Vec3& p) { return std::hypot(p.x, p.y); }
Vec3 to_flat(const TorusPoint& p);
TorusPoint to_torus(const Vec3& p, double r);

// ---- core templates --------------------------------------------------------

/// Local bilipschitz data of a frame map, from singular values of its Jacobian.
struct JacobianBounds {
  double max_sv = 0.0;
  double min_sv = std::numeric_limits<double>::infinity();
};

/// The stage map in window units: the window |s| < lambda is rescaled to
/// |u| < 1, the core becomes a LongKnot A and a point (beta, u) of the tube
/// maps to A(u) + beta_1 n(u) + beta_2 b(u). Outside |u| < 1 the core is the
/// straight axis at unit speed.
class CoreTemplate {
 public:
  CoreTemplate(KnotId id, double speed);

  const LongKnot& knot() const { return knot_; }
  const Vec3& s0() const { return s0_; }
  Vec3 core(double u) const;
  Vec3 unit_tangent(double u) const;
  FrameVectors frame(double u) const;
  Vec3 map(double b1, double b2, double u) const;
  /// (beta_1, beta_2, u) with u in [-1, 1] whose image is nearest P; assumes
  /// P lies in a thin tube around the window part of the core.
  Vec3 foot(const Vec3& P) const;

  /// Sampled tubularity of the radius-r tube (curvature and far-pair separation).
  bool tubular(double r) const;
  /// Extremal Jacobian singular values over the radius-r tube.
  JacobianBounds jacobian_bounds(double r) const;
  /// Measured colipschitz constant of the radius-r tube map, in window units.
  double colipschitz(double r) const;
  /// Separation of far-apart core points relative to window size.
  double feature_size() const { return feature_; }

 private:
  LongKnot knot_;
  Vec3 s0_;
  FrameVectors outside_;
  std::vector<double> table_u_;
  std::vector<Vec3> table_p_;
  double feature_ = 0.0;
  // Core sample pairs beyond the bending scale: parameter gap and image
  // distance minus sampling slack.
  std::vector<std::pair<double, double>> far_pairs_;
};

/// Shared template for (knot, speed); built once per process.
const CoreTemplate& core_template(KnotId id, double speed);

/// One stage g_k in its own coordinates (before the theta^{x_k} conjugation).
class StageMap {
 public:
  StageMap(const TowerParams& params, std::size_t k);

  std::size_t index() const { return k_; }
  double lambda() const { return lambda_; }
  double inner_radius() const { return eps_in_; }
  double outer_radius() const { return eps_out_; }
  const CoreTemplate& tmpl() const { return *tmpl_; }

  /// g_k(b, s) for |b| <= eps_{k+1}.
  Vec3 forward(const Vec3& q) const;
  /// Preimage when p is within the stage image:
  /// |b| <= eps_{k+1} (1 + slack) + kMembershipFloor.
  std::optional<Vec3> inverse(const Vec3& p, double slack = 1e-9) const;
  Vec3 core(double s) const { return forward({0, 0, s}); }

 private:
  std::size_t k_;
  double lambda_;
  double eps_in_;
  double eps_out_;
  const CoreTemplate* tmpl_;
};

/// All stages of a schedule.
class TowerModel {
 public:
  explicit TowerModel(TowerParams params);
  const TowerParams& params() const { return params_; }
  const StageMap& stage(std::size_t k) const { return stages_.at(k); }
  std::size_t depth() const { return stages_.size(); }

 private:
  TowerParams params_;
  std::vector<StageMap> stages_;
};

std::shared_ptr<const TowerModel> make_tower_model(const TowerParams& params);

/// hat g_n^x = theta^{x_0} g_0 theta^{-x_0} o ... o theta^{x_n} g_n theta^{-x_n}.
class TowerEvaluator {
 public:
  TowerEvaluator(std::shared_ptr<const TowerModel> model, CircleSeq x, std::size_t n);

  const TowerParams& params() const { return model_->params(); }
  const TowerModel& model() const { return *model_; }
  const CircleSeq& rotations() const { return x_; }
  std::size_t stage() const { return n_; }
  /// eps_{n+1}: the radius of the domain torus.
  double domain_radius() const { return model_->params().eps[n_ + 1]; }

  Vec3 forward(const Vec3& q) const;
  /// Applies stages to..from (to <= from) to a point of T_{eps_{from+1}}.
  Vec3 forward_range(const Vec3& q, std::size_t from, std::size_t to) const;
  Vec3 core_point(double s) const { return forward({0, 0, s}); }

  /// levels[0] = p and levels[j+1] the preimage of levels[j] under stage j,
  /// as long as it exists and j <= last_stage.
  std::vector<Vec3> lift(const Vec3& p, std::size_t last_stage) const;
  std::optional<Vec3> try_invert(const Vec3& p) const;
  /// Throws GeometryError if p is not in the image or the residual exceeds tol.
  Vec3 invert(const Vec3& p, double tol) const;

 private:
  std::shared_ptr<const TowerModel> model_;
  CircleSeq x_;
  std::size_t n_;
};

/// Sampled local bilipschitz ratios of g_k (own coordinates, window units):
/// pairs separated along the core by 1e-8..1e-6, across the fibre by up to a
/// tenth of the tube radius, or both. Image differences are formed term by
/// term so that thin tubes keep their relative precision.
LipschitzEstimate sample_stage_bilipschitz(const TowerParams& params, std::size_t k,
                                           std::size_t pairs, std::uint64_t seed);

/// Sampled Lipschitz ratio of hat g_n on T_{eps_{n+1}}, half the pairs
/// independent and half close pairs near the rotated windows. Pairs closer
/// than `min_separation` are skipped.
LipschitzEstimate sample_tower_lipschitz(const TowerEvaluator& ev, std::size_t pairs,
                                         std::uint64_t seed, double min_separation = 1e-13);

/// Throws InputError when n >= depth or x is too short.
TowerEvaluator compose_tower(const TowerParams& params, const CircleSeq& x, std::size_t n);
TowerEvaluator compose_tower(std::shared_ptr<const TowerModel> model, const CircleSeq& x,
                             std::size_t n);

/// Default relative inversion tolerance times eps_{n+1}, with an absolute floor.
double inversion_tolerance(const TowerEvaluator& ev);
Vec3 invert_tower(const TowerEvaluator& ev, const Vec3& p, double tol);

/// f_n sampled over S^1 in T_{eps_n} coordinates: `resolution` uniform
/// parameters plus `resolution` inside the window. Throws GeometryError when
/// the window samples cannot separate the strands of the knot.
Curve3 knotted_core(std::size_t n, const TowerParams& params, std::size_t resolution);

/// Parameters used for stage curves: uniform over S^1 plus `resolution`
/// points in every stage window, for each of the given sequences.
std::vector<double> stage_grid(const TowerParams& params, const std::vector<const CircleSeq*>& xs,
                               std::size_t resolution);

struct StageCurve {
  Curve3 curve;  // flat coordinates in T_1
  std::size_t stage = 0;
  double error_bound = 0.0;  // bound on the sup distance to the limit curve
};

/// hat f_n^x = hat g_n^x restricted to the core circle, on `grid` (or on
/// stage_grid(params, {x}, resolution) when grid is empty).
StageCurve limit_curve(const TowerParams& params, const CircleSeq& x, std::size_t n,
                       std::size_t resolution, const std::vector<double>& grid = {});
StageCurve limit_curve(const TowerEvaluator& ev, const std::vector<double>& grid);

/// 10 * (lam_{n+1} + ... + lam_{depth-1} + 2 eps_depth).
double limit_error_bound(const TowerParams& params, std::size_t n);

/// sup over shared parameters of the flat distance; throws InputError on grid mismatch.
double flat_sup_dist(const Curve3& f, const Curve3& g);

/// Dense sequence z_k = k * golden ratio * 2pi mod 2pi.
CircleSeq dense_sequence(std::size_t count);
/// Even slots from dense, odd slots from x; 2|x| values. Throws InputError
/// when dense is shorter than x.
CircleSeq interleave(const CircleSeq& x, const CircleSeq& dense);
/// Inverse of interleave: (x, dense prefix).
std::pair<CircleSeq, CircleSeq> deinterleave(const CircleSeq& y);

struct ContinuityReport {
  std::size_t k = 0;
  bool precondition_ok = true;
  std::vector<std::size_t> violated_slots;
  std::vector<double> delta;  // delta_n = eps_k / (3 * 2^n * (k + 1))
  double sup_distance = 0.0;
  double eps_k = 0.0;
  double limit_bound = 0.0;  // 21 eps_k
  double tol = 0.0;  // relative: ok iff sup_distance <= eps_k * (1 + tol)
  bool ok = false;
};

/// Continuity of x -> f^x at stage k for slotwise perturbations below delta_n.
ContinuityReport reduction_continuity_check(const TowerParams& params, const CircleSeq& x,
                                            const CircleSeq& xp, std::size_t k,
                                            std::size_t resolution = 10000, double tol = 1e-6);
ContinuityReport reduction_continuity_check(std::shared_ptr<const TowerModel> model,
                                            const CircleSeq& x, const CircleSeq& xp,
                                            std::size_t k, std::size_t resolution = 10000,
                                            double tol = 1e-6);

}  // namespace wildknot
