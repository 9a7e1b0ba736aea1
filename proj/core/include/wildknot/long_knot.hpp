#pragma once

// Knotted proper arcs in the closed unit ball. A LongKnot runs up the z axis
// from (0,0,-1) to (0,0,1) at constant speed, except that a small smooth
// gadget carrying one tabulated prime knot is spliced in around the origin.

#include <cstddef>
#include <string>
#include <vector>

#include "wildknot/vec3.hpp"

namespace wildknot {

enum class KnotId { Trefoil, FigureEight, Cinquefoil, ThreeTwist, Stevedore };

/// Finite stand-in for an enumeration of prime knots: 3_1, 4_1, 5_1, 5_2, 6_1, cycled.
KnotId knot_from_table(std::size_t n);
std::string knot_name(KnotId id);

/// Closed parametrized knot sampled at `count` points (not normalized).
std::vector<Vec3> closed_knot_samples(KnotId id, std::size_t count);

/// Smooth open curve in "gadget units" (knot scaled to radius 1), starting
/// and ending on the z axis with vertical tangent. Parametrized by arc length.
class GadgetCurve {
 public:
  explicit GadgetCurve(KnotId id);

  double length() const { return length_; }
  double z_start() const { return z_start_; }
  double z_end() const { return z_end_; }
  double max_radius() const { return max_radius_; }
  double max_curvature() const { return max_curvature_; }
  /// Smallest distance between samples whose arc separation exceeds 0.5.
  double min_separation() const { return min_separation_; }
  std::size_t rotation_attempt() const { return attempt_; }

  Vec3 point(double sigma) const;
  Vec3 tangent(double sigma) const;    // unit
  Vec3 curvature_vector(double sigma) const;  // dT/dsigma

 private:
  struct SplineEval {
    Vec3 p, d1, d2;
  };
  SplineEval spline(double tau) const;
  double tau_of_sigma(double sigma) const;
  bool build(KnotId id, std::size_t attempt);

  std::vector<Vec3> ctrl_;
  std::vector<double> table_tau_;
  std::vector<double> table_len_;
  double length_ = 0.0;
  double z_start_ = 0.0;
  double z_end_ = 0.0;
  double max_radius_ = 0.0;
  double max_curvature_ = 0.0;
  double min_separation_ = 0.0;
  std::size_t attempt_ = 0;
};

/// Unit-ball template A: [-1,1] -> R^3 with A(+-1) = (0,0,+-1), constant
/// speed, straight near both ends, gadget scaled by rho around the origin.
class LongKnot {
 public:
  LongKnot(KnotId id, double rho);
  /// Chooses rho so that the constant speed equals `speed` (> 1).
  static LongKnot with_speed(KnotId id, double speed);

  KnotId id() const { return id_; }
  double rho() const { return rho_; }
  double speed() const { return speed_; }
  double length() const { return 2.0 * speed_; }

  Vec3 point(double u) const;
  Vec3 deriv(double u) const;       // |deriv| == speed
  Vec3 unit_tangent(double u) const;
  /// Curvature vector with respect to arc length.
  Vec3 curvature_vector(double u) const;
  /// Parameter range [-u_gadget, u_gadget'] outside which A is the straight axis.
  double gadget_begin() const { return u_begin_; }
  double gadget_end() const { return u_end_; }
  double max_curvature() const { return gadget_->max_curvature() / rho_; }
  double max_norm() const;
  const GadgetCurve& gadget() const { return *gadget_; }

  /// Samples at `count` equally spaced parameters in [-1, 1].
  std::vector<Vec3> samples(std::size_t count) const;

 private:
  const GadgetCurve* gadget_;
  KnotId id_;
  double rho_;
  double speed_;
  double sigma1_;   // arc length where the gadget starts
  double sigma2_;   // arc length where it ends
  double u_begin_;
  double u_end_;
};

/// Shared immutable gadget for a knot type (built once per process).
const GadgetCurve& gadget_for(KnotId id);

/// Number of crossings in the projection of a polyline along `dir`, counting
/// proper intersections of non-adjacent segments.
std::size_t projected_crossings(const std::vector<Vec3>& polyline, const Vec3& dir);

}  // namespace wildknot
