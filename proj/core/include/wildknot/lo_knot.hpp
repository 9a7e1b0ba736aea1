#pragma once

// Knot assembly for linear orders: the unit segment of the x axis with a
// ball B_n around every f(n), inside which the axis is replaced by a sum of
// trefoils accumulating at f(n); closed by a large return loop.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wildknot/embedding.hpp"
#include "wildknot/metric.hpp"

namespace wildknot {

struct Singularity {
  std::size_t index = 0;  // element n of the order
  Vec3 position;          // (f(n), 0, 0)
  double ball_radius = 0.0;
  // Exact data used for recovery (the walls bounding the slab of V_n).
  Rational f;
  Rational wall_lo;
  Rational wall_hi;
};

struct KnotGeometry {
  Curve3 curve;
  std::vector<Singularity> singularities;
  std::size_t stage = 0;
  std::vector<std::size_t> trefoil_counts;
  // Parameter interval [begin, end) of each ball's arc within curve.points.
  std::vector<std::pair<std::size_t, std::size_t>> arc_ranges;
};

struct AssemblyOptions {
  double return_radius = 10.0;
  std::size_t copies = 4;            // trefoil summands per singular point
  std::size_t samples_per_copy = 64;
};

/// Proper arc through the ball of `radius` around `center` from
/// center - radius*e_x to center + radius*e_x: `copies` trefoil summands on
/// the left half shrinking by 1/2 toward the centre, straight on the right.
/// Throws InputError if radius <= 0 or resolution < 16.
Curve3 trefoil_sum_arc(const Vec3& center, double radius, std::size_t copies,
                       std::size_t resolution);

/// The assembled curve. Axis samples lie on the global grid i / resolution so
/// that states agreeing on a prefix share those samples exactly.
/// Throws InputError if resolution < 64 or the state is empty.
KnotGeometry assemble_lo_knot(const EmbeddingState& state, std::size_t resolution,
                              const AssemblyOptions& opt = {});

/// Ranks induced by the singularities' x coordinates. Throws InputError when
/// metadata is absent.
LinearOrderPrefix recover_order(const KnotGeometry& g);

/// Order plus successor flags read from wall contact: (a, b) is flagged iff
/// the upper wall of a is the lower wall of b.
LoStarPrefix recover_structure(const KnotGeometry& g);

struct LoReductionReport {
  bool agree_on_prefix = false;
  bool isomorphic = false;
  double v_n = 0.0;               // |V_n|
  double max_tail_length = 0.0;   // max_{m >= n} |V_m| over both states
  double eps = 0.0;
  double hausdorff = 0.0;
  bool continuity_checked = false;
  bool continuity_ok = true;
  bool recovery_checked = false;
  bool recovery_ok = true;
  std::vector<std::string> notes;

  bool ok() const { return continuity_ok && recovery_ok; }
};

/// Continuity and injectivity checks of the order-to-knot map on two prefixes.
/// If P, Q agree on 0..n and |V_n| < eps/2, asserts hausdorff < eps; if P and Q
/// are non-isomorphic, asserts that the recovered structures differ.
/// A non-positive eps selects 2 * max_{m >= n} |V_m| + 1 / resolution.
LoReductionReport lo_reduction_check(const LoStarPrefix& p, const LoStarPrefix& q, std::size_t n,
                                     double eps, std::size_t resolution = 10000);

/// Smallest distance between curve samples more than `skip` indices apart.
double min_nonadjacent_distance(const Curve3& c, std::size_t skip);

}  // namespace wildknot
