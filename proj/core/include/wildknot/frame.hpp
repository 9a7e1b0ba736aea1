#pragma once

// Frame-based tubular neighbourhoods of a curve f: g(x, y, s) = x n_s + y b_s + f(s)
// with n_s the normalized projection of a fixed direction s0 onto the normal
// plane at s and b_s = T_s x n_s.

#include <cstddef>
#include <span>
#include <vector>

#include "wildknot/metric.hpp"

namespace wildknot {

struct FrameVectors {
  Vec3 n;
  Vec3 b;
};

/// Candidate directions: the six coordinate axes, then a Fibonacci sphere,
/// `count` directions in total (count >= 6).
std::vector<Vec3> s0_candidates(std::size_t count);

/// The candidate maximizing the smallest angle to every +-tangent. Throws
/// GeometryError when even the best candidate is within 1e-3 rad of some tangent.
Vec3 choose_s0(std::span<const Vec3> unit_tangents, std::size_t candidate_count);

/// n = normalize(s0 - (s0.T) T), b = T x n.
FrameVectors frame_at(const Vec3& s0, const Vec3& unit_tangent);

struct TubularFrame {
  Curve3 base;
  std::vector<Vec3> tangents;  // unit
  std::vector<FrameVectors> normals;
  Vec3 s0;
  double max_curvature = 0.0;  // discrete turning angle per unit length
};

/// Builds the s0-frame of a sampled curve. Params must be strictly increasing;
/// for a closed curve they must span less than one period of 2*pi.
TubularFrame frame_curve(const Curve3& f, std::size_t candidate_count = 64);

/// x n_s + y b_s + f(s) with point and frame linearly interpolated between
/// samples and re-orthonormalized. Throws InputError if |p.disk| > eps and
/// GeometryError if eps reaches the local radius of curvature.
Vec3 tubular_map(const TubularFrame& frame, double eps, const TorusPoint& p);

/// Sampled injectivity of the eps-tube: eps * curvature < 1 and any two
/// samples at arc distance >= pi*eps are more than 2*eps apart. At most
/// `sample_budget` samples are used (evenly strided). eps == 0 is vacuously tubular.
bool check_tubularity(const TubularFrame& frame, double eps, std::size_t sample_budget = 200000);

}  // namespace wildknot
