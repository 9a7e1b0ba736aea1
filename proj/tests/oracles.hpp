#pragma once

// Straightforward reference computations used to check the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "wildknot/vec3.hpp"

namespace oracle {

using wildknot::Vec3;

inline double dist(const Vec3& a, const Vec3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

// max over a of min over b, then symmetrized; every pair visited.
inline double hausdorff(const std::vector<Vec3>& A, const std::vector<Vec3>& B) {
  auto directed = [](const std::vector<Vec3>& X, const std::vector<Vec3>& Y) {
    double worst = 0.0;
    for (const auto& p : X) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : Y) best = std::min(best, oracle::dist(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(A, B), directed(B, A));
}

inline double arc(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * M_PI);
  return std::min(d, 2.0 * M_PI - d);
}

// Crossings of the projection of a polyline onto the plane orthogonal to dir.
inline std::size_t crossings(const std::vector<Vec3>& pts, Vec3 dir) {
  const double n = std::sqrt(dir.x * dir.x + dir.y * dir.y + dir.z * dir.z);
  dir = {dir.x / n, dir.y / n, dir.z / n};
  Vec3 e1 = std::abs(dir.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  const double d = e1.x * dir.x + e1.y * dir.y + e1.z * dir.z;
  e1 = {e1.x - d * dir.x, e1.y - d * dir.y, e1.z - d * dir.z};
  const double l = std::sqrt(e1.x * e1.x + e1.y * e1.y + e1.z * e1.z);
  e1 = {e1.x / l, e1.y / l, e1.z / l};
  const Vec3 e2{dir.y * e1.z - dir.z * e1.y, dir.z * e1.x - dir.x * e1.z, dir.x * e1.y - dir.y * e1.x};
  std::vector<std::pair<double, double>> q;
  for (const auto& p : pts) {
    q.push_back({p.x * e1.x + p.y * e1.y + p.z * e1.z, p.x * e2.x + p.y * e2.y + p.z * e2.z});
  }
  auto orient = [](auto a, auto b, auto c) {
    return (b.first - a.first) * (c.second - a.second) - (b.second - a.second) * (c.first - a.first);
  };
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < q.size(); ++i) {
    for (std::size_t j = i + 2; j + 1 < q.size(); ++j) {
      const double o1 = orient(q[i], q[i + 1], q[j]), o2 = orient(q[i], q[i + 1], q[j + 1]);
      const double o3 = orient(q[j], q[j + 1], q[i]), o4 = orient(q[j], q[j + 1], q[i + 1]);
      if (o1 * o2 < 0 && o3 * o4 < 0) ++count;
    }
  }
  return count;
}

// Exact checks of an embedding given as (ranks, flags, f, lo, hi).
struct EmbeddingVerdict {
  bool centred = true, disjoint = true, ordered = true, contact = true, unit = true;
  bool all() const { return centred && disjoint && ordered && contact && unit; }
};

inline EmbeddingVerdict check_embedding(const std::vector<std::size_t>& ranks,
                                        const std::set<std::pair<std::size_t, std::size_t>>& succ,
                                        const std::vector<mpq_class>& f, const std::vector<mpq_class>& lo,
                                        const std::vector<mpq_class>& hi) {
  EmbeddingVerdict v;
  const std::size_t n = f.size();
  for (std::size_t m = 0; m < n; ++m) {
    if ((lo[m] + hi[m]) / 2 != f[m] || !(lo[m] < hi[m])) v.centred = false;
    if (lo[m] < 0 || !(hi[m] < 1)) v.unit = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == m) continue;
      if ((ranks[k] < ranks[m]) != (f[k] < f[m])) v.ordered = false;
      if (lo[k] < hi[m] && lo[m] < hi[k]) v.disjoint = false;
      if (ranks[k] < ranks[m]) {
        const bool touch = hi[k] == lo[m];
        if (touch != (succ.count({k, m}) > 0)) v.contact = false;
      }
    }
  }
  return v;
}

// Brute force over all bijections: an order isomorphism carrying flags to flags.
inline bool isomorphic(const std::vector<std::size_t>& ra, const std::set<std::pair<std::size_t, std::size_t>>& sa,
                       const std::vector<std::size_t>& rb, const std::set<std::pair<std::size_t, std::size_t>>& sb) {
  if (ra.size() != rb.size()) return false;
  std::vector<std::size_t> perm(ra.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < ra.size() && ok; ++i) {
      for (std::size_t j = 0; j < ra.size() && ok; ++j) {
        if ((ra[i] < ra[j]) != (rb[perm[i]] < rb[perm[j]])) ok = false;
      }
    }
    if (!ok) continue;
    if (sa.size() != sb.size()) return false;
    for (const auto& [a, b] : sa) {
      if (!sb.count({perm[a], perm[b]})) ok = false;
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

inline std::vector<Vec3> random_cloud(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> U(-scale, scale);
  std::vector<Vec3> v(n);
  for (auto& p : v) p = {U(rng), U(rng), U(rng)};
  return v;
}

}  // namespace oracle
