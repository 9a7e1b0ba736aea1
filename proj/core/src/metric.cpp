#include "wildknot/metric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace wildknot {

double Angle::canonical(double radians) {
  double r = std::remainder(radians, kTwoPi);  // in [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  if (r > kPi) r -= kTwoPi;
  return r;
}

Angle s1_add(Angle a, Angle b) { return Angle(a.value() + b.value()); }
Angle s1_sub(Angle a, Angle b) { return Angle(a.value() - b.value()); }
Angle s1_neg(Angle a) { return Angle(-a.value()); }

double s1_dist(Angle a, Angle b) {
  const double d = std::abs(a.value() - b.value());
  return std::min(d, kTwoPi - d);
}

double DiskPoint::norm() const { return std::hypot(x, y); }

TorusPoint make_torus_point(double x, double y, Angle angle, double r) {
  if (!(r >= 0.0)) throw InputError("make_torus_point: negative radius");
  if (std::hypot(x, y) > r * (1.0 + 1e-9) + 1e-300) {
    throw InputError("make_torus_point: disk coordinate outside D^2_r");
  }
  return TorusPoint{DiskPoint{x, y, r}, angle};
}

double torus_dist(const TorusPoint& p, const TorusPoint& q) {
  if (p.disk.r != q.disk.r) {
    throw InputError("torus_dist: ambient radius mismatch (" + std::to_string(p.disk.r) +
                     " vs " + std::to_string(q.disk.r) + ")");
  }
  const double dx = p.disk.x - q.disk.x;
  const double dy = p.disk.y - q.disk.y;
  const double dt = s1_dist(p.angle, q.angle);
  return std::sqrt(dx * dx + dy * dy + dt * dt);
}

TorusPoint rotate(const TorusPoint& p, Angle s) { return {p.disk, s1_add(p.angle, s)}; }

TorusPoint with_radius(const TorusPoint& p, double r) {
  return {DiskPoint{p.disk.x, p.disk.y, r}, p.angle};
}

namespace {

constexpr std::size_t kBruteForceLimit = 64;

double directed_brute(std::span<const Vec3> a, std::span<const Vec3> b) {
  double worst = 0.0;
  for (const auto& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : b) best = std::min(best, dist2(p, q));
    worst = std::max(worst, best);
  }
  return worst;
}

// CSR uniform grid over a point set for nearest-neighbour queries.
class UniformGrid {
 public:
  explicit UniformGrid(std::span<const Vec3> pts) : pts_(pts) {
    lo_ = hi_ = pts[0];
    for (const auto& p : pts) {
      lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y), std::min(lo_.z, p.z)};
      hi_ = {std::max(hi_.x, p.x), std::max(hi_.y, p.y), std::max(hi_.z, p.z)};
    }
    const Vec3 ext = hi_ - lo_;
    const double span = std::max({ext.x, ext.y, ext.z});
    const double n = static_cast<double>(pts.size());
    cell_ = span > 0.0 ? span / std::max(1.0, std::cbrt(n)) : 1.0;
    // Flat clouds get thin cells in the flat direction; cap total cells at ~8n.
    for (;;) {
      for (int k = 0; k < 3; ++k) {
        const double e = k == 0 ? ext.x : (k == 1 ? ext.y : ext.z);
        dims_[k] = static_cast<long>(std::floor(e / cell_)) + 1;
      }
      if (static_cast<double>(dims_[0]) * dims_[1] * dims_[2] <= 8.0 * n + 8.0) break;
      cell_ *= 1.5;
    }
    const std::size_t ncells = static_cast<std::size_t>(dims_[0] * dims_[1] * dims_[2]);
    start_.assign(ncells + 1, 0);
    std::vector<std::size_t> cell_of(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      cell_of[i] = flat(coord(pts[i]));
      ++start_[cell_of[i] + 1];
    }
    std::partial_sum(start_.begin(), start_.end(), start_.begin());
    items_.resize(pts.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < pts.size(); ++i) items_[fill[cell_of[i]]++] = i;
  }

  // Smallest squared distance from q to the set, except that the search may
  // stop as soon as some distance <= stop_below2 is seen (the caller only
  // needs to know that q cannot raise its running maximum).
  double nearest2(const Vec3& q, double stop_below2) const {
    const auto c = coord(q);
    double best = std::numeric_limits<double>::infinity();
    const long rmax = std::max({dims_[0], dims_[1], dims_[2]});
    for (long r = 0; r <= rmax; ++r) {
      if (r >= 1) {
        const double gap = static_cast<double>(r - 1) * cell_;
        if (gap * gap > best) break;
      }
      for (long i = c[0] - r; i <= c[0] + r; ++i) {
        if (i < 0 || i >= dims_[0]) continue;
        for (long j = c[1] - r; j <= c[1] + r; ++j) {
          if (j < 0 || j >= dims_[1]) continue;
          const bool edge_ij = (i == c[0] - r || i == c[0] + r || j == c[1] - r || j == c[1] + r);
          for (long k = c[2] - r; k <= c[2] + r; ++k) {
            if (k < 0 || k >= dims_[2]) continue;
            if (!edge_ij && k != c[2] - r && k != c[2] + r) continue;
            const std::size_t cell = static_cast<std::size_t>((i * dims_[1] + j) * dims_[2] + k);
            for (std::size_t s = start_[cell]; s < start_[cell + 1]; ++s) {
              const double d = dist2(q, pts_[items_[s]]);
              if (d < best) {
                best = d;
                if (best <= stop_below2) return best;
              }
            }
          }
        }
      }
    }
    return best;
  }

 private:
  std::array<long, 3> coord(const Vec3& p) const {
    auto one = [&](double v, double lo, long dim) {
      long c = static_cast<long>(std::floor((v - lo) / cell_));
      return std::clamp(c, 0L, dim - 1);
    };
    return {one(p.x, lo_.x, dims_[0]), one(p.y, lo_.y, dims_[1]), one(p.z, lo_.z, dims_[2])};
  }
  std::size_t flat(const std::array<long, 3>& c) const {
    return static_cast<std::size_t>((c[0] * dims_[1] + c[1]) * dims_[2] + c[2]);
  }

  std::span<const Vec3> pts_;
  Vec3 lo_, hi_;
  double cell_ = 1.0;
  std::array<long, 3> dims_{1, 1, 1};
  std::vector<std::size_t> start_;
  std::vector<std::size_t> items_;
};

double directed_grid(std::span<const Vec3> a, std::span<const Vec3> b) {
  const UniformGrid grid(b);
  double worst = 0.0;
  for (const auto& p : a) {
    const double d = grid.nearest2(p, worst);
    if (d > worst) worst = d;
  }
  return worst;
}

double directed2(std::span<const Vec3> a, std::span<const Vec3> b) {
  if (a.empty() || b.empty()) throw InputError("hausdorff: empty point cloud");
  if (a.size() * b.size() <= kBruteForceLimit * kBruteForceLimit) return directed_brute(a, b);
  return directed_grid(a, b);
}

}  // namespace

double directed_hausdorff(std::span<const Vec3> a, std::span<const Vec3> b) {
  return std::sqrt(directed2(a, b));
}

double hausdorff(std::span<const Vec3> a, std::span<const Vec3> b) {
  return std::sqrt(std::max(directed2(a, b), directed2(b, a)));
}

double Curve3::polyline_length() const {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) len += dist(points[i], points[i + 1]);
  if (closed && points.size() > 1) len += dist(points.back(), points.front());
  return len;
}

double Curve3::max_segment() const {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) m = std::max(m, dist(points[i], points[i + 1]));
  if (closed && points.size() > 1) m = std::max(m, dist(points.back(), points.front()));
  return m;
}

namespace {
template <class C>
void check_grid(const C& f, const C& g) {
  if (f.params != g.params) throw InputError("sup_dist: parameter grids differ");
  if (f.points.size() != f.params.size() || g.points.size() != g.params.size()) {
    throw InputError("sup_dist: params/points length mismatch");
  }
}
}  // namespace

double sup_dist(const Curve3& f, const Curve3& g) {
  check_grid(f, g);
  double m = 0.0;
  for (std::size_t i = 0; i < f.points.size(); ++i) m = std::max(m, dist(f.points[i], g.points[i]));
  return m;
}

double sup_dist(const TorusCurve& f, const TorusCurve& g) {
  check_grid(f, g);
  double m = 0.0;
  for (std::size_t i = 0; i < f.points.size(); ++i) m = std::max(m, torus_dist(f.points[i], g.points[i]));
  return m;
}

}  // namespace wildknot
