#include "wildknot/frame.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace wildknot {

std::vector<Vec3> s0_candidates(std::size_t count) {
  if (count < 6) throw InputError("s0_candidates: need at least the six axis directions");
  std::vector<Vec3> out = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  const std::size_t m = count - 6;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < m; ++i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    out.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return out;
}

Vec3 choose_s0(std::span<const Vec3> unit_tangents, std::size_t candidate_count) {
  const auto cands = s0_candidates(candidate_count);
  Vec3 best = cands.front();
  double best_cos = 2.0;
  for (const auto& c : cands) {
    double worst = 0.0;
    for (const auto& t : unit_tangents) {
      worst = std::max(worst, std::abs(dot(c, t)));
      if (worst >= best_cos) break;
    }
    if (worst < best_cos) {
      best_cos = worst;
      best = c;
    }
  }
  if (best_cos > std::cos(1e-3)) {
    throw GeometryError("frame: every candidate s0 is too close to a tangent direction");
  }
  return best;
}

FrameVectors frame_at(const Vec3& s0, const Vec3& t) {
  const Vec3 n = normalized(s0 - t * dot(s0, t));
  return {n, cross(t, n)};
}

TubularFrame frame_curve(const Curve3& f, std::size_t candidate_count) {
  const std::size_t n = f.points.size();
  if (n < 3 || f.params.size() != n) throw InputError("frame_curve: need >= 3 samples with params");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(f.params[i] < f.params[i + 1])) throw InputError("frame_curve: params must increase");
  }
  if (f.closed && f.params.back() - f.params.front() >= kTwoPi) {
    throw InputError("frame_curve: closed curve params must span less than 2*pi");
  }
  TubularFrame fr;
  fr.base = f;
  fr.tangents.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t prev = i > 0 ? i - 1 : (f.closed ? n - 1 : 0);
    std::size_t next = i + 1 < n ? i + 1 : (f.closed ? 0 : n - 1);
    const Vec3 d = f.points[next] - f.points[prev];
    if (!(norm(d) > 0.0)) throw GeometryError("frame_curve: vanishing discrete tangent");
    fr.tangents[i] = normalized(d);
  }
  // Discrete curvature: turning angle between consecutive segments over mean length.
  const std::size_t segs = f.closed ? n : n - 1;
  auto seg = [&](std::size_t i) { return f.points[(i + 1) % n] - f.points[i]; };
  for (std::size_t i = 1; i < segs + (f.closed ? 1 : 0); ++i) {
    const Vec3 a = seg(i - 1);
    const Vec3 b = seg(i % segs);
    const double la = norm(a), lb = norm(b);
    if (!(la > 0.0) || !(lb > 0.0)) throw GeometryError("frame_curve: repeated sample");
    const double c = std::clamp(dot(a, b) / (la * lb), -1.0, 1.0);
    fr.max_curvature = std::max(fr.max_curvature, 2.0 * std::acos(c) / (la + lb));
  }
  fr.s0 = choose_s0(fr.tangents, candidate_count);
  fr.normals.resize(n);
  for (std::size_t i = 0; i < n; ++i) fr.normals[i] = frame_at(fr.s0, fr.tangents[i]);
  return fr;
}

Vec3 tubular_map(const TubularFrame& frame, double eps, const TorusPoint& p) {
  if (p.disk.norm() > eps * (1.0 + 1e-9)) throw InputError("tubular_map: point outside T_eps");
  if (eps * frame.max_curvature >= 1.0) {
    throw GeometryError("tubular_map: eps exceeds the local injectivity radius");
  }
  const auto& prm = frame.base.params;
  const auto& pts = frame.base.points;
  const std::size_t n = pts.size();
  double s = p.angle.value();
  std::size_t i0 = 0, i1 = 0;
  double t = 0.0;
  if (frame.base.closed) {
    // Bring s into [params.front(), params.front() + 2*pi).
    while (s < prm.front()) s += kTwoPi;
    while (s >= prm.front() + kTwoPi) s -= kTwoPi;
    if (s >= prm.back()) {
      i0 = n - 1;
      i1 = 0;
      t = (s - prm.back()) / (prm.front() + kTwoPi - prm.back());
    } else {
      i1 = static_cast<std::size_t>(std::upper_bound(prm.begin(), prm.end(), s) - prm.begin());
      i0 = i1 - 1;
      t = (s - prm[i0]) / (prm[i1] - prm[i0]);
    }
  } else {
    if (s < prm.front() || s > prm.back()) throw InputError("tubular_map: parameter out of range");
    i1 = static_cast<std::size_t>(std::upper_bound(prm.begin(), prm.end(), s) - prm.begin());
    i1 = std::min(i1, n - 1);
    i0 = i1 - 1;
    t = (s - prm[i0]) / (prm[i1] - prm[i0]);
  }
  const Vec3 base = pts[i0] + (pts[i1] - pts[i0]) * t;
  const Vec3 tan = normalized(frame.tangents[i0] * (1 - t) + frame.tangents[i1] * t);
  const auto fv = frame_at(frame.s0, tan);
  return base + fv.n * p.disk.x + fv.b * p.disk.y;
}

namespace {

struct CellKey {
  std::int64_t i, j, k;
  bool operator==(const CellKey&) const = default;
};
struct CellHash {
  std::size_t operator()(const CellKey& c) const {
    return static_cast<std::size_t>(c.i * 73856093LL ^ c.j * 19349663LL ^ c.k * 83492791LL);
  }
};

}  // namespace

bool check_tubularity(const TubularFrame& frame, double eps, std::size_t sample_budget) {
  if (eps == 0.0) return true;
  if (!(eps > 0.0)) return false;
  if (eps * frame.max_curvature >= 1.0) return false;

  const auto& all = frame.base.points;
  const std::size_t stride = std::max<std::size_t>(1, (all.size() + sample_budget - 1) / std::max<std::size_t>(1, sample_budget));
  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < all.size(); i += stride) pts.push_back(all[i]);
  const std::size_t n = pts.size();
  std::vector<double> arc(n + 1, 0.0);
  for (std::size_t i = 1; i < n; ++i) arc[i] = arc[i - 1] + dist(pts[i - 1], pts[i]);
  arc[n] = arc[n - 1] + (frame.base.closed ? dist(pts[n - 1], pts[0]) : 0.0);
  const double total = arc[n];
  auto arc_sep = [&](std::size_t a, std::size_t b) {
    const double d = std::abs(arc[a] - arc[b]);
    return frame.base.closed ? std::min(d, total - d) : d;
  };

  // Sampling slack: points between samples may be up to half a segment closer.
  double hmax = 0.0;
  for (std::size_t i = 1; i < n; ++i) hmax = std::max(hmax, arc[i] - arc[i - 1]);
  const double reach = 2.0 * eps + hmax;
  const double cell = reach;
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> grid;
  auto key = [&](const Vec3& p) {
    return CellKey{static_cast<std::int64_t>(std::floor(p.x / cell)),
                   static_cast<std::int64_t>(std::floor(p.y / cell)),
                   static_cast<std::int64_t>(std::floor(p.z / cell))};
  };
  for (std::size_t i = 0; i < n; ++i) grid[key(pts[i])].push_back(i);
  const double far = kPi * eps + hmax;
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = key(pts[i]);
    for (std::int64_t di = -1; di <= 1; ++di) {
      for (std::int64_t dj = -1; dj <= 1; ++dj) {
        for (std::int64_t dk = -1; dk <= 1; ++dk) {
          auto it = grid.find({c.i + di, c.j + dj, c.k + dk});
          if (it == grid.end()) continue;
          for (auto j : it->second) {
            if (j <= i || arc_sep(i, j) < far) continue;
            if (dist(pts[i], pts[j]) <= reach) return false;
          }
        }
      }
    }
  }
  return true;
}

}  // namespace wildknot
