#include "wildknot/long_knot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "wildknot/errors.hpp"
#include "wildknot/metric.hpp"

namespace wildknot {

KnotId knot_from_table(std::size_t n) {
  static constexpr std::array<KnotId, 5> table = {KnotId::Trefoil, KnotId::FigureEight,
                                                  KnotId::Cinquefoil, KnotId::ThreeTwist,
                                                  KnotId::Stevedore};
  return table[n % table.size()];
}

std::string knot_name(KnotId id) {
  switch (id) {
    case KnotId::Trefoil: return "3_1";
    case KnotId::FigureEight: return "4_1";
    case KnotId::Cinquefoil: return "5_1";
    case KnotId::ThreeTwist: return "5_2";
    case KnotId::Stevedore: return "6_1";
  }
  return "?";
}

namespace {

Vec3 lissajous(double t, int nx, int ny, int nz, double px, double py) {
  return {std::cos(nx * t + px), std::cos(ny * t + py), std::cos(nz * t)};
}

}  // namespace

std::vector<Vec3> closed_knot_samples(KnotId id, std::size_t count) {
  std::vector<Vec3> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(count);
    switch (id) {
      case KnotId::Trefoil:
        out[i] = {std::sin(t) + 2 * std::sin(2 * t), std::cos(t) - 2 * std::cos(2 * t),
                  -std::sin(3 * t)};
        break;
      case KnotId::FigureEight:
        out[i] = {(2 + std::cos(2 * t)) * std::cos(3 * t), (2 + std::cos(2 * t)) * std::sin(3 * t),
                  std::sin(4 * t)};
        break;
      case KnotId::Cinquefoil:  // (2,5) torus knot
        out[i] = {(2 + std::cos(5 * t)) * std::cos(2 * t), (2 + std::cos(5 * t)) * std::sin(2 * t),
                  std::sin(5 * t)};
        break;
      case KnotId::ThreeTwist:
        out[i] = lissajous(t, 3, 2, 7, 0.7, 0.2);
        break;
      case KnotId::Stevedore:
        out[i] = lissajous(t, 3, 2, 5, 1.5, 0.2);
        break;
    }
  }
  return out;
}

namespace {

constexpr std::size_t kKnotSamples = 720;
constexpr std::size_t kCutHalfWidth = 15;
constexpr double kLeg = 0.1;
constexpr double kSpacing = 0.15;  // control spacing after resampling
constexpr std::size_t kLeadPoints = 7;
constexpr double kBottom = -1.3;
constexpr double kOuter = 1.3;
constexpr double kLift = 0.25;
constexpr std::size_t kSpanSteps = 32;
constexpr double kMinSeparation = 0.03;

// 5-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 5> kGLx = {0.04691007703066800, 0.23076534494715845, 0.5,
                                        0.76923465505284155, 0.95308992296933200};
constexpr std::array<double, 5> kGLw = {0.11846344252809454, 0.23931433524968324,
                                        0.28444444444444444, 0.23931433524968324,
                                        0.11846344252809454};

Vec3 rotate_xyz(const Vec3& p, double a, double b, double c) {
  Vec3 q{p.x, p.y * std::cos(a) - p.z * std::sin(a), p.y * std::sin(a) + p.z * std::cos(a)};
  q = {q.x * std::cos(b) + q.z * std::sin(b), q.y, -q.x * std::sin(b) + q.z * std::cos(b)};
  return {q.x * std::cos(c) - q.y * std::sin(c), q.x * std::sin(c) + q.y * std::cos(c), q.z};
}

void add_leg(std::vector<Vec3>& poly, const Vec3& to) {
  const Vec3 from = poly.back();
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(dist(from, to) / kLeg)));
  for (std::size_t k = 1; k <= n; ++k) {
    poly.push_back(from + (to - from) * (static_cast<double>(k) / static_cast<double>(n)));
  }
}

// Equally spaced points along a polygon; the spacing is adjusted so the
// last point lands on the polygon's end.
std::vector<Vec3> resample(const std::vector<Vec3>& poly, double h) {
  std::vector<double> cum(poly.size(), 0.0);
  for (std::size_t i = 1; i < poly.size(); ++i) cum[i] = cum[i - 1] + dist(poly[i - 1], poly[i]);
  const auto n = static_cast<std::size_t>(std::ceil(cum.back() / h));
  std::vector<Vec3> out(n + 1);
  std::size_t seg = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double s = cum.back() * static_cast<double>(k) / static_cast<double>(n);
    while (seg + 2 < poly.size() && cum[seg + 1] < s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double t = len > 0 ? std::clamp((s - cum[seg]) / len, 0.0, 1.0) : 0.0;
    out[k] = poly[seg] + (poly[seg + 1] - poly[seg]) * t;
  }
  return out;
}

}  // namespace

GadgetCurve::GadgetCurve(KnotId id) {
  for (std::size_t attempt = 0; attempt < 8; ++attempt) {
    if (build(id, attempt)) {
      attempt_ = attempt;
      return;
    }
  }
  throw GeometryError("gadget for knot " + knot_name(id) + " failed its self-avoidance check");
}

bool GadgetCurve::build(KnotId id, std::size_t attempt) {
  const double ja = static_cast<double>(attempt);
  auto knot = closed_knot_samples(id, kKnotSamples);
  Vec3 centroid{};
  for (const auto& p : knot) centroid += p;
  centroid = centroid / static_cast<double>(knot.size());
  double rmax = 0.0;
  for (auto& p : knot) {
    p = rotate_xyz(p - centroid, 0.31 + 0.9 * ja, 0.17 + 0.55 * ja, 0.23 + 1.3 * ja);
    rmax = std::max(rmax, norm(p));
  }
  for (auto& p : knot) p = p / rmax;

  const std::size_t n = knot.size();
  std::size_t top = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (knot[i].z > knot[top].z) top = i;
  }
  const double zt = knot[top].z;
  const Vec3 p0 = knot[(top + n - kCutHalfWidth) % n];
  const Vec3 p1 = knot[(top + kCutHalfWidth) % n];
  Vec3 d{p1.x - p0.x, p1.y - p0.y, 0.0};
  if (norm(d) < 1e-9) return false;
  d = normalized(d);

  // Control polygon: axis lead-in, entry route around the outside and over
  // the top, the knot minus a short arc at its top, exit route to the axis.
  std::vector<Vec3> poly;
  for (std::size_t k = 0; k < kLeadPoints; ++k) {
    poly.push_back({0, 0, kBottom - kLeg * static_cast<double>(kLeadPoints - 1 - k)});
  }
  add_leg(poly, {kOuter * d.x, kOuter * d.y, kBottom});
  add_leg(poly, {kOuter * d.x, kOuter * d.y, zt + kLift});
  add_leg(poly, {p1.x, p1.y, zt + kLift});
  add_leg(poly, p1);
  for (std::size_t k = kCutHalfWidth + 1; k <= n - kCutHalfWidth; ++k) {
    poly.push_back(knot[(top + k) % n]);
  }
  add_leg(poly, {p0.x, p0.y, zt + 2 * kLift});
  add_leg(poly, {0, 0, zt + 2 * kLift});
  for (std::size_t k = 1; k < kLeadPoints; ++k) {
    poly.push_back({0, 0, zt + 2 * kLift + kLeg * static_cast<double>(k)});
  }
  ctrl_ = resample(poly, kSpacing);

  // Arc-length table.
  const std::size_t spans = ctrl_.size() - 3;
  table_tau_.assign(spans * kSpanSteps + 1, 0.0);
  table_len_.assign(spans * kSpanSteps + 1, 0.0);
  const double step = 1.0 / static_cast<double>(kSpanSteps);
  for (std::size_t k = 0; k < spans * kSpanSteps; ++k) {
    const double a = static_cast<double>(k) * step;
    double len = 0.0;
    for (std::size_t g = 0; g < kGLx.size(); ++g) len += kGLw[g] * norm(spline(a + kGLx[g] * step).d1);
    table_tau_[k + 1] = a + step;
    table_len_[k + 1] = table_len_[k] + len * step;
  }
  length_ = table_len_.back();
  z_start_ = spline(0.0).p.z;
  z_end_ = spline(static_cast<double>(spans)).p.z;

  // Certificate: curvature, extent and separation of non-adjacent parts.
  const auto m = static_cast<std::size_t>(std::ceil(length_ / 0.01));
  std::vector<Vec3> pts(m + 1);
  max_radius_ = 0.0;
  max_curvature_ = 0.0;
  for (std::size_t i = 0; i <= m; ++i) {
    const double s = length_ * static_cast<double>(i) / static_cast<double>(m);
    pts[i] = point(s);
    max_radius_ = std::max(max_radius_, norm(pts[i]));
  }
  const auto mc = 5 * m;
  for (std::size_t i = 0; i <= mc; ++i) {
    const double s = length_ * static_cast<double>(i) / static_cast<double>(mc);
    max_curvature_ = std::max(max_curvature_, norm(curvature_vector(s)));
  }
  const double ds = length_ / static_cast<double>(m);
  const auto gap = static_cast<std::size_t>(std::ceil(0.5 / ds));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t j = i + gap; j <= m; ++j) best = std::min(best, dist2(pts[i], pts[j]));
  }
  min_separation_ = std::sqrt(best);
  return min_separation_ >= kMinSeparation;
}

GadgetCurve::SplineEval GadgetCurve::spline(double tau) const {
  const std::size_t spans = ctrl_.size() - 3;
  tau = std::clamp(tau, 0.0, static_cast<double>(spans));
  const std::size_t j = std::min(static_cast<std::size_t>(tau), spans - 1);
  const double t = tau - static_cast<double>(j);
  const Vec3& a = ctrl_[j];
  const Vec3& b = ctrl_[j + 1];
  const Vec3& c = ctrl_[j + 2];
  const Vec3& d = ctrl_[j + 3];
  const double u = 1.0 - t;
  SplineEval e;
  e.p = (a * (u * u * u) + b * (3 * t * t * t - 6 * t * t + 4) +
         c * (-3 * t * t * t + 3 * t * t + 3 * t + 1) + d * (t * t * t)) /
        6.0;
  e.d1 = (a * (-3 * u * u) + b * (9 * t * t - 12 * t) + c * (-9 * t * t + 6 * t + 3) +
          d * (3 * t * t)) /
         6.0;
  e.d2 = a * u + b * (3 * t - 2) + c * (-3 * t + 1) + d * t;
  return e;
}

double GadgetCurve::tau_of_sigma(double sigma) const {
  sigma = std::clamp(sigma, 0.0, length_);
  auto it = std::upper_bound(table_len_.begin(), table_len_.end(), sigma);
  std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - table_len_.begin() - 1));
  k = std::min(k, table_len_.size() - 2);
  const double t0 = table_tau_[k];
  const double t1 = table_tau_[k + 1];
  const double target = sigma - table_len_[k];
  const double seg = table_len_[k + 1] - table_len_[k];
  double tau = seg > 0 ? t0 + (t1 - t0) * target / seg : t0;
  for (int iter = 0; iter < 4; ++iter) {
    double len = 0.0;
    for (std::size_t g = 0; g < kGLx.size(); ++g) {
      len += kGLw[g] * norm(spline(t0 + kGLx[g] * (tau - t0)).d1);
    }
    len *= (tau - t0);
    const double speed = norm(spline(tau).d1);
    if (!(speed > 0)) break;
    tau = std::clamp(tau - (len - target) / speed, t0, t1);
  }
  return tau;
}

Vec3 GadgetCurve::point(double sigma) const { return spline(tau_of_sigma(sigma)).p; }

Vec3 GadgetCurve::tangent(double sigma) const { return normalized(spline(tau_of_sigma(sigma)).d1); }

Vec3 GadgetCurve::curvature_vector(double sigma) const {
  const auto e = spline(tau_of_sigma(sigma));
  const double sp = norm(e.d1);
  const Vec3 t = e.d1 / sp;
  return (e.d2 - t * dot(e.d2, t)) / (sp * sp);
}

const GadgetCurve& gadget_for(KnotId id) {
  switch (id) {
    case KnotId::Trefoil: {
      static const GadgetCurve g(KnotId::Trefoil);
      return g;
    }
    case KnotId::FigureEight: {
      static const GadgetCurve g(KnotId::FigureEight);
      return g;
    }
    case KnotId::Cinquefoil: {
      static const GadgetCurve g(KnotId::Cinquefoil);
      return g;
    }
    case KnotId::ThreeTwist: {
      static const GadgetCurve g(KnotId::ThreeTwist);
      return g;
    }
    case KnotId::Stevedore: {
      static const GadgetCurve g(KnotId::Stevedore);
      return g;
    }
  }
  throw InputError("gadget_for: unknown knot id");
}

LongKnot::LongKnot(KnotId id, double rho) : gadget_(&gadget_for(id)), id_(id), rho_(rho) {
  if (!(rho > 0.0)) throw InputError("LongKnot: gadget scale must be positive");
  if (rho * gadget_->max_radius() >= 1.0) {
    throw InputError("LongKnot: gadget scale too large for the unit ball");
  }
  const double extra = gadget_->length() - (gadget_->z_end() - gadget_->z_start());
  speed_ = 1.0 + 0.5 * rho * extra;
  sigma1_ = 1.0 + rho * gadget_->z_start();
  sigma2_ = sigma1_ + rho * gadget_->length();
  u_begin_ = sigma1_ / speed_ - 1.0;
  u_end_ = sigma2_ / speed_ - 1.0;
}

LongKnot LongKnot::with_speed(KnotId id, double speed) {
  if (!(speed > 1.0)) throw InputError("LongKnot::with_speed: speed must exceed 1");
  const auto& g = gadget_for(id);
  const double extra = g.length() - (g.z_end() - g.z_start());
  return LongKnot(id, 2.0 * (speed - 1.0) / extra);
}

Vec3 LongKnot::point(double u) const {
  const double sigma = (u + 1.0) * speed_;
  if (sigma <= sigma1_) return {0, 0, -1.0 + sigma};
  if (sigma >= sigma2_) return {0, 0, rho_ * gadget_->z_end() + (sigma - sigma2_)};
  return gadget_->point((sigma - sigma1_) / rho_) * rho_;
}

Vec3 LongKnot::unit_tangent(double u) const {
  const double sigma = (u + 1.0) * speed_;
  if (sigma <= sigma1_ || sigma >= sigma2_) return {0, 0, 1};
  return gadget_->tangent((sigma - sigma1_) / rho_);
}

Vec3 LongKnot::deriv(double u) const { return unit_tangent(u) * speed_; }

Vec3 LongKnot::curvature_vector(double u) const {
  const double sigma = (u + 1.0) * speed_;
  if (sigma <= sigma1_ || sigma >= sigma2_) return {};
  return gadget_->curvature_vector((sigma - sigma1_) / rho_) / rho_;
}

double LongKnot::max_norm() const { return std::max(1.0, rho_ * gadget_->max_radius()); }

std::vector<Vec3> LongKnot::samples(std::size_t count) const {
  if (count < 2) throw InputError("LongKnot::samples: need at least two samples");
  std::vector<Vec3> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = point(-1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

std::size_t projected_crossings(const std::vector<Vec3>& polyline, const Vec3& dir) {
  const Vec3 w = normalized(dir);
  const Vec3 helper = std::abs(w.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  const Vec3 e1 = normalized(cross(w, helper));
  const Vec3 e2 = cross(w, e1);
  struct P2 {
    double x, y;
  };
  std::vector<P2> q(polyline.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = {dot(polyline[i], e1), dot(polyline[i], e2)};
  auto orient = [](const P2& a, const P2& b, const P2& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  };
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < q.size(); ++i) {
    const P2 a = q[i], b = q[i + 1];
    const double ax0 = std::min(a.x, b.x), ax1 = std::max(a.x, b.x);
    const double ay0 = std::min(a.y, b.y), ay1 = std::max(a.y, b.y);
    for (std::size_t j = i + 2; j + 1 < q.size(); ++j) {
      const P2 c = q[j], d = q[j + 1];
      if (std::max(c.x, d.x) < ax0 || std::min(c.x, d.x) > ax1) continue;
      if (std::max(c.y, d.y) < ay0 || std::min(c.y, d.y) > ay1) continue;
      const double o1 = orient(a, b, c), o2 = orient(a, b, d);
      const double o3 = orient(c, d, a), o4 = orient(c, d, b);
      if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 &&
          o4 != 0) {
        ++count;
      }
    }
  }
  return count;
}

}  // namespace wildknot
