#include "wildknot/tower.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <random>

#include "wildknot/errors.hpp"

namespace wildknot {

namespace {

constexpr double kFrameStep = 1e-7;  // finite-difference step for frame derivatives

// Eigenvalues of a symmetric 3x3 matrix by cyclic Jacobi rotations.
std::array<double, 3> sym_eigenvalues(std::array<std::array<double, 3>, 3> a) {
  for (int sweep = 0; sweep < 50; ++sweep) {
    const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    if (off < 1e-30 * (a[0][0] * a[0][0] + a[1][1] * a[1][1] + a[2][2] * a[2][2])) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  return {a[0][0], a[1][1], a[2][2]};
}

JacobianBounds singular_values(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
  const std::array<Vec3, 3> c = {c0, c1, c2};
  std::array<std::array<double, 3>, 3> g{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) g[i][j] = dot(c[i], c[j]);
  }
  const auto ev = sym_eigenvalues(g);
  const double lo = std::max(0.0, std::min({ev[0], ev[1], ev[2]}));
  const double hi = std::max({ev[0], ev[1], ev[2]});
  return {std::sqrt(hi), std::sqrt(lo)};
}

}  // namespace

// ---- parameters ------------------------------------------------------------

double default_lipschitz(std::size_t n) {
  return 1.0 + 0.5 * (std::pow(2.0, std::ldexp(1.0, -static_cast<int>(n))) - 1.0);
}

double core_speed(double lip) { return 1.0 + 0.5 * (lip - 1.0); }

bool TowerParams::inequalities_hold(std::vector<std::string>* why) const {
  bool ok = true;
  auto fail = [&](std::string msg) {
    ok = false;
    if (why) why->push_back(std::move(msg));
  };
  if (depth < 1) fail("depth must be >= 1");
  if (eps.size() != depth + 1 || lam.size() != depth || lip.size() != depth ||
      knot_table.size() != depth) {
    fail("list lengths do not match depth");
    return false;
  }
  if (eps[0] != 1.0) fail("eps_0 != 1");
  for (std::size_t n = 0; n <= depth; ++n) {
    if (!(eps[n] > 0.0)) fail("eps_" + std::to_string(n) + " is not positive");
    if (!(eps[n] <= std::ldexp(1.0, -static_cast<int>(n)))) {
      fail("eps_" + std::to_string(n) + " > 2^-" + std::to_string(n));
    }
  }
  for (std::size_t n = 0; n < depth; ++n) {
    const auto i = std::to_string(n);
    if (!(2.0 * eps[n + 1] < lam[n])) fail("2 eps_" + std::to_string(n + 1) + " >= lam_" + i);
    if (!(lam[n] < eps[n])) fail("lam_" + i + " >= eps_" + i);
    if (n + 1 < depth && !(4.0 * lam[n + 1] < 2.0 * eps[n + 1])) {
      fail("4 lam_" + std::to_string(n + 1) + " >= 2 eps_" + std::to_string(n + 1));
    }
    if (!(lip[n] > 1.0 && lip[n] < std::pow(2.0, std::ldexp(1.0, -static_cast<int>(n))))) {
      fail("L_" + i + " outside (1, 2^(2^-" + i + "))");
    }
  }
  return ok;
}

void TowerParams::validate() const {
  std::vector<std::string> why;
  if (!inequalities_hold(&why)) throw InputError("tower parameters: " + why.front());
}

CircleSeq circle_seq(const std::vector<double>& radians) {
  CircleSeq s;
  for (double r : radians) s.values.emplace_back(r);
  return s;
}

// ---- flat coordinates ------------------------------------------------------

double flat_dist(const Vec3& p, const Vec3& q) {
  const double dt = Angle::canonical(p.z - q.z);
  const double dx = p.x - q.x, dy = p.y - q.y;
  return std::sqrt(dx * dx + dy * dy + dt * dt);
}

Vec3 flat_rotate(const Vec3& p, double s) { return {p.x, p.y, Angle::canonical(p.z + s)}; }

Vec3 to_flat(const TorusPoint& p) { return {p.disk.x, p.disk.y, p.angle.value()}; }

TorusPoint to_torus(const Vec3& p, double r) { return make_torus_point(p.x, p.y, Angle(p.z), r); }

// ---- templates -------------------------------------------------------------

CoreTemplate::CoreTemplate(KnotId id, double speed) : knot_(LongKnot::with_speed(id, speed)) {
  const double c = knot_.speed();
  const double rho = knot_.rho();
  const double ub = knot_.gadget_begin(), ue = knot_.gadget_end();

  std::vector<Vec3> tangents;
  for (int i = 0; i <= 8000; ++i) tangents.push_back(knot_.unit_tangent(-1.0 + i / 4000.0));
  s0_ = choose_s0(tangents, 64);
  outside_ = frame_at(s0_, {0, 0, 1});

  // Core samples for pair statistics: dense on the gadget, geometric outside.
  const double du_fine = 0.05 * rho / c;
  std::vector<double> us;
  for (double u = ub; u < ue; u += du_fine) us.push_back(u);
  us.push_back(ue);
  for (double step = du_fine, u = ub; u > -4.0;) {
    u -= step;
    step *= 1.1;
    us.push_back(std::max(u, -4.0));
  }
  for (double step = du_fine, u = ue; u < 4.0;) {
    u += step;
    step *= 1.1;
    us.push_back(std::min(u, 4.0));
  }
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end()), us.end());
  std::vector<Vec3> ps;
  std::vector<double> arc(us.size(), 0.0), slack(us.size(), 0.0);
  for (double u : us) ps.push_back(core(u));
  for (std::size_t i = 1; i < us.size(); ++i) arc[i] = arc[i - 1] + dist(ps[i - 1], ps[i]);
  for (std::size_t i = 0; i < us.size(); ++i) {
    const double left = i > 0 ? arc[i] - arc[i - 1] : 0.0;
    const double right = i + 1 < us.size() ? arc[i + 1] - arc[i] : 0.0;
    slack[i] = 0.5 * std::max(left, right);
  }
  feature_ = std::numeric_limits<double>::infinity();
  const double far_arc = 0.5 * rho;
  // Arcs shorter than pi / kappa cannot come back close to themselves.
  const double bend_arc = kPi / knot_.max_curvature();
  for (std::size_t i = 0; i < us.size(); ++i) {
    for (std::size_t j = i + 1; j < us.size(); ++j) {
      const double d = dist(ps[i], ps[j]);
      if (arc[j] - arc[i] > far_arc) feature_ = std::min(feature_, d);
      if (arc[j] - arc[i] >= bend_arc + slack[i] + slack[j]) far_pairs_.emplace_back(us[j] - us[i], d - slack[i] - slack[j]);
    }
  }

  // Nearest-point table over the window.
  const std::size_t nt = static_cast<std::size_t>(std::ceil(2.0 * c / (feature_ / 8.0))) + 1;
  for (std::size_t i = 0; i < nt; ++i) {
    const double u = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(nt - 1);
    table_u_.push_back(u);
    table_p_.push_back(core(u));
  }
}

Vec3 CoreTemplate::core(double u) const {
  if (std::abs(u) > 1.0) return {0, 0, u};
  return knot_.point(u);
}

Vec3 CoreTemplate::unit_tangent(double u) const {
  if (std::abs(u) > 1.0) return {0, 0, 1};
  return knot_.unit_tangent(u);
}

FrameVectors CoreTemplate::frame(double u) const {
  const Vec3 t = unit_tangent(u);
  if (t.x == 0.0 && t.y == 0.0) return outside_;
  return frame_at(s0_, t);
}

Vec3 CoreTemplate::map(double b1, double b2, double u) const {
  const auto fr = frame(u);
  return core(u) + fr.n * b1 + fr.b * b2;
}

Vec3 CoreTemplate::foot(const Vec3& P) const {
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < table_p_.size(); ++i) {
    const double d = dist2(table_p_[i], P);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  double a = table_u_[best > 0 ? best - 1 : 0];
  double b = table_u_[std::min(best + 1, table_u_.size() - 1)];
  auto f = [&](double u) { return dist2(core(u), P); };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 60 && b - a > 1e-15; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  double u = 0.5 * (a + b);
  const double c = knot_.speed();
  for (int it = 0; it < 8; ++it) {
    const Vec3 d = P - core(u);
    const double phi = dot(d, unit_tangent(u));
    const double dphi = -c + c * dot(d, knot_.curvature_vector(u));
    if (dphi >= 0.0) break;
    const double nu = std::clamp(u - phi / dphi, -1.0, 1.0);
    if (nu == u) break;
    u = nu;
  }
  const Vec3 d = P - core(u);
  const auto fr = frame(u);
  return {dot(d, fr.n), dot(d, fr.b), u};
}

bool CoreTemplate::tubular(double r) const {
  if (r == 0.0) return true;
  if (!(r > 0.0) || r * knot_.max_curvature() >= 1.0) return false;
  // Pairs beyond the bending scale must stay more than 2r apart.
  for (const auto& pr : far_pairs_) {
    if (pr.second <= 2.0 * r) return false;
  }
  return feature_ > 2.0 * r;
}

JacobianBounds CoreTemplate::jacobian_bounds(double r) const {
  JacobianBounds jb;
  const double c = knot_.speed();
  const double ub = knot_.gadget_begin(), ue = knot_.gadget_end();
  const double du = 0.01 * knot_.rho() / c;
  std::vector<std::pair<double, double>> betas = {{0.0, 0.0}};
  for (int j = 0; j < 12; ++j) {
    const double a = kTwoPi * j / 12.0;
    betas.emplace_back(r * std::cos(a), r * std::sin(a));
    betas.emplace_back(0.5 * r * std::cos(a), 0.5 * r * std::sin(a));
  }
  auto visit = [&](double u) {
    const auto fr = frame(u);
    const auto fp = frame(u + kFrameStep);
    const auto fm = frame(u - kFrameStep);
    const Vec3 dn = (fp.n - fm.n) / (2.0 * kFrameStep);
    const Vec3 db = (fp.b - fm.b) / (2.0 * kFrameStep);
    const Vec3 da = (std::abs(u) > 1.0 ? Vec3{0, 0, 1} : knot_.deriv(u));
    for (const auto& [b1, b2] : betas) {
      const auto sv = singular_values(fr.n, fr.b, da + dn * b1 + db * b2);
      jb.max_sv = std::max(jb.max_sv, sv.max_sv);
      jb.min_sv = std::min(jb.min_sv, sv.min_sv);
    }
  };
  for (double u = ub - 10 * du; u < ue + 10 * du; u += du) visit(u);
  visit(-0.999);  // straight parts: speed c inside the window, 1 outside
  visit(0.999);
  visit(1.5);
  return jb;
}

double CoreTemplate::colipschitz(double r) const {
  double worst = 1.0;
  for (const auto& [du, d] : far_pairs_) {
    const double img = d - 2.0 * r;
    if (img <= 2.0 * r) continue;  // near pairs: covered by the local bound
    worst = std::max(worst, std::sqrt(du * du + 4.0 * r * r) / img);
  }
  const auto jb = jacobian_bounds(r);
  return std::max(worst, 2.0 / jb.min_sv);
}

const CoreTemplate& core_template(KnotId id, double speed) {
  static std::mutex mu;
  static std::map<std::pair<int, std::uint64_t>, std::unique_ptr<CoreTemplate>> cache;
  const std::lock_guard lock(mu);
  auto& slot = cache[{static_cast<int>(id), std::bit_cast<std::uint64_t>(speed)}];
  if (!slot) slot = std::make_unique<CoreTemplate>(id, speed);
  return *slot;
}

// ---- schedule --------------------------------------------------------------

TowerParams default_schedule(std::size_t depth, double safety) {
  if (depth < 1) throw InputError("default_schedule: depth must be >= 1");
  if (!(safety >= 1.0)) throw InputError("default_schedule: safety factor must be >= 1");
  static std::mutex mu;
  static std::map<std::pair<std::size_t, double>, TowerParams> memo;
  {
    const std::lock_guard lock(mu);
    if (auto it = memo.find({depth, safety}); it != memo.end()) return it->second;
  }
  TowerParams p;
  p.depth = depth;
  p.eps = {1.0};
  p.lam = {0.5};
  for (std::size_t n = 0; n < depth; ++n) {
    const double lip = default_lipschitz(n);
    const KnotId id = knot_from_table(n);
    const auto& tmpl = core_template(id, core_speed(lip));
    p.lip.push_back(lip);
    p.knot_table.push_back(id);

    double cand = std::ldexp(1.0, -static_cast<int>(n + 1));
    while (!(2.0 * cand < p.lam[n])) cand *= 0.5;
    for (int halvings = 0;; ++halvings) {
      if (halvings > 2000) throw PrecisionError("default_schedule: no admissible eps found");
      const double r = cand / p.lam[n];
      bool good = tmpl.tubular(20.0 * r);
      if (good) {
        const auto jb = tmpl.jacobian_bounds(r);
        good = jb.max_sv <= lip * (1.0 - 1e-3) && jb.min_sv * lip >= 1.0 + 1e-3;
      }
      if (good) good = safety * tmpl.colipschitz(r) * cand <= p.eps[n] * p.eps[n];
      if (good) break;
      cand *= 0.5;
    }
    if (n + 1 < depth && cand < kPrecisionFloor) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3g", cand);
      throw PrecisionError("default_schedule: eps_" + std::to_string(n + 1) + " = " + buf +
                           " is below the double-precision budget; depth " +
                           std::to_string(depth) + " is not representable");
    }
    p.eps.push_back(cand);
    if (n + 1 < depth) p.lam.push_back(cand / 4.0);
  }
  p.validate();
  const std::lock_guard lock(mu);
  memo[{depth, safety}] = p;
  return p;
}

// ---- stages ----------------------------------------------------------------

StageMap::StageMap(const TowerParams& params, std::size_t k)
    : k_(k),
      lambda_(params.lam.at(k)),
      eps_in_(params.eps.at(k + 1)),
      eps_out_(params.eps.at(k)),
      tmpl_(&core_template(params.knot_table.at(k), core_speed(params.lip.at(k)))) {}

Vec3 StageMap::forward(const Vec3& q) const {
  const double s = q.z;
  if (std::abs(s) >= lambda_) {
    const auto& fr = tmpl_->frame(2.0);
    return {q.x * fr.n.x + q.y * fr.b.x, q.x * fr.n.y + q.y * fr.b.y, s};
  }
  const Vec3 g = tmpl_->map(q.x / lambda_, q.y / lambda_, s / lambda_);
  return {lambda_ * g.x, lambda_ * g.y, lambda_ * g.z};
}

std::optional<Vec3> StageMap::inverse(const Vec3& p, double slack) const {
  Vec3 q;
  if (std::abs(p.z) >= lambda_) {
    const auto& fr = tmpl_->frame(2.0);
    q = {p.x * fr.n.x + p.y * fr.n.y, p.x * fr.b.x + p.y * fr.b.y, p.z};
  } else {
    const Vec3 f = tmpl_->foot(p / lambda_);
    q = {lambda_ * f.x, lambda_ * f.y, lambda_ * f.z};
  }
  if (disk_norm(q) > eps_in_ * (1.0 + slack) + kMembershipFloor) return std::nullopt;
  return q;
}

TowerModel::TowerModel(TowerParams params) : params_(std::move(params)) {
  params_.validate();
  for (std::size_t k = 0; k < params_.depth; ++k) stages_.emplace_back(params_, k);
}

std::shared_ptr<const TowerModel> make_tower_model(const TowerParams& params) {
  return std::make_shared<const TowerModel>(params);
}

// ---- evaluator -------------------------------------------------------------

TowerEvaluator::TowerEvaluator(std::shared_ptr<const TowerModel> model, CircleSeq x, std::size_t n)
    : model_(std::move(model)), x_(std::move(x)), n_(n) {
  if (n_ >= model_->depth()) {
    throw InputError("compose_tower: stage " + std::to_string(n_) + " out of range for depth " +
                     std::to_string(model_->depth()));
  }
  if (x_.size() < n_ + 1) throw InputError("compose_tower: need at least n+1 rotation angles");
}

Vec3 TowerEvaluator::forward_range(const Vec3& q, std::size_t from, std::size_t to) const {
  Vec3 p = q;
  for (std::size_t k = from + 1; k-- > to;) {
    p = flat_rotate(model_->stage(k).forward(flat_rotate(p, -x_[k])), x_[k]);
  }
  return p;
}

Vec3 TowerEvaluator::forward(const Vec3& q) const {
  if (disk_norm(q) > domain_radius() * (1.0 + 1e-9)) {
    throw InputError("tower forward: point outside the domain torus");
  }
  return forward_range(q, n_, 0);
}

std::vector<Vec3> TowerEvaluator::lift(const Vec3& p, std::size_t last_stage) const {
  std::vector<Vec3> levels = {p};
  for (std::size_t k = 0; k <= std::min(last_stage, n_); ++k) {
    const auto q = model_->stage(k).inverse(flat_rotate(levels.back(), -x_[k]));
    if (!q) break;
    levels.push_back(flat_rotate(*q, x_[k]));
  }
  return levels;
}

std::optional<Vec3> TowerEvaluator::try_invert(const Vec3& p) const {
  auto lv = lift(p, n_);
  if (lv.size() != n_ + 2) return std::nullopt;
  return lv.back();
}

Vec3 TowerEvaluator::invert(const Vec3& p, double tol) const {
  const auto q = try_invert(p);
  if (!q) throw GeometryError("invert_tower: point is not in the stage image");
  const double res = flat_dist(forward_range(*q, n_, 0), p);
  if (res > tol) {
    throw GeometryError("invert_tower: residual " + std::to_string(res) + " exceeds tolerance");
  }
  return *q;
}

TowerEvaluator compose_tower(const TowerParams& params, const CircleSeq& x, std::size_t n) {
  return TowerEvaluator(make_tower_model(params), x, n);
}

TowerEvaluator compose_tower(std::shared_ptr<const TowerModel> model, const CircleSeq& x,
                             std::size_t n) {
  return TowerEvaluator(std::move(model), x, n);
}

double inversion_tolerance(const TowerEvaluator& ev) {
  return std::max(1e-9 * ev.domain_radius(), 1e-13);
}

Vec3 invert_tower(const TowerEvaluator& ev, const Vec3& p, double tol) { return ev.invert(p, tol); }

LipschitzEstimate sample_stage_bilipschitz(const TowerParams& params, std::size_t k,
                                           std::size_t pairs, std::uint64_t seed) {
  if (k >= params.depth) throw InputError("sample_stage_bilipschitz: k must be < depth");
  if (pairs == 0) throw InputError("sample_stage_bilipschitz: need at least one pair");
  const auto& tm = core_template(params.knot_table[k], core_speed(params.lip[k]));
  const double r = params.eps[k + 1] / params.lam[k];
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);

  LipschitzEstimate est;
  for (std::size_t i = 0; i < pairs; ++i) {
    const double u = -1.1 + 2.2 * U(rng);
    const double rad = 0.9 * r * std::sqrt(U(rng)), ang = kTwoPi * U(rng);
    const double b1 = rad * std::cos(ang), b2 = rad * std::sin(ang);
    const int kind = static_cast<int>(rng() % 3);
    const double hu = std::pow(10.0, -8.0 + 2.0 * U(rng)) * (U(rng) < 0.5 ? -1.0 : 1.0);
    const double hb = 0.1 * r * std::pow(10.0, -2.0 * U(rng));
    const double phi = kTwoPi * U(rng);
    const double du = kind == 1 ? 0.0 : hu;
    const double db1 = kind == 0 ? 0.0 : hb * std::cos(phi);
    const double db2 = kind == 0 ? 0.0 : hb * std::sin(phi);

    const auto f1 = tm.frame(u), f2 = tm.frame(u + du);
    const Vec3 dA = du == 0.0 ? Vec3{} : tm.core(u + du) - tm.core(u);
    const Vec3 dF = (f2.n - f1.n) * b1 + (f2.b - f1.b) * b2 + f2.n * db1 + f2.b * db2;
    const double image = norm(dA + dF);
    const double domain = std::sqrt(du * du + db1 * db1 + db2 * db2);
    const double ratio = image / domain;
    est.max_ratio = std::max(est.max_ratio, ratio);
    est.min_ratio = std::min(est.min_ratio, ratio);
    ++est.pairs_used;
  }
  return est;
}

LipschitzEstimate sample_tower_lipschitz(const TowerEvaluator& ev, std::size_t pairs,
                                         std::uint64_t seed, double min_separation) {
  if (pairs == 0) throw InputError("sample_tower_lipschitz: need at least one pair");
  const auto& P = ev.params();
  const std::size_t n = ev.stage();
  const double e = ev.domain_radius();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto sample = [&](std::size_t& window) {
    const double rad = e * std::sqrt(U(rng)), ang = kTwoPi * U(rng);
    window = rng() % (n + 1);
    const double s = U(rng) < 0.3 ? kTwoPi * U(rng)
                                  : ev.rotations()[window] + P.lam[window] * 1.2 * (2 * U(rng) - 1);
    return Vec3{rad * std::cos(ang), rad * std::sin(ang), Angle::canonical(s)};
  };

  LipschitzEstimate est;
  std::size_t guard = 0;
  while (est.pairs_used < pairs) {
    if (++guard > 100 * pairs) throw GeometryError("sample_tower_lipschitz: pairs too close to resolve");
    std::size_t w = 0, w2 = 0;
    const Vec3 a = sample(w);
    Vec3 b;
    if (U(rng) < 0.5) {
      b = sample(w2);
    } else {
      const double h = P.lam[w] * std::pow(10.0, -3.0 * U(rng)) * (2 * U(rng) - 1);
      b = {a.x, a.y, Angle::canonical(a.z + h)};
    }
    const double d = flat_dist(a, b);
    if (d < min_separation) continue;
    const double ratio = flat_dist(ev.forward(a), ev.forward(b)) / d;
    est.max_ratio = std::max(est.max_ratio, ratio);
    est.min_ratio = std::min(est.min_ratio, ratio);
    ++est.pairs_used;
  }
  return est;
}

// ---- curves ----------------------------------------------------------------

Curve3 knotted_core(std::size_t n, const TowerParams& params, std::size_t resolution) {
  if (n >= params.depth) throw InputError("knotted_core: n must be < depth");
  if (resolution < 64) throw InputError("knotted_core: resolution must be >= 64");
  const StageMap st(params, n);
  const double spacing = 2.0 * st.tmpl().knot().speed() / static_cast<double>(resolution);
  if (spacing > 0.5 * st.tmpl().feature_size()) {
    throw GeometryError("knotted_core: resolution " + std::to_string(resolution) +
                        " cannot separate the strands of the knotted window");
  }
  std::vector<double> s;
  for (std::size_t i = 0; i < resolution; ++i) {
    s.push_back(-kPi + kTwoPi * static_cast<double>(i + 1) / static_cast<double>(resolution));
    s.push_back(st.lambda() * (-1.0 + 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(resolution)));
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  Curve3 c;
  c.closed = true;
  c.params = s;
  for (double v : s) c.points.push_back(st.core(v));
  return c;
}

std::vector<double> stage_grid(const TowerParams& params, const std::vector<const CircleSeq*>& xs,
                               std::size_t resolution) {
  if (resolution < 64) throw InputError("stage_grid: resolution must be >= 64");
  std::vector<double> s;
  for (std::size_t i = 0; i < resolution; ++i) {
    s.push_back(-kPi + kTwoPi * static_cast<double>(i + 1) / static_cast<double>(resolution));
  }
  for (const auto* x : xs) {
    for (std::size_t k = 0; k < std::min(params.depth, x->size()); ++k) {
      const double half = 1.25 * params.lam[k];
      for (std::size_t i = 0; i < resolution; ++i) {
        const double t = -1.0 + 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(resolution);
        s.push_back(Angle::canonical((*x)[k] + half * t));
      }
    }
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

double limit_error_bound(const TowerParams& params, std::size_t n) {
  double sum = 2.0 * params.eps[params.depth];
  for (std::size_t k = n + 1; k < params.depth; ++k) sum += params.lam[k];
  return 10.0 * sum;
}

StageCurve limit_curve(const TowerEvaluator& ev, const std::vector<double>& grid) {
  StageCurve out;
  out.stage = ev.stage();
  out.error_bound = limit_error_bound(ev.params(), ev.stage());
  out.curve.closed = true;
  out.curve.params = grid;
  out.curve.points.reserve(grid.size());
  for (double s : grid) out.curve.points.push_back(ev.core_point(s));
  return out;
}

StageCurve limit_curve(const TowerParams& params, const CircleSeq& x, std::size_t n,
                       std::size_t resolution, const std::vector<double>& grid) {
  const auto ev = compose_tower(params, x, n);
  return limit_curve(ev, grid.empty() ? stage_grid(params, {&x}, resolution) : grid);
}

double flat_sup_dist(const Curve3& f, const Curve3& g) {
  if (f.params != g.params || f.points.size() != g.points.size()) {
    throw InputError("flat_sup_dist: curves are sampled on different grids");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    worst = std::max(worst, flat_dist(f.points[i], g.points[i]));
  }
  return worst;
}

// ---- sequences -------------------------------------------------------------

CircleSeq dense_sequence(std::size_t count) {
  CircleSeq z;
  const double phi = std::numbers::phi;
  for (std::size_t k = 0; k < count; ++k) {
    const double frac = std::fmod(static_cast<double>(k) * phi, 1.0);
    z.values.emplace_back(kTwoPi * frac);
  }
  return z;
}

CircleSeq interleave(const CircleSeq& x, const CircleSeq& dense) {
  if (dense.size() < x.size()) throw InputError("interleave: dense sequence is too short");
  CircleSeq y;
  for (std::size_t k = 0; k < x.size(); ++k) {
    y.values.push_back(dense.values[k]);
    y.values.push_back(x.values[k]);
  }
  return y;
}

std::pair<CircleSeq, CircleSeq> deinterleave(const CircleSeq& y) {
  if (y.size() % 2 != 0) throw InputError("deinterleave: odd length");
  std::pair<CircleSeq, CircleSeq> out;
  for (std::size_t i = 0; i < y.size(); i += 2) {
    out.second.values.push_back(y.values[i]);
    out.first.values.push_back(y.values[i + 1]);
  }
  return out;
}

ContinuityReport reduction_continuity_check(std::shared_ptr<const TowerModel> model,
                                            const CircleSeq& x, const CircleSeq& xp,
                                            std::size_t k, std::size_t resolution, double tol) {
  const auto& params = model->params();
  if (k >= params.depth) throw InputError("reduction_continuity_check: k must be < depth");
  if (x.size() < k + 1 || xp.size() < k + 1) {
    throw InputError("reduction_continuity_check: sequences need k+1 values");
  }
  ContinuityReport rep;
  rep.k = k;
  rep.tol = tol;
  rep.eps_k = params.eps[k];
  rep.limit_bound = 21.0 * params.eps[k];
  for (std::size_t n = 0; n <= k; ++n) {
    const double d = params.eps[k] / (3.0 * std::ldexp(1.0, static_cast<int>(n)) * static_cast<double>(k + 1));
    rep.delta.push_back(d);
    if (!(s1_dist(x.values[n], xp.values[n]) < d)) rep.violated_slots.push_back(n);
  }
  if (!rep.violated_slots.empty()) {
    rep.precondition_ok = false;
    return rep;
  }
  const auto grid = stage_grid(params, {&x, &xp}, resolution);
  const auto a = limit_curve(TowerEvaluator(model, x, k), grid);
  const auto b = limit_curve(TowerEvaluator(model, xp, k), grid);
  rep.sup_distance = flat_sup_dist(a.curve, b.curve);
  rep.ok = rep.sup_distance <= rep.eps_k * (1.0 + tol);
  return rep;
}

ContinuityReport reduction_continuity_check(const TowerParams& params, const CircleSeq& x,
                                            const CircleSeq& xp, std::size_t k,
                                            std::size_t resolution, double tol) {
  return reduction_continuity_check(make_tower_model(params), x, xp, k, resolution, tol);
}

}  // namespace wildknot
