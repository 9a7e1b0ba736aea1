#include "wildknot/transport.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wildknot/errors.hpp"

namespace wildknot {

TorusPoint partial_rotation(double eps, Angle s, const TorusPoint& p) {
  const Vec3 q = partial_rotation(eps, s.value(), to_flat(p));
  return make_torus_point(q.x, q.y, Angle(q.z), p.disk.r);
}

Vec3 partial_rotation(double eps, double s, const Vec3& p) {
  if (!(eps > 0.0)) throw InputError("partial_rotation: eps must be positive");
  const double b = disk_norm(p);
  if (b > eps * (1.0 + 1e-9) + kMembershipFloor) {
    throw InputError("partial_rotation: point outside T_eps");
  }
  const double rel = std::min(1.0, b / eps);
  const double r = (1.0 - 2.0 * std::max(0.0, rel - 0.5)) * s;
  return flat_rotate(p, r);
}

// ---- transport pair --------------------------------------------------------

TransportPair::TransportPair(std::shared_ptr<const TowerModel> model, CircleSeq x, CircleSeq xp)
    : model_(std::move(model)), x_(std::move(x)), xp_(std::move(xp)) {
  const std::size_t d = model_->depth();
  if (x_.size() < d + 1 || xp_.size() < d + 1) {
    throw InputError("TransportPair: sequences need depth + 1 = " + std::to_string(d + 1) +
                     " values");
  }
  for (std::size_t n = 0; n < d; ++n) {
    ev_.emplace_back(model_, x_, n);
    evp_.emplace_back(model_, xp_, n);
  }
}

TransportPair::TransportPair(const TowerParams& params, CircleSeq x, CircleSeq xp)
    : TransportPair(make_tower_model(params), std::move(x), std::move(xp)) {}

double TransportPair::shift(std::size_t m) const { return Angle::canonical(xp_[m] - x_[m]); }

double TransportPair::sup_shift(std::size_t from) const {
  double s = 0.0;
  for (std::size_t m = from; m <= depth(); ++m) s = std::max(s, std::abs(shift(m)));
  return s;
}

std::size_t TransportPair::membership(const Vec3& p) const {
  return ev_.back().lift(p, depth() - 1).size() - 1;
}

Vec3 TransportPair::apply(std::size_t n, const Vec3& p) const {
  if (n > depth()) throw InputError("transport: stage beyond depth");
  const auto& eps = params().eps;
  if (n == 0) return partial_rotation(eps[0], shift(0), p);
  const auto levels = ev_.back().lift(p, n - 1);
  const std::size_t m = levels.size() - 1;
  const Vec3 r = partial_rotation(eps[m], shift(m), levels[m]);
  return m == 0 ? r : evp_[m - 1].forward_range(r, m - 1, 0);
}

double TransportPair::path_distance(std::size_t n, const Vec3& p, const Vec3& q,
                                    std::size_t segments) const {
  if (segments < 1) throw InputError("path_distance: need at least one segment");
  const auto& ev = ev_.at(n);
  const auto a = ev.try_invert(p);
  const auto b = ev.try_invert(q);
  if (!a || !b) throw GeometryError("path_distance: point outside the stage image");
  const double r = ev.domain_radius();
  const double dt = Angle::canonical(b->z - a->z);
  Vec3 prev = p;
  double len = 0.0;
  for (std::size_t i = 1; i <= segments; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(segments);
    Vec3 c{a->x + t * (b->x - a->x), a->y + t * (b->y - a->y), a->z + t * dt};
    const double nb = disk_norm(c);
    if (nb > r) c = {c.x * r / nb, c.y * r / nb, c.z};
    const Vec3 img = i == segments ? q : ev.forward(c);
    len += flat_dist(prev, img);
    prev = img;
  }
  return len;
}

Vec3 transport_homeo(const TransportPair& tp, std::size_t n, const Vec3& p) { return tp.apply(n, p); }

double intertwining_residual(const TransportPair& tp, std::size_t n, const Vec3& q) {
  const Vec3 lhs = tp.apply(n, tp.tower(n).forward(q));
  const Vec3 rhs = tp.tower_prime(n).forward(flat_rotate(q, tp.shift(n)));
  return flat_dist(lhs, rhs);
}

// ---- inequality sampling ---------------------------------------------------

namespace {

using Rng = std::mt19937_64;

double unif(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

// A point of T_{eps_{j+1}} biased toward the rims and the knotted windows.
Vec3 sample_domain(const TransportPair& tp, std::size_t j, Rng& rng, double rmin = 0.0) {
  const auto& prm = tp.params();
  const double eps = prm.eps[j + 1];
  double rad;
  const double pick = unif(rng, 0, 1);
  if (pick < 0.2) {
    rad = eps;
  } else if (pick < 0.3) {
    rad = 0.5 * eps;
  } else if (pick < 0.5) {
    rad = eps * unif(rng, 0.5, 1.0);
  } else {
    rad = eps * std::sqrt(unif(rng, 0, 1));
  }
  rad = std::max(rad, rmin);
  const double phi = unif(rng, 0, kTwoPi);
  double s;
  if (unif(rng, 0, 1) < 0.4) {
    s = unif(rng, -kPi, kPi);
  } else {
    const auto k = std::uniform_int_distribution<std::size_t>(0, j)(rng);
    s = tp.x()[k] + prm.lam[k] * unif(rng, -1.3, 1.3);
  }
  return {rad * std::cos(phi), rad * std::sin(phi), Angle::canonical(s)};
}

Vec3 perturb(const Vec3& q, double eps, Rng& rng) {
  const double scale = std::pow(10.0, unif(rng, -8.0, 0.0));
  const double phi = unif(rng, 0, kTwoPi);
  Vec3 out{q.x + scale * eps * std::cos(phi), q.y + scale * eps * std::sin(phi),
           Angle::canonical(q.z + scale * unif(rng, -1.0, 1.0))};
  const double nb = disk_norm(out);
  if (nb > eps) out = {out.x * eps / nb, out.y * eps / nb, out.z};
  return out;
}

void record(InequalityCheck& c, const Vec3& x, const Vec3& z, double lhs, double bound) {
  ++c.tested;
  const double ratio = bound > 0.0 ? lhs / bound : (lhs > 0.0 ? INFINITY : 0.0);
  c.max_ratio = std::max(c.max_ratio, ratio);
  if (lhs > bound * (1.0 + kRelTol) + kAbsTol) ++c.violations;
  c.witnesses.push_back({x, z, lhs, bound});
  std::sort(c.witnesses.begin(), c.witnesses.end(), [](const auto& a, const auto& b) {
    return a.lhs * b.bound > b.lhs * a.bound;
  });
  if (c.witnesses.size() > 5) c.witnesses.pop_back();
}

}  // namespace

std::size_t InequalityReport::violations() const {
  std::size_t v = 0;
  for (const auto& c : checks) v += c.violations;
  return v;
}

InequalityReport verify_inequalities(const TransportPair& tp, std::size_t n, std::size_t k,
                                     std::size_t sample_budget, std::uint64_t seed) {
  const std::size_t depth = tp.depth();
  if (n + k > depth) throw InputError("verify_inequalities: need n + k <= depth");
  const auto& eps = tp.params().eps;
  InequalityReport rep;
  rep.n = n;
  rep.k = k;
  Rng rng(seed);

  if (n >= 1) {
    InequalityCheck c{"transport-lipschitz",
                      "d(H_n x, H_n z) <= 25 d_path(x, z) + 5 |x'_n - x_n| on Im g_{n-1}", 0, 0, 0, {}};
    const std::size_t j = n - 1;
    const auto& ev = tp.tower(j);
    for (std::size_t i = 0; i < sample_budget; ++i) {
      const Vec3 q1 = sample_domain(tp, j, rng);
      const Vec3 q2 = unif(rng, 0, 1) < 0.5 ? sample_domain(tp, j, rng) : perturb(q1, eps[j + 1], rng);
      const Vec3 x = ev.forward(q1), z = ev.forward(q2);
      const double lhs = flat_dist(tp.apply(n, x), tp.apply(n, z));
      const double bound = 25.0 * tp.path_distance(j, x, z) + 5.0 * std::abs(tp.shift(n));
      record(c, x, z, lhs, bound);
    }
    rep.checks.push_back(std::move(c));
  }
  if (k >= 1 && n + k <= depth - 1) {
    InequalityCheck c{"stage-drift",
                      "d(H_n x, H_{n+k} x) <= 10 sup_{m>=n} |x'_m - x_m| + 20 eps_n on Im g_{n+k}", 0, 0, 0, {}};
    const auto& ev = tp.tower(n + k);
    const double bound = 10.0 * tp.sup_shift(n) + 20.0 * eps[n];
    for (std::size_t i = 0; i < sample_budget; ++i) {
      const Vec3 x = ev.forward(sample_domain(tp, n + k, rng));
      record(c, x, x, flat_dist(tp.apply(n, x), tp.apply(n + k, x)), bound);
    }
    rep.checks.push_back(std::move(c));
  }
  if (k >= 1) {
    InequalityCheck c{"stage-drift-outer",
                      "d(H_n x, H_{n+k} x) <= 15 sup_{m>=n} |x'_m - x_m| + 50 eps_n on Im g_{n+k-1}", 0, 0, 0, {}};
    const auto& ev = tp.tower(n + k - 1);
    const double bound = 15.0 * tp.sup_shift(n) + 50.0 * eps[n];
    for (std::size_t i = 0; i < sample_budget; ++i) {
      const Vec3 x = ev.forward(sample_domain(tp, n + k - 1, rng));
      record(c, x, x, flat_dist(tp.apply(n, x), tp.apply(n + k, x)), bound);
    }
    rep.checks.push_back(std::move(c));
  }
  if (n + 1 <= depth - 1) {
    InequalityCheck c{"limit-modulus",
                      "d(H x, H z) <= 100 (d_path(x, z) + sup_{m>n} |x'_m - x_m| + eps_{n+1}) "
                      "for x in Im g_n outside Im g_{n+1}, z in Im g_{n+1}", 0, 0, 0, {}};
    const auto& outer = tp.tower(n);
    const auto& inner = tp.tower(n + 1);
    const double lam = tp.params().lam[n + 1];
    for (std::size_t i = 0; i < sample_budget; ++i) {
      Vec3 x;
      Vec3 q;
      for (int attempt = 0;; ++attempt) {
        q = sample_domain(tp, n, rng, lam);
        x = outer.forward(q);
        if (tp.membership(x) == n + 1) break;
        if (attempt > 100) throw GeometryError("verify_inequalities: cannot sample outside Im g_{n+1}");
      }
      Vec3 qq = sample_domain(tp, n + 1, rng);
      if (unif(rng, 0, 1) < 0.5) qq = perturb({qq.x, qq.y, q.z}, eps[n + 2], rng);
      const Vec3 z = inner.forward(qq);
      const double lhs = flat_dist(tp.apply(depth, x), tp.apply(depth, z));
      const double bound = 100.0 * (tp.path_distance(n, x, z) + tp.sup_shift(n + 1) + eps[n + 1]);
      record(c, x, z, lhs, bound);
    }
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

// ---- Cauchy sequences ------------------------------------------------------

CauchyReport transport_cauchy(const TransportPair& tp, const std::vector<StagedPoint>& seq) {
  const std::size_t depth = tp.depth();
  const auto& eps = tp.params().eps;
  for (std::size_t m = 0; m < seq.size(); ++m) {
    if (seq[m].stage >= depth) throw InputError("transport_cauchy: stage tag beyond depth");
    if (m > 0 && seq[m].stage < seq[m - 1].stage) {
      throw InputError("transport_cauchy: stage tags must be nondecreasing");
    }
    if (tp.membership(seq[m].point) < seq[m].stage + 1) {
      throw GeometryError("transport_cauchy: point " + std::to_string(m) +
                          " is outside the image of its stage");
    }
  }
  CauchyReport rep;
  std::vector<Vec3> img;
  for (const auto& z : seq) img.push_back(tp.apply(depth, z.point));
  for (std::size_t m = 0; m + 1 < seq.size(); ++m) {
    const std::size_t n = seq[m].stage;
    const double inc = flat_dist(seq[m].point, seq[m + 1].point);
    const double tr = flat_dist(img[m], img[m + 1]);
    const double bound = 100.0 * (tp.path_distance(n, seq[m].point, seq[m + 1].point) +
                                  tp.sup_shift(n + 1) + eps[n + 1]);
    rep.increments.push_back(inc);
    rep.transported.push_back(tr);
    rep.bounds.push_back(bound);
    rep.max_ratio = std::max(rep.max_ratio, bound > 0 ? tr / bound : 0.0);
    if (tr > bound * (1.0 + kRelTol) + kAbsTol) ++rep.violations;
  }
  rep.modulus.assign(rep.transported.size(), 0.0);
  for (std::size_t m = rep.transported.size(); m-- > 0;) {
    rep.modulus[m] = std::max(rep.transported[m], m + 1 < rep.modulus.size() ? rep.modulus[m + 1] : 0.0);
  }
  return rep;
}

std::vector<StagedPoint> core_sequence(const TransportPair& tp, double s) {
  std::vector<StagedPoint> out;
  for (std::size_t n = 0; n < tp.depth(); ++n) out.push_back({tp.tower(n).core_point(s), n});
  return out;
}

}  // namespace wildknot
