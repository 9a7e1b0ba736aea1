#include "wildknot/lo_knot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <set>

#include "wildknot/errors.hpp"
#include "wildknot/long_knot.hpp"

namespace wildknot {

namespace {

constexpr double kSummandScale = 0.45;  // gadget scale of one trefoil summand

const LongKnot& summand_template() {
  static const LongKnot t(KnotId::Trefoil, kSummandScale);
  return t;
}

void fill_params(Curve3& c) {
  c.params.assign(c.points.size(), 0.0);
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    c.params[i] = c.params[i - 1] + dist(c.points[i - 1], c.points[i]);
  }
}

}  // namespace

Curve3 trefoil_sum_arc(const Vec3& center, double radius, std::size_t copies,
                       std::size_t resolution) {
  if (!(radius > 0.0)) throw InputError("trefoil_sum_arc: radius must be positive");
  if (resolution < 16) throw InputError("trefoil_sum_arc: need at least 16 samples per copy");
  const auto& tmpl = summand_template();
  Curve3 arc;
  arc.closed = false;
  for (std::size_t j = 0; j < copies; ++j) {
    const double scale = std::ldexp(1.0, -static_cast<int>(j));
    const double half = radius * scale / 4.0;
    const double mid = center.x - radius * scale * 0.75;
    for (std::size_t i = 0; i < resolution; ++i) {
      const double u = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(resolution);
      const Vec3 a = tmpl.point(u);
      // Template axis z goes to the x axis.
      arc.points.push_back({mid + half * a.z, center.y + half * a.x, center.z + half * a.y});
    }
  }
  // Straight remainder through the singular point to the right wall.
  const double x0 = center.x - radius * std::ldexp(1.0, -static_cast<int>(copies));
  const std::size_t left = resolution / 2;
  for (std::size_t i = 0; i < left; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(left);
    arc.points.push_back({x0 + (center.x - x0) * t, center.y, center.z});
  }
  const std::size_t right = resolution - left;
  for (std::size_t i = 0; i <= right; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(right);
    arc.points.push_back({center.x + radius * t, center.y, center.z});
  }
  arc.points.front() = {center.x - radius, center.y, center.z};
  fill_params(arc);
  return arc;
}

KnotGeometry assemble_lo_knot(const EmbeddingState& state, std::size_t resolution,
                              const AssemblyOptions& opt) {
  if (resolution < 64) throw InputError("assemble_lo_knot: resolution must be >= 64");
  if (state.size() == 0) throw InputError("assemble_lo_knot: empty embedding state");
  if (!(opt.return_radius > 1.0)) throw InputError("assemble_lo_knot: return radius must exceed 1");

  KnotGeometry g;
  g.stage = state.size();
  g.curve.closed = true;

  struct Ball {
    std::size_t index;
    double c, r;
  };
  std::vector<Ball> balls;
  for (std::size_t m = 0; m < state.size(); ++m) {
    Singularity s;
    s.index = m;
    s.f = state.f[m];
    s.wall_lo = state.V[m].lo;
    s.wall_hi = state.V[m].hi;
    s.position = {state.f[m].get_d(), 0.0, 0.0};
    s.ball_radius = Rational(state.V[m].length() / 4).get_d();
    if (s.ball_radius * std::ldexp(1.0, -static_cast<int>(opt.copies)) < 64.0 * 1e-16) {
      throw GeometryError("assemble_lo_knot: ball " + std::to_string(m) +
                          " is too small to resolve in double precision");
    }
    balls.push_back({m, s.position.x, s.ball_radius});
    g.singularities.push_back(std::move(s));
  }
  std::sort(balls.begin(), balls.end(), [](const Ball& a, const Ball& b) { return a.c < b.c; });

  g.arc_ranges.assign(state.size(), {0, 0});
  g.trefoil_counts.assign(state.size(), opt.copies);
  auto& pts = g.curve.points;
  const double step = 1.0 / static_cast<double>(resolution);
  std::size_t next_ball = 0;
  for (std::size_t i = 0; i <= resolution; ++i) {
    const double x = static_cast<double>(i) * step;
    while (next_ball < balls.size() && balls[next_ball].c + balls[next_ball].r < x) {
      const auto& b = balls[next_ball];
      const auto arc = trefoil_sum_arc({b.c, 0, 0}, b.r, opt.copies, opt.samples_per_copy);
      g.arc_ranges[b.index] = {pts.size(), pts.size() + arc.points.size()};
      pts.insert(pts.end(), arc.points.begin(), arc.points.end());
      ++next_ball;
    }
    if (next_ball < balls.size() && x >= balls[next_ball].c - balls[next_ball].r) continue;
    pts.push_back({x, 0, 0});
  }
  // Return loop through the upper half plane standing in for the point at infinity.
  for (std::size_t i = 1; i < resolution; ++i) {
    const double th = kPi * static_cast<double>(i) / static_cast<double>(resolution);
    pts.push_back({0.5 + 0.5 * std::cos(th), 0.0, opt.return_radius * std::sin(th)});
  }
  fill_params(g.curve);
  return g;
}

LinearOrderPrefix recover_order(const KnotGeometry& g) {
  if (g.singularities.empty()) throw InputError("recover_order: no singularity metadata");
  const std::size_t n = g.singularities.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](auto a, auto b) { return g.singularities[a].f < g.singularities[b].f; });
  std::vector<std::size_t> ranks(n);
  for (std::size_t pos = 0; pos < n; ++pos) ranks[g.singularities[idx[pos]].index] = pos;
  return LinearOrderPrefix(std::move(ranks));
}

LoStarPrefix recover_structure(const KnotGeometry& g) {
  auto order = recover_order(g);
  std::set<ElementPair> succ;
  for (const auto& a : g.singularities) {
    for (const auto& b : g.singularities) {
      if (a.index != b.index && a.wall_hi == b.wall_lo) succ.insert({a.index, b.index});
    }
  }
  return LoStarPrefix(std::move(order), std::move(succ));
}

LoReductionReport lo_reduction_check(const LoStarPrefix& p, const LoStarPrefix& q, std::size_t n,
                                     double eps, std::size_t resolution) {
  if (n > p.size() || n > q.size()) throw InputError("lo_reduction_check: n exceeds a prefix size");
  LoReductionReport rep;
  const auto sp = embed_prefix(p, p.size());
  const auto sq = embed_prefix(q, q.size());
  std::optional<KnotGeometry> gp, gq;
  auto geometry = [&]() {
    if (!gp) gp = assemble_lo_knot(sp, resolution);
    if (!gq) gq = assemble_lo_knot(sq, resolution);
  };

  rep.agree_on_prefix = agree_on_prefix(p, q, n);
  if (rep.agree_on_prefix) {
    rep.v_n = sp.V[n].length().get_d();
    for (const auto* st : {&sp, &sq}) {
      for (std::size_t m = n; m < st->size(); ++m) {
        rep.max_tail_length = std::max(rep.max_tail_length, st->V[m].length().get_d());
      }
    }
    rep.eps = eps > 0.0 ? eps : 2.0 * rep.max_tail_length + 1.0 / static_cast<double>(resolution);
    if (rep.v_n < rep.eps / 2) {
      geometry();
      rep.hausdorff = hausdorff(gp->curve.points, gq->curve.points);
      rep.continuity_checked = true;
      rep.continuity_ok = rep.hausdorff < rep.eps;
      if (!rep.continuity_ok) rep.notes.push_back("hausdorff bound violated");
    } else {
      rep.notes.push_back("|V_n| >= eps/2: continuity premise not met");
    }
  }

  rep.isomorphic = p.size() == q.size() && is_isomorphic(p, q);
  if (!rep.isomorphic) {
    geometry();
    rep.recovery_checked = true;
    const auto rp = recover_structure(*gp);
    const auto rq = recover_structure(*gq);
    const bool round_trip = rp.ranks() == p.ranks() && rp.succ() == p.succ() &&
                            rq.ranks() == q.ranks() && rq.succ() == q.succ();
    const bool differ = rp.size() != rq.size() || !is_isomorphic(rp, rq);
    rep.recovery_ok = round_trip && differ;
    if (!round_trip) rep.notes.push_back("recovered structure differs from its source");
    if (!differ) rep.notes.push_back("non-isomorphic prefixes recovered as isomorphic");
  }
  return rep;
}

double min_nonadjacent_distance(const Curve3& c, std::size_t skip) {
  const auto& pts = c.points;
  const std::size_t n = pts.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return pts[a].x < pts[b].x; });
  auto far_apart = [&](std::size_t a, std::size_t b) {
    std::size_t d = a > b ? a - b : b - a;
    if (c.closed) d = std::min(d, n - d);
    return d > skip;
  };
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n && pts[idx[j]].x - pts[idx[i]].x < best; ++j) {
      if (!far_apart(idx[i], idx[j])) continue;
      best = std::min(best, dist(pts[idx[i]], pts[idx[j]]));
    }
  }
  return best;
}

}  // namespace wildknot
