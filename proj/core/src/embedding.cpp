#include "wildknot/embedding.hpp"

#include <algorithm>

#include "wildknot/errors.hpp"

namespace wildknot {

RatInterval EmbeddingState::U(std::size_t m) const {
  const Rational quarter_len = V[m].length() / 4;
  return {f[m] - quarter_len, f[m] + quarter_len};
}

namespace {

RatInterval ball(const Rational& centre, const Rational& radius) {
  return {centre - radius, centre + radius};
}

}  // namespace

EmbeddingState embed_prefix(const LoStarPrefix& p, std::size_t n) {
  if (n > p.size()) throw InputError("embed_prefix: n exceeds the prefix size");
  if (p.size() > 0 && p.ranks()[0] != 0) {
    throw InputError("embed_prefix: element 0 must be the smallest element");
  }
  EmbeddingState st{p, {}, {}};
  st.f.reserve(n);
  st.V.reserve(n);
  if (n == 0) return st;

  st.f.emplace_back(1, 4);
  st.V.push_back({Rational(0), Rational(1, 2)});

  const auto& rank = p.ranks();
  for (std::size_t k = 1; k < n; ++k) {
    // Closest embedded neighbours of k below and above in the order.
    std::size_t below = n, above = n;
    for (std::size_t m = 0; m < k; ++m) {
      if (rank[m] < rank[k]) {
        if (below == n || rank[m] > rank[below]) below = m;
      } else if (above == n || rank[m] < rank[above]) {
        above = m;
      }
    }
    if (below == n) throw InputError("embed_prefix: element below every earlier element");

    const Rational& sup_below = st.V[below].hi;
    Rational fk;
    RatInterval vk;
    if (above == n) {
      fk = sup_below + (1 - sup_below) / 3;
      const Rational gap = fk - sup_below;
      vk = p.is_succ(below, k) ? ball(fk, gap) : ball(fk, gap / 2);
    } else {
      const Rational& inf_above = st.V[above].lo;
      const Rational gap = inf_above - sup_below;
      const bool left = p.is_succ(below, k);
      const bool right = p.is_succ(k, above);
      if (left == right) {
        fk = (sup_below + inf_above) / 2;
        vk = left ? ball(fk, gap / 2) : ball(fk, gap / 4);
      } else if (left) {
        fk = sup_below + gap / 3;
        vk = ball(fk, fk - sup_below);
      } else {
        fk = sup_below + 2 * gap / 3;
        vk = ball(fk, inf_above - fk);
      }
    }
    fk.canonicalize();
    vk.lo.canonicalize();
    vk.hi.canonicalize();
    st.f.push_back(std::move(fk));
    st.V.push_back(std::move(vk));
  }
  return st;
}

EmbeddingReport verify_embedding(const EmbeddingState& state) {
  EmbeddingReport rep;
  const std::size_t n = state.size();
  const auto& order = state.order;
  auto fail = [&](bool& flag, std::string msg) {
    flag = false;
    if (rep.failures.size() < 32) rep.failures.push_back(std::move(msg));
  };

  for (std::size_t a = 0; a < n; ++a) {
    const auto& va = state.V[a];
    if (!(va.lo < va.hi) || state.f[a] != va.mid()) {
      fail(rep.disjoint_and_centred, "V_" + std::to_string(a) + " not centred on f");
    }
    if (va.lo < 0 || va.hi >= 1) fail(rep.inside_unit, "V_" + std::to_string(a) + " leaves [0,1)");
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const auto& vb = state.V[b];
      if (a < b && va.lo < vb.hi && vb.lo < va.hi) {
        fail(rep.disjoint_and_centred,
             "V_" + std::to_string(a) + " and V_" + std::to_string(b) + " overlap");
      }
      const bool less = order.ranks()[a] < order.ranks()[b];
      if ((state.f[a] < state.f[b]) != less) {
        fail(rep.order_preserved, "order of " + std::to_string(a) + "," + std::to_string(b));
      }
      const bool contact = va.hi == vb.lo;
      if (contact != (less && order.is_succ(a, b))) {
        fail(rep.successor_contact,
             "contact mismatch for (" + std::to_string(a) + "," + std::to_string(b) + ")");
      }
    }
  }

  // Density proxy: measure of the union and the largest uncovered gap.
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return state.V[a].lo < state.V[b].lo; });
  rep.covered_measure = 0;
  rep.largest_gap = 0;
  Rational cursor = 0;
  for (auto i : idx) {
    const auto& v = state.V[i];
    if (v.lo > cursor) rep.largest_gap = std::max(rep.largest_gap, Rational(v.lo - cursor));
    rep.covered_measure += v.length();
    if (v.hi > cursor) cursor = v.hi;
  }
  rep.largest_gap = std::max(rep.largest_gap, Rational(1 - cursor));
  return rep;
}

bool verify_prefix_stability(const LoStarPrefix& p, const LoStarPrefix& q, std::size_t n) {
  if (!agree_on_prefix(p, q, n)) {
    throw InputError("verify_prefix_stability: prefixes differ on 0.." + std::to_string(n));
  }
  const auto a = embed_prefix(p, n + 1);
  const auto b = embed_prefix(q, n + 1);
  for (std::size_t m = 0; m <= n; ++m) {
    if (a.f[m] != b.f[m] || a.V[m].lo != b.V[m].lo || a.V[m].hi != b.V[m].hi) return false;
  }
  return true;
}

}  // namespace wildknot
