#include "wildknot/order.hpp"

#include <algorithm>
#include <string>

#include "wildknot/errors.hpp"

namespace wildknot {

LinearOrderPrefix::LinearOrderPrefix(std::vector<std::size_t> ranks) : rank_(std::move(ranks)) {
  std::vector<bool> seen(rank_.size(), false);
  for (std::size_t i = 0; i < rank_.size(); ++i) {
    const std::size_t r = rank_[i];
    if (r >= rank_.size() || seen[r]) {
      throw InputError("ranks is not a permutation (position " + std::to_string(i) +
                       ", value " + std::to_string(r) + ")");
    }
    seen[r] = true;
  }
}

std::vector<std::size_t> LinearOrderPrefix::sorted_elements() const {
  std::vector<std::size_t> out(rank_.size());
  for (std::size_t i = 0; i < rank_.size(); ++i) out[rank_[i]] = i;
  return out;
}

LinearOrderPrefix lo_from_ranks(std::vector<std::size_t> ranks) {
  return LinearOrderPrefix(std::move(ranks));
}

std::set<ElementPair> successor(const LinearOrderPrefix& order) {
  std::set<ElementPair> out;
  const auto sorted = order.sorted_elements();
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) out.insert({sorted[i], sorted[i + 1]});
  return out;
}

std::set<ElementPair> successor(const LoStarPrefix& p) { return successor(p.order()); }

LoStarPrefix::LoStarPrefix(LinearOrderPrefix order, std::set<ElementPair> succ,
                           std::vector<FlagRemoval> removals)
    : order_(std::move(order)), succ_(std::move(succ)), removals_(std::move(removals)) {
  if (order_.size() > 0 && order_.ranks()[0] != 0) {
    throw InputError("LO* prefix: element 0 must be the smallest element");
  }
  const auto adjacent = successor(order_);
  for (const auto& [a, b] : succ_) {
    if (a >= size() || b >= size()) throw InputError("LO* prefix: successor flag out of range");
    if (!adjacent.contains({a, b})) {
      throw InputError("LO* prefix: flag (" + std::to_string(a) + "," + std::to_string(b) +
                       ") is not an adjacent increasing pair");
    }
  }
}

LoStarPrefix LoStarPrefix::restrict_to(std::size_t m) const {
  if (m > size()) throw InputError("restrict_to: prefix longer than structure");
  std::vector<std::size_t> sub(ranks().begin(), ranks().begin() + static_cast<long>(m));
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return sub[a] < sub[b]; });
  std::vector<std::size_t> r(m);
  for (std::size_t pos = 0; pos < m; ++pos) r[idx[pos]] = pos;
  std::set<ElementPair> s;
  for (const auto& [a, b] : succ_) {
    if (a < m && b < m) s.insert({a, b});
  }
  return LoStarPrefix(LinearOrderPrefix(std::move(r)), std::move(s));
}

bool agree_on_prefix(const LoStarPrefix& p, const LoStarPrefix& q, std::size_t n) {
  if (n + 1 > p.size() || n + 1 > q.size()) return false;
  const auto a = p.restrict_to(n + 1);
  const auto b = q.restrict_to(n + 1);
  return a.ranks() == b.ranks() && a.succ() == b.succ();
}

std::pair<long long, int> dyadic_at(std::size_t i) {
  // Level k (denominator 2^k) holds 2^(k-1) odd numerators.
  int k = 1;
  std::size_t level = 1;
  while (i >= level) {
    i -= level;
    level <<= 1U;
    ++k;
  }
  return {static_cast<long long>(2 * i + 1), k};
}

std::vector<LoStarElement> lostar_enumeration(const LinearOrderPrefix& l, std::size_t stage) {
  std::vector<LoStarElement> out;
  out.reserve(stage);
  if (stage == 0) return out;
  out.push_back({LoStarBlock::Bottom});
  std::size_t next_input = 0;
  std::size_t next_rational = 0;
  bool tops_done = false;
  while (out.size() < stage) {
    if (next_input < l.size()) out.push_back({LoStarBlock::Input, next_input++});
    if (!tops_done) {
      if (out.size() < stage) out.push_back({LoStarBlock::Top1});
      if (out.size() < stage) out.push_back({LoStarBlock::Top2});
      tops_done = true;
    }
    if (out.size() < stage) {
      auto [num, e] = dyadic_at(next_rational++);
      out.push_back({LoStarBlock::Rational, 0, num, e});
    }
  }
  out.resize(stage);
  return out;
}

namespace {

// Strict order of 1 + L + 1 + 1 + Q.
bool lostar_less(const LoStarElement& a, const LoStarElement& b, const LinearOrderPrefix& l) {
  auto block_rank = [](LoStarBlock blk) { return static_cast<int>(blk); };
  if (a.block != b.block) return block_rank(a.block) < block_rank(b.block);
  switch (a.block) {
    case LoStarBlock::Input:
      return l.less(a.input_index, b.input_index);
    case LoStarBlock::Rational: {
      // Compare num_a / 2^ea with num_b / 2^eb exactly.
      const int e = std::max(a.dyadic_exp, b.dyadic_exp);
      const long long na = a.dyadic_num << (e - a.dyadic_exp);
      const long long nb = b.dyadic_num << (e - b.dyadic_exp);
      return na < nb;
    }
    default:
      return false;
  }
}

}  // namespace

LoStarPrefix to_lostar(const LinearOrderPrefix& l, std::size_t stage) {
  if (stage < l.size()) {
    throw InputError("to_lostar: stage " + std::to_string(stage) + " is smaller than |L| = " +
                     std::to_string(l.size()));
  }
  const auto elems = lostar_enumeration(l, stage);

  // Insert elements one at a time into a sorted list to log broken adjacencies.
  std::vector<std::size_t> sorted;
  std::vector<FlagRemoval> removals;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), i, [&](std::size_t a, std::size_t b) {
      return lostar_less(elems[a], elems[b], l);
    });
    if (it != sorted.begin() && it != sorted.end()) removals.push_back({*(it - 1), *it, i});
    sorted.insert(it, i);
  }
  std::vector<std::size_t> ranks(elems.size());
  for (std::size_t pos = 0; pos < sorted.size(); ++pos) ranks[sorted[pos]] = pos;
  LinearOrderPrefix order(std::move(ranks));
  auto succ = successor(order);
  return LoStarPrefix(std::move(order), std::move(succ), std::move(removals));
}

bool is_isomorphic(const LoStarPrefix& p, const LoStarPrefix& q) {
  if (p.size() != q.size()) throw InputError("is_isomorphic: size mismatch");
  // Finite linear orders of equal size have exactly one isomorphism: rank to rank.
  const auto ps = p.order().sorted_elements();
  const auto qs = q.order().sorted_elements();
  std::vector<std::size_t> map(p.size());
  for (std::size_t r = 0; r < ps.size(); ++r) map[ps[r]] = qs[r];
  if (p.succ().size() != q.succ().size()) return false;
  for (const auto& [a, b] : p.succ()) {
    if (!q.is_succ(map[a], map[b])) return false;
  }
  return true;
}

LoStarPrefix random_lostar_prefix(std::size_t n, std::mt19937_64& rng, double flag_p) {
  if (n == 0) return {};
  std::vector<std::size_t> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = i;
  std::shuffle(sorted.begin() + 1, sorted.end(), rng);
  std::vector<std::size_t> ranks(n);
  for (std::size_t pos = 0; pos < n; ++pos) ranks[sorted[pos]] = pos;
  std::bernoulli_distribution flag(flag_p);
  std::set<ElementPair> succ;
  for (std::size_t pos = 0; pos + 1 < n; ++pos) {
    if (flag(rng)) succ.insert({sorted[pos], sorted[pos + 1]});
  }
  return LoStarPrefix(LinearOrderPrefix(std::move(ranks)), std::move(succ));
}

LoStarPrefix random_extension(const LoStarPrefix& p, std::size_t extra, std::mt19937_64& rng,
                              double flag_p) {
  if (p.size() == 0) throw InputError("random_extension: empty prefix");
  auto sorted = p.order().sorted_elements();
  // Gap g sits just above sorted[g - 1]; gap 0 (below element 0) is never used.
  std::vector<bool> locked(sorted.size() + 1, false);
  locked[0] = true;
  for (std::size_t pos = 0; pos + 1 < sorted.size(); ++pos) {
    if (p.is_succ(sorted[pos], sorted[pos + 1])) locked[pos + 1] = true;
  }
  std::vector<bool> fresh(sorted.size(), false);
  std::bernoulli_distribution flag(flag_p);
  for (std::size_t e = 0; e < extra; ++e) {
    std::vector<std::size_t> open;
    for (std::size_t g = 0; g < locked.size(); ++g) {
      if (!locked[g]) open.push_back(g);
    }
    const std::size_t g = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
    sorted.insert(sorted.begin() + static_cast<long>(g), p.size() + e);
    fresh.insert(fresh.begin() + static_cast<long>(g), true);
    // The gap g splits into two open gaps around the new element.
    locked.insert(locked.begin() + static_cast<long>(g), false);
  }
  const std::size_t total = sorted.size();
  std::vector<std::size_t> ranks(total);
  for (std::size_t pos = 0; pos < total; ++pos) ranks[sorted[pos]] = pos;
  std::set<ElementPair> succ = p.succ();
  for (std::size_t pos = 0; pos + 1 < total; ++pos) {
    if ((fresh[pos] || fresh[pos + 1]) && flag(rng)) succ.insert({sorted[pos], sorted[pos + 1]});
  }
  return LoStarPrefix(LinearOrderPrefix(std::move(ranks)), std::move(succ));
}

}  // namespace wildknot
