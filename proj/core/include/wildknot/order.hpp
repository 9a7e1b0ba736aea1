#pragma once

// Finite prefixes of countable linear orders on an initial segment of N,
// the canonical transform L -> 1 + L + 1 + 1 + Q, and the successor relation.

#include <cstddef>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace wildknot {

using ElementPair = std::pair<std::size_t, std::size_t>;

/// Elements 0..n-1; rank[i] is the position of element i in the order.
class LinearOrderPrefix {
 public:
  LinearOrderPrefix() = default;
  /// Throws InputError unless `ranks` is a permutation of 0..n-1.
  explicit LinearOrderPrefix(std::vector<std::size_t> ranks);

  std::size_t size() const { return rank_.size(); }
  const std::vector<std::size_t>& ranks() const { return rank_; }
  bool less(std::size_t a, std::size_t b) const { return rank_[a] < rank_[b]; }
  /// Elements listed from smallest to largest.
  std::vector<std::size_t> sorted_elements() const;

  friend bool operator==(const LinearOrderPrefix&, const LinearOrderPrefix&) = default;

 private:
  std::vector<std::size_t> rank_;
};

LinearOrderPrefix lo_from_ranks(std::vector<std::size_t> ranks);

/// An event where a previously adjacent pair (lower, upper) was separated by
/// `inserted` when the enumeration reached index `inserted`.
struct FlagRemoval {
  std::size_t lower;
  std::size_t upper;
  std::size_t inserted;

  friend bool operator==(const FlagRemoval&, const FlagRemoval&) = default;
};

/// Finite prefix of a structure (R, S) in LO*: element 0 is the minimum and
/// every flagged pair (a, b) has a < b with nothing enumerated in between.
class LoStarPrefix {
 public:
  LoStarPrefix() = default;
  /// Validates all invariants; throws InputError on violation.
  LoStarPrefix(LinearOrderPrefix order, std::set<ElementPair> succ,
               std::vector<FlagRemoval> removals = {});

  std::size_t size() const { return order_.size(); }
  const LinearOrderPrefix& order() const { return order_; }
  const std::vector<std::size_t>& ranks() const { return order_.ranks(); }
  const std::set<ElementPair>& succ() const { return succ_; }
  bool is_succ(std::size_t a, std::size_t b) const { return succ_.contains({a, b}); }
  /// Flag removals that happened while building this prefix (to_lostar only).
  const std::vector<FlagRemoval>& removals() const { return removals_; }

  /// Structure induced on elements 0..m-1 (m <= size()).
  LoStarPrefix restrict_to(std::size_t m) const;

  /// True iff P and Q coincide on 0..n as structures (R and S), the
  /// precondition for prefix stability of the embedding.
  friend bool agree_on_prefix(const LoStarPrefix& p, const LoStarPrefix& q, std::size_t n);

 private:
  LinearOrderPrefix order_;
  std::set<ElementPair> succ_;
  std::vector<FlagRemoval> removals_;
};

/// Block of 1 + L + 1 + 1 + Q that an enumerated element comes from.
enum class LoStarBlock { Bottom, Input, Top1, Top2, Rational };

struct LoStarElement {
  LoStarBlock block;
  std::size_t input_index = 0;  // for Input: the element of L
  long long dyadic_num = 0;     // for Rational: num / 2^dyadic_exp in (0, 1)
  int dyadic_exp = 0;
};

/// i-th dyadic rational of (0,1) by increasing denominator: 1/2, 1/4, 3/4, 1/8, ...
std::pair<long long, int> dyadic_at(std::size_t i);

/// Canonical enumeration of 1 + L + 1 + 1 + Q: index 0 is the bottom; then
/// rounds of (next element of L, any tops not yet emitted, next rational).
std::vector<LoStarElement> lostar_enumeration(const LinearOrderPrefix& l, std::size_t stage);

/// The first `stage` enumerated elements with order and adjacency flags; the
/// removal log lists every adjacency broken along the way. Throws if stage < |L|.
LoStarPrefix to_lostar(const LinearOrderPrefix& l, std::size_t stage);

/// Adjacent pairs (a, b), a < b, with nothing between among the prefix elements.
std::set<ElementPair> successor(const LinearOrderPrefix& order);
std::set<ElementPair> successor(const LoStarPrefix& p);

/// True iff some order isomorphism between P and Q also maps flags onto flags.
/// Throws InputError on size mismatch.
bool is_isomorphic(const LoStarPrefix& p, const LoStarPrefix& q);

/// Random prefix of n elements: element 0 at the bottom, the others in
/// uniformly random order, each adjacent pair flagged with probability flag_p.
LoStarPrefix random_lostar_prefix(std::size_t n, std::mt19937_64& rng, double flag_p = 0.5);

/// Adds `extra` elements to p without changing the structure on p's elements:
/// new elements never go below element 0 or between a flagged pair.
LoStarPrefix random_extension(const LoStarPrefix& p, std::size_t extra, std::mt19937_64& rng,
                              double flag_p = 0.5);

}  // namespace wildknot
