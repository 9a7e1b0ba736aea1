#pragma once

// Exact-rational inductive embedding of an LO* prefix into [0, 1]: a point
// f(m) for every element and an open interval V_m centred on it, such that
// intervals are disjoint, order is preserved and two intervals share an
// endpoint exactly when the elements are flagged successors.

#include <cstddef>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "wildknot/order.hpp"

namespace wildknot {

using Rational = mpq_class;

struct RatInterval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
};

struct EmbeddingState {
  LoStarPrefix order;
  std::vector<Rational> f;        // f(m), m < f.size()
  std::vector<RatInterval> V;     // V_m

  std::size_t size() const { return f.size(); }
  /// U_m: concentric with V_m, half its radius.
  RatInterval U(std::size_t m) const;
};

/// Runs the two-case induction on elements 0..n-1 of `p`. Throws InputError
/// when n > p.size() or the prefix is not a valid LO* prefix.
EmbeddingState embed_prefix(const LoStarPrefix& p, std::size_t n);

struct EmbeddingReport {
  bool disjoint_and_centred = true;  // intervals pairwise disjoint, f(m) the midpoint
  bool successor_contact = true;     // sup V_a == inf V_b  <=>  a < b and (a, b) flagged
  bool order_preserved = true;       // f(a) < f(b)  <=>  a < b
  bool inside_unit = true;           // 0 <= inf V, sup V < 1
  Rational covered_measure;          // measure of the union of the V_m
  Rational largest_gap;              // largest component of [0,1] minus the union
  std::vector<std::string> failures;

  bool ok() const {
    return disjoint_and_centred && successor_contact && order_preserved && inside_unit;
  }
};

EmbeddingReport verify_embedding(const EmbeddingState& state);

/// True iff embed_prefix agrees exactly on f(m), V_m for m <= n. Throws
/// InputError when P and Q do not agree on 0..n.
bool verify_prefix_stability(const LoStarPrefix& p, const LoStarPrefix& q, std::size_t n);

}  // namespace wildknot
