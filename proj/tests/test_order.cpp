#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wildknot/errors.hpp"
#include "wildknot/order.hpp"

using namespace wildknot;

TEST_CASE("orders from ranks") {
  CHECK(lo_from_ranks({0, 1, 2}).sorted_elements() == std::vector<std::size_t>{0, 1, 2});
  CHECK(lo_from_ranks({1, 0}).sorted_elements() == std::vector<std::size_t>{1, 0});
  CHECK(lo_from_ranks({2, 0, 1}).sorted_elements() == std::vector<std::size_t>{1, 2, 0});
  CHECK_THROWS_AS(lo_from_ranks({0, 0}), InputError);
  CHECK_THROWS_AS(lo_from_ranks({0, 2}), InputError);
}

TEST_CASE("successor relation") {
  using S = std::set<ElementPair>;
  CHECK(successor(lo_from_ranks({0, 1, 2})) == S{{0, 1}, {1, 2}});
  CHECK(successor(lo_from_ranks({2, 0, 1})) == S{{1, 2}, {2, 0}});
}

TEST_CASE("successor pairs have nothing in between") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto p = random_lostar_prefix(1 + rng() % 20, rng);
    const auto& r = p.ranks();
    for (const auto& [a, b] : successor(p)) {
      CHECK(r[a] < r[b]);
      for (std::size_t c = 0; c < p.size(); ++c) CHECK_FALSE((r[a] < r[c] && r[c] < r[b]));
    }
  }
}

TEST_CASE("LO* prefixes reject invalid flags") {
  CHECK_THROWS_AS(LoStarPrefix(lo_from_ranks({1, 0}), {}), InputError);
  CHECK_THROWS_AS(LoStarPrefix(lo_from_ranks({0, 1, 2}), {{0, 2}}), InputError);
  CHECK_THROWS_AS(LoStarPrefix(lo_from_ranks({0, 1}), {{1, 0}}), InputError);
  CHECK_NOTHROW(LoStarPrefix(lo_from_ranks({0, 2, 1}), {{0, 2}, {2, 1}}));
}

TEST_CASE("canonical enumeration of 1 + L + 1 + 1 + Q") {
  const auto e = lostar_enumeration(LinearOrderPrefix{}, 4);
  REQUIRE(e.size() == 4);
  CHECK(e[0].block == LoStarBlock::Bottom);
  CHECK(e[1].block == LoStarBlock::Top1);
  CHECK(e[2].block == LoStarBlock::Top2);
  CHECK(e[3].block == LoStarBlock::Rational);
  CHECK(to_lostar(LinearOrderPrefix{}, 4).ranks()[0] == 0);

  CHECK(to_lostar(lo_from_ranks({0}), 2).is_succ(0, 1));

  CHECK(dyadic_at(0) == std::pair<long long, int>{1, 1});
  CHECK(dyadic_at(1) == std::pair<long long, int>{1, 2});
  CHECK(dyadic_at(2) == std::pair<long long, int>{3, 2});
  CHECK(dyadic_at(3) == std::pair<long long, int>{1, 3});
  CHECK(dyadic_at(6) == std::pair<long long, int>{7, 3});
}

TEST_CASE("to_lostar is prefix stable and keeps the bottom") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::size_t> r(rng() % 8);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = i;
    std::shuffle(r.begin(), r.end(), rng);
    const LinearOrderPrefix L(r);
    const std::size_t top = r.size() + 12;
    const auto big = to_lostar(L, top);
    for (std::size_t s = std::max<std::size_t>(r.size(), 1); s < top; ++s) {
      const auto small = to_lostar(L, s);
      CHECK(small.ranks() == big.restrict_to(s).ranks());
      CHECK(small.ranks()[0] == 0);
      // The largest element has no flagged successor above it.
      const auto sorted = small.order().sorted_elements();
      for (const auto& [a, b] : small.succ()) CHECK(a != sorted.back());
    }
  }
}

TEST_CASE("flag removals are logged when an adjacency breaks") {
  const auto p = to_lostar(lo_from_ranks({0, 1}), 10);
  for (const auto& rm : p.removals()) {
    CHECK(rm.inserted < 10);
    CHECK_FALSE(p.is_succ(rm.lower, rm.upper));
  }
}

TEST_CASE("isomorphism of LO* prefixes") {
  const LoStarPrefix chain(lo_from_ranks({0, 1, 2}), {{0, 1}, {1, 2}});
  const LoStarPrefix chain2(lo_from_ranks({0, 1, 2}), {{0, 1}});
  const LoStarPrefix relabel(lo_from_ranks({0, 2, 1}), {{0, 2}, {2, 1}});
  CHECK(is_isomorphic(chain, chain));
  CHECK_FALSE(is_isomorphic(chain, chain2));
  CHECK(is_isomorphic(chain, relabel));
  CHECK_THROWS_AS(is_isomorphic(chain, LoStarPrefix(lo_from_ranks({0, 1}), {})), InputError);
}

TEST_CASE("isomorphism agrees with brute force over bijections") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 6;
    const auto p = random_lostar_prefix(n, rng), q = random_lostar_prefix(n, rng);
    CHECK(is_isomorphic(p, q) == oracle::isomorphic(p.ranks(), p.succ(), q.ranks(), q.succ()));
  }
}

TEST_CASE("random extensions agree with their base") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 100; ++t) {
    const auto base = random_lostar_prefix(1 + rng() % 15, rng);
    const auto ext = random_extension(base, rng() % 10, rng);
    CHECK(agree_on_prefix(base, ext, base.size() - 1));
    CHECK(ext.restrict_to(base.size()).succ() == base.succ());
  }
}
