#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "cbpp/cbpp.hpp"
#include "fixtures.hpp"

using namespace cbpp;

namespace {

// every demand-bounded count vector with the given copy cap
std::vector<ItemMultiset> all_multisets(const Instance& inst, long long max_copies) {
  std::vector<ItemMultiset> out;
  std::vector<int> take(inst.items.size(), 0);
  while (true) {
    long long total = 0;
    for (std::size_t u = 0; u < take.size(); ++u) total += take[u];
    if (total > 0 && total <= max_copies) {
      ItemMultiset ms;
      for (std::size_t u = 0; u < take.size(); ++u)
        if (take[u] > 0) ms.add(inst.items[u].id, take[u]);
      out.push_back(ms);
    }
    std::size_t u = take.size();
    while (u > 0 && take[u - 1] == inst.items[u - 1].demand) take[--u] = 0;
    if (u == 0) break;
    ++take[u - 1];
  }
  return out;
}

std::vector<int> count_vector(const Instance& inst, const ItemMultiset& ms) {
  std::vector<int> v(inst.items.size(), 0);
  for (const auto& [id, c] : ms.counts) v[static_cast<std::size_t>(id - 1)] = c;
  return v;
}

}  // namespace

TEST_CASE("four feasibility characterizations agree", "[oracle]") {
  SplitMix64 rng(101);
  for (int round = 0; round < 60; ++round) {
    Instance inst = fixtures::random_instance(rng);
    for (const ItemMultiset& ms : all_multisets(inst, 9)) {
      bool by_delta = is_alternatable(ms, inst);
      bool by_majority = is_alternatable_majority(ms, inst);
      bool by_search = brute_force_alternatable(ms, inst);
      bool by_construction;
      try {
        PackingPattern pat = alternate(ms, inst);
        by_construction = true;
        REQUIRE(pat.alternation_ok(inst));
        REQUIRE(pat.multiset().counts == ms.counts);  // a true rearrangement
      } catch (const InfeasibleMultisetError&) {
        by_construction = false;
      }
      REQUIRE(by_delta == by_majority);
      REQUIRE(by_delta == by_search);
      REQUIRE(by_delta == by_construction);
    }
  }
}

TEST_CASE("pattern enumeration matches an independent sweep", "[oracle]") {
  Instance inst = fixtures::example();
  std::vector<ItemMultiset> pats = enumerate_patterns(inst);
  REQUIRE(pats.size() == 10);

  SplitMix64 rng(103);
  for (int round = 0; round < 40; ++round) {
    Instance rnd = fixtures::random_instance(rng);
    std::vector<ItemMultiset> got = enumerate_patterns(rnd);

    std::set<std::vector<int>> expect;
    for (const ItemMultiset& ms : all_multisets(rnd, rnd.total_copies()))
      if (ms.total_length(rnd) <= rnd.capacity && brute_force_alternatable(ms, rnd))
        expect.insert(count_vector(rnd, ms));

    std::set<std::vector<int>> have;
    for (const ItemMultiset& ms : got) have.insert(count_vector(rnd, ms));
    REQUIRE(have.size() == got.size());  // no duplicates
    REQUIRE(have == expect);
  }
}

TEST_CASE("exhaustive packing minima on pinned cases", "[oracle]") {
  // two copies of one color cannot share a bin
  Instance mono;
  mono.capacity = 4;
  mono.num_colors = 2;
  mono.items = {{1, 2, 2, 1}};
  Solution s1 = brute_force_opt(mono);
  REQUIRE(s1.num_bins() == 2);
  REQUIRE(fixtures::solution_ok(mono, s1));

  // two colors interleave into one bin
  Instance duo;
  duo.capacity = 4;
  duo.num_colors = 2;
  duo.items = {{1, 2, 1, 1}, {2, 2, 1, 2}};
  Solution s2 = brute_force_opt(duo);
  REQUIRE(s2.num_bins() == 1);
  REQUIRE(s2.bins[0].items == std::vector<int>{1, 2});

  Instance ex = fixtures::example();
  Solution s3 = brute_force_opt(ex);
  REQUIRE(s3.num_bins() == 3);
  REQUIRE(fixtures::solution_ok(ex, s3));

  REQUIRE(set_partition_opt(mono) == 2);
  REQUIRE(set_partition_opt(duo) == 1);
  REQUIRE(set_partition_opt(ex) == 3);
}

TEST_CASE("the two packing oracles agree on random instances", "[oracle]") {
  SplitMix64 rng(107);
  for (int round = 0; round < 60; ++round) {
    Instance inst = fixtures::random_instance(rng);
    Solution brute = brute_force_opt(inst);
    REQUIRE(fixtures::solution_ok(inst, brute));
    REQUIRE(set_partition_opt(inst) == brute.num_bins());
    REQUIRE(brute.num_bins() >= lower_bound(inst));
    REQUIRE(brute.num_bins() <= ff_heuristic(inst).num_bins());
  }
}

TEST_CASE("oracle guards are hard stops", "[oracle]") {
  Instance big;
  big.capacity = 20;
  big.num_colors = 2;
  big.items = {{1, 1, 13, 1}};
  ItemMultiset ten;
  ten.add(1, 10);
  REQUIRE_THROWS_AS(brute_force_alternatable(ten, big), GuardError);
  REQUIRE_THROWS_AS(brute_force_opt(big), GuardError);
  REQUIRE_THROWS_AS(set_partition_opt(big), GuardError);

  Instance vast;
  vast.capacity = 3;
  vast.num_colors = 2;
  vast.items = {{1, 1, 2000000, 1}};
  REQUIRE_THROWS_AS(enumerate_patterns(vast), GuardError);
}
