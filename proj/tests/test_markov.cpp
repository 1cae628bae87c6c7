#include <doctest.h>

#include <algorithm>

#include "adauction/gen.hpp"
#include "adauction/markov.hpp"
#include "adauction/oracles.hpp"
#include "test_instances.hpp"

using namespace adauction;
using testing_instances::three_ad_instance;

TEST_CASE("assignment value nests the continuation products") {
  const auto instance = three_ad_instance();
  CHECK(efficiency(instance, {1, 0}) == Rat(11, 5));  // $2 + .2 * $1
  CHECK(efficiency(instance, {0, 1}) == Rat(5, 2));   // $1 + .75 * $2
  CHECK(efficiency(instance, {2, 0}) == Rat(33, 20)); // $0.85 + .8 * $1
  CHECK(efficiency(instance, {}) == Rat(0));
  CHECK_THROWS(efficiency(instance, {0, 0}));
  CHECK_THROWS(efficiency(instance, {9}));
}

TEST_CASE("click probability multiplies continuations above") {
  const auto instance = three_ad_instance();
  CHECK(click_probability(instance, {0, 1}, 0) == Rat(1));
  CHECK(click_probability(instance, {0, 1}, 1) == Rat(3, 4));
  CHECK(click_probability(instance, {0, 1}, 2) == Rat(0));
  CHECK(click_probability(instance, {2, 0, 1}, 1) == Rat(4, 5) * Rat(3, 4));
}

TEST_CASE("adjusted order ranks 4.25, 4, 2.5") {
  const auto instance = three_ad_instance();
  CHECK(instance.adjusted_order() == std::vector<std::size_t>{2, 0, 1});
}

TEST_CASE("optimal assignments of the running example") {
  const auto instance = three_ad_instance();
  CHECK(optimal_assignment(instance, 2) == std::vector<std::size_t>{0, 1});
  CHECK(efficiency(instance, optimal_assignment(instance, 2)) == Rat(5, 2));
  CHECK(optimal_assignment(instance, 3) == std::vector<std::size_t>{2, 0, 1});
  CHECK(efficiency(instance, optimal_assignment(instance, 3)) == Rat(57, 20));
  CHECK(optimal_assignment(instance, 1) == std::vector<std::size_t>{1});  // top ecpm
}

TEST_CASE("take-or-skip matches exhaustive search and stays sorted") {
  SplitMix64 rng(131);
  for (int trial = 0; trial < 150; ++trial) {
    const auto instance = gen_markov_instance(rng.next(), 1 + rng.below(8));
    const std::size_t k = 1 + rng.below(4);
    const auto assignment = optimal_assignment(instance, k);
    const auto brute = brute_markov_opt(instance, k);
    CHECK(efficiency(instance, assignment) == brute.value);
    for (std::size_t i = 1; i < assignment.size(); ++i)
      CHECK(instance.adjusted_precedes(assignment[i - 1], assignment[i]));
  }
}

TEST_CASE("optimal set families") {
  const auto instance = three_ad_instance();
  const auto sets2 = all_optimal_sets(instance, 2);
  REQUIRE(sets2.size() == 1);
  CHECK(sets2[0] == std::vector<std::size_t>{0, 1});

  // identical bidders: every size-k subset ties
  const MarkovBidder clone{"c", Rat(1, 2), Rat(1, 2), Rat(2)};
  const MarkovInstance clones({clone, clone, clone, clone});
  CHECK(all_optimal_sets(clones, 2).size() == 6);

  // with positive ecpms and k >= n, the full set is among the optima
  SplitMix64 rng(137);
  for (int trial = 0; trial < 30; ++trial) {
    auto instance2 = gen_markov_instance(rng.next(), 1 + rng.below(4));
    std::vector<MarkovBidder> bs = instance2.bidders();
    for (auto& b : bs) {
      if (b.bid.is_zero()) b.bid = Rat(1, 10);
      if (b.ctr.is_zero()) b.ctr = Rat(1, 20);
    }
    const MarkovInstance positive(bs);
    const auto sets = all_optimal_sets(positive, positive.size());
    std::vector<std::size_t> all(positive.size());
    std::iota(all.begin(), all.end(), 0);
    CHECK(std::find(sets.begin(), sets.end(), all) != sets.end());
  }

  CHECK_THROWS(all_optimal_sets(gen_markov_instance(1, 13), 2));
}

TEST_CASE("optimal (j-1)-sets extend to optimal j-sets") {
  SplitMix64 rng(139);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.below(6);
    const auto instance = gen_markov_instance(rng.next(), n);
    const std::size_t kmax = std::min<std::size_t>(n, 4);
    for (std::size_t j = 1; j <= kmax; ++j) {
      const auto prev = all_optimal_sets(instance, j - 1);
      const auto next = all_optimal_sets(instance, j);
      for (const auto& s : prev) {
        const bool extended = std::any_of(next.begin(), next.end(), [&](const auto& sp) {
          return sp.size() > s.size() && std::includes(sp.begin(), sp.end(), s.begin(), s.end());
        });
        CHECK(extended);
      }
    }
  }
}

TEST_CASE("substitution by a dominating bidder never hurts") {
  const auto example = three_ad_instance();
  // bidder 3 (index 2) has higher a-ecpm but lower ecpm than bidder 1: the
  // swap precondition fails, which is exactly why top-k-by-a-ecpm is wrong.
  CHECK_THROWS(substitution_no_worse(example, {0, 1}, 0, 2));

  SplitMix64 rng(149);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 60; ++trial) {
    const auto instance = gen_markov_instance(rng.next(), 2 + rng.below(6));
    const std::size_t k = 1 + rng.below(3);
    const auto assignment = optimal_assignment(instance, k);
    for (std::size_t in : assignment) {
      for (std::size_t cand = 0; cand < instance.size(); ++cand) {
        if (std::find(assignment.begin(), assignment.end(), cand) != assignment.end()) continue;
        const auto& bi = instance.bidders()[in];
        const auto& bj = instance.bidders()[cand];
        const Rat one(1);
        const bool dominates_e = bj.ecpm() >= bi.ecpm();
        const bool dominates_a = bj.ecpm() * (one - bi.q) >= bi.ecpm() * (one - bj.q) ||
                                 (bj.q == one && bj.ecpm().sign() > 0);
        if (!dominates_e || !dominates_a) continue;
        CHECK(substitution_no_worse(instance, assignment, in, cand));
        ++checked;
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("identical substitute leaves the value unchanged") {
  const MarkovBidder b{"x", Rat(1, 2), Rat(1, 2), Rat(1)};
  const MarkovInstance twins({b, b});
  const auto assignment = optimal_assignment(twins, 1);
  REQUIRE(assignment.size() == 1);
  const std::size_t out = assignment[0] == 0 ? 1 : 0;
  CHECK(substitution_no_worse(twins, assignment, assignment[0], out));
  const std::vector<std::size_t> swapped{out};
  CHECK(efficiency(twins, swapped) == efficiency(twins, assignment));
}

TEST_CASE("externality prices") {
  // lone bidder pays nothing
  const MarkovInstance solo({MarkovBidder{"1", Rat(1, 2), Rat(1, 2), Rat(4)}});
  const auto solo_out = markov_vcg_outcome(solo, 1);
  CHECK(solo_out.payment[0] == Rat(0));

  // two identical bidders: winner covers the loser's forgone value
  const MarkovBidder b{"x", Rat(1, 2), Rat(1, 4), Rat(3)};
  const MarkovInstance twins({b, b});
  const auto twin_out = markov_vcg_outcome(twins, 1);
  REQUIRE(twin_out.assignment.size() == 1);
  const std::size_t winner = twin_out.assignment[0];
  CHECK(twin_out.payment[winner] == Rat(3, 2));        // e of the loser
  CHECK(twin_out.price_per_click[winner] == Rat(3));   // equals the rival bid

  // running example, two slots: payments match removal re-optimization
  const auto example = three_ad_instance();
  const auto out = markov_vcg_outcome(example, 2);
  CHECK(out.assignment == std::vector<std::size_t>{0, 1});
  CHECK(out.payment[0] == Rat(19, 20));   // 2.45 - 1.50
  CHECK(out.payment[1] == Rat(13, 20));   // 1.65 - 1.00
  CHECK(out.price_per_click[1] == Rat(13, 15));
  CHECK(out.payment[2] == Rat(0));

  // cross-check against brute-force removal on random instances
  SplitMix64 rng(151);
  for (int trial = 0; trial < 40; ++trial) {
    const auto instance = gen_markov_instance(rng.next(), 2 + rng.below(5));
    const std::size_t k = 1 + rng.below(3);
    const auto vcg = markov_vcg_outcome(instance, k);
    Rat reach(1);
    for (std::size_t idx : vcg.assignment) {
      std::vector<MarkovBidder> rest;
      for (std::size_t i = 0; i < instance.size(); ++i)
        if (i != idx) rest.push_back(instance.bidders()[i]);
      const Rat without = rest.empty() ? Rat(0) : brute_markov_opt(MarkovInstance(rest), k).value;
      const Rat others_with = vcg.value - reach * instance.bidders()[idx].ecpm();
      CHECK(vcg.payment[idx] == without - others_with);
      CHECK(vcg.payment[idx].sign() >= 0);
      reach *= instance.bidders()[idx].q;
    }
  }
}

TEST_CASE("position factors fall down the page") {
  SplitMix64 rng(157);
  for (int trial = 0; trial < 50; ++trial) {
    const auto instance = gen_markov_instance(rng.next(), 2 + rng.below(6));
    const auto order = instance.adjusted_order();
    Rat reach(1);
    Rat prev(1);
    for (std::size_t idx : order) {
      CHECK(reach <= prev);
      prev = reach;
      reach *= instance.bidders()[idx].q;
    }
  }
}

TEST_CASE("raising a bid never drops clicks or position") {
  SplitMix64 rng(163);
  for (int trial = 0; trial < 40; ++trial) {
    const auto base = gen_markov_instance(rng.next(), 2 + rng.below(5));
    const std::size_t k = 1 + rng.below(3);
    const std::size_t mover = rng.below(base.size());
    Rat prev_prob(-1);
    std::size_t prev_pos = base.size() + 1;
    bool first = true;
    for (int step = 1; step <= 12; ++step) {
      auto bs = base.bidders();
      bs[mover].bid = Rat(step, 4);
      const MarkovInstance swept(bs);
      const auto assignment = optimal_assignment(swept, k);
      const Rat prob = click_probability(swept, assignment, mover);
      const auto at = std::find(assignment.begin(), assignment.end(), mover);
      const std::size_t pos =
          at == assignment.end() ? swept.size() + 1
                                 : static_cast<std::size_t>(at - assignment.begin());
      if (!first) {
        CHECK(prob >= prev_prob);
        CHECK(pos <= prev_pos);
      }
      first = false;
      prev_prob = prob;
      prev_pos = pos;
    }
  }
}
