#include <doctest.h>

#include <algorithm>

#include "adauction/gen.hpp"
#include "adauction/oracles.hpp"
#include "test_instances.hpp"

using namespace adauction;
using namespace testing_instances;

TEST_CASE("grid candidates include the truth and rival nudges") {
  const DeviationGrid grid = DeviationGrid::standard();
  const auto bids = grid.bid_candidates(Rat(2), {Rat(1)});
  CHECK(std::find(bids.begin(), bids.end(), Rat(2)) != bids.end());
  CHECK(std::find(bids.begin(), bids.end(), Rat(101, 100)) != bids.end());
  CHECK(std::find(bids.begin(), bids.end(), Rat(99, 100)) != bids.end());
  CHECK(std::find(bids.begin(), bids.end(), Rat(0)) != bids.end());
  CHECK(std::is_sorted(bids.begin(), bids.end()));
  CHECK(std::adjacent_find(bids.begin(), bids.end()) == bids.end());

  const auto budgets = grid.budget_candidates(Rat(100));
  CHECK(budgets.size() == 8);
  CHECK(std::find(budgets.begin(), budgets.end(), Rat(100)) != budgets.end());

  DeviationGrid no_truth;
  no_truth.multipliers = {Rat(0), Rat(2)};
  CHECK_THROWS(slot_truthfulness_audit(SlotMechanism::PsSingle, ps_three_bidder_instance(), no_truth));
}

TEST_CASE("greedy first price is caught shading on the two-bidder example") {
  const auto deviations =
      slot_truthfulness_audit(SlotMechanism::GfpSingle, gfp_shading_instance(),
                              DeviationGrid::standard());
  REQUIRE(!deviations.empty());
  const auto hit = std::find_if(deviations.begin(), deviations.end(), [](const Deviation& d) {
    return d.bidder == 0 && d.declared_bid == Rat(101, 100) && d.declared_budget == Rat(100);
  });
  REQUIRE(hit != deviations.end());
  CHECK(hit->deviant_utility >= Rat(99));
  CHECK(hit->truthful_utility == Rat(50));
}

TEST_CASE("price-setting mechanisms audit clean on the worked examples") {
  const DeviationGrid grid = DeviationGrid::standard();
  CHECK(slot_truthfulness_audit(SlotMechanism::PsSingle, ps_three_bidder_instance(), grid).empty());
  CHECK(slot_truthfulness_audit(SlotMechanism::PsSingle, ps_threshold_instance(), grid).empty());
  CHECK(slot_truthfulness_audit(SlotMechanism::PsBudgetsOnly, budgets_only_instance(), grid).empty());
}

TEST_CASE("truthfulness holds in general position but not at exact bid ties") {
  const DeviationGrid grid = DeviationGrid::standard();

  // Distinct true bids: no profitable deviation exists.
  SplitMix64 rng(199);
  for (int trial = 0; trial < 30; ++trial) {
    const auto instance = gen_slot_instance_distinct(rng.next(), 2 + rng.below(3), 1 + rng.below(3));
    CHECK(slot_truthfulness_audit(SlotMechanism::PsGeneral, instance, grid).empty());
  }

  // At an exact tie, outbidding the equal rival by a grid step steals
  // lexicographic priority while the price stays capped at the rival's bid,
  // so the lex-second bidder escapes the threshold trim.
  const SlotInstance tied{{SlotBidder{"1", Rat(19, 20), Rat(187, 4), 0},
                           SlotBidder{"2", Rat(19, 20), Rat(79), 1}},
                          SlotSupply({Rat(95)})};
  const auto hits = slot_truthfulness_audit(SlotMechanism::PsSingle, tied, grid);
  REQUIRE(!hits.empty());
  CHECK(hits.front().bidder == 1);
  CHECK(hits.front().declared_bid > Rat(19, 20));
}

TEST_CASE("lone bidders have nothing to gain from the truthful mechanisms") {
  const DeviationGrid grid = DeviationGrid::standard();
  const SlotInstance solo{{SlotBidder{"1", Rat(2), Rat(100), 0}}, SlotSupply({Rat(120)})};
  CHECK(slot_truthfulness_audit(SlotMechanism::PsSingle, solo, grid).empty());
  CHECK(slot_truthfulness_audit(SlotMechanism::PsBudgetsOnly, solo, grid).empty());
  CHECK(slot_truthfulness_audit(SlotMechanism::PsGeneral, solo, grid).empty());
  const MarkovInstance msolo({MarkovBidder{"1", Rat(1, 2), Rat(1, 2), Rat(3)}});
  CHECK(markov_vcg_audit(msolo, 1, grid).empty());
}

TEST_CASE("parallel audit kernels match the serial reference") {
  const DeviationGrid grid = DeviationGrid::standard();
  SplitMix64 rng(211);
  for (int trial = 0; trial < 6; ++trial) {
    const auto instance = gen_slot_instance(rng.next(), 2 + rng.below(3), 1 + rng.below(3));
    for (const auto mech :
         {SlotMechanism::GfpMulti, SlotMechanism::PsBudgetsOnly, SlotMechanism::PsGeneral}) {
      const auto par = slot_truthfulness_audit(mech, instance, grid);
      const auto ser = slot_truthfulness_audit_serial(mech, instance, grid);
      REQUIRE(par.size() == ser.size());
      for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].bidder == ser[i].bidder);
        CHECK(par[i].declared_bid == ser[i].declared_bid);
        CHECK(par[i].declared_budget == ser[i].declared_budget);
        CHECK(par[i].deviant_utility == ser[i].deviant_utility);
      }
    }
    const auto m = gen_markov_instance(rng.next(), 2 + rng.below(3));
    const auto mpar = markov_vcg_audit(m, 2, grid);
    const auto mser = markov_vcg_audit_serial(m, 2, grid);
    REQUIRE(mpar.size() == mser.size());
    for (std::size_t i = 0; i < mpar.size(); ++i) {
      CHECK(mpar[i].bidder == mser[i].bidder);
      CHECK(mpar[i].declared_bid == mser[i].declared_bid);
    }
  }
}

TEST_CASE("revenue polytope search certifies the greedy") {
  CHECK(brute_slot_revenue_max(gfp_shading_instance().bidders, gfp_shading_instance().supply) ==
        Rat(150));

  const SlotInstance broke{{SlotBidder{"1", Rat(2), Rat(0), 0}, SlotBidder{"2", Rat(1), Rat(0), 1}},
                           SlotSupply({Rat(100)})};
  CHECK(brute_slot_revenue_max(broke.bidders, broke.supply) == Rat(0));

  auto rich = budgets_only_instance();
  for (auto& b : rich.bidders) b.bid = Rat(1000);
  CHECK(brute_slot_revenue_max(rich.bidders, rich.supply) == Rat(171));

  SplitMix64 rng(223);
  for (int trial = 0; trial < 40; ++trial) {
    const auto instance = gen_slot_instance(rng.next(), 2 + rng.below(3), 1 + rng.below(3));
    const SlotOutcome greedy = gfp_multi(instance.bidders, instance.supply);
    CHECK(greedy.revenue() == brute_slot_revenue_max(instance.bidders, instance.supply));
  }

  CHECK_THROWS(brute_slot_revenue_max(std::vector<SlotBidder>(5), SlotSupply({Rat(10)})));
}

TEST_CASE("ordered enumeration agrees with the recurrence") {
  const auto example = three_ad_instance();
  const auto brute2 = brute_markov_opt(example, 2);
  CHECK(brute2.value == Rat(5, 2));
  REQUIRE(brute2.assignments.size() == 1);
  CHECK(brute2.assignments[0] == std::vector<std::size_t>{0, 1});

  const MarkovInstance one({MarkovBidder{"1", Rat(1, 2), Rat(1, 2), Rat(2)}});
  CHECK(brute_markov_opt(one, 3).value == Rat(1));

  SplitMix64 rng(227);
  for (int trial = 0; trial < 30; ++trial) {
    const auto instance = gen_markov_instance(rng.next(), 6);
    const auto brute = brute_markov_opt(instance, 3);
    CHECK(brute.value == efficiency(instance, optimal_assignment(instance, 3)));
  }

  CHECK_THROWS(brute_markov_opt(gen_markov_instance(3, 9), 2));
  CHECK_THROWS(brute_markov_opt(gen_markov_instance(3, 4), 5));
}

TEST_CASE("keyword grid search on the two-query tradeoff") {
  Landscape x = build_landscape(QueryAuction({{Rat(1), Rat(1)}}));
  Landscape y = build_landscape(QueryAuction({{Rat(1), Rat(1)}, {Rat(1), Rat(1, 100)}}));
  const KeywordQueryGraph graph(
      {"u", "v"}, {QueryNode{"x", x, Rat(1)}, QueryNode{"y", y, Rat(1)}},
      {{0, 0}, {0, 1}, {1, 1}});
  const std::vector<std::vector<Rat>> grids{{Rat(0), Rat(1, 100), Rat(1)},
                                            {Rat(0), Rat(1, 100), Rat(1)}};
  CHECK(brute_budget_opt(graph, Rat(10), grids) == Rat(2));
  CHECK(brute_budget_opt(graph, Rat(0), grids) == Rat(0));
  // with a lean budget the bargain position is all that fits
  CHECK(brute_budget_opt(graph, Rat(1, 100), grids) == Rat(1));

  // single keyword, single query: matches the hull optimum at grid thresholds
  const Landscape t1 = build_landscape(four_slot_auction());
  const KeywordQueryGraph single({"k"}, {QueryNode{"q", t1, Rat(1)}}, {{0, 0}});
  std::vector<Rat> thresholds;
  const Landscape t1_hull = convex_hull(t1);
  for (const auto& pt : t1_hull.points()) thresholds.push_back(pt.min_bid);
  const Rat budget(1);
  const auto dist = best_distribution_for_budget(t1, budget);
  CHECK(brute_budget_opt(single, budget, {thresholds}) ==
        evaluate_distribution(t1, dist).second);

  CHECK_THROWS(brute_budget_opt(graph, Rat(1), {{Rat(0)}}));  // one grid per keyword
}

TEST_CASE("price-setting outcomes are near-equilibria of greedy first price") {
  const DeviationGrid grid = DeviationGrid::standard();

  {
    const auto instance = ps_three_bidder_instance();
    const SlotOutcome ps = ps_single(instance.bidders, instance.supply.clicks()[0]);
    const Rat eps = *min_positive_clicks(ps) / Rat(100);
    const Rat eta = gfp_profile_eta(instance, ps, eps);
    const auto profile = gfp_profile_from_ps(instance, ps, eta, false);
    CHECK(gfp_eps_nash_audit(instance, profile, grid, eps, false).empty());
    // the equilibrium profile realizes the price-setting clicks within eps
    const SlotOutcome realized = gfp_multi(profile, instance.supply);
    for (std::size_t i = 0; i < ps.bidders.size(); ++i)
      CHECK(abs(realized.bidders[i].clicks - ps.bidders[i].clicks) <= eps);
  }

  {
    const auto instance = budgets_only_instance();
    const SlotOutcome ps = ps_multi_budgets_only(instance.bidders, instance.supply);
    const Rat eps = *min_positive_clicks(ps) / Rat(100);
    const Rat eta = gfp_profile_eta(instance, ps, eps);
    const auto profile = gfp_profile_from_ps(instance, ps, eta, true);
    CHECK(gfp_eps_nash_audit(instance, profile, grid, eps, true).empty());
  }

  {
    // A zero-max-cpc bidder with spare budget must bid her true zero in the
    // profile; a tiny positive bid would scoop up the slack slot at a price
    // above her value.
    const SlotInstance instance{{SlotBidder{"1", Rat(7, 10), Rat(211, 4), 0},
                                 SlotBidder{"2", Rat(43, 20), Rat(0), 1},
                                 SlotBidder{"3", Rat(0), Rat(115, 2), 2}},
                                SlotSupply({Rat(74), Rat(59)})};
    const SlotOutcome ps = ps_general(instance.bidders, instance.supply);
    CHECK(ps.bidders[2].clicks == Rat(0));
    const Rat eps = *min_positive_clicks(ps) / Rat(100);
    const Rat eta = gfp_profile_eta(instance, ps, eps);
    const auto profile = gfp_profile_from_ps(instance, ps, eta, false);
    CHECK(profile[2].bid == Rat(0));
    const SlotOutcome realized = gfp_multi(profile, instance.supply);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(abs(realized.bidders[i].clicks - ps.bidders[i].clicks) <= eps);
    CHECK(gfp_eps_nash_audit(instance, profile, grid, eps, false).empty());
  }
}
