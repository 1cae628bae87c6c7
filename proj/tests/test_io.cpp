#include <doctest.h>


#include <set>
#include "adauction/gen.hpp"
#include "adauction/io.hpp"
#include "test_instances.hpp"

using namespace adauction;
namespace io = adauction::io;

TEST_CASE("numbers load from strings or integers, never from floats") {
  CHECK(io::rat_from_json(io::Json("2.60")) == Rat(13, 5));
  CHECK(io::rat_from_json(io::Json("500/21")) == Rat(500, 21));
  CHECK(io::rat_from_json(io::Json(7)) == Rat(7));
  CHECK_THROWS(io::rat_from_json(io::Json(2.6)));
  CHECK_THROWS(io::rat_from_json(io::Json(nullptr)));
}

TEST_CASE("number formatting honors the decimals switch") {
  io::NumberFormat exact;
  CHECK(exact(Rat(21, 25)) == "21/25");
  io::NumberFormat two{2};
  CHECK(two(Rat(21, 25)) == "0.84");
  CHECK(two(Rat(13, 5)) == "2.60");
}

TEST_CASE("query auction round-trips through its schema") {
  const auto json = io::Json::parse(R"({"positions": [
    {"ctr": "0.5", "bid": "2.60"}, {"ctr": "0.45", "bid": "2.00"},
    {"ctr": "0.25", "bid": "1.60"}, {"ctr": "0.2", "bid": "0.50"}]})");
  const QueryAuction auction = io::parse_query_auction(json);
  CHECK(auction.size() == 4);
  CHECK(auction.positions()[0].bid == Rat(13, 5));

  const auto back = io::query_auction_to_json(auction);
  const QueryAuction again = io::parse_query_auction(back);
  CHECK(again.positions()[3].ctr == Rat(1, 5));
  CHECK_THROWS(io::parse_query_auction(io::Json::parse(R"({"rows": []})")));
}

TEST_CASE("landscape table lists rows top first with hull flags") {
  const Landscape l = build_landscape(testing_instances::four_slot_auction());
  const auto rows = io::landscape_table(l, convex_hull(l), io::NumberFormat{2});
  REQUIRE(rows.size() == 5);
  CHECK(rows[0]["bid_min"] == "2.60");
  CHECK(rows[0]["cpc"] == "2.60");
  CHECK(rows[0]["cost"] == "1.30");
  CHECK(rows[0]["clicks"] == "0.50");
  CHECK(rows[0]["bid_max"].is_null());
  CHECK(rows[2]["cost"] == "0.40");
  CHECK(rows[2]["on_hull"] == false);
  CHECK(rows[4]["cost"] == "0.00");
}

TEST_CASE("budget instance schema") {
  const auto json = io::Json::parse(R"({
    "keywords": ["u", "v"],
    "queries": [
      {"id": "x", "landscape": {"positions": [{"ctr": "1", "bid": "1"}]}},
      {"id": "y", "landscape": {"positions": [{"ctr": "1", "bid": "1"},
                                              {"ctr": "1", "bid": "0.01"}]},
       "weight": "2"}],
    "edges": [["u", "x"], ["u", "y"], ["v", "y"]],
    "budget": "1.50"})");
  const io::BudgetInstance instance = io::parse_budget_instance(json);
  CHECK(instance.budget == Rat(3, 2));
  CHECK(instance.graph.keywords().size() == 2);
  CHECK(instance.graph.queries()[1].weight == Rat(2));
  // weighted clicks: position two of y is worth 2 clicks now
  CHECK(instance.graph.queries()[1].landscape.value_at(Rat(1, 100)).second == Rat(2));
  CHECK_THROWS(io::parse_budget_instance(io::Json::parse(
      R"({"keywords": [], "queries": [], "edges": [["u","x"]], "budget": "1"})")));
}

TEST_CASE("slot instance schema with true values and ctr scaling") {
  const auto json = io::Json::parse(R"({
    "bidders": [
      {"id": "a", "bid": "2", "budget": "100"},
      {"id": "b", "bid": "1", "budget": "50", "true_bid": "1.25", "true_budget": "60"},
      {"id": "c", "bid": "4", "budget": "80", "ctr": "0.5"}],
    "slots": ["120", "30"]})");
  const io::LoadedSlots loaded = io::parse_slot_instance(json);
  CHECK(!loaded.budgets_only);
  CHECK(loaded.declared[0].bid == Rat(2));
  CHECK(loaded.truthful[1].bid == Rat(5, 4));
  CHECK(loaded.truthful[1].budget == Rat(60));
  CHECK(loaded.declared[2].bid == Rat(2));  // 4 * 0.5, impression units
  CHECK(loaded.ctr[2] == Rat(1, 2));
  CHECK(loaded.supply.clicks()[0] == Rat(120));

  const auto budgets_only = io::parse_slot_instance(io::Json::parse(
      R"({"bidders": [{"id": "a", "budget": "10"}], "slots": ["5"]})"));
  CHECK(budgets_only.budgets_only);
}

TEST_CASE("slot outcome serialization unscales ctr bidders") {
  const auto json = io::Json::parse(R"({
    "bidders": [{"id": "a", "bid": "4", "budget": "100", "ctr": "0.5"}],
    "slots": ["50"]})");
  const io::LoadedSlots loaded = io::parse_slot_instance(json);
  const SlotOutcome outcome = gfp_multi(loaded.declared, loaded.supply);
  // scaled: bid' = 2, impressions = min(100/2, 50) = 50
  CHECK(outcome.bidders[0].clicks == Rat(50));
  const auto out = io::slot_outcome_to_json(outcome, loaded, io::NumberFormat{});
  CHECK(out["bidders"][0]["clicks"] == "25");  // 50 impressions * ctr
  CHECK(out["bidders"][0]["price"] == "4");    // 2 / ctr
  CHECK(out["bidders"][0]["spend"] == "100");
  CHECK(out["revenue"] == "100");
}

TEST_CASE("markov instance schema accepts both bidder forms") {
  const auto json = io::Json::parse(R"({
    "bidders": [
      {"id": "1", "e": "1", "q": "0.75"},
      {"id": "2", "ctr": "0.5", "q": "0.2", "bid": "4"}],
    "k": 2})");
  const io::LoadedMarkov loaded = io::parse_markov_instance(json);
  CHECK(loaded.k == 2);
  CHECK(loaded.instance.bidders()[0].ecpm() == Rat(1));
  CHECK(loaded.instance.bidders()[1].ecpm() == Rat(2));
  CHECK(loaded.instance.bidders()[1].ctr == Rat(1, 2));
}

TEST_CASE("generators reject empty shapes") {
  CHECK_THROWS(gen_slot_instance(1, 0, 2));
  CHECK_THROWS(gen_slot_instance(1, 2, 0));
  CHECK_THROWS(gen_markov_instance(1, 0));
  CHECK_THROWS(gen_budget_instance(1, 0, 2));
  CHECK_THROWS(aggregate_landscape({}));
}

TEST_CASE("generated instances are reproducible") {
  const auto a = gen_slot_instance(0, 3, 2);
  const auto b = gen_slot_instance(0, 3, 2);
  CHECK(slot_instance_to_json(a, true).dump(2) == slot_instance_to_json(b, true).dump(2));

  std::set<std::string> digests;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    digests.insert(slot_instance_to_json(gen_slot_instance(seed, 3, 2), true).dump());
  CHECK(digests.size() > 95);

  // generated budget instances survive the schema round trip
  const auto budget = gen_budget_instance(42, 3, 3);
  const auto round = io::parse_budget_instance(budget_instance_to_json(budget));
  CHECK(round.budget == budget.budget);
  REQUIRE(round.graph.queries().size() == budget.graph.queries().size());
  for (std::size_t q = 0; q < round.graph.queries().size(); ++q) {
    const auto& before = budget.graph.queries()[q].landscape;
    const auto& after = round.graph.queries()[q].landscape;
    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
      CHECK(before.points()[i].cost == after.points()[i].cost);
      CHECK(before.points()[i].clicks == after.points()[i].clicks);
    }
  }
}
