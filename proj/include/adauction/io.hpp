#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "adauction/budget.hpp"
#include "adauction/landscape.hpp"
#include "adauction/markov.hpp"
#include "adauction/oracles.hpp"
#include "adauction/slots.hpp"

namespace adauction::io {

using Json = nlohmann::ordered_json;

/// Numbers in instance files are decimal strings ("2.60"), fraction strings
/// ("13/5"), or JSON integers; anything else is rejected so no value ever
/// passes through floating point.
Rat rat_from_json(const Json& j);

/// Renders rationals exactly ("num/den") by default, or as fixed-point
/// decimals when a precision is set.
struct NumberFormat {
  std::optional<int> decimals;

  std::string operator()(const Rat& r) const;
};

QueryAuction parse_query_auction(const Json& j);
Json query_auction_to_json(const QueryAuction& auction);

struct BudgetInstance {
  KeywordQueryGraph graph;
  Rat budget;
};
BudgetInstance parse_budget_instance(const Json& j);

struct LoadedSlots {
  std::vector<SlotBidder> declared;  // bids pre-scaled by bidder ctr
  std::vector<SlotBidder> truthful;  // true values, same scaling
  std::vector<Rat> ctr;              // per-bidder scaling factor
  bool budgets_only;                 // no bid fields in the file
  SlotSupply supply;
};
LoadedSlots parse_slot_instance(const Json& j);

struct LoadedMarkov {
  MarkovInstance instance;
  std::size_t k;
};
LoadedMarkov parse_markov_instance(const Json& j);

/// Landscape rows top-first, matching the usual table layout.
Json landscape_table(const Landscape& landscape, const Landscape& hull, const NumberFormat& fmt);

Json strategy_to_json(const UniformStrategy& strategy, const NumberFormat& fmt);
Json knapsack_to_json(const KnapsackOpt& opt, const NumberFormat& fmt);

/// Slot outcome with clicks and prices unscaled back through the bidder ctrs.
Json slot_outcome_to_json(const SlotOutcome& outcome, const LoadedSlots& loaded,
                          const NumberFormat& fmt);

Json markov_outcome_to_json(const MarkovOutcome& outcome, const MarkovInstance& instance,
                            const NumberFormat& fmt);

Json deviations_to_json(const std::vector<Deviation>& deviations,
                        const std::vector<std::string>& bidder_ids, const NumberFormat& fmt);

}  // namespace adauction::io
