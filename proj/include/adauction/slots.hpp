#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "adauction/rational.hpp"
#include "adauction/schedule.hpp"

namespace adauction {

/// A bidder in the slot auction: declared max cost-per-click and daily
/// budget. lex_rank breaks all ordering ties and defaults to input position.
struct SlotBidder {
  std::string id;
  Rat bid;
  Rat budget;
  std::size_t lex_rank = 0;
};

/// Bid order: higher bid first, lex rank breaking ties.
bool bid_precedes(const SlotBidder& a, const SlotBidder& b);
/// Budget order used inside price blocks: larger budget first, lex rank
/// breaking ties.
bool budget_precedes(const SlotBidder& a, const SlotBidder& b);

struct BidderResult {
  Rat clicks{0};
  Rat price{0};

  Rat spend() const { return clicks * price; }
};

/// One fixed-price block: the bidders (input indices) sharing the slots
/// [first_slot, first_slot + slot_count) at a common per-click price.
struct PriceBlock {
  Rat price;
  std::vector<std::size_t> bidders;
  std::size_t first_slot = 0;
  std::size_t slot_count = 0;
};

struct SlotOutcome {
  std::vector<BidderResult> bidders;  // indexed like the input
  std::vector<PriceBlock> blocks;     // empty for first-price mechanisms
  Schedule schedule;                  // bidder field = input index

  Rat revenue() const;
};

/// Greedy first-price, one slot of D clicks: highest bidder first, each takes
/// min(budget/bid, what is left) at her own bid. Zero bids get nothing.
SlotOutcome gfp_single(const std::vector<SlotBidder>& bidders, const Rat& supply);

/// Price-setting mechanism, one slot: price descends until the bidders who
/// qualify at that price can pay for all of the clicks; the marginal bidder's
/// budget is trimmed so the clicks are paid for exactly.
SlotOutcome ps_single(const std::vector<SlotBidder>& bidders, const Rat& supply);

/// Price-setting mechanism, multiple slots, budgets only (bids are ignored):
/// repeatedly find the prefix of budget-ranked bidders maximizing
/// sum(B)/sum(D), allocate it as one price block, and recurse on the rest.
SlotOutcome ps_multi_budgets_only(const std::vector<SlotBidder>& bidders, const SlotSupply& supply);

/// Price-setting mechanism, general case: bidders activate in bid order as
/// the price descends; blocks form when the active budgets fit a slot prefix
/// tightly, trimming the newest ("threshold") bidder's budget whenever her
/// arrival overshoots her own bid.
SlotOutcome ps_general(const std::vector<SlotBidder>& bidders, const SlotSupply& supply);

/// Greedy first-price over multiple slots: in bid order, each bidder gets the
/// maximum clicks compatible with her budget cap and with the prefix
/// feasibility of everything granted so far, at her own bid.
SlotOutcome gfp_multi(const std::vector<SlotBidder>& bidders, const SlotSupply& supply);

}  // namespace adauction
