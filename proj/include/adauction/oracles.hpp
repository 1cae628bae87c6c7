#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "adauction/budget.hpp"
#include "adauction/markov.hpp"
#include "adauction/rational.hpp"
#include "adauction/slots.hpp"

namespace adauction {

/// Finite deviation grid: multiplicative levels applied to a bidder's own
/// true value, plus absolute nudges around competitor values (for bids).
/// Always contains the truthful point.
struct DeviationGrid {
  std::vector<Rat> multipliers;
  Rat step{1, 100};

  static DeviationGrid standard();

  std::vector<Rat> bid_candidates(const Rat& truth, const std::vector<Rat>& competitor_bids) const;
  std::vector<Rat> budget_candidates(const Rat& truth) const;
};

struct SlotInstance {
  std::vector<SlotBidder> bidders;  // true values
  SlotSupply supply;
};

enum class SlotMechanism { GfpSingle, GfpMulti, PsSingle, PsBudgetsOnly, PsGeneral };

SlotOutcome run_mechanism(SlotMechanism mechanism, const std::vector<SlotBidder>& declared,
                          const SlotSupply& supply);

/// A deviation that strictly beats truthful reporting. Utilities are clicks
/// for the slot mechanisms and expected profit for the externality-priced
/// Markov auction.
struct Deviation {
  std::size_t bidder;
  Rat declared_bid;
  Rat declared_budget;
  Rat truthful_utility;
  Rat deviant_utility;
};

/// Tries every grid declaration for every bidder against the mechanism run
/// truthfully. Utility is clicks when the resulting price respects the true
/// max-cpc and budget, unboundedly bad otherwise. Budgets-only mechanisms
/// deviate only in the budget dimension and carry no price cap.
std::vector<Deviation> slot_truthfulness_audit(SlotMechanism mechanism,
                                               const SlotInstance& instance,
                                               const DeviationGrid& grid);

/// Single-threaded reference for the audit; the parallel kernel must match it
/// exactly.
std::vector<Deviation> slot_truthfulness_audit_serial(SlotMechanism mechanism,
                                                      const SlotInstance& instance,
                                                      const DeviationGrid& grid);

/// Bid deviations against the value-maximizing assignment with externality
/// prices, under the profit utility (value - price) * click probability.
std::vector<Deviation> markov_vcg_audit(const MarkovInstance& instance, std::size_t k,
                                        const DeviationGrid& grid);
std::vector<Deviation> markov_vcg_audit_serial(const MarkovInstance& instance, std::size_t k,
                                               const DeviationGrid& grid);

/// Exhaustive search over per-keyword bid grids and pairwise mixes of grid
/// vectors. Lower-bounds the true optimum of the budget problem.
Rat brute_budget_opt(const KeywordQueryGraph& graph, const Rat& budget,
                     const std::vector<std::vector<Rat>>& keyword_grids);

/// Maximum of sum(bid_i * clicks_i) over the click polytope cut out by budget
/// caps and prefix-supply constraints, by enumerating candidate vertices of
/// the constraint system. Guarded to four bidders.
Rat brute_slot_revenue_max(const std::vector<SlotBidder>& bidders, const SlotSupply& supply);

struct MarkovBrute {
  Rat value;
  std::vector<std::vector<std::size_t>> assignments;  // every ordered optimum
};

/// Exhaustive maximum over all ordered arrangements of at most k ads.
MarkovBrute brute_markov_opt(const MarkovInstance& instance, std::size_t k);

/// Bid profile under which greedy first-price reproduces a price-setting
/// outcome: allocated bidders bid their block price plus a rank-scaled
/// epsilon; everyone declares the true budget. Unless `uncapped_bids` (the
/// budgets-only setting), profile bids never exceed the bidder's true value.
std::vector<SlotBidder> gfp_profile_from_ps(const SlotInstance& instance,
                                            const SlotOutcome& ps_outcome, const Rat& eta,
                                            bool uncapped_bids);

/// Spacing parameter small enough that the profile perturbations stay below
/// the given click tolerance.
Rat gfp_profile_eta(const SlotInstance& instance, const SlotOutcome& ps_outcome, const Rat& eps);

/// Smallest positive click grant of an outcome, or nullopt when all zero.
std::optional<Rat> min_positive_clicks(const SlotOutcome& outcome);

struct NashViolation {
  std::size_t bidder;
  Rat declared_bid;
  Rat declared_budget;
  Rat baseline_clicks;
  Rat deviant_clicks;
};

/// Checks that no grid deviation from the profile improves any bidder's
/// clicks by more than eps under greedy first-price. Bid caps come from the
/// true instance; bidders without a finite cap pass `uncapped`.
std::vector<NashViolation> gfp_eps_nash_audit(const SlotInstance& truth,
                                              const std::vector<SlotBidder>& profile,
                                              const DeviationGrid& grid, const Rat& eps,
                                              bool uncapped_bids);

}  // namespace adauction
