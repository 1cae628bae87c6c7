#pragma once

#include <cstdint>
#include <cstddef>

#include "adauction/io.hpp"

namespace adauction {

/// Deterministic 64-bit generator (splitmix64). Standard-library
/// distributions are not bit-stable across platforms, so sampling sticks to
/// integer arithmetic on this stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform value in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den);

 private:
  std::uint64_t state_;
};

SlotInstance gen_slot_instance(std::uint64_t seed, std::size_t bidders, std::size_t slots);

/// Like gen_slot_instance but with pairwise-distinct positive bids. The
/// price-setting mechanisms are truthful only in general position: when one
/// bidder's true value exactly equals a rival's bid, outbidding the rival by
/// a hair steals lexicographic priority at an unchanged price.
SlotInstance gen_slot_instance_distinct(std::uint64_t seed, std::size_t bidders,
                                        std::size_t slots);
MarkovInstance gen_markov_instance(std::uint64_t seed, std::size_t bidders);
io::BudgetInstance gen_budget_instance(std::uint64_t seed, std::size_t keywords,
                                       std::size_t queries);

/// Budgets-only variant: bids are irrelevant and set to zero.
SlotInstance gen_budget_only_slot_instance(std::uint64_t seed, std::size_t bidders,
                                           std::size_t slots);

io::Json slot_instance_to_json(const SlotInstance& instance, bool include_bids);
io::Json markov_instance_to_json(const MarkovInstance& instance, std::size_t k);
io::Json budget_instance_to_json(const io::BudgetInstance& instance);

}  // namespace adauction
