#include "adauction/slots.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace adauction {

bool bid_precedes(const SlotBidder& a, const SlotBidder& b) {
  if (a.bid != b.bid) return a.bid > b.bid;
  return a.lex_rank < b.lex_rank;
}

bool budget_precedes(const SlotBidder& a, const SlotBidder& b) {
  if (a.budget != b.budget) return a.budget > b.budget;
  return a.lex_rank < b.lex_rank;
}

Rat SlotOutcome::revenue() const {
  Rat total(0);
  for (const auto& r : bidders) total += r.spend();
  return total;
}

namespace {

SlotSupply pad_supply(const SlotSupply& supply, std::size_t count) {
  auto clicks = supply.clicks();
  while (clicks.size() < count) clicks.push_back(Rat(0));
  return SlotSupply(std::move(clicks));
}

/// Builds the schedule for a click allocation given by input index. Several
/// bidders may time-share one slot, so the supply is padded with zero slots
/// up to the number of positive grants.
Schedule schedule_allocation(const std::vector<Rat>& clicks, const SlotSupply& supply) {
  std::vector<std::size_t> order(clicks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return clicks[a] > clicks[b];
  });
  std::vector<Rat> sorted;
  sorted.reserve(order.size());
  for (std::size_t idx : order) sorted.push_back(clicks[idx]);
  while (!sorted.empty() && sorted.back().is_zero()) {
    sorted.pop_back();
    order.pop_back();
  }
  Schedule s = build_schedule(sorted, pad_supply(supply, sorted.size()));
  for (auto& e : s.entries) e.bidder = order[e.bidder];
  return s;
}

std::vector<SlotBidder> with_default_ranks(std::vector<SlotBidder> bidders) {
  bool all_zero = bidders.size() > 1;
  for (std::size_t i = 1; i < bidders.size(); ++i)
    if (bidders[i].lex_rank != 0) all_zero = false;
  if (all_zero)
    for (std::size_t i = 0; i < bidders.size(); ++i) bidders[i].lex_rank = i;
  return bidders;
}

}  // namespace

SlotOutcome gfp_single(const std::vector<SlotBidder>& bidders_in, const Rat& supply) {
  if (supply.sign() < 0) throw std::invalid_argument("negative click supply");
  const auto bidders = with_default_ranks(bidders_in);
  SlotOutcome out;
  out.bidders.resize(bidders.size());

  std::vector<std::size_t> order(bidders.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return bid_precedes(bidders[a], bidders[b]); });

  Rat remaining = supply;
  for (std::size_t idx : order) {
    const auto& b = bidders[idx];
    if (b.bid.is_zero() || remaining.is_zero()) continue;
    const Rat c = std::min(b.budget / b.bid, remaining);
    out.bidders[idx] = BidderResult{c, b.bid};
    remaining -= c;
  }

  std::vector<Rat> clicks;
  for (const auto& r : out.bidders) clicks.push_back(r.clicks);
  if (!supply.is_zero()) out.schedule = schedule_allocation(clicks, SlotSupply({supply}));
  return out;
}

SlotOutcome ps_single(const std::vector<SlotBidder>& bidders_in, const Rat& supply) {
  if (supply.sign() < 0) throw std::invalid_argument("negative click supply");
  auto bidders = with_default_ranks(bidders_in);
  if (bidders.size() == 1) {
    // The mechanism assumes competition; a lone bidder faces a zero dummy.
    bidders.push_back(SlotBidder{"", Rat(0), Rat(0), bidders[0].lex_rank + 1});
  }
  SlotOutcome out;
  out.bidders.resize(bidders_in.size());
  if (supply.is_zero()) return out;

  std::vector<std::size_t> order(bidders.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return bid_precedes(bidders[a], bidders[b]); });

  // First k with b_{k+1} <= (B_1 + ... + B_k) / D.
  Rat prefix(0);
  std::size_t k = order.size();
  Rat prefix_before_k(0);
  for (std::size_t t = 0; t < order.size(); ++t) {
    prefix_before_k = prefix;
    prefix += bidders[order[t]].budget;
    const Rat next_bid = t + 1 < order.size() ? bidders[order[t + 1]].bid : Rat(0);
    if (next_bid <= prefix / supply) {
      k = t;
      break;
    }
  }

  const Rat p = std::min(prefix / supply, bidders[order[k]].bid);
  if (p.is_zero()) return out;

  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t idx = order[t];
    if (idx < out.bidders.size()) out.bidders[idx] = BidderResult{bidders[idx].budget / p, p};
  }
  const Rat trimmed = p * supply - prefix_before_k;
  if (order[k] < out.bidders.size()) out.bidders[order[k]] = BidderResult{trimmed / p, p};

  PriceBlock block;
  block.price = p;
  for (std::size_t t = 0; t <= k; ++t)
    if (order[t] < bidders_in.size()) block.bidders.push_back(order[t]);
  block.first_slot = 0;
  block.slot_count = 1;
  out.blocks.push_back(std::move(block));

  std::vector<Rat> clicks;
  for (const auto& r : out.bidders) clicks.push_back(r.clicks);
  out.schedule = schedule_allocation(clicks, SlotSupply({supply}));
  return out;
}

namespace {

struct FpbResult {
  Rat price;
  std::size_t block_size = 0;  // largest argmax prefix
};

/// Prefix ratios sum(B)/sum(D) over budget-ranked bidders; returns the
/// maximal ratio and the largest prefix attaining it.
FpbResult find_price_block(const std::vector<const SlotBidder*>& by_budget,
                           const std::vector<Rat>& supply_prefix) {
  FpbResult best{Rat(0), 0};
  Rat budget_sum(0);
  for (std::size_t l = 0; l < by_budget.size(); ++l) {
    budget_sum += by_budget[l]->budget;
    if (supply_prefix[l].is_zero()) {
      // Zero supply prefix: only matters when budgets are zero too; the
      // caller handles the all-zero tail.
      continue;
    }
    const Rat r = budget_sum / supply_prefix[l];
    if (best.block_size == 0 || r >= best.price) {
      best.price = r;
      best.block_size = l + 1;
    }
  }
  return best;
}

std::vector<Rat> supply_prefixes(const SlotSupply& supply, std::size_t from, std::size_t count) {
  std::vector<Rat> out;
  Rat sum(0);
  for (std::size_t i = 0; i < count; ++i) {
    sum += from + i < supply.size() ? supply.clicks()[from + i] : Rat(0);
    out.push_back(sum);
  }
  return out;
}

void emit_zero_block(SlotOutcome& out, const std::vector<std::size_t>& pool,
                     std::size_t real_bidders, std::size_t slot_cursor, std::size_t real_slots) {
  PriceBlock block;
  block.price = Rat(0);
  for (std::size_t idx : pool)
    if (idx < real_bidders) block.bidders.push_back(idx);
  if (block.bidders.empty()) return;
  block.first_slot = std::min(slot_cursor, real_slots);
  block.slot_count = real_slots - block.first_slot;
  out.blocks.push_back(std::move(block));
}

}  // namespace

SlotOutcome ps_multi_budgets_only(const std::vector<SlotBidder>& bidders_in,
                                  const SlotSupply& supply_in) {
  auto bidders = with_default_ranks(bidders_in);
  const std::size_t real_bidders = bidders.size();
  const std::size_t real_slots = supply_in.size();
  std::size_t next_rank = 0;
  for (const auto& b : bidders) next_rank = std::max(next_rank, b.lex_rank + 1);
  while (bidders.size() < supply_in.size())
    bidders.push_back(SlotBidder{"", Rat(0), Rat(0), next_rank++});
  const SlotSupply supply = pad_supply(supply_in, bidders.size());

  SlotOutcome out;
  out.bidders.resize(real_bidders);

  std::vector<std::size_t> pool(bidders.size());
  std::iota(pool.begin(), pool.end(), 0);
  std::sort(pool.begin(), pool.end(),
            [&](std::size_t a, std::size_t b) { return budget_precedes(bidders[a], bidders[b]); });

  std::size_t slot_cursor = 0;
  std::vector<ScheduleEntry> entries;
  while (!pool.empty()) {
    if (slot_cursor >= supply.size() || supply.clicks()[slot_cursor].is_zero()) {
      emit_zero_block(out, pool, real_bidders, slot_cursor, real_slots);
      break;
    }
    std::vector<const SlotBidder*> by_budget;
    for (std::size_t idx : pool) by_budget.push_back(&bidders[idx]);
    const auto prefixes = supply_prefixes(supply, slot_cursor, pool.size());
    const FpbResult fpb = find_price_block(by_budget, prefixes);
    if (fpb.price.is_zero()) {
      emit_zero_block(out, pool, real_bidders, slot_cursor, real_slots);
      break;
    }

    PriceBlock block;
    block.price = fpb.price;
    block.first_slot = slot_cursor;
    block.slot_count = std::min(fpb.block_size, real_slots - std::min(real_slots, slot_cursor));
    std::vector<Rat> demands;
    for (std::size_t l = 0; l < fpb.block_size; ++l) {
      const std::size_t idx = pool[l];
      const Rat c = bidders[idx].budget / fpb.price;
      demands.push_back(c);
      if (idx < real_bidders) {
        out.bidders[idx] = BidderResult{c, fpb.price};
        block.bidders.push_back(idx);
      }
    }
    std::vector<Rat> block_supply;
    for (std::size_t l = 0; l < fpb.block_size; ++l)
      block_supply.push_back(slot_cursor + l < supply.size() ? supply.clicks()[slot_cursor + l]
                                                             : Rat(0));
    Schedule s = build_schedule(demands, SlotSupply(block_supply));
    for (auto& e : s.entries) {
      e.slot += slot_cursor;
      e.bidder = pool[e.bidder];
    }
    for (auto& e : s.entries)
      if (e.bidder < real_bidders) entries.push_back(e);
    out.blocks.push_back(std::move(block));

    pool.erase(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(fpb.block_size));
    slot_cursor += fpb.block_size;
  }

  out.schedule.entries = std::move(entries);
  return out;
}

namespace {

/// Largest reduced budget for the threshold bidder such that Find-Price-Block
/// on the active set yields exactly `target` as its price. Solved piecewise:
/// for each rank position the binding prefix gives a linear bound.
Rat reduce_threshold_budget(const std::vector<const SlotBidder*>& others_by_budget,
                            const SlotBidder& threshold, const std::vector<Rat>& supply_prefix,
                            const Rat& target) {
  const std::size_t m = others_by_budget.size();
  std::vector<Rat> other_prefix{Rat(0)};
  for (const auto* b : others_by_budget) other_prefix.push_back(other_prefix.back() + b->budget);

  std::optional<Rat> best;
  for (std::size_t pos = 0; pos <= m; ++pos) {
    // Ratios of prefixes that stop before the threshold bidder must already
    // sit at or below the target.
    bool ok = true;
    for (std::size_t l = 1; l <= pos; ++l) {
      if (!supply_prefix[l - 1].is_zero() && other_prefix[l] / supply_prefix[l - 1] > target) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;

    std::optional<Rat> bound;
    for (std::size_t l = pos + 1; l <= m + 1; ++l) {
      if (supply_prefix[l - 1].is_zero()) continue;
      const Rat limit = target * supply_prefix[l - 1] - other_prefix[l - 1];
      if (!bound || limit < *bound) bound = limit;
    }
    if (!bound) continue;
    Rat candidate = std::min(*bound, threshold.budget);
    if (candidate.sign() < 0) continue;

    // The candidate must actually rank at this position.
    SlotBidder probe = threshold;
    probe.budget = candidate;
    if (pos > 0 && !budget_precedes(*others_by_budget[pos - 1], probe)) continue;
    if (pos < m && !budget_precedes(probe, *others_by_budget[pos])) continue;

    if (!best || candidate > *best) best = candidate;
  }
  if (!best) throw std::logic_error("threshold budget reduction found no feasible value");
  return *best;
}

}  // namespace

SlotOutcome ps_general(const std::vector<SlotBidder>& bidders_in, const SlotSupply& supply_in) {
  auto bidders = with_default_ranks(bidders_in);
  const std::size_t real_bidders = bidders.size();
  const std::size_t real_slots = supply_in.size();
  std::size_t next_rank = 0;
  for (const auto& b : bidders) next_rank = std::max(next_rank, b.lex_rank + 1);
  while (bidders.size() < supply_in.size())
    bidders.push_back(SlotBidder{"", Rat(0), Rat(0), next_rank++});
  const SlotSupply supply = pad_supply(supply_in, bidders.size());

  SlotOutcome out;
  out.bidders.resize(real_bidders);

  std::vector<std::size_t> pool(bidders.size());
  std::iota(pool.begin(), pool.end(), 0);
  std::sort(pool.begin(), pool.end(),
            [&](std::size_t a, std::size_t b) { return bid_precedes(bidders[a], bidders[b]); });

  std::size_t slot_cursor = 0;
  std::vector<ScheduleEntry> entries;
  while (!pool.empty()) {
    if (slot_cursor >= supply.size() || supply.clicks()[slot_cursor].is_zero()) {
      emit_zero_block(out, pool, real_bidders, slot_cursor, real_slots);
      break;
    }
    const auto prefixes = supply_prefixes(supply, slot_cursor, pool.size());

    // Grow the active set in bid order until Find-Price-Block reaches the
    // next bid waiting outside.
    std::vector<std::size_t> active;
    Rat price(0);
    std::size_t threshold_idx = 0;
    for (std::size_t t = 0; t < pool.size(); ++t) {
      active.push_back(pool[t]);
      std::vector<const SlotBidder*> by_budget;
      for (std::size_t idx : active) by_budget.push_back(&bidders[idx]);
      std::sort(by_budget.begin(), by_budget.end(),
                [](const SlotBidder* a, const SlotBidder* b) { return budget_precedes(*a, *b); });
      price = find_price_block(by_budget, prefixes).price;
      const Rat next_bid = t + 1 < pool.size() ? bidders[pool[t + 1]].bid : Rat(0);
      threshold_idx = pool[t];
      if (price >= next_bid) break;
    }

    std::vector<SlotBidder> effective;  // active bidders, threshold possibly trimmed
    effective.reserve(active.size());
    for (std::size_t idx : active) effective.push_back(bidders[idx]);

    const Rat threshold_bid = bidders[threshold_idx].bid;
    if (price > threshold_bid) {
      std::vector<const SlotBidder*> others;
      for (auto& b : effective)
        if (b.lex_rank != bidders[threshold_idx].lex_rank) others.push_back(&b);
      std::sort(others.begin(), others.end(),
                [](const SlotBidder* a, const SlotBidder* b) { return budget_precedes(*a, *b); });
      const Rat trimmed =
          reduce_threshold_budget(others, bidders[threshold_idx], prefixes, threshold_bid);
      for (auto& b : effective)
        if (b.lex_rank == bidders[threshold_idx].lex_rank) b.budget = trimmed;
      price = threshold_bid;
    }

    if (price.is_zero()) {
      emit_zero_block(out, pool, real_bidders, slot_cursor, real_slots);
      break;
    }

    // Allocate the argmax prefix of the (effective-)budget-ranked actives.
    std::vector<std::size_t> act_order(active.size());
    std::iota(act_order.begin(), act_order.end(), 0);
    std::sort(act_order.begin(), act_order.end(), [&](std::size_t a, std::size_t b) {
      return budget_precedes(effective[a], effective[b]);
    });
    std::vector<const SlotBidder*> by_budget;
    for (std::size_t a : act_order) by_budget.push_back(&effective[a]);
    const FpbResult fpb = find_price_block(by_budget, prefixes);
    if (fpb.price != price)
      throw std::logic_error("price block does not match the descending-price target");

    PriceBlock block;
    block.price = price;
    block.first_slot = slot_cursor;
    block.slot_count = std::min(fpb.block_size, real_slots - std::min(real_slots, slot_cursor));
    std::vector<Rat> demands;
    std::vector<std::size_t> allocated;  // original indices
    for (std::size_t l = 0; l < fpb.block_size; ++l) {
      const std::size_t idx = active[act_order[l]];
      const Rat c = effective[act_order[l]].budget / price;
      demands.push_back(c);
      allocated.push_back(idx);
      if (idx < real_bidders) {
        out.bidders[idx] = BidderResult{c, price};
        block.bidders.push_back(idx);
      }
    }
    std::vector<Rat> block_supply;
    for (std::size_t l = 0; l < fpb.block_size; ++l)
      block_supply.push_back(slot_cursor + l < supply.size() ? supply.clicks()[slot_cursor + l]
                                                             : Rat(0));
    Schedule s = build_schedule(demands, SlotSupply(block_supply));
    for (auto& e : s.entries) {
      e.slot += slot_cursor;
      e.bidder = allocated[e.bidder];
    }
    for (auto& e : s.entries)
      if (e.bidder < real_bidders) entries.push_back(e);
    out.blocks.push_back(std::move(block));

    std::vector<std::size_t> next_pool;
    for (std::size_t idx : pool)
      if (std::find(allocated.begin(), allocated.end(), idx) == allocated.end())
        next_pool.push_back(idx);
    pool = std::move(next_pool);
    slot_cursor += fpb.block_size;
  }

  out.schedule.entries = std::move(entries);
  return out;
}

namespace {

/// Maximum clicks that can be granted on top of the existing sorted grants
/// without breaking any prefix-supply constraint.
Rat max_insertable(const std::vector<Rat>& grants_desc, const std::vector<Rat>& supply_prefix) {
  std::vector<Rat> pref{Rat(0)};
  for (const auto& g : grants_desc) pref.push_back(pref.back() + g);
  const std::size_t t = grants_desc.size();
  if (t + 1 > supply_prefix.size()) throw std::logic_error("grants exceed padded slot count");

  Rat best(0);
  for (std::size_t pos = 0; pos <= t; ++pos) {
    std::optional<Rat> bound;
    for (std::size_t l = pos + 1; l <= t + 1; ++l) {
      const Rat limit = supply_prefix[l - 1] - pref[l - 1];
      if (!bound || limit < *bound) bound = limit;
    }
    Rat candidate = *bound;
    if (pos > 0) candidate = std::min(candidate, grants_desc[pos - 1]);
    if (pos < t && candidate < grants_desc[pos]) continue;  // would not sort here
    if (candidate > best) best = candidate;
  }
  return best;
}

}  // namespace

SlotOutcome gfp_multi(const std::vector<SlotBidder>& bidders_in, const SlotSupply& supply_in) {
  const auto bidders = with_default_ranks(bidders_in);
  const SlotSupply supply = pad_supply(supply_in, std::max(bidders.size(), supply_in.size()));

  SlotOutcome out;
  out.bidders.resize(bidders.size());

  std::vector<std::size_t> order(bidders.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return bid_precedes(bidders[a], bidders[b]); });

  std::vector<Rat> prefixes;
  {
    Rat sum(0);
    for (const auto& d : supply.clicks()) {
      sum += d;
      prefixes.push_back(sum);
    }
  }

  std::vector<Rat> grants;  // sorted non-increasing
  for (std::size_t idx : order) {
    const auto& b = bidders[idx];
    if (b.bid.is_zero()) continue;
    const Rat room = max_insertable(grants, prefixes);
    const Rat c = std::min(b.budget / b.bid, room);
    if (c.is_zero()) continue;
    out.bidders[idx] = BidderResult{c, b.bid};
    grants.insert(std::upper_bound(grants.begin(), grants.end(), c, std::greater<Rat>()), c);
  }

  std::vector<Rat> clicks;
  for (const auto& r : out.bidders) clicks.push_back(r.clicks);
  out.schedule = schedule_allocation(clicks, supply);
  return out;
}

}  // namespace adauction
