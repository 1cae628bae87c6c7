#include "adauction/markov.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <stdexcept>

namespace adauction {

MarkovInstance::MarkovInstance(std::vector<MarkovBidder> bidders) : bidders_(std::move(bidders)) {
  const Rat one(1);
  for (const auto& b : bidders_) {
    if (b.ctr.sign() < 0 || b.ctr > one) throw std::invalid_argument("ctr outside [0,1]");
    if (b.q.sign() < 0 || b.q > one) throw std::invalid_argument("continuation outside [0,1]");
    if (b.bid.sign() < 0) throw std::invalid_argument("negative bid");
  }
}

bool MarkovInstance::adjusted_precedes(std::size_t a, std::size_t b) const {
  const auto& x = bidders_[a];
  const auto& y = bidders_[b];
  const Rat ex = x.ecpm(), ey = y.ecpm();
  const Rat one(1);
  const bool inf_x = x.q == one && ex.sign() > 0;
  const bool inf_y = y.q == one && ey.sign() > 0;
  if (inf_x != inf_y) return inf_x;
  if (!inf_x) {
    // e_x/(1-q_x) vs e_y/(1-q_y), cross-multiplied; q = 1 with e = 0 acts as 0.
    const Rat lhs = ex * (one - y.q);
    const Rat rhs = ey * (one - x.q);
    if (lhs != rhs) return lhs > rhs;
  }
  if (ex != ey) return ex > ey;
  return a < b;
}

std::vector<std::size_t> MarkovInstance::adjusted_order() const {
  std::vector<std::size_t> order(bidders_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [this](std::size_t a, std::size_t b) { return adjusted_precedes(a, b); });
  return order;
}

namespace {

void check_assignment(const MarkovInstance& instance, const std::vector<std::size_t>& assignment) {
  std::set<std::size_t> seen;
  for (std::size_t idx : assignment) {
    if (idx >= instance.size()) throw std::invalid_argument("assignment references unknown bidder");
    if (!seen.insert(idx).second) throw std::invalid_argument("assignment repeats a bidder");
  }
}

}  // namespace

Rat efficiency(const MarkovInstance& instance, const std::vector<std::size_t>& assignment) {
  check_assignment(instance, assignment);
  Rat value(0);
  Rat reach(1);
  for (std::size_t idx : assignment) {
    value += reach * instance.bidders()[idx].ecpm();
    reach *= instance.bidders()[idx].q;
  }
  return value;
}

Rat click_probability(const MarkovInstance& instance, const std::vector<std::size_t>& assignment,
                      std::size_t bidder) {
  check_assignment(instance, assignment);
  if (bidder >= instance.size()) throw std::invalid_argument("unknown bidder");
  Rat reach(1);
  for (std::size_t idx : assignment) {
    if (idx == bidder) return reach * instance.bidders()[idx].ctr;
    reach *= instance.bidders()[idx].q;
  }
  return Rat(0);
}

std::vector<std::size_t> optimal_assignment(const MarkovInstance& instance, std::size_t k) {
  if (k == 0) throw std::invalid_argument("need at least one slot");
  const auto order = instance.adjusted_order();
  const std::size_t n = order.size();
  const std::size_t slots = std::min(k, n);
  if (n == 0) return {};

  // value[i][j]: best value filling slots j.. from sorted ads i..
  std::vector<std::vector<Rat>> value(n + 1, std::vector<Rat>(slots + 1, Rat(0)));
  for (std::size_t i = n; i-- > 0;) {
    const auto& b = instance.bidders()[order[i]];
    for (std::size_t j = 0; j < slots; ++j) {
      const Rat take = b.ecpm() + b.q * value[i + 1][j + 1];
      const Rat skip = value[i + 1][j];
      value[i][j] = std::max(take, skip);
    }
  }

  std::vector<std::size_t> assignment;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n && j < slots; ++i) {
    const auto& b = instance.bidders()[order[i]];
    const Rat take = b.ecpm() + b.q * value[i + 1][j + 1];
    if (take > value[i + 1][j]) {
      assignment.push_back(order[i]);
      ++j;
    }
  }
  return assignment;
}

MarkovOutcome markov_vcg_outcome(const MarkovInstance& instance, std::size_t k) {
  MarkovOutcome out;
  out.assignment = optimal_assignment(instance, k);
  out.value = efficiency(instance, out.assignment);
  out.click_prob.assign(instance.size(), Rat(0));
  out.payment.assign(instance.size(), Rat(0));
  out.price_per_click.assign(instance.size(), Rat(0));

  Rat reach(1);
  std::vector<Rat> own_value(instance.size(), Rat(0));
  for (std::size_t idx : out.assignment) {
    const auto& b = instance.bidders()[idx];
    out.click_prob[idx] = reach * b.ctr;
    own_value[idx] = reach * b.ecpm();
    reach *= b.q;
  }

  for (std::size_t idx : out.assignment) {
    std::vector<MarkovBidder> rest;
    for (std::size_t i = 0; i < instance.size(); ++i)
      if (i != idx) rest.push_back(instance.bidders()[i]);
    Rat without(0);
    if (!rest.empty()) {
      const MarkovInstance sub{std::move(rest)};
      without = efficiency(sub, optimal_assignment(sub, k));
    }
    const Rat others_with = out.value - own_value[idx];
    const Rat payment = without - others_with;
    if (payment.sign() < 0) throw std::logic_error("negative externality payment");
    out.payment[idx] = payment;
    if (payment.sign() > 0) {
      if (out.click_prob[idx].is_zero())
        throw std::logic_error("positive payment with zero click probability");
      out.price_per_click[idx] = payment / out.click_prob[idx];
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> all_optimal_sets(const MarkovInstance& instance,
                                                       std::size_t k, std::size_t guard) {
  const std::size_t n = instance.size();
  if (n > guard) throw std::invalid_argument("instance too large for exhaustive set enumeration");
  const auto order = instance.adjusted_order();

  Rat best(0);
  std::vector<std::vector<std::size_t>> winners{{}};  // empty set attains 0
  for (std::size_t mask = 1; mask < (1u << n); ++mask) {
    if (std::popcount(mask) > static_cast<int>(k)) continue;
    std::vector<std::size_t> members;
    for (std::size_t i : order)
      if (mask & (1u << i)) members.push_back(i);
    const Rat v = efficiency(instance, members);
    std::sort(members.begin(), members.end());
    if (v > best) {
      best = v;
      winners.assign(1, members);
    } else if (v == best) {
      winners.push_back(members);
    }
  }
  return winners;
}

bool substitution_no_worse(const MarkovInstance& instance,
                           const std::vector<std::size_t>& assignment, std::size_t i_in,
                           std::size_t j_out) {
  check_assignment(instance, assignment);
  if (std::find(assignment.begin(), assignment.end(), i_in) == assignment.end())
    throw std::invalid_argument("i_in is not assigned");
  if (std::find(assignment.begin(), assignment.end(), j_out) != assignment.end())
    throw std::invalid_argument("j_out is already assigned");
  const auto& in = instance.bidders()[i_in];
  const auto& sub = instance.bidders()[j_out];
  const Rat one(1);
  const Rat a_cross_lhs = sub.ecpm() * (one - in.q);
  const Rat a_cross_rhs = in.ecpm() * (one - sub.q);
  const bool inf_sub = sub.q == one && sub.ecpm().sign() > 0;
  if (!inf_sub && a_cross_lhs < a_cross_rhs)
    throw std::invalid_argument("substitute has lower adjusted ecpm");
  if (sub.ecpm() < in.ecpm()) throw std::invalid_argument("substitute has lower ecpm");

  std::vector<std::size_t> members;
  for (std::size_t idx : assignment) members.push_back(idx == i_in ? j_out : idx);
  std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
    return instance.adjusted_precedes(a, b);
  });
  return efficiency(instance, members) >= efficiency(instance, assignment);
}

}  // namespace adauction
