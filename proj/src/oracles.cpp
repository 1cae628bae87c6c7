#include "adauction/oracles.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>

#include "adauction/parallel.hpp"

namespace adauction {

DeviationGrid DeviationGrid::standard() {
  DeviationGrid g;
  g.multipliers = {Rat(0),     Rat(1, 4), Rat(1, 2), Rat(3, 4),
                   Rat(1),     Rat(5, 4), Rat(3, 2), Rat(2)};
  return g;
}

namespace {

void sort_unique(std::vector<Rat>& values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
}

void check_grid(const DeviationGrid& grid) {
  if (std::find(grid.multipliers.begin(), grid.multipliers.end(), Rat(1)) ==
      grid.multipliers.end())
    throw std::invalid_argument("deviation grid must contain the truthful multiplier 1");
}

}  // namespace

std::vector<Rat> DeviationGrid::bid_candidates(const Rat& truth,
                                               const std::vector<Rat>& competitor_bids) const {
  std::vector<Rat> out;
  for (const auto& m : multipliers) out.push_back(m * truth);
  for (const auto& v : competitor_bids) {
    out.push_back(v);
    out.push_back(v + step);
    if (v >= step) out.push_back(v - step);
  }
  out.push_back(Rat(0));
  sort_unique(out);
  return out;
}

std::vector<Rat> DeviationGrid::budget_candidates(const Rat& truth) const {
  std::vector<Rat> out;
  for (const auto& m : multipliers) out.push_back(m * truth);
  sort_unique(out);
  return out;
}

SlotOutcome run_mechanism(SlotMechanism mechanism, const std::vector<SlotBidder>& declared,
                          const SlotSupply& supply) {
  switch (mechanism) {
    case SlotMechanism::GfpSingle:
    case SlotMechanism::PsSingle:
      if (supply.size() != 1)
        throw std::invalid_argument("single-slot mechanism on multi-slot supply");
      return mechanism == SlotMechanism::GfpSingle ? gfp_single(declared, supply.clicks()[0])
                                                   : ps_single(declared, supply.clicks()[0]);
    case SlotMechanism::GfpMulti:
      return gfp_multi(declared, supply);
    case SlotMechanism::PsBudgetsOnly:
      return ps_multi_budgets_only(declared, supply);
    case SlotMechanism::PsGeneral:
      return ps_general(declared, supply);
  }
  throw std::logic_error("unknown mechanism");
}

namespace {

struct AuditTask {
  std::size_t bidder;
  Rat bid;
  Rat budget;
};

std::vector<Deviation> run_slot_audit(SlotMechanism mechanism, const SlotInstance& instance,
                                      const DeviationGrid& grid, bool parallel) {
  check_grid(grid);
  const bool budgets_only = mechanism == SlotMechanism::PsBudgetsOnly;
  const auto& bidders = instance.bidders;

  const SlotOutcome truthful = run_mechanism(mechanism, bidders, instance.supply);

  std::vector<AuditTask> tasks;
  for (std::size_t i = 0; i < bidders.size(); ++i) {
    std::vector<Rat> bids;
    if (budgets_only) {
      bids = {bidders[i].bid};
    } else {
      std::vector<Rat> rivals;
      for (std::size_t j = 0; j < bidders.size(); ++j)
        if (j != i) rivals.push_back(bidders[j].bid);
      bids = grid.bid_candidates(bidders[i].bid, rivals);
    }
    for (const auto& bid : bids) {
      for (const auto& budget : grid.budget_candidates(bidders[i].budget)) {
        if (bid == bidders[i].bid && budget == bidders[i].budget) continue;
        tasks.push_back(AuditTask{i, bid, budget});
      }
    }
  }

  std::vector<std::optional<Deviation>> hits(tasks.size());
  auto evaluate = [&](std::size_t t) {
    const AuditTask& task = tasks[t];
    auto declared = bidders;
    declared[task.bidder].bid = task.bid;
    declared[task.bidder].budget = task.budget;
    const SlotOutcome outcome = run_mechanism(mechanism, declared, instance.supply);
    const BidderResult& r = outcome.bidders[task.bidder];
    const bool price_ok = budgets_only || r.price <= bidders[task.bidder].bid;
    const bool budget_ok = r.spend() <= bidders[task.bidder].budget;
    if (!price_ok || !budget_ok) return;
    const Rat& baseline = truthful.bidders[task.bidder].clicks;
    if (r.clicks > baseline)
      hits[t] = Deviation{task.bidder, task.bid, task.budget, baseline, r.clicks};
  };

  if (parallel) {
    parallel_for(tasks.size(), evaluate);
  } else {
    for (std::size_t t = 0; t < tasks.size(); ++t) evaluate(t);
  }

  std::vector<Deviation> out;
  for (auto& h : hits)
    if (h) out.push_back(*h);
  return out;
}

}  // namespace

std::vector<Deviation> slot_truthfulness_audit(SlotMechanism mechanism,
                                               const SlotInstance& instance,
                                               const DeviationGrid& grid) {
  return run_slot_audit(mechanism, instance, grid, true);
}

std::vector<Deviation> slot_truthfulness_audit_serial(SlotMechanism mechanism,
                                                      const SlotInstance& instance,
                                                      const DeviationGrid& grid) {
  return run_slot_audit(mechanism, instance, grid, false);
}

namespace {

std::vector<Deviation> run_markov_audit(const MarkovInstance& instance, std::size_t k,
                                        const DeviationGrid& grid, bool parallel) {
  check_grid(grid);
  const MarkovOutcome truthful = markov_vcg_outcome(instance, k);
  const auto& bidders = instance.bidders();

  std::vector<Rat> truthful_utility(bidders.size());
  for (std::size_t i = 0; i < bidders.size(); ++i)
    truthful_utility[i] = bidders[i].bid * truthful.click_prob[i] - truthful.payment[i];

  std::vector<AuditTask> tasks;
  for (std::size_t i = 0; i < bidders.size(); ++i) {
    std::vector<Rat> rivals;
    for (std::size_t j = 0; j < bidders.size(); ++j)
      if (j != i) rivals.push_back(bidders[j].bid);
    for (const auto& bid : grid.bid_candidates(bidders[i].bid, rivals)) {
      if (bid == bidders[i].bid) continue;
      tasks.push_back(AuditTask{i, bid, Rat(0)});
    }
  }

  std::vector<std::optional<Deviation>> hits(tasks.size());
  auto evaluate = [&](std::size_t t) {
    const AuditTask& task = tasks[t];
    auto declared = bidders;
    declared[task.bidder].bid = task.bid;
    const MarkovOutcome outcome = markov_vcg_outcome(MarkovInstance(declared), k);
    const Rat utility = bidders[task.bidder].bid * outcome.click_prob[task.bidder] -
                        outcome.payment[task.bidder];
    if (utility > truthful_utility[task.bidder])
      hits[t] = Deviation{task.bidder, task.bid, Rat(0), truthful_utility[task.bidder], utility};
  };

  if (parallel) {
    parallel_for(tasks.size(), evaluate);
  } else {
    for (std::size_t t = 0; t < tasks.size(); ++t) evaluate(t);
  }

  std::vector<Deviation> out;
  for (auto& h : hits)
    if (h) out.push_back(*h);
  return out;
}

}  // namespace

std::vector<Deviation> markov_vcg_audit(const MarkovInstance& instance, std::size_t k,
                                        const DeviationGrid& grid) {
  return run_markov_audit(instance, k, grid, true);
}

std::vector<Deviation> markov_vcg_audit_serial(const MarkovInstance& instance, std::size_t k,
                                               const DeviationGrid& grid) {
  return run_markov_audit(instance, k, grid, false);
}

Rat brute_budget_opt(const KeywordQueryGraph& graph, const Rat& budget,
                     const std::vector<std::vector<Rat>>& keyword_grids) {
  if (graph.keywords().size() > 4)
    throw std::invalid_argument("keyword grid search capped at 4 keywords");
  if (keyword_grids.size() != graph.keywords().size())
    throw std::invalid_argument("one bid grid per keyword required");
  for (const auto& g : keyword_grids)
    if (g.empty() || g.size() > 8)
      throw std::invalid_argument("keyword grids must have 1 to 8 levels");

  // All grid vectors and their (spend, traffic).
  std::vector<std::pair<Rat, Rat>> outcomes;
  std::vector<std::size_t> pick(keyword_grids.size(), 0);
  while (true) {
    KeywordBidVector v;
    for (std::size_t i = 0; i < pick.size(); ++i) v.push_back(keyword_grids[i][pick[i]]);
    outcomes.push_back(spend_traffic(graph, v));
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == keyword_grids[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }

  // Pareto frontier by spend.
  std::sort(outcomes.begin(), outcomes.end());
  std::vector<std::pair<Rat, Rat>> frontier;
  for (const auto& o : outcomes) {
    if (!frontier.empty() && frontier.back().first == o.first) {
      frontier.back().second = std::max(frontier.back().second, o.second);
    } else if (frontier.empty() || o.second > frontier.back().second) {
      frontier.push_back(o);
    }
  }

  Rat best(0);
  for (const auto& [spend, traffic] : frontier) {
    if (spend <= budget) best = std::max(best, traffic);
  }
  // Pairwise mixes, spending the budget exactly across one cheap and one
  // expensive vector.
  for (std::size_t a = 0; a < frontier.size(); ++a) {
    for (std::size_t b = a + 1; b < frontier.size(); ++b) {
      const auto& [sa, ta] = frontier[a];
      const auto& [sb, tb] = frontier[b];
      if (sa > budget || sb <= budget) continue;
      const Rat w = (sb - budget) / (sb - sa);  // weight on the cheap vector
      best = std::max(best, w * ta + (Rat(1) - w) * tb);
    }
  }
  return best;
}

namespace {

/// Solves a square rational system by Gaussian elimination; empty when
/// singular.
std::optional<std::vector<Rat>> solve_square(std::vector<std::vector<Rat>> m,
                                             std::vector<Rat> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col].is_zero()) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(m[pivot], m[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || m[row][col].is_zero()) continue;
      const Rat f = m[row][col] / m[col][col];
      for (std::size_t c2 = col; c2 < n; ++c2) m[row][c2] -= f * m[col][c2];
      rhs[row] -= f * rhs[col];
    }
  }
  std::vector<Rat> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return x;
}

}  // namespace

Rat brute_slot_revenue_max(const std::vector<SlotBidder>& bidders, const SlotSupply& supply) {
  if (bidders.size() > 4)
    throw std::invalid_argument("revenue polytope enumeration capped at 4 bidders");

  std::vector<std::size_t> vars;  // bidders that can carry revenue
  for (std::size_t i = 0; i < bidders.size(); ++i)
    if (bidders[i].bid.sign() > 0) vars.push_back(i);
  const std::size_t n = vars.size();
  if (n == 0) return Rat(0);

  // Prefix supply sums, flat once slots run out.
  std::vector<Rat> prefix(n + 1, Rat(0));
  for (std::size_t l = 1; l <= n; ++l)
    prefix[l] = prefix[l - 1] + (l - 1 < supply.size() ? supply.clicks()[l - 1] : Rat(0));

  // Constraint rows a.x <= b: budget caps, nonnegativity, subset-prefix cuts.
  std::vector<std::vector<Rat>> rows;
  std::vector<Rat> bounds;
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<Rat> cap(n, Rat(0)), nonneg(n, Rat(0));
    cap[v] = Rat(1);
    nonneg[v] = Rat(-1);
    rows.push_back(cap);
    bounds.push_back(bidders[vars[v]].budget / bidders[vars[v]].bid);
    rows.push_back(nonneg);
    bounds.push_back(Rat(0));
  }
  for (std::size_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<Rat> row(n, Rat(0));
    std::size_t size = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (mask & (1u << v)) {
        row[v] = Rat(1);
        ++size;
      }
    }
    rows.push_back(row);
    bounds.push_back(prefix[size]);
  }

  const std::size_t m = rows.size();
  std::vector<std::size_t> combo(n);
  Rat best(0);

  auto feasible_point = [&](const std::vector<Rat>& x) {
    for (std::size_t r = 0; r < m; ++r) {
      Rat lhs(0);
      for (std::size_t v = 0; v < n; ++v) lhs += rows[r][v] * x[v];
      if (lhs > bounds[r]) return false;
    }
    return true;
  };

  // Every choice of n constraints that meets in a point is a candidate
  // vertex.
  std::function<void(std::size_t, std::size_t)> recurse = [&](std::size_t start,
                                                              std::size_t depth) {
    if (depth == n) {
      std::vector<std::vector<Rat>> mtx;
      std::vector<Rat> rhs;
      for (std::size_t d = 0; d < n; ++d) {
        mtx.push_back(rows[combo[d]]);
        rhs.push_back(bounds[combo[d]]);
      }
      if (auto x = solve_square(std::move(mtx), std::move(rhs)); x && feasible_point(*x)) {
        Rat revenue(0);
        for (std::size_t v = 0; v < n; ++v) revenue += bidders[vars[v]].bid * (*x)[v];
        best = std::max(best, revenue);
      }
      return;
    }
    for (std::size_t r = start; r < m; ++r) {
      combo[depth] = r;
      recurse(r + 1, depth + 1);
    }
  };
  recurse(0, 0);
  return best;
}

MarkovBrute brute_markov_opt(const MarkovInstance& instance, std::size_t k) {
  if (instance.size() > 8) throw std::invalid_argument("markov enumeration capped at 8 bidders");
  if (k > 4) throw std::invalid_argument("markov enumeration capped at 4 slots");

  MarkovBrute out;
  out.value = Rat(0);
  out.assignments = {{}};

  std::vector<std::size_t> current;
  std::vector<bool> used(instance.size(), false);
  std::function<void()> recurse = [&]() {
    if (!current.empty()) {
      const Rat v = efficiency(instance, current);
      if (v > out.value) {
        out.value = v;
        out.assignments.assign(1, current);
      } else if (v == out.value) {
        out.assignments.push_back(current);
      }
    }
    if (current.size() == std::min<std::size_t>(k, instance.size())) return;
    for (std::size_t i = 0; i < instance.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      current.push_back(i);
      recurse();
      current.pop_back();
      used[i] = false;
    }
  };
  recurse();
  return out;
}

std::optional<Rat> min_positive_clicks(const SlotOutcome& outcome) {
  std::optional<Rat> best;
  for (const auto& r : outcome.bidders) {
    if (r.clicks.sign() > 0 && (!best || r.clicks < *best)) best = r.clicks;
  }
  return best;
}

Rat gfp_profile_eta(const SlotInstance& instance, const SlotOutcome& ps_outcome, const Rat& eps) {
  Rat min_price(0);
  Rat min_gap(0);
  Rat prev(-1);
  bool first = true;
  for (const auto& block : ps_outcome.blocks) {
    if (block.price.sign() <= 0) continue;
    if (!first) {
      const Rat gap = prev - block.price;
      if (gap.sign() > 0 && (min_gap.is_zero() || gap < min_gap)) min_gap = gap;
    }
    min_price = block.price;  // blocks descend, so the last positive is least
    prev = block.price;
    first = false;
  }
  if (min_price.sign() <= 0) return Rat(1, 1000);
  if (min_gap.is_zero()) min_gap = min_price;

  Rat budget_max(1);
  for (const auto& b : instance.bidders) budget_max = std::max(budget_max, b.budget);
  const Rat n(static_cast<long>(instance.bidders.size() + 1));

  // Summed over all bidders, the per-bidder click drift B * n * eta / p^2
  // must stay within eps/2, hence the n^2 in the denominator.
  const Rat spacing_cap = min_gap / (Rat(2) * n);
  const Rat click_cap = eps * min_price * min_price / (Rat(2) * n * n * budget_max);
  return std::min(spacing_cap, click_cap);
}

std::vector<SlotBidder> gfp_profile_from_ps(const SlotInstance& instance,
                                            const SlotOutcome& ps_outcome, const Rat& eta,
                                            bool uncapped_bids) {
  auto profile = instance.bidders;
  const long total = static_cast<long>(instance.bidders.size());
  long rank = 0;
  for (const auto& block : ps_outcome.blocks) {
    for (std::size_t idx : block.bidders) {
      Rat bid = block.price + Rat(total - rank) * eta;
      if (!uncapped_bids) bid = std::min(bid, instance.bidders[idx].bid);
      profile[idx].bid = bid;
      ++rank;
    }
  }
  return profile;
}

std::vector<NashViolation> gfp_eps_nash_audit(const SlotInstance& truth,
                                              const std::vector<SlotBidder>& profile,
                                              const DeviationGrid& grid, const Rat& eps,
                                              bool uncapped_bids) {
  check_grid(grid);
  const SlotOutcome baseline = gfp_multi(profile, truth.supply);

  struct Task {
    std::size_t bidder;
    Rat bid;
    Rat budget;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    std::vector<Rat> rivals;
    for (std::size_t j = 0; j < profile.size(); ++j)
      if (j != i) rivals.push_back(profile[j].bid);
    const Rat base = uncapped_bids ? profile[i].bid : truth.bidders[i].bid;
    for (const auto& bid : grid.bid_candidates(base, rivals)) {
      for (const auto& budget : grid.budget_candidates(truth.bidders[i].budget)) {
        if (bid == profile[i].bid && budget == profile[i].budget) continue;
        tasks.push_back(Task{i, bid, budget});
      }
    }
  }

  std::vector<std::optional<NashViolation>> hits(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t t) {
    const Task& task = tasks[t];
    auto declared = profile;
    declared[task.bidder].bid = task.bid;
    declared[task.bidder].budget = task.budget;
    const SlotOutcome outcome = gfp_multi(declared, truth.supply);
    const BidderResult& r = outcome.bidders[task.bidder];
    const bool price_ok = uncapped_bids || r.price <= truth.bidders[task.bidder].bid;
    const bool budget_ok = r.spend() <= truth.bidders[task.bidder].budget;
    if (!price_ok || !budget_ok) return;
    const Rat& base = baseline.bidders[task.bidder].clicks;
    if (r.clicks > base + eps)
      hits[t] = NashViolation{task.bidder, task.bid, task.budget, base, r.clicks};
  });

  std::vector<NashViolation> out;
  for (auto& h : hits)
    if (h) out.push_back(*h);
  return out;
}

}  // namespace adauction
