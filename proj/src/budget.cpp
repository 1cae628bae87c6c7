#include "adauction/budget.hpp"

#include <algorithm>
#include <stdexcept>

namespace adauction {

KeywordQueryGraph::KeywordQueryGraph(std::vector<std::string> keywords,
                                     std::vector<QueryNode> queries,
                                     std::vector<std::pair<std::size_t, std::size_t>> edges)
    : keywords_(std::move(keywords)), queries_(std::move(queries)), edges_(std::move(edges)) {
  by_query_.resize(queries_.size());
  for (const auto& [k, q] : edges_) {
    if (k >= keywords_.size()) throw std::invalid_argument("edge references unknown keyword");
    if (q >= queries_.size()) throw std::invalid_argument("edge references unknown query");
    by_query_[q].push_back(k);
  }
}

const std::vector<std::size_t>& KeywordQueryGraph::keywords_of_query(std::size_t q) const {
  if (q >= queries_.size()) throw std::invalid_argument("unknown query index");
  return by_query_[q];
}

Rat effective_bid(const KeywordQueryGraph& graph, const KeywordBidVector& bids, std::size_t query) {
  if (bids.size() != graph.keywords().size())
    throw std::invalid_argument("bid vector size must match keyword count");
  Rat best(0);
  for (std::size_t k : graph.keywords_of_query(query)) {
    if (bids[k].sign() < 0) throw std::invalid_argument("negative keyword bid");
    best = std::max(best, bids[k]);
  }
  return best;
}

std::pair<Rat, Rat> spend_traffic(const KeywordQueryGraph& graph, const KeywordBidVector& bids) {
  Rat spend(0), traffic(0);
  for (std::size_t q = 0; q < graph.queries().size(); ++q) {
    // A query with no matching keyword is never entered, even when its
    // bottom position would accept a zero bid.
    if (graph.keywords_of_query(q).empty()) continue;
    auto [cost, clicks] = graph.queries()[q].landscape.value_at(effective_bid(graph, bids, q));
    spend += cost;
    traffic += clicks;
  }
  return {spend, traffic};
}

namespace {

struct KnapsackItem {
  Rat dcost;
  Rat dclicks;
  std::size_t query;
  std::size_t segment;  // index of the lower hull point

  Rat cpc() const { return dcost / dclicks; }
};

}  // namespace

KnapsackOpt per_query_knapsack_opt(const std::vector<Landscape>& landscapes, const Rat& budget) {
  if (budget.sign() < 0) throw std::invalid_argument("negative budget");

  std::vector<Landscape> hulls;
  hulls.reserve(landscapes.size());
  for (const auto& l : landscapes) hulls.push_back(convex_hull(l));

  Rat traffic(0);
  std::vector<KnapsackItem> items;
  for (std::size_t q = 0; q < hulls.size(); ++q) {
    const auto& pts = hulls[q].points();
    traffic += pts.front().clicks;  // attainable at bid 0, free
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
      const Rat dclicks = pts[s + 1].clicks - pts[s].clicks;
      if (dclicks.is_zero()) continue;  // pure cost, never worth taking
      items.push_back(KnapsackItem{pts[s + 1].cost - pts[s].cost, dclicks, q, s});
    }
  }

  std::stable_sort(items.begin(), items.end(), [](const KnapsackItem& a, const KnapsackItem& b) {
    const Rat ca = a.cpc(), cb = b.cpc();
    if (ca != cb) return ca < cb;
    return a.dclicks > b.dclicks;
  });

  // reached[q]: index of the highest fully-taken hull point; fraction[q]: how
  // far into the next segment the budget reaches.
  std::vector<std::size_t> reached(hulls.size(), 0);
  std::vector<Rat> fraction(hulls.size(), Rat(0));
  Rat spend(0);
  Rat remaining = budget;
  for (const auto& item : items) {
    if (remaining.is_zero()) break;
    if (item.dcost <= remaining) {
      remaining -= item.dcost;
      spend += item.dcost;
      traffic += item.dclicks;
      reached[item.query] = item.segment + 1;
      fraction[item.query] = Rat(0);
    } else {
      const Rat f = remaining / item.dcost;
      spend += remaining;
      traffic += f * item.dclicks;
      reached[item.query] = item.segment;
      fraction[item.query] = f;
      remaining = Rat(0);
      break;
    }
  }

  std::vector<BidDistribution> dists;
  dists.reserve(hulls.size());
  for (std::size_t q = 0; q < hulls.size(); ++q) {
    const auto& pts = hulls[q].points();
    if (fraction[q].is_zero()) {
      dists.push_back(BidDistribution::point_mass(pts[reached[q]].min_bid));
    } else {
      dists.push_back(BidDistribution({BidAtom{pts[reached[q]].min_bid, Rat(1) - fraction[q]},
                                       BidAtom{pts[reached[q] + 1].min_bid, fraction[q]}}));
    }
  }
  return KnapsackOpt{traffic, spend, std::move(dists)};
}

Landscape aggregate_landscape(const std::vector<Landscape>& landscapes) {
  if (landscapes.empty()) throw std::invalid_argument("aggregate of zero landscapes");

  std::vector<Rat> thresholds;
  for (const auto& l : landscapes)
    for (const auto& pt : l.points()) thresholds.push_back(pt.min_bid);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  std::vector<LandscapePoint> points;
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    Rat cost(0), clicks(0);
    for (const auto& l : landscapes) {
      auto [c, k] = l.value_at(thresholds[t]);
      cost += c;
      clicks += k;
    }
    std::optional<Rat> upper;
    if (t + 1 < thresholds.size()) upper = thresholds[t + 1];
    if (!points.empty() && points.back().cost == cost && points.back().clicks == clicks) {
      points.back().max_bid = upper;
    } else {
      points.push_back(LandscapePoint{cost, clicks, thresholds[t], upper});
    }
  }
  return Landscape(std::move(points));
}

namespace {

std::vector<const Landscape*> reachable_landscapes(const KeywordQueryGraph& graph) {
  std::vector<const Landscape*> out;
  for (std::size_t q = 0; q < graph.queries().size(); ++q) {
    if (!graph.keywords_of_query(q).empty()) out.push_back(&graph.queries()[q].landscape);
  }
  return out;
}

std::pair<Rat, Rat> strategy_spend_traffic(const KeywordQueryGraph& graph,
                                           const BidDistribution& dist) {
  Rat spend(0), traffic(0);
  for (const auto& atom : dist.atoms()) {
    KeywordBidVector uniform(graph.keywords().size(), atom.bid);
    auto [s, t] = spend_traffic(graph, uniform);
    spend += atom.weight * s;
    traffic += atom.weight * t;
  }
  return {spend, traffic};
}

UniformStrategy finish_strategy(const KeywordQueryGraph& graph, StrategyKind kind,
                                BidDistribution dist) {
  auto [spend, traffic] = strategy_spend_traffic(graph, dist);
  return UniformStrategy{kind, std::move(dist), spend, traffic};
}

}  // namespace

UniformStrategy best_uniform_two_bid(const KeywordQueryGraph& graph, const Rat& budget) {
  if (budget.sign() < 0) throw std::invalid_argument("negative budget");
  auto reachable = reachable_landscapes(graph);
  if (reachable.empty())
    return finish_strategy(graph, StrategyKind::TwoBid, BidDistribution::point_mass(Rat(0)));

  std::vector<Landscape> ls;
  ls.reserve(reachable.size());
  for (const auto* l : reachable) ls.push_back(*l);
  const Landscape agg = aggregate_landscape(ls);
  return finish_strategy(graph, StrategyKind::TwoBid, best_distribution_for_budget(agg, budget));
}

UniformStrategy best_uniform_single_bid(const KeywordQueryGraph& graph, const Rat& budget) {
  if (budget.sign() < 0) throw std::invalid_argument("negative budget");
  auto reachable = reachable_landscapes(graph);
  if (reachable.empty())
    return finish_strategy(graph, StrategyKind::SingleBid, BidDistribution::point_mass(Rat(0)));

  std::vector<Landscape> ls;
  ls.reserve(reachable.size());
  for (const auto* l : reachable) ls.push_back(*l);
  const Landscape agg = aggregate_landscape(ls);
  const auto& pts = agg.points();

  // Candidate (i): the most expensive point still within budget.
  std::size_t within = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].cost <= budget) within = i;
  }
  const Rat clicks_within = pts[within].clicks;

  // Candidate (ii): mix of zero and the cheapest point beyond budget.
  std::optional<std::size_t> beyond;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].cost > budget) {
      beyond = i;
      break;
    }
  }

  if (beyond.has_value()) {
    const Rat w = budget / pts[*beyond].cost;
    const Rat clicks_mix = w * pts[*beyond].clicks + (Rat(1) - w) * pts.front().clicks;
    if (clicks_mix > clicks_within) {
      BidDistribution mix = w.is_zero()
                                ? BidDistribution::point_mass(Rat(0))
                                : BidDistribution({BidAtom{Rat(0), Rat(1) - w},
                                                   BidAtom{pts[*beyond].min_bid, w}});
      return finish_strategy(graph, StrategyKind::SingleBid, std::move(mix));
    }
  }
  return finish_strategy(graph, StrategyKind::SingleBid,
                         BidDistribution::point_mass(pts[within].min_bid));
}

Rat daily_adjustment_step(const Rat& bid, const Rat& spend, const Rat& budget, const Rat& delta) {
  if (bid.sign() < 0 || spend.sign() < 0 || budget.sign() < 0)
    throw std::invalid_argument("negative input");
  if (delta.sign() <= 0) throw std::invalid_argument("adjustment factor must be positive");
  const Rat up = Rat(1) + delta;
  if (spend < budget) return bid * up;
  if (spend > budget) return bid / up;
  return bid;
}

}  // namespace adauction
