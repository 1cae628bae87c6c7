#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "adauction/landscape.hpp"

namespace adauction {

/// One query node: its landscape with any click weight already applied.
struct QueryNode {
  std::string id;
  Landscape landscape;
  Rat weight{1};
};

/// Bipartite keyword-query graph. Edges connect keyword indices to query
/// indices; a query with no incident keyword is kept but can never be
/// triggered by a keyword bid.
class KeywordQueryGraph {
 public:
  KeywordQueryGraph(std::vector<std::string> keywords, std::vector<QueryNode> queries,
                    std::vector<std::pair<std::size_t, std::size_t>> edges);

  const std::vector<std::string>& keywords() const { return keywords_; }
  const std::vector<QueryNode>& queries() const { return queries_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
  const std::vector<std::size_t>& keywords_of_query(std::size_t q) const;

 private:
  std::vector<std::string> keywords_;
  std::vector<QueryNode> queries_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::vector<std::size_t>> by_query_;
};

/// Per-keyword bids, indexed like graph.keywords().
using KeywordBidVector = std::vector<Rat>;

/// Highest bid among the query's keywords; zero for isolated queries.
Rat effective_bid(const KeywordQueryGraph& graph, const KeywordBidVector& bids, std::size_t query);

/// Total (spend, traffic) of a bid vector across all queries.
std::pair<Rat, Rat> spend_traffic(const KeywordQueryGraph& graph, const KeywordBidVector& bids);

struct KnapsackOpt {
  Rat traffic;
  Rat spend;
  std::vector<BidDistribution> per_query;
};

/// Benchmark adversary: bids independently per query. Hulls every landscape,
/// greedily fills hull segments in increasing cost-per-click order, splitting
/// the last segment fractionally.
KnapsackOpt per_query_knapsack_opt(const std::vector<Landscape>& landscapes, const Rat& budget);

/// Pointwise sum of the landscapes over the union of their threshold bids.
Landscape aggregate_landscape(const std::vector<Landscape>& landscapes);

enum class StrategyKind { SingleBid, TwoBid };

/// A distribution over uniform bids (same bid on every keyword).
struct UniformStrategy {
  StrategyKind kind;
  BidDistribution dist;
  Rat expected_spend;
  Rat expected_traffic;
};

/// Best uniform strategy: aggregate the reachable queries' landscapes, hull,
/// and mix the two bids bracketing the budget.
UniformStrategy best_uniform_two_bid(const KeywordQueryGraph& graph, const Rat& budget);

/// Best strategy mixing a single non-zero bid with not bidding: the better of
/// the largest affordable aggregate point and a zero/overshoot mix that
/// spends the budget exactly.
UniformStrategy best_uniform_single_bid(const KeywordQueryGraph& graph, const Rat& budget);

/// Multiplicative daily bid update: up by (1+delta) when under-spending, down
/// by the same factor when over-spending.
Rat daily_adjustment_step(const Rat& bid, const Rat& spend, const Rat& budget,
                          const Rat& delta = Rat(1, 10));

}  // namespace adauction
