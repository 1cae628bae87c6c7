#include "adauction/gen.hpp"

#include <algorithm>
#include <stdexcept>
#include <set>

namespace adauction {

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

bool SplitMix64::chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

SlotInstance gen_slot_instance(std::uint64_t seed, std::size_t bidders, std::size_t slots) {
  if (bidders == 0 || slots == 0) throw std::invalid_argument("need at least one bidder and slot");
  if (slots > 120) throw std::invalid_argument("slot count exceeds the supply value range");
  SplitMix64 rng(seed);
  std::vector<SlotBidder> bs;
  for (std::size_t i = 0; i < bidders; ++i) {
    SlotBidder b;
    b.id = std::to_string(i + 1);
    b.lex_rank = i;
    if (i > 0 && rng.chance(1, 8)) {
      b.bid = bs[rng.below(i)].bid;  // deliberate tie
    } else if (rng.chance(1, 10)) {
      b.bid = Rat(0);
    } else {
      b.bid = Rat(static_cast<long>(1 + rng.below(79)), 20);
    }
    b.budget = rng.chance(1, 12) ? Rat(0) : Rat(static_cast<long>(1 + rng.below(400)), 4);
    bs.push_back(std::move(b));
  }

  std::set<std::uint64_t> chosen;
  while (chosen.size() < slots) chosen.insert(1 + rng.below(120));
  std::vector<Rat> supply;
  for (auto it = chosen.rbegin(); it != chosen.rend(); ++it)
    supply.push_back(Rat(static_cast<long>(*it)));
  if (rng.chance(1, 5)) supply.push_back(Rat(0));

  return SlotInstance{std::move(bs), SlotSupply(std::move(supply))};
}

SlotInstance gen_slot_instance_distinct(std::uint64_t seed, std::size_t bidders,
                                        std::size_t slots) {
  SlotInstance instance = gen_slot_instance(seed, bidders, slots);
  SplitMix64 rng(seed ^ 0x5eedb1d5u);
  std::set<std::uint64_t> numerators;
  while (numerators.size() < bidders) numerators.insert(1 + rng.below(200));
  std::vector<std::uint64_t> shuffled(numerators.begin(), numerators.end());
  for (std::size_t i = shuffled.size(); i > 1; --i)
    std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
  for (std::size_t i = 0; i < bidders; ++i)
    instance.bidders[i].bid = Rat(static_cast<long>(shuffled[i]), 40);
  return instance;
}

SlotInstance gen_budget_only_slot_instance(std::uint64_t seed, std::size_t bidders,
                                           std::size_t slots) {
  SlotInstance instance = gen_slot_instance(seed, bidders, slots);
  for (auto& b : instance.bidders) b.bid = Rat(0);
  return instance;
}

MarkovInstance gen_markov_instance(std::uint64_t seed, std::size_t bidders) {
  if (bidders == 0) throw std::invalid_argument("need at least one bidder");
  SplitMix64 rng(seed);
  std::vector<MarkovBidder> bs;
  for (std::size_t i = 0; i < bidders; ++i) {
    MarkovBidder b;
    b.id = std::to_string(i + 1);
    b.ctr = Rat(static_cast<long>(1 + rng.below(20)), 20);
    b.q = rng.chance(1, 20) ? Rat(1) : Rat(static_cast<long>(rng.below(20)), 20);
    b.bid = rng.chance(1, 10) ? Rat(0) : Rat(static_cast<long>(1 + rng.below(60)), 10);
    bs.push_back(std::move(b));
  }
  return MarkovInstance(std::move(bs));
}

io::BudgetInstance gen_budget_instance(std::uint64_t seed, std::size_t keywords,
                                       std::size_t queries) {
  if (keywords == 0 || queries == 0)
    throw std::invalid_argument("need at least one keyword and query");
  SplitMix64 rng(seed);
  std::vector<std::string> ks;
  for (std::size_t i = 0; i < keywords; ++i) ks.push_back("k" + std::to_string(i + 1));

  std::vector<QueryNode> qs;
  Rat total_cost(0);
  for (std::size_t i = 0; i < queries; ++i) {
    const std::size_t positions = 1 + rng.below(4);
    std::vector<long> ctrs, bids;
    for (std::size_t p = 0; p < positions; ++p) {
      ctrs.push_back(static_cast<long>(1 + rng.below(20)));
      bids.push_back(static_cast<long>(1 + rng.below(60)));
    }
    std::sort(ctrs.rbegin(), ctrs.rend());
    std::sort(bids.rbegin(), bids.rend());
    std::vector<AuctionPosition> ps;
    for (std::size_t p = 0; p < positions; ++p)
      ps.push_back(AuctionPosition{Rat(ctrs[p], 20), Rat(bids[p], 20)});
    Landscape landscape = build_landscape(QueryAuction(std::move(ps)));
    total_cost += landscape.top().cost;
    qs.push_back(QueryNode{"q" + std::to_string(i + 1), std::move(landscape), Rat(1)});
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t q = 0; q < queries; ++q) {
    const std::size_t degree = 1 + rng.below(keywords);
    std::set<std::uint64_t> picked;
    while (picked.size() < degree) picked.insert(rng.below(keywords));
    for (auto k : picked) edges.emplace_back(static_cast<std::size_t>(k), q);
  }

  const Rat budget = total_cost * Rat(static_cast<long>(1 + rng.below(120)), 100);
  return io::BudgetInstance{KeywordQueryGraph(std::move(ks), std::move(qs), std::move(edges)),
                            budget};
}

io::Json slot_instance_to_json(const SlotInstance& instance, bool include_bids) {
  io::Json bidders = io::Json::array();
  for (const auto& b : instance.bidders) {
    io::Json jb;
    jb["id"] = b.id;
    if (include_bids) jb["bid"] = b.bid.str();
    jb["budget"] = b.budget.str();
    bidders.push_back(std::move(jb));
  }
  io::Json slots = io::Json::array();
  for (const auto& d : instance.supply.clicks()) slots.push_back(d.str());
  return io::Json{{"bidders", bidders}, {"slots", slots}};
}

io::Json markov_instance_to_json(const MarkovInstance& instance, std::size_t k) {
  io::Json bidders = io::Json::array();
  for (const auto& b : instance.bidders()) {
    bidders.push_back(io::Json{
        {"id", b.id}, {"ctr", b.ctr.str()}, {"q", b.q.str()}, {"bid", b.bid.str()}});
  }
  return io::Json{{"bidders", bidders}, {"k", k}};
}

io::Json budget_instance_to_json(const io::BudgetInstance& instance) {
  const auto& graph = instance.graph;
  io::Json keywords = io::Json::array();
  for (const auto& k : graph.keywords()) keywords.push_back(k);

  io::Json queries = io::Json::array();
  for (const auto& q : graph.queries()) {
    io::Json positions = io::Json::array();
    const auto& pts = q.landscape.points();
    for (std::size_t i = pts.size(); i-- > 0;) {
      if (pts[i].clicks.is_zero() && pts[i].cost.is_zero()) continue;
      positions.push_back(io::Json{{"ctr", (pts[i].clicks / q.weight).str()},
                                   {"bid", pts[i].min_bid.str()}});
    }
    io::Json jq;
    jq["id"] = q.id;
    jq["landscape"] = io::Json{{"positions", positions}};
    if (q.weight != Rat(1)) jq["weight"] = q.weight.str();
    queries.push_back(std::move(jq));
  }

  io::Json edges = io::Json::array();
  for (const auto& [k, q] : graph.edges())
    edges.push_back(io::Json::array({graph.keywords()[k], graph.queries()[q].id}));

  return io::Json{{"keywords", keywords},
                  {"queries", queries},
                  {"edges", edges},
                  {"budget", instance.budget.str()}};
}

}  // namespace adauction
