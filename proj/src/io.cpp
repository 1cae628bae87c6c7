#include "adauction/io.hpp"

#include <stdexcept>

namespace adauction::io {

Rat rat_from_json(const Json& j) {
  if (j.is_string()) return Rat::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
  if (j.is_number())
    throw std::invalid_argument("non-integer JSON numbers are ambiguous; quote them as strings");
  throw std::invalid_argument("expected a number or numeric string");
}

std::string NumberFormat::operator()(const Rat& r) const {
  return decimals ? r.decimal_str(*decimals) : r.str();
}

QueryAuction parse_query_auction(const Json& j) {
  if (!j.contains("positions") || !j["positions"].is_array())
    throw std::invalid_argument("query auction needs a 'positions' array");
  std::vector<AuctionPosition> positions;
  for (const auto& p : j["positions"]) {
    positions.push_back(AuctionPosition{rat_from_json(p.at("ctr")), rat_from_json(p.at("bid"))});
  }
  return QueryAuction(std::move(positions));
}

Json query_auction_to_json(const QueryAuction& auction) {
  Json positions = Json::array();
  for (const auto& p : auction.positions()) {
    positions.push_back(Json{{"ctr", p.ctr.str()}, {"bid", p.bid.str()}});
  }
  return Json{{"positions", positions}};
}

BudgetInstance parse_budget_instance(const Json& j) {
  std::vector<std::string> keywords;
  for (const auto& k : j.at("keywords")) keywords.push_back(k.get<std::string>());

  std::vector<QueryNode> queries;
  std::vector<std::string> query_ids;
  for (const auto& q : j.at("queries")) {
    const std::string id = q.at("id").get<std::string>();
    Rat weight(1);
    if (q.contains("weight")) weight = rat_from_json(q["weight"]);
    Landscape landscape = build_landscape(parse_query_auction(q.at("landscape")));
    if (weight != Rat(1)) landscape = landscape.scale_clicks(weight);
    queries.push_back(QueryNode{id, std::move(landscape), weight});
    query_ids.push_back(id);
  }

  auto index_of = [](const std::vector<std::string>& names, const std::string& name,
                     const char* what) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    throw std::invalid_argument(std::string("edge references unknown ") + what + " '" + name +
                                "'");
  };

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("edges must be [keyword, query] pairs");
    edges.emplace_back(index_of(keywords, e[0].get<std::string>(), "keyword"),
                       index_of(query_ids, e[1].get<std::string>(), "query"));
  }

  Rat budget(0);
  if (j.contains("budget")) budget = rat_from_json(j["budget"]);
  return BudgetInstance{KeywordQueryGraph(std::move(keywords), std::move(queries), std::move(edges)),
                        budget};
}

LoadedSlots parse_slot_instance(const Json& j) {
  std::vector<Rat> supply;
  for (const auto& d : j.at("slots")) supply.push_back(rat_from_json(d));

  LoadedSlots out{{}, {}, {}, true, SlotSupply(std::move(supply))};
  std::size_t rank = 0;
  for (const auto& b : j.at("bidders")) {
    SlotBidder declared;
    declared.id = b.at("id").is_string() ? b.at("id").get<std::string>() : b.at("id").dump();
    declared.budget = rat_from_json(b.at("budget"));
    declared.lex_rank = rank++;
    Rat ctr(1);
    if (b.contains("ctr")) ctr = rat_from_json(b["ctr"]);
    if (ctr.sign() <= 0 || ctr > Rat(1))
      throw std::invalid_argument("bidder ctr must be in (0,1]");

    SlotBidder truthful = declared;
    if (b.contains("bid")) {
      out.budgets_only = false;
      declared.bid = rat_from_json(b["bid"]) * ctr;
      truthful.bid = b.contains("true_bid") ? rat_from_json(b["true_bid"]) * ctr : declared.bid;
    }
    truthful.budget = b.contains("true_budget") ? rat_from_json(b["true_budget"]) : declared.budget;

    out.declared.push_back(declared);
    out.truthful.push_back(truthful);
    out.ctr.push_back(ctr);
  }
  return out;
}

LoadedMarkov parse_markov_instance(const Json& j) {
  std::vector<MarkovBidder> bidders;
  for (const auto& b : j.at("bidders")) {
    MarkovBidder m;
    m.id = b.at("id").is_string() ? b.at("id").get<std::string>() : b.at("id").dump();
    m.q = rat_from_json(b.at("q"));
    if (b.contains("e")) {
      m.ctr = Rat(1);
      m.bid = rat_from_json(b["e"]);
    } else {
      m.ctr = rat_from_json(b.at("ctr"));
      m.bid = rat_from_json(b.at("bid"));
    }
    bidders.push_back(std::move(m));
  }
  std::size_t k = j.at("k").get<std::size_t>();
  return LoadedMarkov{MarkovInstance(std::move(bidders)), k};
}

Json landscape_table(const Landscape& landscape, const Landscape& hull, const NumberFormat& fmt) {
  auto on_hull = [&](const LandscapePoint& pt) {
    for (const auto& h : hull.points())
      if (h.cost == pt.cost && h.clicks == pt.clicks) return true;
    return false;
  };
  Json rows = Json::array();
  const auto& pts = landscape.points();
  for (std::size_t i = pts.size(); i-- > 0;) {
    const auto& pt = pts[i];
    Json row;
    row["bid_min"] = fmt(pt.min_bid);
    row["bid_max"] = pt.max_bid ? Json(fmt(*pt.max_bid)) : Json(nullptr);
    row["cpc"] = fmt(pt.cpc());
    row["cost"] = fmt(pt.cost);
    row["clicks"] = fmt(pt.clicks);
    row["on_hull"] = on_hull(pt);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

Json distribution_to_json(const BidDistribution& dist, const NumberFormat& fmt) {
  Json atoms = Json::array();
  for (const auto& atom : dist.atoms())
    atoms.push_back(Json{{"bid", fmt(atom.bid)}, {"weight", fmt(atom.weight)}});
  return atoms;
}

}  // namespace

Json strategy_to_json(const UniformStrategy& strategy, const NumberFormat& fmt) {
  Json out;
  out["strategy"] = strategy.kind == StrategyKind::SingleBid ? "single-bid" : "two-bid";
  out["atoms"] = distribution_to_json(strategy.dist, fmt);
  out["expected_spend"] = fmt(strategy.expected_spend);
  out["expected_traffic"] = fmt(strategy.expected_traffic);
  return out;
}

Json knapsack_to_json(const KnapsackOpt& opt, const NumberFormat& fmt) {
  Json out;
  out["strategy"] = "per-query-knapsack";
  out["expected_spend"] = fmt(opt.spend);
  out["expected_traffic"] = fmt(opt.traffic);
  Json dists = Json::array();
  for (const auto& d : opt.per_query) dists.push_back(distribution_to_json(d, fmt));
  out["per_query"] = dists;
  return out;
}

Json slot_outcome_to_json(const SlotOutcome& outcome, const LoadedSlots& loaded,
                          const NumberFormat& fmt) {
  Json out;
  Json bidders = Json::array();
  for (std::size_t i = 0; i < outcome.bidders.size(); ++i) {
    const auto& r = outcome.bidders[i];
    const Rat clicks = r.clicks * loaded.ctr[i];
    const Rat price = loaded.ctr[i] == Rat(1) ? r.price : r.price / loaded.ctr[i];
    bidders.push_back(Json{{"id", loaded.declared[i].id},
                           {"clicks", fmt(clicks)},
                           {"price", fmt(price)},
                           {"spend", fmt(r.spend())}});
  }
  out["bidders"] = bidders;

  Json blocks = Json::array();
  for (const auto& block : outcome.blocks) {
    Json ids = Json::array();
    for (std::size_t idx : block.bidders) ids.push_back(loaded.declared[idx].id);
    blocks.push_back(Json{{"price", fmt(block.price)},
                          {"bidders", ids},
                          {"first_slot", block.first_slot + 1},
                          {"slots", block.slot_count}});
  }
  out["blocks"] = blocks;

  Json schedule = Json::array();
  for (const auto& e : outcome.schedule.entries) {
    schedule.push_back(Json{{"bidder", loaded.declared[e.bidder].id},
                            {"slot", e.slot + 1},
                            {"start", fmt(e.start)},
                            {"end", fmt(e.end)}});
  }
  out["schedule"] = schedule;
  out["revenue"] = fmt(outcome.revenue());
  return out;
}

Json markov_outcome_to_json(const MarkovOutcome& outcome, const MarkovInstance& instance,
                            const NumberFormat& fmt) {
  Json out;
  Json order = Json::array();
  for (std::size_t idx : outcome.assignment) order.push_back(instance.bidders()[idx].id);
  out["assignment"] = order;
  out["efficiency"] = fmt(outcome.value);
  Json bidders = Json::array();
  for (std::size_t i = 0; i < instance.size(); ++i) {
    bidders.push_back(Json{{"id", instance.bidders()[i].id},
                           {"click_prob", fmt(outcome.click_prob[i])},
                           {"payment", fmt(outcome.payment[i])},
                           {"price_per_click", fmt(outcome.price_per_click[i])}});
  }
  out["bidders"] = bidders;
  return out;
}

Json deviations_to_json(const std::vector<Deviation>& deviations,
                        const std::vector<std::string>& bidder_ids, const NumberFormat& fmt) {
  Json out = Json::array();
  for (const auto& d : deviations) {
    out.push_back(Json{{"bidder", bidder_ids[d.bidder]},
                       {"declared_bid", fmt(d.declared_bid)},
                       {"declared_budget", fmt(d.declared_budget)},
                       {"truthful_utility", fmt(d.truthful_utility)},
                       {"deviant_utility", fmt(d.deviant_utility)}});
  }
  return out;
}

}  // namespace adauction::io
