#include "adauction/landscape.hpp"

#include <stdexcept>

namespace adauction {

namespace {

bool empty_range(const LandscapePoint& pt) {
  return pt.max_bid.has_value() && *pt.max_bid == pt.min_bid;
}

}  // namespace

QueryAuction::QueryAuction(std::vector<AuctionPosition> positions)
    : positions_(std::move(positions)) {
  const Rat one(1);
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const auto& p = positions_[i];
    if (p.ctr.sign() < 0 || p.ctr > one)
      throw std::invalid_argument("position ctr outside [0,1]");
    if (p.bid.sign() < 0) throw std::invalid_argument("negative competitor bid");
    if (i > 0) {
      if (positions_[i - 1].ctr < p.ctr)
        throw std::invalid_argument("position ctrs must be non-increasing");
      if (positions_[i - 1].bid < p.bid)
        throw std::invalid_argument("competitor bids must be non-increasing");
    }
  }
}

std::optional<std::size_t> position_for_bid(const QueryAuction& auction, const Rat& bid) {
  if (bid.sign() < 0) throw std::invalid_argument("negative bid");
  const auto& pos = auction.positions();
  // Bids are non-increasing, so the first position whose holder bids at most
  // `bid` is the best one the bid qualifies for; ties go to the higher
  // position.
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (pos[i].bid <= bid) return i + 1;
  }
  return std::nullopt;
}

Landscape::Landscape(std::vector<LandscapePoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("landscape needs at least one point");
  if (!points_.front().min_bid.is_zero())
    throw std::invalid_argument("landscape must start at bid 0");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& pt = points_[i];
    if (pt.cost.sign() < 0 || pt.clicks.sign() < 0 || pt.min_bid.sign() < 0)
      throw std::invalid_argument("negative landscape value");
    if (empty_range(pt) && i != 0)
      throw std::invalid_argument("only the zero point may carry an empty bid range");
    if (i + 1 < points_.size()) {
      const auto& next = points_[i + 1];
      if (!pt.max_bid.has_value() || *pt.max_bid != next.min_bid)
        throw std::invalid_argument("landscape bid ranges must tile the bid axis");
      if (!empty_range(pt) && next.min_bid <= pt.min_bid)
        throw std::invalid_argument("landscape bid thresholds must increase");
      if (next.cost < pt.cost || next.clicks < pt.clicks)
        throw std::invalid_argument("landscape cost and clicks must be non-decreasing");
    } else if (pt.max_bid.has_value()) {
      throw std::invalid_argument("top landscape point must have an unbounded bid range");
    }
  }
}

const LandscapePoint& Landscape::point_at(const Rat& bid) const {
  if (bid.sign() < 0) throw std::invalid_argument("negative bid");
  for (std::size_t j = points_.size(); j-- > 0;) {
    const auto& pt = points_[j];
    if (!empty_range(pt) && pt.min_bid <= bid) return pt;
  }
  return points_.front();
}

std::pair<Rat, Rat> Landscape::value_at(const Rat& bid) const {
  const auto& pt = point_at(bid);
  return {pt.cost, pt.clicks};
}

void Landscape::validate_gsp_invariants() const {
  Rat prev_cpc(0);
  for (const auto& pt : points_) {
    const Rat cpc = pt.cpc();
    if (cpc < prev_cpc) throw std::invalid_argument("cost-per-click must be non-decreasing");
    if (cpc > pt.min_bid) throw std::invalid_argument("cost-per-click exceeds qualifying bid");
    prev_cpc = cpc;
  }
}

Landscape Landscape::scale_clicks(const Rat& weight) const {
  if (weight.sign() < 0) throw std::invalid_argument("negative click weight");
  auto pts = points_;
  for (auto& pt : pts) pt.clicks *= weight;
  return Landscape(std::move(pts));
}

Landscape build_landscape(const QueryAuction& auction) {
  const auto& pos = auction.positions();
  // Attainable positions, lowest bid first. Position i is attainable unless
  // the holder above it bids the same amount.
  std::vector<std::size_t> attainable;
  for (std::size_t i = pos.size(); i-- > 0;) {
    if (i == 0 || pos[i].bid < pos[i - 1].bid) attainable.push_back(i);
  }

  std::vector<LandscapePoint> points;
  const Rat zero(0);
  const Rat lowest_threshold = attainable.empty() ? zero : pos[attainable.front()].bid;
  points.push_back(LandscapePoint{zero, zero, zero, lowest_threshold});

  for (std::size_t idx = 0; idx < attainable.size(); ++idx) {
    const std::size_t i = attainable[idx];
    std::optional<Rat> upper;
    if (idx + 1 < attainable.size()) upper = pos[attainable[idx + 1]].bid;
    points.push_back(LandscapePoint{pos[i].ctr * pos[i].bid, pos[i].ctr, pos[i].bid, upper});
  }
  if (attainable.empty()) points.front().max_bid.reset();

  // Merge adjacent points with identical (cost, clicks), e.g. zero-ctr
  // positions that duplicate the zero point.
  std::vector<LandscapePoint> merged;
  for (auto& pt : points) {
    if (!merged.empty() && merged.back().cost == pt.cost && merged.back().clicks == pt.clicks) {
      merged.back().max_bid = pt.max_bid;
    } else {
      merged.push_back(pt);
    }
  }

  Landscape landscape(std::move(merged));
  landscape.validate_gsp_invariants();
  return landscape;
}

Landscape convex_hull(const Landscape& landscape) {
  // Keep only the best point at each spend level, then run a monotone chain
  // over the (cost, clicks) sequence. Clicks are non-decreasing, so the best
  // point of an equal-cost run is the last one.
  std::vector<LandscapePoint> pts;
  for (const auto& pt : landscape.points()) {
    if (!pts.empty() && pts.back().cost == pt.cost) {
      pts.back() = pt;
    } else {
      pts.push_back(pt);
    }
  }

  std::vector<LandscapePoint> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull[hull.size() - 1];
      // Drop b unless the slope strictly decreases from a->b to b->pt.
      const Rat lhs = (b.clicks - a.clicks) * (pt.cost - b.cost);
      const Rat rhs = (pt.clicks - b.clicks) * (b.cost - a.cost);
      if (lhs <= rhs)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(pt);
  }

  // Re-tile bid ranges: each hull point owns the bids up to the next hull
  // point's threshold.
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) hull[i].max_bid = hull[i + 1].min_bid;
  if (!hull.empty()) hull.back().max_bid.reset();
  return Landscape(std::move(hull));
}

BidDistribution::BidDistribution(std::vector<BidAtom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("empty bid distribution");
  Rat total(0);
  for (const auto& atom : atoms_) {
    if (atom.weight.sign() < 0) throw std::invalid_argument("negative atom weight");
    if (atom.bid.sign() < 0) throw std::invalid_argument("negative atom bid");
    total += atom.weight;
  }
  if (total != Rat(1)) throw std::invalid_argument("distribution weights must sum to 1");
}

BidDistribution BidDistribution::point_mass(Rat bid) {
  return BidDistribution({BidAtom{std::move(bid), Rat(1)}});
}

std::pair<Rat, Rat> evaluate_distribution(const Landscape& landscape, const BidDistribution& dist) {
  Rat cost(0), clicks(0);
  for (const auto& atom : dist.atoms()) {
    auto [c, k] = landscape.value_at(atom.bid);
    cost += atom.weight * c;
    clicks += atom.weight * k;
  }
  return {cost, clicks};
}

BidDistribution best_distribution_for_budget(const Landscape& landscape, const Rat& budget) {
  if (budget.sign() < 0) throw std::invalid_argument("negative budget");
  const Landscape hull = convex_hull(landscape);
  const auto& pts = hull.points();

  if (budget >= pts.back().cost) return BidDistribution::point_mass(pts.back().min_bid);

  std::size_t hi = 0;
  while (pts[hi].cost <= budget) ++hi;
  const auto& high = pts[hi];
  const auto& low = pts[hi - 1];
  const Rat w = (high.cost - budget) / (high.cost - low.cost);
  if (w == Rat(1)) return BidDistribution::point_mass(low.min_bid);
  return BidDistribution({BidAtom{low.min_bid, w}, BidAtom{high.min_bid, Rat(1) - w}});
}

Rat hull_clicks_at_cost(const Landscape& hull, const Rat& budget) {
  if (budget.sign() < 0) throw std::invalid_argument("negative budget");
  const auto& pts = hull.points();
  if (budget >= pts.back().cost) return pts.back().clicks;
  std::size_t hi = 0;
  while (pts[hi].cost <= budget) ++hi;
  const auto& high = pts[hi];
  const auto& low = pts[hi - 1];
  const Rat w = (high.cost - budget) / (high.cost - low.cost);
  return w * low.clicks + (Rat(1) - w) * high.clicks;
}

}  // namespace adauction
