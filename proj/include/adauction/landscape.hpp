#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "adauction/rational.hpp"

namespace adauction {

/// One page position in a GSP query auction: the position's click probability
/// and the competing bid currently holding it.
struct AuctionPosition {
  Rat ctr;
  Rat bid;
};

/// A single GSP query auction seen from the outside: positions ordered top to
/// bottom with non-increasing click probabilities and non-increasing
/// competitor bids. Outbidding (or tying) the holder of position i wins
/// position i at price equal to that holder's bid.
class QueryAuction {
 public:
  explicit QueryAuction(std::vector<AuctionPosition> positions);

  const std::vector<AuctionPosition>& positions() const { return positions_; }
  std::size_t size() const { return positions_.size(); }

 private:
  std::vector<AuctionPosition> positions_;
};

/// Winning position (1-based from the top) for the given bid, or nullopt when
/// the bid is below every competitor bid. Ties at a competitor bid win that
/// position; equal competitor bids resolve to the higher position.
std::optional<std::size_t> position_for_bid(const QueryAuction& auction, const Rat& bid);

/// One attainable (cost, clicks) outcome together with the half-open bid
/// range [min_bid, max_bid) that attains it. max_bid is empty for the top
/// point. The zero point may carry an empty range when bidding zero already
/// wins a position.
struct LandscapePoint {
  Rat cost;
  Rat clicks;
  Rat min_bid;
  std::optional<Rat> max_bid;

  Rat cpc() const { return clicks.is_zero() ? Rat(0) : cost / clicks; }
};

/// Step function from bid to (cost, clicks), stored as points in increasing
/// bid order, zero point first. Construction checks that costs and clicks are
/// non-decreasing and that the bid ranges tile the nonnegative ray.
class Landscape {
 public:
  explicit Landscape(std::vector<LandscapePoint> points);

  const std::vector<LandscapePoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  const LandscapePoint& point_at(const Rat& bid) const;
  /// (cost, clicks) at the given bid.
  std::pair<Rat, Rat> value_at(const Rat& bid) const;

  const LandscapePoint& top() const { return points_.back(); }

  /// Checks the remaining GSP landscape properties: cost-per-click is
  /// non-decreasing along the points and never exceeds the low end of the
  /// attaining bid range. Throws on violation. Holds for every landscape
  /// derived from a query auction; click-weighted landscapes need not satisfy
  /// it.
  void validate_gsp_invariants() const;

  /// Returns a copy with clicks scaled by the given factor (conversion
  /// weighting hook). Costs are unchanged.
  Landscape scale_clicks(const Rat& weight) const;

 private:
  std::vector<LandscapePoint> points_;
};

/// All attainable (cost, clicks) values of the auction plus the zero point,
/// with cost = ctr * price at each position.
Landscape build_landscape(const QueryAuction& auction);

/// Restriction to the upper convex hull of clicks versus cost. Interior and
/// collinear points are dropped; the zero point survives unless a zero-cost
/// point with positive clicks dominates it.
Landscape convex_hull(const Landscape& landscape);

struct BidAtom {
  Rat bid;
  Rat weight;
};

/// Randomized bid: finitely many (bid, weight) atoms with weights summing to
/// one.
class BidDistribution {
 public:
  explicit BidDistribution(std::vector<BidAtom> atoms);
  static BidDistribution point_mass(Rat bid);

  const std::vector<BidAtom>& atoms() const { return atoms_; }

 private:
  std::vector<BidAtom> atoms_;
};

/// Expected (cost, clicks) of the distribution against the landscape.
std::pair<Rat, Rat> evaluate_distribution(const Landscape& landscape, const BidDistribution& dist);

/// Click-maximizing distribution with expected cost at most `budget`: a mix
/// of at most two bids sitting at the endpoints of the hull segment whose
/// costs bracket the budget. Spends the budget exactly unless it exceeds the
/// top cost.
BidDistribution best_distribution_for_budget(const Landscape& landscape, const Rat& budget);

/// Hull height at the given spend level (clicks of the best distribution).
Rat hull_clicks_at_cost(const Landscape& hull, const Rat& budget);

}  // namespace adauction
