#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "adauction/rational.hpp"

namespace adauction {

/// An ad under the scanning user model: clicked with probability ctr when
/// looked at; the user keeps scanning past it with probability q.
struct MarkovBidder {
  std::string id;
  Rat ctr;
  Rat q;
  Rat bid;

  Rat ecpm() const { return ctr * bid; }
};

class MarkovInstance {
 public:
  explicit MarkovInstance(std::vector<MarkovBidder> bidders);

  const std::vector<MarkovBidder>& bidders() const { return bidders_; }
  std::size_t size() const { return bidders_.size(); }

  /// True when bidder a precedes bidder b in adjusted-ecpm order:
  /// e/(1-q) descending, with q = 1 sorting as infinite; ties break by
  /// higher ecpm, then input position.
  bool adjusted_precedes(std::size_t a, std::size_t b) const;

  /// All bidder indices in adjusted-ecpm order.
  std::vector<std::size_t> adjusted_order() const;

 private:
  std::vector<MarkovBidder> bidders_;
};

/// Expected value e_{x1} + q_{x1} (e_{x2} + q_{x2} (...)) of showing the ads
/// in the given top-down order.
Rat efficiency(const MarkovInstance& instance, const std::vector<std::size_t>& assignment);

/// Probability that the given bidder is clicked under the assignment: ctr
/// times the product of continuation probabilities above it; zero when
/// unassigned.
Rat click_probability(const MarkovInstance& instance, const std::vector<std::size_t>& assignment,
                      std::size_t bidder);

/// Value-maximizing assignment of at most k ads, computed by sorting on
/// adjusted ecpm and running the take-or-skip recurrence over (ad, slot)
/// pairs. Skips on ties, so zero-value ads stay out.
std::vector<std::size_t> optimal_assignment(const MarkovInstance& instance, std::size_t k);

struct MarkovOutcome {
  std::vector<std::size_t> assignment;
  Rat value;
  std::vector<Rat> click_prob;       // by bidder index
  std::vector<Rat> payment;          // expected externality payment
  std::vector<Rat> price_per_click;  // payment / click probability
};

/// Optimal assignment plus per-winner externality prices: each assigned
/// bidder pays the others' best value without her minus their value with her.
MarkovOutcome markov_vcg_outcome(const MarkovInstance& instance, std::size_t k);

/// Every subset of at most k bidders whose adjusted-ecpm ordering attains the
/// maximum value. Exhaustive; refuses instances above the guard size.
std::vector<std::vector<std::size_t>> all_optimal_sets(const MarkovInstance& instance,
                                                       std::size_t k, std::size_t guard = 12);

/// Swap check: replacing assigned bidder i_in by the unassigned j_out (who
/// weakly dominates it on both ecpm and adjusted ecpm) and re-sorting never
/// lowers the value. Returns the comparison outcome.
bool substitution_no_worse(const MarkovInstance& instance,
                           const std::vector<std::size_t>& assignment, std::size_t i_in,
                           std::size_t j_out);

}  // namespace adauction
