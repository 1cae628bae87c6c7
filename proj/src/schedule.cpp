#include "adauction/schedule.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace adauction {

SlotSupply::SlotSupply(std::vector<Rat> clicks) : clicks_(std::move(clicks)) {
  bool in_zero_tail = false;
  for (std::size_t i = 0; i < clicks_.size(); ++i) {
    if (clicks_[i].sign() < 0) throw std::invalid_argument("negative slot supply");
    if (clicks_[i].is_zero()) {
      in_zero_tail = true;
      continue;
    }
    if (in_zero_tail) throw std::invalid_argument("zero slots must trail the supply");
    if (i > 0 && !clicks_[i - 1].is_zero() && clicks_[i] >= clicks_[i - 1])
      throw std::invalid_argument("slot supplies must strictly decrease");
  }
}

Rat SlotSupply::total() const {
  Rat t(0);
  for (const auto& d : clicks_) t += d;
  return t;
}

namespace {

void check_demand_shape(const std::vector<Rat>& demands, const SlotSupply& supply) {
  if (demands.size() > supply.size())
    throw std::invalid_argument("more demands than slots; pad the supply with zeros");
  for (std::size_t i = 0; i < demands.size(); ++i) {
    if (demands[i].sign() < 0) throw std::invalid_argument("negative click demand");
    if (i > 0 && demands[i] > demands[i - 1])
      throw std::invalid_argument("demands must be sorted non-increasing");
  }
}

/// Index of the first violated prefix, or demands.size() if none.
std::size_t first_violated_prefix(const std::vector<Rat>& demands, const SlotSupply& supply) {
  Rat dsum(0), ssum(0);
  for (std::size_t i = 0; i < demands.size(); ++i) {
    dsum += demands[i];
    ssum += supply.clicks()[i];
    if (dsum > ssum) return i;
  }
  return demands.size();
}

}  // namespace

bool feasible(const std::vector<Rat>& demands, const SlotSupply& supply) {
  check_demand_shape(demands, supply);
  return first_violated_prefix(demands, supply) == demands.size();
}

namespace {

/// A maximal stretch of one slot's timeline that is still unassigned.
struct FreeSegment {
  Rat start;
  Rat end;
  std::size_t slot;
  Rat speed;

  Rat capacity() const { return (end - start) * speed; }
};

/// A bundle of pairwise time-disjoint free segments, possibly from several
/// slots, treated as one machine.
struct Timeline {
  Rat capacity;
  std::vector<FreeSegment> segments;  // ascending by start
};

Rat capacity_before(const Timeline& t, const Rat& instant) {
  Rat c(0);
  for (const auto& seg : t.segments) {
    if (seg.end <= instant) {
      c += seg.capacity();
    } else if (seg.start < instant) {
      c += (instant - seg.start) * seg.speed;
    }
  }
  return c;
}

void take_segments(const Timeline& from, const Rat& lo, const Rat& hi, std::size_t bidder,
                   std::vector<ScheduleEntry>& out, std::vector<FreeSegment>& leftover) {
  for (const auto& seg : from.segments) {
    const Rat s = std::max(seg.start, lo);
    const Rat e = std::min(seg.end, hi);
    if (s < e) out.push_back(ScheduleEntry{bidder, seg.slot, s, e});
    if (seg.start < lo) {
      FreeSegment keep = seg;
      keep.end = std::min(seg.end, lo);
      if (keep.start < keep.end) leftover.push_back(keep);
    }
    if (seg.end > hi) {
      FreeSegment keep = seg;
      keep.start = std::max(seg.start, hi);
      if (keep.start < keep.end) leftover.push_back(keep);
    }
  }
}

/// Split instant theta such that the capacity of `upper` before theta plus
/// the capacity of `lower` from theta onward equals `target`. Exists whenever
/// lower.capacity <= target <= upper.capacity.
Rat find_split(const Timeline& upper, const Timeline& lower, const Rat& target) {
  std::vector<Rat> breakpoints{Rat(0), Rat(1)};
  for (const auto& seg : upper.segments) {
    breakpoints.push_back(seg.start);
    breakpoints.push_back(seg.end);
  }
  for (const auto& seg : lower.segments) {
    breakpoints.push_back(seg.start);
    breakpoints.push_back(seg.end);
  }
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  auto delivered = [&](const Rat& theta) {
    return capacity_before(upper, theta) + lower.capacity - capacity_before(lower, theta);
  };

  Rat prev_theta = breakpoints.front();
  Rat prev_value = delivered(prev_theta);
  if (prev_value == target) return prev_theta;
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    const Rat theta = breakpoints[i];
    const Rat value = delivered(theta);
    const bool crosses = (prev_value <= target && target <= value) ||
                         (value <= target && target <= prev_value);
    if (crosses && prev_value != value) {
      const Rat f = (target - prev_value) / (value - prev_value);
      return prev_theta + f * (theta - prev_theta);
    }
    if (value == target) return theta;
    prev_theta = theta;
    prev_value = value;
  }
  throw std::logic_error("no split instant found for a feasible allocation");
}

}  // namespace

Schedule build_schedule(const std::vector<Rat>& demands, const SlotSupply& supply) {
  check_demand_shape(demands, supply);
  if (const std::size_t viol = first_violated_prefix(demands, supply); viol != demands.size())
    throw std::invalid_argument("infeasible allocation: demand prefix " + std::to_string(viol + 1) +
                                " exceeds supply prefix");

  // One timeline per positive slot, fastest first; capacities stay sorted
  // non-increasing as timelines merge.
  std::vector<Timeline> machines;
  for (std::size_t j = 0; j < supply.size(); ++j) {
    const Rat& speed = supply.clicks()[j];
    if (speed.is_zero()) continue;
    machines.push_back(Timeline{speed, {FreeSegment{Rat(0), Rat(1), j, speed}}});
  }

  std::vector<ScheduleEntry> entries;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const Rat& c = demands[i];
    if (c.is_zero()) continue;

    if (machines.empty() || machines.front().capacity < c)
      throw std::logic_error("allocation step lost feasibility");
    // Last (smallest) timeline that can still hold the demand on its own.
    std::size_t j = 0;
    while (j + 1 < machines.size() && machines[j + 1].capacity >= c) ++j;
    Timeline& host = machines[j];

    if (host.capacity == c) {
      for (const auto& seg : host.segments)
        entries.push_back(ScheduleEntry{i, seg.slot, seg.start, seg.end});
      machines.erase(machines.begin() + static_cast<std::ptrdiff_t>(j));
      continue;
    }

    if (j + 1 == machines.size()) {
      // Slowest timeline alone: take a prefix of it.
      const Rat theta = find_split(host, Timeline{Rat(0), {}}, c);
      std::vector<FreeSegment> leftover;
      take_segments(host, Rat(0), theta, i, entries, leftover);
      host.segments = std::move(leftover);
      host.capacity -= c;
      continue;
    }

    // Take a prefix of this timeline and the complementary suffix of the
    // next-smaller one, then fold the leftovers (host after theta, next
    // before theta -- time-disjoint by construction) into a single timeline.
    Timeline& next = machines[j + 1];
    const Rat theta = find_split(host, next, c);
    std::vector<FreeSegment> merged_segments;
    take_segments(host, Rat(0), theta, i, entries, merged_segments);
    take_segments(next, theta, Rat(1), i, entries, merged_segments);
    std::sort(merged_segments.begin(), merged_segments.end(),
              [](const FreeSegment& a, const FreeSegment& b) { return a.start < b.start; });
    Timeline merged{host.capacity + next.capacity - c, std::move(merged_segments)};
    machines[j] = std::move(merged);
    machines.erase(machines.begin() + static_cast<std::ptrdiff_t>(j) + 1);
  }

  // Merge abutting entries and order deterministically.
  std::sort(entries.begin(), entries.end(), [](const ScheduleEntry& a, const ScheduleEntry& b) {
    if (a.bidder != b.bidder) return a.bidder < b.bidder;
    if (a.start != b.start) return a.start < b.start;
    return a.slot < b.slot;
  });
  std::vector<ScheduleEntry> compact;
  for (const auto& e : entries) {
    if (!compact.empty() && compact.back().bidder == e.bidder && compact.back().slot == e.slot &&
        compact.back().end == e.start) {
      compact.back().end = e.end;
    } else {
      compact.push_back(e);
    }
  }
  return Schedule{std::move(compact)};
}

void validate_schedule(const Schedule& schedule, const std::vector<Rat>& demands,
                       const SlotSupply& supply) {
  std::map<std::size_t, std::vector<std::pair<Rat, Rat>>> by_slot, by_bidder;
  std::vector<Rat> delivered(demands.size(), Rat(0));
  for (const auto& e : schedule.entries) {
    if (e.slot >= supply.size()) throw std::invalid_argument("schedule entry on unknown slot");
    if (e.bidder >= demands.size()) throw std::invalid_argument("schedule entry for unknown bidder");
    if (e.start.sign() < 0 || e.end > Rat(1) || e.start >= e.end)
      throw std::invalid_argument("schedule entry outside [0,1) or empty");
    by_slot[e.slot].emplace_back(e.start, e.end);
    by_bidder[e.bidder].emplace_back(e.start, e.end);
    delivered[e.bidder] += (e.end - e.start) * supply.clicks()[e.slot];
  }
  auto check_disjoint = [](std::vector<std::pair<Rat, Rat>>& iv, const char* what) {
    std::sort(iv.begin(), iv.end());
    for (std::size_t i = 1; i < iv.size(); ++i) {
      if (iv[i].first < iv[i - 1].second)
        throw std::invalid_argument(std::string("overlapping intervals for one ") + what);
    }
  };
  for (auto& [slot, iv] : by_slot) check_disjoint(iv, "slot");
  for (auto& [bidder, iv] : by_bidder) check_disjoint(iv, "bidder");
  for (std::size_t i = 0; i < demands.size(); ++i) {
    if (delivered[i] != demands[i])
      throw std::invalid_argument("schedule delivers wrong click total for bidder " +
                                  std::to_string(i + 1));
  }
}

std::size_t preemption_count(const Schedule& schedule) {
  std::map<std::size_t, std::size_t> entries_per_bidder;
  for (const auto& e : schedule.entries) ++entries_per_bidder[e.bidder];
  std::size_t preemptions = 0;
  for (const auto& [bidder, count] : entries_per_bidder) preemptions += count - 1;
  return preemptions;
}

}  // namespace adauction
