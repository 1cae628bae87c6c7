#pragma once

#include <cstddef>
#include <vector>

#include "adauction/rational.hpp"

namespace adauction {

/// Expected clicks per slot over the day, strictly decreasing from the top.
/// Zero-click dummy slots may pad the tail.
class SlotSupply {
 public:
  explicit SlotSupply(std::vector<Rat> clicks);

  const std::vector<Rat>& clicks() const { return clicks_; }
  std::size_t size() const { return clicks_.size(); }
  Rat total() const;

 private:
  std::vector<Rat> clicks_;
};

/// True iff every prefix of the demand vector fits into the corresponding
/// prefix of the supply. Demands must be sorted non-increasing and not exceed
/// the slot count.
bool feasible(const std::vector<Rat>& demands, const SlotSupply& supply);

struct ScheduleEntry {
  std::size_t bidder;
  std::size_t slot;
  Rat start;
  Rat end;
};

struct Schedule {
  std::vector<ScheduleEntry> entries;
};

/// Builds an explicit preemptive schedule over [0,1) delivering exactly
/// demands[i] clicks to bidder i. Demands must be sorted non-increasing and
/// pass the feasibility check; otherwise throws naming the violated prefix.
///
/// Works by repeatedly folding two slot timelines into one: the largest
/// remaining demand takes a prefix of the smallest timeline that can hold it
/// and the complementary suffix of the next one, split at a common instant,
/// so a bidder never occupies two slots at once and each step retires one
/// timeline. Preemption count stays within 2(k-1).
Schedule build_schedule(const std::vector<Rat>& demands, const SlotSupply& supply);

/// Throws unless the schedule stays within [0,1), keeps per-slot and
/// per-bidder intervals disjoint, and delivers exactly the demanded clicks.
void validate_schedule(const Schedule& schedule, const std::vector<Rat>& demands,
                       const SlotSupply& supply);

/// Number of interruptions: schedule entries beyond the first one per bidder,
/// counted after merging abutting same-slot entries.
std::size_t preemption_count(const Schedule& schedule);

}  // namespace adauction
