#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bushygw {

// Requirement bound applied per recorded index; rejects arguments whose
// square does not fit in 64 bits.
std::uint64_t square_bound(std::uint64_t n);

// Amplifies a requirement n to 2^a * n, where a is the sum of square_bound
// over all recorded indices.  Throws std::overflow_error when a exceeds
// max_exponent or the product leaves 64 bits: the schedule grows doubly
// fast, and wrapping silently would poison everything downstream.
std::uint64_t amplified_requirement(
    std::uint64_t n, const std::map<std::uint64_t, std::uint64_t>& recorded,
    std::uint64_t max_exponent = 62);

// Outcome observed at one stage: the probed computation either converged,
// or is assumed divergent and its index is recorded.
struct StageEvent {
  enum class Kind { kConverged, kDiverged };
  Kind kind = Kind::kConverged;
  std::uint64_t index = 0;  // meaningful for kDiverged only

  bool operator==(const StageEvent&) const = default;
};

struct ScheduleRow {
  std::uint64_t stage = 0;
  std::uint64_t requirement = 0;     // n at the start of the stage
  std::uint64_t amplified = 0;       // mid-stage value 2^a * n
  std::uint64_t diverged_count = 0;  // recorded stages so far

  bool operator==(const ScheduleRow&) const = default;
};

struct ScheduleOverflow {
  std::uint64_t stage = 0;
  std::string message;
};

struct ScheduleRun {
  std::vector<ScheduleRow> rows;  // one per fully computed stage
  // Requirement carried past the last stage; absent when overflow stopped
  // the run.
  std::optional<std::uint64_t> final_requirement;
  std::optional<ScheduleOverflow> overflow;
};

// Replays a trace of stage events.  The requirement starts at 2; stage s
// amplifies it by the indices recorded so far, then adds delta - 1; a
// diverging stage records its own number together with the probed index.
// Requirements never shrink and never drop below 2.
ScheduleRun run_schedule(std::uint64_t delta,
                         const std::vector<StageEvent>& trace,
                         std::uint64_t max_exponent = 62);

}  // namespace bushygw
