#include "bushygw/schedule.hpp"

#include <stdexcept>

namespace bushygw {

std::uint64_t square_bound(std::uint64_t n) {
  if (n > 0xFFFFFFFFULL)
    throw std::overflow_error("square of " + std::to_string(n) +
                              " does not fit in 64 bits");
  return n * n;
}

std::uint64_t amplified_requirement(
    std::uint64_t n, const std::map<std::uint64_t, std::uint64_t>& recorded,
    std::uint64_t max_exponent) {
  if (n < 1) throw std::invalid_argument("requirement must be positive");
  if (max_exponent > 63)
    throw std::invalid_argument("exponent bound must be at most 63");
  std::uint64_t exponent = 0;
  for (const auto& [stage, index] : recorded) {
    std::uint64_t bound = square_bound(index);
    if (exponent > UINT64_MAX - bound)
      throw std::overflow_error("amplification exponent overflows");
    exponent += bound;
    if (exponent > max_exponent)
      throw std::overflow_error(
          "amplification exponent " + std::to_string(exponent) +
          " exceeds the bound of " + std::to_string(max_exponent));
  }
  if (n > (UINT64_MAX >> exponent))
    throw std::overflow_error("amplified requirement does not fit in 64 bits");
  return n << exponent;
}

ScheduleRun run_schedule(std::uint64_t delta,
                         const std::vector<StageEvent>& trace,
                         std::uint64_t max_exponent) {
  if (delta < 1)
    throw std::invalid_argument("branching degree must be positive");

  ScheduleRun run;
  std::map<std::uint64_t, std::uint64_t> recorded;
  std::uint64_t n = 2;
  for (std::uint64_t s = 0; s < trace.size(); ++s) {
    std::uint64_t amplified = 0;
    try {
      amplified = amplified_requirement(n, recorded, max_exponent);
    } catch (const std::overflow_error& e) {
      run.overflow = ScheduleOverflow{s, e.what()};
      return run;
    }
    run.rows.push_back(ScheduleRow{s, n, amplified, recorded.size()});
    if (amplified > UINT64_MAX - (delta - 1)) {
      run.overflow =
          ScheduleOverflow{s, "requirement does not fit in 64 bits"};
      return run;
    }
    n = amplified + (delta - 1);
    if (trace[s].kind == StageEvent::Kind::kDiverged)
      recorded.emplace(s, trace[s].index);
  }
  run.final_requirement = n;
  return run;
}

}  // namespace bushygw
