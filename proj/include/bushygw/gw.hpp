#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bushygw/rng.hpp"

namespace bushygw {

// Offspring law of a branching process: pmf[k] is the probability of k
// children.  Probabilities lie in [0,1], sum to 1 within 1e-12, and pmf[1]
// differs from 1 (a process where every individual has exactly one child is
// rejected as degenerate).
class OffspringDistribution {
public:
  static OffspringDistribution from_pmf(std::vector<double> pmf);

  // Binomial(n, p) offspring via the multiplicative pmf recurrence; the
  // endpoint probabilities p = 0 and p = 1 are produced exactly.
  static OffspringDistribution binomial(std::uint32_t n, double p);

  const std::vector<double>& pmf() const { return pmf_; }
  std::size_t max_offspring() const { return pmf_.size() - 1; }

  double mean() const;

  // Probability generating function sum_k pmf[k] * s^k for s in [0,1].
  double pgf(double s) const;

private:
  explicit OffspringDistribution(std::vector<double> pmf)
      : pmf_(std::move(pmf)) {}
  std::vector<double> pmf_;
};

// Slack used when comparing a computed mean against the critical value 1 and
// when validating that a pmf sums to 1: knife-edge parameters whose exact
// mean is 1 land within a few ulps of it.
inline constexpr double kCriticalSlack = 1e-12;

struct ExtinctionResult {
  enum class Method { kExactCriterion, kFixedPointIteration };
  double q = 0.0;
  Method method = Method::kExactCriterion;
  std::uint64_t iterations = 0;
};

// Probability that the process started from one individual eventually dies
// out: the smallest fixed point of the pgf in [0,1].  Mean offspring <= 1
// (within 1e-12) short-circuits to exactly 1; otherwise the fixed point is
// iterated from 0 until successive change drops below tol.
ExtinctionResult extinction_probability(const OffspringDistribution& dist,
                                        double tol = 1e-12);

// Probability of extinction within the first `generations` generations:
// the pgf iterated that many times from 0.
double extinct_by_generation(const OffspringDistribution& dist,
                             std::uint32_t generations);

struct GWTrajectory {
  std::vector<std::uint64_t> generation_sizes;  // Z_0 = 1 first
  std::optional<std::uint32_t> extinct_at;      // first generation with Z = 0
};

inline constexpr std::uint64_t kDefaultPopulationCap = 10'000'000;

// One sampled trajectory, drawn with inverse-CDF sampling from the stream.
// Stops at extinction or after max_generations; a generation exceeding
// population_cap throws std::overflow_error instead of truncating.
GWTrajectory simulate_trajectory(const OffspringDistribution& dist,
                                 std::uint32_t max_generations,
                                 SplitMix64& stream,
                                 std::uint64_t population_cap =
                                     kDefaultPopulationCap);

struct McEstimate {
  std::uint64_t trials = 0;
  std::uint64_t count = 0;  // trials on which the event occurred
  double fraction = 0.0;
  double standard_error = 0.0;
};

McEstimate make_mc_estimate(std::uint64_t trials, std::uint64_t count);

// Fraction of seeded trials extinct within max_generations.  Each trial uses
// an independent stream derived from (master_seed, trial index), so results
// are bit-identical for any thread count.
McEstimate estimate_extinction_mc(const OffspringDistribution& dist,
                                  std::uint64_t trials,
                                  std::uint32_t max_generations,
                                  std::uint64_t master_seed,
                                  unsigned threads = 1,
                                  std::uint64_t population_cap =
                                      kDefaultPopulationCap);

}  // namespace bushygw
