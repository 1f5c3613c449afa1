#include "bushygw/gw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bushygw/parallel.hpp"

namespace bushygw {

namespace {

constexpr std::uint64_t kMaxIterations = 1'000'000;

}  // namespace

OffspringDistribution OffspringDistribution::from_pmf(
    std::vector<double> pmf) {
  if (pmf.empty())
    throw std::invalid_argument("offspring pmf must be nonempty");
  double sum = 0.0;
  for (double p : pmf) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("offspring probabilities must lie in [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kCriticalSlack)
    throw std::invalid_argument("offspring pmf must sum to 1");
  if (pmf.size() >= 2 && pmf[1] >= 1.0 - kCriticalSlack)
    throw std::invalid_argument(
        "degenerate offspring law with one child almost surely");
  return OffspringDistribution(std::move(pmf));
}

OffspringDistribution OffspringDistribution::binomial(std::uint32_t n,
                                                      double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("success probability must lie in [0,1]");
  std::vector<double> pmf(n + 1, 0.0);
  if (p == 0.0) {
    pmf[0] = 1.0;
  } else if (p == 1.0) {
    pmf[n] = 1.0;
  } else {
    // pmf[k+1] = pmf[k] * (n-k)/(k+1) * p/(1-p), multiplied before dividing
    // so dyadic p keeps every value exact.
    double ratio = p / (1.0 - p);
    double value = 1.0;
    for (std::uint32_t i = 0; i < n; ++i) value *= 1.0 - p;
    for (std::uint32_t k = 0; k <= n; ++k) {
      pmf[k] = value;
      if (k < n) value = value * (n - k) / (k + 1) * ratio;
    }
  }
  return from_pmf(std::move(pmf));
}

double OffspringDistribution::mean() const {
  double m = 0.0;
  for (std::size_t k = 1; k < pmf_.size(); ++k) m += double(k) * pmf_[k];
  return m;
}

double OffspringDistribution::pgf(double s) const {
  if (!(s >= 0.0 && s <= 1.0))
    throw std::invalid_argument("pgf argument must lie in [0,1]");
  double value = 0.0;
  for (std::size_t k = pmf_.size(); k-- > 0;) value = value * s + pmf_[k];
  return value;
}

ExtinctionResult extinction_probability(const OffspringDistribution& dist,
                                        double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  // Criticality criterion: mean offspring <= 1 forces extinction, and the
  // slack matches the pmf sum tolerance so knife-edge means resolve to 1.
  if (dist.mean() <= 1.0 + kCriticalSlack)
    return {1.0, ExtinctionResult::Method::kExactCriterion, 0};
  double x = 0.0;
  for (std::uint64_t i = 1; i <= kMaxIterations; ++i) {
    double next = dist.pgf(x);
    if (std::abs(next - x) < tol)
      return {next, ExtinctionResult::Method::kFixedPointIteration, i};
    x = next;
  }
  throw std::runtime_error(
      "fixed-point iteration did not converge within " +
      std::to_string(kMaxIterations) + " steps");
}

double extinct_by_generation(const OffspringDistribution& dist,
                             std::uint32_t generations) {
  double x = 0.0;
  for (std::uint32_t i = 0; i < generations; ++i) x = dist.pgf(x);
  return x;
}

GWTrajectory simulate_trajectory(const OffspringDistribution& dist,
                                 std::uint32_t max_generations,
                                 SplitMix64& stream,
                                 std::uint64_t population_cap) {
  // Inverse-CDF sampling: smallest k with cdf[k] > u.
  std::vector<double> cdf(dist.pmf().size());
  double acc = 0.0;
  for (std::size_t k = 0; k < cdf.size(); ++k) {
    acc += dist.pmf()[k];
    cdf[k] = acc;
  }
  cdf.back() = 1.0;

  GWTrajectory out;
  out.generation_sizes.push_back(1);
  std::uint64_t alive = 1;
  for (std::uint32_t gen = 1; gen <= max_generations && alive > 0; ++gen) {
    std::uint64_t next = 0;
    for (std::uint64_t i = 0; i < alive; ++i) {
      double u = stream.next_double();
      next += std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    }
    if (next > population_cap)
      throw std::overflow_error("generation " + std::to_string(gen) +
                                " exceeds the population cap of " +
                                std::to_string(population_cap));
    out.generation_sizes.push_back(next);
    if (next == 0) out.extinct_at = gen;
    alive = next;
  }
  return out;
}

McEstimate make_mc_estimate(std::uint64_t trials, std::uint64_t count) {
  McEstimate est;
  est.trials = trials;
  est.count = count;
  if (trials > 0) {
    est.fraction = double(count) / double(trials);
    est.standard_error =
        std::sqrt(est.fraction * (1.0 - est.fraction) / double(trials));
  }
  return est;
}

McEstimate estimate_extinction_mc(const OffspringDistribution& dist,
                                  std::uint64_t trials,
                                  std::uint32_t max_generations,
                                  std::uint64_t master_seed, unsigned threads,
                                  std::uint64_t population_cap) {
  std::vector<char> extinct = parallel_map(
      trials, threads, [&](std::uint64_t trial) -> char {
        SplitMix64 stream(derive_seed(master_seed, trial));
        GWTrajectory t =
            simulate_trajectory(dist, max_generations, stream, population_cap);
        return t.extinct_at.has_value() ? 1 : 0;
      });
  std::uint64_t count = 0;
  for (char c : extinct) count += c;
  return make_mc_estimate(trials, count);
}

}  // namespace bushygw
