#include "bushygw/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bushygw/parallel.hpp"

namespace bushygw {

void validate(const PerfectTreeSpec& spec) {
  if (spec.delta < 1)
    throw std::invalid_argument("branching degree must be positive");
  if (spec.depth < 1)
    throw std::invalid_argument("depth must be positive");
  if (!(spec.keep_probability > 0.0 && spec.keep_probability <= 1.0))
    throw std::invalid_argument("keep probability must lie in (0,1]");
}

SiteSample::SiteSample(std::uint64_t master_seed, double keep_probability) {
  if (!(keep_probability > 0.0 && keep_probability <= 1.0))
    throw std::invalid_argument("keep probability must lie in (0,1]");
  master_seed_ = master_seed;
  keep_probability_ = keep_probability;
  always_ = keep_probability >= 1.0;
  // P(hash < threshold) = threshold / 2^64 for the 2^64 equidistributed
  // hash values; dyadic probabilities are represented exactly.
  threshold_ = always_ ? UINT64_MAX
                       : static_cast<std::uint64_t>(
                             std::ldexp(keep_probability, 64));
  base_state_ = fnv_basis(master_seed);
}

SiteSample SiteSample::always_true() {
  SiteSample sample;
  sample.master_seed_ = 0;
  sample.keep_probability_ = 1.0;
  sample.always_ = true;
  sample.threshold_ = UINT64_MAX;
  sample.base_state_ = fnv_basis(0);
  return sample;
}

bool SiteSample::contains(const PathString& s) const {
  if (always_) return true;
  std::string text = concat(prefix_, s).to_text();
  return keyed_hash(master_seed_, text) < threshold_;
}

SiteSample SiteSample::subcopy(std::size_t n) const {
  SiteSample out = *this;
  PathString shifted = out.prefix_;
  for (std::size_t i = 0; i < n; ++i) shifted = shifted.extended(0);
  out.prefix_ = shifted.extended(1);
  return out;
}

SiteSample::Cursor SiteSample::root_cursor() const {
  Cursor cursor;
  cursor.state = base_state_;
  cursor.at_root = true;
  for (std::uint32_t label : prefix_.labels())
    cursor = child_cursor(cursor, label);
  return cursor;
}

SiteSample::Cursor SiteSample::child_cursor(const Cursor& cursor,
                                            std::uint32_t label) const {
  Cursor out;
  std::uint64_t state = cursor.at_root ? base_state_
                                       : fnv_feed(cursor.state, " ");
  out.state = fnv_feed(state, std::to_string(label));
  out.at_root = false;
  return out;
}

bool SiteSample::kept(const Cursor& cursor) const {
  if (always_) return true;
  std::uint64_t state =
      cursor.at_root ? fnv_feed(base_state_, "-") : cursor.state;
  return fnv_finish(state) < threshold_;
}

SurvivalReport run_percolation(const PerfectTreeSpec& spec,
                               const SiteSample& sample, RootMode mode) {
  validate(spec);

  struct Node {
    std::uint32_t parent;
    std::uint32_t label;
    SiteSample::Cursor cursor;
  };

  SurvivalReport report;
  report.generation_sizes.assign(spec.depth + 1, 0);

  SiteSample::Cursor root = sample.root_cursor();
  bool root_alive =
      mode == RootMode::kConditioned ? true : sample.kept(root);
  if (!root_alive) {
    report.extinct_at = 0;
    return report;
  }

  // levels[d] holds the surviving depth-d nodes in lexicographic order;
  // parent indices allow the witness path to be reconstructed.
  std::vector<std::vector<Node>> levels;
  levels.push_back({Node{0, 0, root}});
  report.generation_sizes[0] = 1;

  for (std::uint32_t d = 0; d < spec.depth; ++d) {
    std::vector<Node> next;
    const std::vector<Node>& current = levels.back();
    for (std::uint32_t i = 0; i < current.size(); ++i) {
      for (std::uint32_t k = 0; k < spec.delta; ++k) {
        SiteSample::Cursor child = sample.child_cursor(current[i].cursor, k);
        if (sample.kept(child)) next.push_back(Node{i, k, child});
      }
    }
    if (next.size() > kDefaultPopulationCap)
      throw std::overflow_error("generation " + std::to_string(d + 1) +
                                " exceeds the population cap of " +
                                std::to_string(kDefaultPopulationCap));
    report.generation_sizes[d + 1] = next.size();
    if (next.empty()) {
      report.extinct_at = d + 1;
      return report;
    }
    levels.push_back(std::move(next));
  }

  // Survived: read off the leftmost full-depth path.
  std::vector<std::uint32_t> labels(spec.depth);
  std::uint32_t index = 0;
  for (std::uint32_t d = spec.depth; d >= 1; --d) {
    labels[d - 1] = levels[d][index].label;
    index = levels[d][index].parent;
  }
  report.witness = PathString(std::move(labels));
  return report;
}

std::vector<SurvivalReport> percolation_trials(const PerfectTreeSpec& spec,
                                               std::uint64_t trials,
                                               std::uint64_t master_seed,
                                               RootMode mode,
                                               unsigned threads) {
  validate(spec);
  return parallel_map(trials, threads, [&](std::uint64_t trial) {
    SiteSample sample(derive_seed(master_seed, trial),
                      spec.keep_probability);
    return run_percolation(spec, sample, mode);
  });
}

McEstimate survival_probability_estimate(const PerfectTreeSpec& spec,
                                         std::uint64_t trials,
                                         std::uint64_t master_seed,
                                         RootMode mode, unsigned threads) {
  validate(spec);
  std::vector<char> survived = parallel_map(
      trials, threads, [&](std::uint64_t trial) -> char {
        SiteSample sample(derive_seed(master_seed, trial),
                          spec.keep_probability);
        return run_percolation(spec, sample, mode).witness.has_value() ? 1
                                                                       : 0;
      });
  std::uint64_t count = 0;
  for (char c : survived) count += c;
  return make_mc_estimate(trials, count);
}

std::vector<std::vector<SurvivalReport>> joint_trials(
    const PerfectTreeSpec& spec, std::size_t copies, std::uint64_t trials,
    std::uint64_t master_seed, RootMode mode, bool self_test,
    unsigned threads) {
  validate(spec);
  if (copies < 1)
    throw std::invalid_argument("at least one subcopy is required");
  return parallel_map(trials, threads, [&](std::uint64_t trial) {
    SiteSample ambient(derive_seed(master_seed, trial),
                       spec.keep_probability);
    std::vector<SurvivalReport> reports;
    reports.reserve(copies);
    for (std::size_t n = 0; n < copies; ++n) {
      SiteSample copy = ambient.subcopy(self_test ? 0 : n);
      reports.push_back(run_percolation(spec, copy, mode));
    }
    return reports;
  });
}

McEstimate joint_extinction_estimate(const PerfectTreeSpec& spec,
                                     std::size_t copies,
                                     std::uint64_t trials,
                                     std::uint64_t master_seed, RootMode mode,
                                     bool self_test, unsigned threads) {
  std::vector<std::vector<SurvivalReport>> all =
      joint_trials(spec, copies, trials, master_seed, mode, self_test,
                   threads);
  std::uint64_t count = 0;
  for (const auto& reports : all) {
    bool all_extinct = true;
    for (const SurvivalReport& r : reports)
      if (!r.extinct_at.has_value()) all_extinct = false;
    if (all_extinct) ++count;
  }
  return make_mc_estimate(trials, count);
}

WeakSubsetResult find_weak_subset(const PerfectTreeSpec& spec,
                                  const SiteSample& sample,
                                  std::size_t n_max) {
  validate(spec);
  WeakSubsetResult result;
  for (std::size_t n = 0; n <= n_max; ++n) {
    SiteSample copy = sample.subcopy(n);
    // Unconditioned: a surviving copy certifies that every prefix of the
    // witness, including the empty string, belongs to the copy, hence every
    // y_prefix string belongs to the ambient sample.
    SurvivalReport report =
        run_percolation(spec, copy, RootMode::kUnconditioned);
    if (report.witness.has_value()) {
      result.copy_index = n;
      result.witness = report.witness;
      PathString stem;
      for (std::size_t i = 0; i < n; ++i) stem = stem.extended(0);
      stem = stem.extended(1);
      for (std::size_t len = 0; len <= report.witness->length(); ++len)
        result.y_prefix.push_back(
            concat(stem, report.witness->prefix(len)));
      return result;
    }
    result.extinction_depths.push_back(*report.extinct_at);
  }
  return result;
}

}  // namespace bushygw
