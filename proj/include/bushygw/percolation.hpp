#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bushygw/gw.hpp"
#include "bushygw/path_string.hpp"
#include "bushygw/rng.hpp"

namespace bushygw {

// Full delta-ary tree truncated at a depth, with an independent keep
// probability per site.  keep_probability may be 1 to model the always-kept
// limit; otherwise it lies strictly between 0 and 1.
struct PerfectTreeSpec {
  std::uint32_t delta = 3;
  std::uint32_t depth = 12;
  double keep_probability = 0.5;
};

void validate(const PerfectTreeSpec& spec);

// Whether the root of the retained family tree is given for free or must
// itself be kept by the sample.
enum class RootMode { kConditioned, kUnconditioned };

// Deterministic random subset of the tree: a string belongs to the sample
// iff a keyed hash of its canonical text falls below keep_probability.
// subcopy(n) shifts the view to the strings behind the prefix 0^n 1, so
// distinct subcopies of one sample query disjoint sets of ambient strings.
class SiteSample {
public:
  SiteSample(std::uint64_t master_seed, double keep_probability);
  static SiteSample always_true();

  std::uint64_t master_seed() const { return master_seed_; }
  double keep_probability() const { return keep_probability_; }
  const PathString& ambient_prefix() const { return prefix_; }

  // Membership of the ambient string prefix * s, hashed from whole text.
  bool contains(const PathString& s) const;

  SiteSample subcopy(std::size_t n) const;

  // Incremental walk over the tree that reproduces contains() node by node
  // without rehashing full strings.  root_cursor() already accounts for the
  // subcopy prefix.
  struct Cursor {
    std::uint64_t state = 0;
    bool at_root = true;  // the empty string, whose text form is "-"
  };
  Cursor root_cursor() const;
  Cursor child_cursor(const Cursor& cursor, std::uint32_t label) const;
  bool kept(const Cursor& cursor) const;

private:
  SiteSample() = default;
  std::uint64_t master_seed_ = 0;
  double keep_probability_ = 1.0;
  bool always_ = false;
  std::uint64_t threshold_ = 0;  // keep iff hash < threshold
  std::uint64_t base_state_ = 0;
  PathString prefix_;
};

// Level-by-level account of the retained family tree: generation_sizes has
// one entry per depth 0..depth (zeros after extinction), extinct_at is the
// first empty level, and witness is the length-lex least surviving node at
// full depth.  extinct_at and witness are mutually exclusive.
struct SurvivalReport {
  std::vector<std::uint64_t> generation_sizes;
  std::optional<std::uint32_t> extinct_at;
  std::optional<PathString> witness;
};

SurvivalReport run_percolation(const PerfectTreeSpec& spec,
                               const SiteSample& sample, RootMode mode);

// One report per trial; trial i uses an independent sample seeded from
// (master_seed, i), so the vector is identical for every thread count.
std::vector<SurvivalReport> percolation_trials(const PerfectTreeSpec& spec,
                                               std::uint64_t trials,
                                               std::uint64_t master_seed,
                                               RootMode mode,
                                               unsigned threads = 1);

// Fraction of trials whose family tree reaches full depth.
McEstimate survival_probability_estimate(const PerfectTreeSpec& spec,
                                         std::uint64_t trials,
                                         std::uint64_t master_seed,
                                         RootMode mode,
                                         unsigned threads = 1);

// Per trial: one ambient sample, whose subcopies 0..copies-1 are examined
// independently.  self_test replaces every subcopy with subcopy 0, a
// deliberate dependence control.  Returns one report per copy per trial.
std::vector<std::vector<SurvivalReport>> joint_trials(
    const PerfectTreeSpec& spec, std::size_t copies, std::uint64_t trials,
    std::uint64_t master_seed, RootMode mode = RootMode::kConditioned,
    bool self_test = false, unsigned threads = 1);

// Fraction of trials on which every examined subcopy dies out before full
// depth.
McEstimate joint_extinction_estimate(const PerfectTreeSpec& spec,
                                     std::size_t copies, std::uint64_t trials,
                                     std::uint64_t master_seed,
                                     RootMode mode = RootMode::kConditioned,
                                     bool self_test = false,
                                     unsigned threads = 1);

// Outcome of scanning subcopies 0..n_max for one that survives to full
// depth.  Subcopy roots are not conditioned: survival certifies that every
// prefix of the witness, the empty one included, belongs to the subcopy, so
// every string of y_prefix is a member of the ambient sample.
struct WeakSubsetResult {
  std::optional<std::size_t> copy_index;  // least surviving subcopy
  std::optional<PathString> witness;      // its full-depth survivor
  // Ambient strings 0^n 1 tau for every prefix tau of the witness.
  std::vector<PathString> y_prefix;
  // extinct_at of each failed subcopy below copy_index (all of 0..n_max
  // when nothing survives).
  std::vector<std::uint32_t> extinction_depths;
};

WeakSubsetResult find_weak_subset(const PerfectTreeSpec& spec,
                                  const SiteSample& sample,
                                  std::size_t n_max);

}  // namespace bushygw
