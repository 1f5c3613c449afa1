#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "bushygw/percolation.hpp"

namespace bushygw::commands {

// Exit statuses shared by every subcommand.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitStatistical = 3;  // failed check or empty search
inline constexpr int kExitOverflow = 4;

// Malformed command-line level input (as opposed to malformed files or
// violated preconditions, which map to kExitPrecondition).
class UsageError : public std::runtime_error {
public:
  explicit UsageError(const std::string& message)
      : std::runtime_error(message) {}
};

enum class Format { kTable, kRecords };

struct ExtinctionOptions {
  std::string dist_spec;  // "binomial:<n>,<p>" or comma-separated pmf
  double tol = 1e-12;
  Format format = Format::kTable;
};

struct SimulateOptions {
  std::string dist_spec;
  std::uint64_t trials = 10'000;
  std::uint32_t max_generations = 12;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::uint64_t population_cap = kDefaultPopulationCap;
  Format format = Format::kTable;
};

struct PercolateOptions {
  std::uint32_t delta = 3;
  double keep_prob = 0.5;
  std::uint32_t depth = 12;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  RootMode mode = RootMode::kConditioned;
  std::size_t copies = 1;
  bool self_test = false;
  unsigned threads = 1;
  Format format = Format::kTable;
};

struct WeakSubsetOptions {
  std::uint32_t delta = 3;
  double keep_prob = 0.5;
  std::uint32_t depth = 20;
  std::size_t n_max = 9;
  std::uint64_t seed = 1;
  bool always_true = false;
  Format format = Format::kTable;
};

struct BushyOptions {
  enum class Action { kCheck, kSplit, kPigeonhole, kSearch, kThin };
  Action action = Action::kCheck;
  std::string bag_path;
  std::vector<std::string> predicate_paths;
  std::string root_text;  // search only
  std::uint64_t n = 1;
  std::uint64_t a = 1;
  std::uint64_t b = 1;
  std::uint64_t delta = 1;
  std::uint32_t branch_bound = 0;  // search/thin universe
  std::uint32_t depth_bound = 0;
  std::string out_path;  // empty: write bags to stdout
};

struct ScheduleOptions {
  std::uint64_t delta = 3;
  std::string trace_path;
  std::uint64_t max_exponent = 62;
  Format format = Format::kTable;
};

// Parses "binomial:<n>,<p>" or a comma-separated pmf.  Malformed syntax
// throws UsageError; syntactically valid but invalid distributions throw
// std::invalid_argument.
OffspringDistribution parse_dist_spec(const std::string& spec);

int run_extinction(const ExtinctionOptions& opts, std::ostream& out,
                   std::ostream& err);
int run_simulate(const SimulateOptions& opts, std::ostream& out,
                 std::ostream& err);
int run_percolate(const PercolateOptions& opts, std::ostream& out,
                  std::ostream& err);
int run_weak_subset(const WeakSubsetOptions& opts, std::ostream& out,
                    std::ostream& err);
int run_bushy(const BushyOptions& opts, std::ostream& out, std::ostream& err);
int run_schedule(const ScheduleOptions& opts, std::ostream& out,
                 std::ostream& err);

}  // namespace bushygw::commands
