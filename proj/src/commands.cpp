#include "bushygw/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "bushygw/bag_io.hpp"
#include "bushygw/bushy.hpp"
#include "bushygw/parallel.hpp"
#include "bushygw/schedule.hpp"

namespace bushygw::commands {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// 64-bit seeds do not fit JSON numbers losslessly, so they travel as
// decimal strings everywhere.
std::string seed_text(std::uint64_t seed) { return std::to_string(seed); }

const char* mode_name(RootMode mode) {
  return mode == RootMode::kConditioned ? "conditioned" : "unconditioned";
}

struct Check {
  enum class Verdict { kPass, kFail, kSkipped } verdict = Verdict::kSkipped;
  double sigmas = 0.0;
  bool has_sigmas = false;
};

// Statistical acceptance of an estimate against its analytic value at three
// standard errors.  Below 100 trials the standard error is too coarse to
// mean anything, so the check is skipped rather than failed.
Check check_against(const McEstimate& est, double analytic) {
  Check check;
  if (est.trials < 100) return check;
  double deviation = std::abs(est.fraction - analytic);
  if (est.standard_error > 0.0) {
    check.sigmas = deviation / est.standard_error;
    check.has_sigmas = true;
    check.verdict = deviation <= 3.0 * est.standard_error
                        ? Check::Verdict::kPass
                        : Check::Verdict::kFail;
  } else {
    check.verdict = est.fraction == analytic ? Check::Verdict::kPass
                                             : Check::Verdict::kFail;
  }
  return check;
}

const char* verdict_name(Check::Verdict v) {
  switch (v) {
    case Check::Verdict::kPass: return "PASS";
    case Check::Verdict::kFail: return "FAIL";
    default: return "SKIPPED";
  }
}

void add_check(Json& j, const Check& check) {
  j["check"] = verdict_name(check.verdict);
  if (check.has_sigmas)
    j["deviation_sigmas"] = check.sigmas;
  else
    j["deviation_sigmas"] = nullptr;
}

int exit_for(const Check& check) {
  return check.verdict == Check::Verdict::kFail ? kExitStatistical
                                                : kExitSuccess;
}

// Shared error-to-exit-status mapping for command bodies.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::overflow_error& e) {
    err << "overflow: " << e.what() << "\n";
    return kExitOverflow;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + token + "'");
    }
    if (used != token.size() &&
        token.find_first_not_of(" \t", used) != std::string::npos)
      throw UsageError("not a number: '" + token + "'");
    out.push_back(value);
  }
  if (out.empty()) throw UsageError("empty distribution spec");
  return out;
}

void write_bag_output(const LeafBag& bag, const std::string& out_path,
                      std::ostream& out) {
  if (out_path.empty()) {
    write_leaf_bag(out, bag);
    return;
  }
  std::ofstream file(out_path);
  if (!file)
    throw std::invalid_argument("cannot open output file: " + out_path);
  write_leaf_bag(file, bag);
}

StringPredicate predicate_from_file(const std::string& path) {
  return predicate_from_set(read_string_set_file(path));
}

}  // namespace

OffspringDistribution parse_dist_spec(const std::string& spec) {
  constexpr std::string_view kBinomial = "binomial:";
  if (spec.rfind(kBinomial, 0) == 0) {
    std::string rest = spec.substr(kBinomial.size());
    std::size_t comma = rest.find(',');
    if (comma == std::string::npos)
      throw UsageError("expected binomial:<n>,<p>");
    std::uint32_t n = 0;
    const char* begin = rest.data();
    auto [ptr, ec] = std::from_chars(begin, begin + comma, n);
    if (ec != std::errc() || ptr != begin + comma)
      throw UsageError("not a valid count: '" + rest.substr(0, comma) + "'");
    std::string p_text = rest.substr(comma + 1);
    std::vector<double> p = parse_double_list(p_text);
    if (p.size() != 1) throw UsageError("expected binomial:<n>,<p>");
    return OffspringDistribution::binomial(n, p[0]);
  }
  return OffspringDistribution::from_pmf(parse_double_list(spec));
}

int run_extinction(const ExtinctionOptions& opts, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&]() -> int {
    OffspringDistribution dist = parse_dist_spec(opts.dist_spec);
    ExtinctionResult result = extinction_probability(dist, opts.tol);
    double mean = dist.mean();
    const char* criticality = mean > 1.0 + kCriticalSlack ? "supercritical"
                              : mean < 1.0 - kCriticalSlack
                                  ? "subcritical"
                                  : "critical";
    const char* method =
        result.method == ExtinctionResult::Method::kExactCriterion
            ? "exact-criterion"
            : "fixed-point-iteration";
    if (opts.format == Format::kRecords) {
      Json j;
      j["record"] = "extinction";
      j["dist"] = opts.dist_spec;
      j["mean"] = mean;
      j["criticality"] = criticality;
      j["method"] = method;
      j["iterations"] = result.iterations;
      j["q"] = result.q;
      out << j.dump() << "\n";
    } else {
      out << "mean: " << fmt_double(mean) << "\n"
          << "criticality: " << criticality << "\n"
          << "method: " << method << "\n"
          << "iterations: " << result.iterations << "\n"
          << "q: " << fmt_double(result.q) << "\n";
    }
    return kExitSuccess;
  });
}

int run_simulate(const SimulateOptions& opts, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (opts.trials < 1) throw UsageError("at least one trial is required");
    if (opts.threads < 1) throw UsageError("at least one thread is required");
    OffspringDistribution dist = parse_dist_spec(opts.dist_spec);

    std::vector<GWTrajectory> trajectories = parallel_map(
        opts.trials, opts.threads, [&](std::uint64_t trial) {
          SplitMix64 stream(derive_seed(opts.seed, trial));
          return simulate_trajectory(dist, opts.max_generations, stream,
                                     opts.population_cap);
        });

    std::uint64_t extinct = 0;
    for (const GWTrajectory& t : trajectories)
      if (t.extinct_at.has_value()) ++extinct;
    McEstimate est = make_mc_estimate(opts.trials, extinct);
    double analytic = extinct_by_generation(dist, opts.max_generations);
    Check check = check_against(est, analytic);

    if (opts.format == Format::kRecords) {
      for (std::uint64_t i = 0; i < opts.trials; ++i) {
        Json j;
        j["record"] = "trial";
        j["trial"] = i;
        j["seed"] = seed_text(derive_seed(opts.seed, i));
        j["z"] = trajectories[i].generation_sizes;
        if (trajectories[i].extinct_at)
          j["extinct_at"] = *trajectories[i].extinct_at;
        else
          j["extinct_at"] = nullptr;
        out << j.dump() << "\n";
      }
      Json j;
      j["record"] = "summary";
      j["command"] = "simulate";
      j["dist"] = opts.dist_spec;
      j["master_seed"] = seed_text(opts.seed);
      j["trials"] = est.trials;
      j["max_generations"] = opts.max_generations;
      j["extinct"] = est.count;
      j["fraction_extinct"] = est.fraction;
      j["standard_error"] = est.standard_error;
      j["analytic_extinction"] = analytic;
      add_check(j, check);
      out << j.dump() << "\n";
    } else {
      out << "trials: " << est.trials << "\n"
          << "max generations: " << opts.max_generations << "\n"
          << "extinct: " << est.count << "\n"
          << "fraction extinct: " << fmt_double(est.fraction) << "\n"
          << "standard error: " << fmt_double(est.standard_error) << "\n"
          << "analytic extinction: " << fmt_double(analytic) << "\n"
          << "check: " << verdict_name(check.verdict) << "\n";
    }
    return exit_for(check);
  });
}

int run_percolate(const PercolateOptions& opts, std::ostream& out,
                  std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (opts.trials < 1) throw UsageError("at least one trial is required");
    if (opts.threads < 1) throw UsageError("at least one thread is required");
    if (opts.copies < 1) throw UsageError("at least one copy is required");
    PerfectTreeSpec spec{opts.delta, opts.depth, opts.keep_prob};
    validate(spec);

    double q_depth = extinct_by_generation(
        OffspringDistribution::binomial(opts.delta, opts.keep_prob),
        opts.depth);
    double copy_extinction = opts.mode == RootMode::kConditioned
                                 ? q_depth
                                 : (1.0 - opts.keep_prob) +
                                       opts.keep_prob * q_depth;

    if (opts.copies == 1 && !opts.self_test) {
      std::vector<SurvivalReport> reports = percolation_trials(
          spec, opts.trials, opts.seed, opts.mode, opts.threads);
      std::uint64_t survived = 0;
      for (const SurvivalReport& r : reports)
        if (r.witness.has_value()) ++survived;
      McEstimate est = make_mc_estimate(opts.trials, survived);
      double analytic = 1.0 - copy_extinction;
      Check check = check_against(est, analytic);

      if (opts.format == Format::kRecords) {
        for (std::uint64_t i = 0; i < opts.trials; ++i) {
          const SurvivalReport& r = reports[i];
          Json j;
          j["record"] = "trial";
          j["trial"] = i;
          j["seed"] = seed_text(derive_seed(opts.seed, i));
          j["mode"] = mode_name(opts.mode);
          j["delta"] = opts.delta;
          j["p"] = opts.keep_prob;
          j["depth"] = opts.depth;
          j["z"] = r.generation_sizes;
          if (r.extinct_at)
            j["extinct_at"] = *r.extinct_at;
          else
            j["extinct_at"] = nullptr;
          if (r.witness)
            j["witness"] = r.witness->to_text();
          else
            j["witness"] = nullptr;
          out << j.dump() << "\n";
        }
        Json j;
        j["record"] = "summary";
        j["command"] = "percolate";
        j["master_seed"] = seed_text(opts.seed);
        j["mode"] = mode_name(opts.mode);
        j["delta"] = opts.delta;
        j["p"] = opts.keep_prob;
        j["depth"] = opts.depth;
        j["trials"] = est.trials;
        j["survived"] = est.count;
        j["fraction_survived"] = est.fraction;
        j["standard_error"] = est.standard_error;
        j["analytic_survival"] = analytic;
        add_check(j, check);
        out << j.dump() << "\n";
      } else {
        out << "mode: " << mode_name(opts.mode) << "\n"
            << "trials: " << est.trials << "\n"
            << "survived: " << est.count << "\n"
            << "fraction survived: " << fmt_double(est.fraction) << "\n"
            << "standard error: " << fmt_double(est.standard_error) << "\n"
            << "analytic survival: " << fmt_double(analytic) << "\n"
            << "check: " << verdict_name(check.verdict) << "\n";
      }
      return exit_for(check);
    }

    std::vector<std::vector<SurvivalReport>> all =
        joint_trials(spec, opts.copies, opts.trials, opts.seed, opts.mode,
                     opts.self_test, opts.threads);
    std::uint64_t all_extinct_count = 0;
    for (const auto& reports : all) {
      bool all_extinct = true;
      for (const SurvivalReport& r : reports)
        if (!r.extinct_at.has_value()) all_extinct = false;
      if (all_extinct) ++all_extinct_count;
    }
    McEstimate est = make_mc_estimate(opts.trials, all_extinct_count);
    // Distinct subcopies query disjoint sites, so joint extinction is the
    // per-copy probability to the power of the number of distinct copies.
    double analytic = std::pow(
        copy_extinction, opts.self_test ? 1.0 : double(opts.copies));
    Check check = check_against(est, analytic);

    if (opts.format == Format::kRecords) {
      for (std::uint64_t i = 0; i < opts.trials; ++i) {
        Json j;
        j["record"] = "trial";
        j["trial"] = i;
        j["seed"] = seed_text(derive_seed(opts.seed, i));
        j["mode"] = mode_name(opts.mode);
        j["delta"] = opts.delta;
        j["p"] = opts.keep_prob;
        j["depth"] = opts.depth;
        Json copies = Json::array();
        bool all_extinct = true;
        for (std::size_t c = 0; c < all[i].size(); ++c) {
          const SurvivalReport& r = all[i][c];
          Json copy;
          copy["copy"] = c;
          copy["z"] = r.generation_sizes;
          if (r.extinct_at)
            copy["extinct_at"] = *r.extinct_at;
          else
            copy["extinct_at"] = nullptr;
          if (r.witness)
            copy["witness"] = r.witness->to_text();
          else
            copy["witness"] = nullptr;
          if (!r.extinct_at.has_value()) all_extinct = false;
          copies.push_back(std::move(copy));
        }
        j["copies"] = std::move(copies);
        j["all_extinct"] = all_extinct;
        out << j.dump() << "\n";
      }
      Json j;
      j["record"] = "summary";
      j["command"] = "percolate";
      j["master_seed"] = seed_text(opts.seed);
      j["mode"] = mode_name(opts.mode);
      j["delta"] = opts.delta;
      j["p"] = opts.keep_prob;
      j["depth"] = opts.depth;
      j["copies"] = opts.copies;
      j["self_test"] = opts.self_test;
      j["trials"] = est.trials;
      j["all_extinct"] = est.count;
      j["fraction_all_extinct"] = est.fraction;
      j["standard_error"] = est.standard_error;
      j["analytic_joint_extinction"] = analytic;
      add_check(j, check);
      out << j.dump() << "\n";
    } else {
      out << "mode: " << mode_name(opts.mode) << "\n"
          << "copies: " << opts.copies
          << (opts.self_test ? " (self-test: copy 0 repeated)" : "") << "\n"
          << "trials: " << est.trials << "\n"
          << "all extinct: " << est.count << "\n"
          << "fraction all extinct: " << fmt_double(est.fraction) << "\n"
          << "standard error: " << fmt_double(est.standard_error) << "\n"
          << "analytic joint extinction: " << fmt_double(analytic) << "\n"
          << "check: " << verdict_name(check.verdict) << "\n";
    }
    return exit_for(check);
  });
}

int run_weak_subset(const WeakSubsetOptions& opts, std::ostream& out,
                    std::ostream& err) {
  return guarded(err, [&]() -> int {
    PerfectTreeSpec spec{opts.delta, opts.depth, opts.keep_prob};
    validate(spec);
    SiteSample sample = opts.always_true
                            ? SiteSample::always_true()
                            : SiteSample(opts.seed, opts.keep_prob);
    WeakSubsetResult result = find_weak_subset(spec, sample, opts.n_max);

    bool subset_ok = true;
    for (const PathString& y : result.y_prefix)
      if (!sample.contains(y)) subset_ok = false;
    if (result.copy_index.has_value() && !subset_ok)
      throw std::logic_error(
          "weak subset soundness violated: a y_prefix string is not a "
          "member of the sample");

    if (opts.format == Format::kRecords) {
      Json j;
      j["record"] = "weak_subset";
      j["seed"] = seed_text(opts.seed);
      j["always_true"] = opts.always_true;
      j["delta"] = opts.delta;
      j["p"] = opts.keep_prob;
      j["depth"] = opts.depth;
      j["n_max"] = opts.n_max;
      j["extinction_depths"] = result.extinction_depths;
      if (result.copy_index) {
        j["found_copy"] = *result.copy_index;
        j["witness"] = result.witness->to_text();
        Json y = Json::array();
        for (const PathString& s : result.y_prefix) y.push_back(s.to_text());
        j["y_prefix"] = std::move(y);
        j["y_subset_check"] = "PASS";
      } else {
        j["found_copy"] = nullptr;
        j["witness"] = nullptr;
        j["y_prefix"] = Json::array();
        j["y_subset_check"] = nullptr;
      }
      out << j.dump() << "\n";
    } else {
      for (std::size_t n = 0; n < result.extinction_depths.size(); ++n)
        out << "copy " << n << ": extinct at depth "
            << result.extinction_depths[n] << "\n";
      if (result.copy_index) {
        out << "copy " << *result.copy_index
            << ": survives to depth " << opts.depth << "\n"
            << "witness: " << result.witness->to_text() << "\n"
            << "y_prefix (" << result.y_prefix.size() << " strings):\n";
        for (const PathString& s : result.y_prefix)
          out << "  " << s.to_text() << "\n";
        out << "y_subset_check: PASS\n";
      } else {
        out << "no surviving subcopy up to " << opts.n_max << "\n";
      }
    }
    return result.copy_index.has_value() ? kExitSuccess : kExitStatistical;
  });
}

int run_bushy(const BushyOptions& opts, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&]() -> int {
    using Action = BushyOptions::Action;
    switch (opts.action) {
      case Action::kCheck: {
        LeafBag bag = read_leaf_bag_file(opts.bag_path);
        out << "bushy: " << (is_bushy_from(bag, opts.n) ? "true" : "false")
            << "\n";
        return kExitSuccess;
      }
      case Action::kSplit: {
        if (opts.predicate_paths.empty())
          throw UsageError("a predicate file is required");
        LeafBag bag = read_leaf_bag_file(opts.bag_path);
        StringPredicate p = predicate_from_file(opts.predicate_paths.at(0));
        SplitResult result = split_bushy(bag, opts.a, opts.b, p);
        out << "side: " << result.label << "\n";
        write_bag_output(result.bag, opts.out_path, out);
        return kExitSuccess;
      }
      case Action::kPigeonhole: {
        LeafBag bag = read_leaf_bag_file(opts.bag_path);
        std::vector<StringPredicate> parts;
        for (const std::string& path : opts.predicate_paths)
          parts.push_back(predicate_from_file(path));
        PigeonholeResult result = pigeonhole_split(bag, opts.n, parts);
        // Parts are numbered from 1 in input order.
        out << "part: " << result.part_index + 1 << "\n";
        write_bag_output(result.bag, opts.out_path, out);
        return kExitSuccess;
      }
      case Action::kSearch: {
        if (opts.predicate_paths.empty())
          throw UsageError("a predicate file is required");
        auto root = PathString::parse(opts.root_text);
        if (!root)
          throw UsageError("not a valid path: '" + opts.root_text + "'");
        FiniteUniverse universe(opts.branch_bound, opts.depth_bound);
        StringPredicate p = predicate_from_file(opts.predicate_paths.at(0));
        auto bag = find_bushy_bag(*root, opts.n, p, universe);
        if (!bag) {
          out << "absent\n";
          return kExitSuccess;
        }
        out << "present\n";
        write_bag_output(*bag, opts.out_path, out);
        return kExitSuccess;
      }
      case Action::kThin: {
        if (opts.predicate_paths.empty())
          throw UsageError("a predicate file is required");
        LeafBag bag = read_leaf_bag_file(opts.bag_path);
        FiniteUniverse universe(opts.branch_bound, opts.depth_bound);
        StringPredicate p = predicate_from_file(opts.predicate_paths.at(0));
        LeafBag thinned =
            thin_to_unreachable(bag, opts.n, opts.delta, p, universe);
        write_bag_output(thinned, opts.out_path, out);
        return kExitSuccess;
      }
    }
    throw UsageError("unknown action");
  });
}

int run_schedule(const ScheduleOptions& opts, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&]() -> int {
    std::vector<StageEvent> trace = read_trace_file(opts.trace_path);
    ScheduleRun run =
        bushygw::run_schedule(opts.delta, trace, opts.max_exponent);

    if (opts.format == Format::kRecords) {
      for (const ScheduleRow& row : run.rows) {
        Json j;
        j["record"] = "stage";
        j["s"] = row.stage;
        j["n"] = row.requirement;
        j["n_mid"] = row.amplified;
        j["recorded"] = row.diverged_count;
        out << j.dump() << "\n";
      }
      Json j;
      j["record"] = "summary";
      j["command"] = "schedule";
      j["delta"] = opts.delta;
      j["stages"] = run.rows.size();
      if (run.final_requirement)
        j["final_n"] = *run.final_requirement;
      else
        j["final_n"] = nullptr;
      if (run.overflow) {
        j["overflow_stage"] = run.overflow->stage;
        j["overflow"] = run.overflow->message;
      } else {
        j["overflow_stage"] = nullptr;
        j["overflow"] = nullptr;
      }
      out << j.dump() << "\n";
    } else {
      out << "s\tn\tn_mid\trecorded\n";
      for (const ScheduleRow& row : run.rows)
        out << row.stage << "\t" << row.requirement << "\t" << row.amplified
            << "\t" << row.diverged_count << "\n";
      if (run.final_requirement)
        out << "final n: " << *run.final_requirement << "\n";
    }
    if (run.overflow) {
      err << "overflow at stage " << run.overflow->stage << ": "
          << run.overflow->message << "\n";
      return kExitOverflow;
    }
    return kExitSuccess;
  });
}

}  // namespace bushygw::commands
