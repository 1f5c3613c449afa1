#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "bushygw/commands.hpp"

namespace {

using namespace bushygw;
using namespace bushygw::commands;

void add_format_flag(CLI::App* cmd, Format& format) {
  cmd->add_option("--format", format, "output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"table", Format::kTable},
                                        {"records", Format::kRecords}},
          CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Branching-process extinction, tree percolation and bushy-bag "
      "combinatorics at desk scale"};
  app.require_subcommand(1);

  ExtinctionOptions ext;
  CLI::App* cmd_ext = app.add_subcommand(
      "extinction", "extinction probability of an offspring law");
  cmd_ext->add_option("dist", ext.dist_spec,
                      "binomial:<n>,<p> or comma-separated pmf")
      ->required();
  cmd_ext->add_option("--tol", ext.tol, "fixed-point tolerance");
  add_format_flag(cmd_ext, ext.format);

  SimulateOptions sim;
  CLI::App* cmd_sim = app.add_subcommand(
      "simulate", "Monte Carlo trajectories of an offspring law");
  cmd_sim->add_option("--dist", sim.dist_spec,
                      "binomial:<n>,<p> or comma-separated pmf")
      ->required();
  cmd_sim->add_option("--trials", sim.trials, "number of trials");
  cmd_sim->add_option("--max-gen", sim.max_generations,
                      "generations to simulate");
  cmd_sim->add_option("--seed", sim.seed, "master seed");
  cmd_sim->add_option("--threads", sim.threads, "worker threads");
  cmd_sim->add_option("--cap", sim.population_cap,
                      "per-generation population cap");
  add_format_flag(cmd_sim, sim.format);

  PercolateOptions perc;
  CLI::App* cmd_perc = app.add_subcommand(
      "percolate", "site percolation survival on the full delta-ary tree");
  cmd_perc->add_option("--delta", perc.delta, "branching degree");
  cmd_perc->add_option("--keep-prob", perc.keep_prob,
                       "per-site keep probability");
  cmd_perc->add_option("--depth", perc.depth, "tree depth");
  cmd_perc->add_option("--trials", perc.trials, "number of trials");
  cmd_perc->add_option("--seed", perc.seed, "master seed");
  cmd_perc->add_option("--mode", perc.mode,
                       "whether the root is given or must be kept")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, RootMode>{
              {"conditioned", RootMode::kConditioned},
              {"unconditioned", RootMode::kUnconditioned}},
          CLI::ignore_case));
  cmd_perc->add_option("--copies", perc.copies,
                       "number of disjoint subcopies (joint extinction)");
  cmd_perc->add_flag("--self-test", perc.self_test,
                     "replace every subcopy with subcopy 0");
  cmd_perc->add_option("--threads", perc.threads, "worker threads");
  add_format_flag(cmd_perc, perc.format);

  WeakSubsetOptions weak;
  CLI::App* cmd_weak = app.add_subcommand(
      "weak-subset", "scan subcopies for one surviving to full depth");
  cmd_weak->add_option("--delta", weak.delta, "branching degree");
  cmd_weak->add_option("--keep-prob", weak.keep_prob,
                       "per-site keep probability");
  cmd_weak->add_option("--depth", weak.depth, "tree depth");
  cmd_weak->add_option("--nmax", weak.n_max, "last subcopy to try");
  cmd_weak->add_option("--seed", weak.seed, "sample seed");
  cmd_weak->add_flag("--always-true", weak.always_true,
                     "use the sample that keeps every site");
  add_format_flag(cmd_weak, weak.format);

  BushyOptions bushy;
  CLI::App* cmd_bushy = app.add_subcommand(
      "bushy", "leaf-bag checks, splits and searches");
  cmd_bushy->require_subcommand(1);
  std::map<std::string, BushyOptions::Action> actions{
      {"check", BushyOptions::Action::kCheck},
      {"split", BushyOptions::Action::kSplit},
      {"pigeonhole", BushyOptions::Action::kPigeonhole},
      {"search", BushyOptions::Action::kSearch},
      {"thin", BushyOptions::Action::kThin}};

  CLI::App* bushy_check =
      cmd_bushy->add_subcommand("check", "is the bag n-bushy from its root");
  bushy_check->add_option("--bag", bushy.bag_path, "leaf-bag file")
      ->required();
  bushy_check->add_option("-n,--degree", bushy.n, "bushiness degree")
      ->required();

  CLI::App* bushy_split = cmd_bushy->add_subcommand(
      "split", "split an (a+b-1)-bushy bag along a predicate");
  bushy_split->add_option("--bag", bushy.bag_path, "leaf-bag file")
      ->required();
  bushy_split->add_option("--pred", bushy.predicate_paths,
                          "predicate file (one path per line)")
      ->required();
  bushy_split->add_option("-a", bushy.a, "threshold toward the predicate")
      ->required();
  bushy_split->add_option("-b", bushy.b, "threshold away from the predicate")
      ->required();
  bushy_split->add_option("--out", bushy.out_path, "write the bag here");

  CLI::App* bushy_pigeon = cmd_bushy->add_subcommand(
      "pigeonhole", "find a part carrying an n-bushy sub-bag");
  bushy_pigeon->add_option("--bag", bushy.bag_path, "leaf-bag file")
      ->required();
  bushy_pigeon->add_option("--pred", bushy.predicate_paths,
                           "predicate files, one per part, numbered from 1")
      ->required();
  bushy_pigeon->add_option("-n,--degree", bushy.n, "bushiness degree")
      ->required();
  bushy_pigeon->add_option("--out", bushy.out_path, "write the bag here");

  CLI::App* bushy_search = cmd_bushy->add_subcommand(
      "search", "search a universe for an n-bushy bag with leaves in p");
  bushy_search->add_option("--root", bushy.root_text, "root path ('-' for the empty string)")
      ->required();
  bushy_search->add_option("--pred", bushy.predicate_paths, "predicate file")
      ->required();
  bushy_search->add_option("-n,--degree", bushy.n, "bushiness degree")
      ->required();
  bushy_search
      ->add_option("--branch-bound", bushy.branch_bound, "universe branching")
      ->required();
  bushy_search->add_option("--depth-bound", bushy.depth_bound,
                           "universe depth")
      ->required();
  bushy_search->add_option("--out", bushy.out_path, "write the bag here");

  CLI::App* bushy_thin = cmd_bushy->add_subcommand(
      "thin", "thin a bag to leaves that reach no n-bushy bag for p");
  bushy_thin->add_option("--bag", bushy.bag_path, "leaf-bag file")
      ->required();
  bushy_thin->add_option("--pred", bushy.predicate_paths, "predicate file")
      ->required();
  bushy_thin->add_option("-n,--degree", bushy.n, "bushiness degree")
      ->required();
  bushy_thin->add_option("--delta", bushy.delta, "degree kept after thinning")
      ->required();
  bushy_thin
      ->add_option("--branch-bound", bushy.branch_bound, "universe branching")
      ->required();
  bushy_thin->add_option("--depth-bound", bushy.depth_bound, "universe depth")
      ->required();
  bushy_thin->add_option("--out", bushy.out_path, "write the bag here");

  ScheduleOptions sched;
  CLI::App* cmd_sched = app.add_subcommand(
      "schedule", "replay a stage trace of the requirement schedule");
  cmd_sched->add_option("--delta", sched.delta, "branching degree")
      ->required();
  cmd_sched->add_option("--trace", sched.trace_path,
                        "trace file: '1' or '2 <index>' per line")
      ->required();
  cmd_sched->add_option("--max-exponent", sched.max_exponent,
                        "amplification exponent bound");
  add_format_flag(cmd_sched, sched.format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    // CLI11 uses 0 for --help; everything else is a usage error.
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    if (cmd_ext->parsed())
      return run_extinction(ext, std::cout, std::cerr);
    if (cmd_sim->parsed()) return run_simulate(sim, std::cout, std::cerr);
    if (cmd_perc->parsed()) return run_percolate(perc, std::cout, std::cerr);
    if (cmd_weak->parsed())
      return run_weak_subset(weak, std::cout, std::cerr);
    if (cmd_bushy->parsed()) {
      for (const auto& [name, action] : actions)
        if (cmd_bushy->get_subcommand(name)->parsed()) {
          bushy.action = action;
          break;
        }
      return run_bushy(bushy, std::cout, std::cerr);
    }
    if (cmd_sched->parsed())
      return run_schedule(sched, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
  return kExitUsage;
}
