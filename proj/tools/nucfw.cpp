// Experiment runner for the nuclear-norm-constrained solver suite.

#include <CLI11.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "nucfw/cli_runner.hpp"

namespace {

nucfw::DataSource make_source(const std::string& dataset,
                              const std::string& format,
                              const std::vector<double>& synthetic) {
  nucfw::DataSource source;
  if (!dataset.empty()) {
    source.movielens_path = dataset;
    source.format = nucfw::movielens_format_from_string(format);
    return source;
  }
  if (synthetic.size() != 5)
    throw CLI::ValidationError(
        "--synthetic expects m,n,rank,obs_fraction,noise_std");
  source.syn_m = static_cast<nucfw::Index>(synthetic[0]);
  source.syn_n = static_cast<nucfw::Index>(synthetic[1]);
  source.syn_rank = static_cast<nucfw::Index>(synthetic[2]);
  source.syn_obs_fraction = synthetic[3];
  source.syn_noise_std = synthetic[4];
  return source;
}

struct CommonFlags {
  std::string dataset;
  std::string format = "ml100k";
  std::vector<double> synthetic;
  std::vector<std::string> variants = {"rdfw"};
  double delta = 0.0;
  int mu_index = 0;
  int max_iters = 1000;
  double rel_gap = 1e-2;
  double rank_threshold = 1e-6;
  double power_tol = 1e-9;
  int power_max_iter = 500;
  std::vector<std::uint64_t> seeds = {0};
  int jobs = 1;
  std::string out;
  bool raw_rmse = false;
  int max_j = 30;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags, bool wants_delta) {
  cmd->add_option("--dataset", flags->dataset, "MovieLens ratings file");
  cmd->add_option("--format", flags->format, "ml100k|ml1m")
      ->check(CLI::IsMember({"ml100k", "ml1m"}));
  cmd->add_option("--synthetic", flags->synthetic,
                  "m,n,rank,obs_fraction,noise_std")
      ->delimiter(',');
  cmd->add_option("--variant", flags->variants, "fw|afw|inface|rdfw")
      ->delimiter(',');
  if (wants_delta) {
    cmd->add_option("--delta", flags->delta,
                    "absolute nuclear-ball radius (overrides --mu-index)");
    cmd->add_option("--mu-index", flags->mu_index,
                    "j in delta = (2 + 0.2 j) * ||Y||_F");
  }
  cmd->add_option("--max-iters", flags->max_iters, "iteration cap")
      ->default_val(1000);
  cmd->add_option("--rel-gap", flags->rel_gap, "relative gap tolerance")
      ->default_val(1e-2);
  cmd->add_option("--rank-threshold", flags->rank_threshold,
                  "singular value truncation threshold")
      ->default_val(1e-6);
  cmd->add_option("--power-tol", flags->power_tol,
                  "oracle power-iteration tolerance");
  cmd->add_option("--power-max-iter", flags->power_max_iter,
                  "oracle power-iteration cap");
  cmd->add_option("--seeds", flags->seeds, "one run per seed")->delimiter(',');
  cmd->add_option("--jobs", flags->jobs, "parallel (variant, seed) runs");
  cmd->add_option("--out", flags->out, "output directory")->required();
  cmd->add_flag("--raw-rmse", flags->raw_rmse,
                "also report RMSE on the raw rating scale");
}

nucfw::RunSpec make_spec(const CommonFlags& flags) {
  nucfw::RunSpec spec;
  spec.source = make_source(flags.dataset, flags.format, flags.synthetic);
  spec.variants.clear();
  for (const std::string& name : flags.variants)
    spec.variants.push_back(nucfw::variant_from_string(name));
  if (flags.delta > 0.0) spec.delta_override = flags.delta;
  spec.mu_index = flags.mu_index;
  spec.config.max_iters = flags.max_iters;
  spec.config.rel_gap_tol = flags.rel_gap;
  spec.config.rank_threshold = flags.rank_threshold;
  spec.config.power_tol = flags.power_tol;
  spec.config.power_max_iter = flags.power_max_iter;
  spec.seeds = flags.seeds;
  spec.jobs = flags.jobs;
  spec.out_dir = flags.out;
  spec.raw_rmse = flags.raw_rmse;
  spec.max_j = flags.max_j;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projection-free solvers for nuclear-norm-constrained "
               "matrix completion"};
  app.set_config("--config", "", "flat key = value config file; flags win");
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "solve and emit CSV traces");
  add_common_flags(run, &run_flags, /*wants_delta=*/true);

  CommonFlags tune_flags;
  CLI::App* tune = app.add_subcommand(
      "tune-delta", "walk the delta schedule against validation RMSE");
  add_common_flags(tune, &tune_flags, /*wants_delta=*/false);
  tune->add_option("--max-j", tune_flags.max_j, "schedule cap");

  std::string scale = "quick";
  std::uint64_t verify_seed = 0;
  CLI::App* verify =
      app.add_subcommand("verify", "run the randomized property suite");
  verify->add_option("--scale", scale, "quick|full")
      ->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--seed", verify_seed, "base seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return nucfw::cmd_run(make_spec(run_flags));
    if (tune->parsed()) return nucfw::cmd_tune_delta(make_spec(tune_flags));
    if (verify->parsed())
      return nucfw::cmd_verify(scale == "full" ? nucfw::VerifyScale::Full
                                               : nucfw::VerifyScale::Quick,
                               verify_seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
