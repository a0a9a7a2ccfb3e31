#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nucfw/data_io.hpp"
#include "nucfw/solver.hpp"
#include "nucfw/verify.hpp"

namespace nucfw {

struct DataSource {
  // MovieLens file when path is nonempty, otherwise a synthetic instance.
  std::string movielens_path;
  MovieLensFormat format = MovieLensFormat::Ml100k;
  Index syn_m = 50;
  Index syn_n = 40;
  Index syn_rank = 5;
  double syn_obs_fraction = 0.5;
  double syn_noise_std = 0.0;

  bool is_movielens() const { return !movielens_path.empty(); }
};

struct RunSpec {
  DataSource source;
  std::vector<Variant> variants = {Variant::Rdfw};
  SolverConfig config;                  // delta filled per seed (see below)
  std::optional<double> delta_override; // absolute delta; wins over mu_index
  int mu_index = 0;                     // delta = (2 + 0.2 j) * ||Y_train||_F
  std::vector<std::uint64_t> seeds = {0};
  std::string out_dir;
  int jobs = 1;
  bool raw_rmse = false;
  int max_j = 30;  // tune-delta schedule cap
};

/// Writes trace_<variant>_<seed>.csv per run plus summary.csv with one row
/// per variant (mean/max final rank, mean test RMSE, mean wall time).
/// Returns a process exit code; on failure no summary is written.
int cmd_run(const RunSpec& spec);

/// Walks j = 0, 1, ... evaluating mean validation RMSE per delta until the
/// improvement falls to 1e-3 or below; writes tuning.csv and prints the
/// selected schedule point.
int cmd_tune_delta(const RunSpec& spec);

/// Runs the randomized property suite and prints one pass/fail line per
/// property. Returns 0 iff everything passed.
int cmd_verify(VerifyScale scale, std::uint64_t seed);

void write_trace_csv(const std::string& path,
                     const std::vector<TraceRow>& trace);

/// 17-significant-digit formatting used for all CSV doubles.
std::string format_double(double v);

}  // namespace nucfw
