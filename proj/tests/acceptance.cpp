// Acceptance suite: one binary, one checked criterion per --criterion value.
// Exit codes: 0 pass, 1 fail, 77 skipped (missing dataset).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nucfw/data_io.hpp"
#include "nucfw/objective.hpp"
#include "nucfw/solver.hpp"
#include "nucfw/verify.hpp"

namespace {

using namespace nucfw;

constexpr int kSkipExit = 77;

struct Outcome {
  enum Status { Pass, Fail, Skip } status = Pass;
  std::string detail;
};

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::optional<std::string> dataset_path(const char* env_name,
                                        const std::string& fallback) {
  if (const char* env = std::getenv(env_name); env != nullptr && *env != '\0')
    return std::string(env);
  if (std::filesystem::exists(fallback)) return fallback;
  return std::nullopt;
}

Outcome from_report(const PropertyReport& report, double seconds) {
  Outcome out;
  std::ostringstream ss;
  ss << report.trials << " trials, " << report.failures << " failures, "
     << seconds << " s";
  if (!report.ok()) {
    out.status = Outcome::Fail;
    ss << "; first seeds:";
    for (std::uint64_t s : report.counterexample_seeds) ss << ' ' << s;
    if (!report.note.empty()) ss << "; " << report.note;
  }
  out.detail = ss.str();
  return out;
}

// 10^4 random instances; removing the projected rank-one component must
// lower the dense rank by exactly one in under 30 seconds.
Outcome criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const PropertyReport report = check_rank_drop_exactness(10000, 9001);
  const double seconds = elapsed_since(t0);
  Outcome out = from_report(report, seconds);
  if (out.status == Outcome::Pass && seconds >= 30.0) {
    out.status = Outcome::Fail;
    out.detail += "; exceeded the 30 s budget";
  }
  return out;
}

// 10^3 iterates per branch: the branch step size keeps the iterate feasible
// and lowers the rank by one under the dense oracle.
Outcome criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const PropertyReport interior = check_interior_feasibility(1000, 9101);
  const PropertyReport exterior = check_exterior_feasibility(1000, 9102);
  PropertyReport merged = interior;
  merged.trials += exterior.trials;
  merged.failures += exterior.failures;
  for (std::uint64_t s : exterior.counterexample_seeds)
    merged.counterexample_seeds.push_back(s);
  if (merged.note.empty()) merged.note = exterior.note;
  return from_report(merged, elapsed_since(t0));
}

// 50 interior instances at rank 3 against 10^5 sampled feasible points.
Outcome criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();
  return from_report(check_interior_selection_quality(50, 100000, 9201),
                     elapsed_since(t0));
}

// 200 aligned + 200 misaligned boundary direction instances.
Outcome criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  return from_report(check_boundary_descent(200, 200, 9301),
                     elapsed_since(t0));
}

// Suboptimality of a rank-drop run on a 50x40 planted instance stays below
// the step-count bound, with the reference value from a tight-gap run.
Outcome criterion_5() {
  const auto t0 = std::chrono::steady_clock::now();
  SyntheticProblem prob = make_synthetic(50, 40, 5, 0.5, 0.0, 9401);
  const double delta = nuclear_norm(prob.ground_truth);

  SolverConfig ref_config;
  ref_config.variant = Variant::Rdfw;
  ref_config.delta = delta;
  ref_config.rel_gap_tol = 1e-6;
  ref_config.max_iters = 4000;
  ref_config.seed = 1;
  const double f_ref =
      solve(prob.data.train, ref_config).trace.back().objective;

  SolverConfig config = ref_config;
  config.rel_gap_tol = 1e-2;
  config.max_iters = 1000;
  const SolveResult result = solve(prob.data.train, config);
  const std::vector<double> bound =
      convergence_bound(result.trace, delta, 1.0);

  int violations = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < result.trace.size(); ++k) {
    const double lhs = result.trace[k].objective - f_ref;
    if (lhs > bound[k] + 1e-9) {
      ++violations;
      worst = std::max(worst, lhs - bound[k]);
    }
  }
  Outcome out;
  std::ostringstream ss;
  ss << result.trace.size() << " rows, reference objective " << f_ref << ", "
     << elapsed_since(t0) << " s";
  if (violations > 0) {
    out.status = Outcome::Fail;
    ss << "; " << violations << " bound violations (worst " << worst << ")";
  }
  out.detail = ss.str();
  return out;
}

struct MovieLensRun {
  double final_objective = 0.0;
  int max_rank = 0;
  int final_rank = 0;
  double test_rmse = 0.0;
  double seconds = 0.0;
};

MovieLensRun run_variant(const Dataset& data, Variant variant, double delta,
                         std::uint64_t seed) {
  SolverConfig config;
  config.variant = variant;
  config.delta = delta;
  config.max_iters = 1000;
  config.rel_gap_tol = 1e-2;
  config.seed = seed;
  const SolveResult result = solve(data.train, config);
  MovieLensRun out;
  out.final_objective = result.trace.back().objective;
  for (const TraceRow& row : result.trace)
    out.max_rank = std::max(out.max_rank, row.rank);
  out.final_rank = static_cast<int>(numeric_rank(result.x, 1e-6));
  out.test_rmse = rmse(result.x, data.test);
  out.seconds = result.trace.back().elapsed_s;
  return out;
}

// Low-rank trajectory on ML-100k: for both the unit and the tuned radius,
// the rank-drop run peaks at no more than a quarter of the plain run's rank
// while matching its final objective to 0.1%.
Outcome criterion_6() {
  const auto path = dataset_path("NUCFW_ML100K", "data/ml-100k/u.data");
  if (!path)
    return {Outcome::Skip,
            "ml-100k not found (set NUCFW_ML100K or place data/ml-100k/u.data)"};
  const auto t0 = std::chrono::steady_clock::now();
  const Observations all = parse_movielens(*path, MovieLensFormat::Ml100k);
  const Dataset data = split_and_normalize(all, 0);

  std::ostringstream ss;
  Outcome out;
  for (double mu : {1.0, 3.0}) {
    const double delta = mu * (delta_for(data.train, 0).delta / 2.0);
    const MovieLensRun fw = run_variant(data, Variant::Fw, delta, 0);
    const MovieLensRun rd = run_variant(data, Variant::Rdfw, delta, 0);
    ss << "mu=" << mu << ": fw max rank " << fw.max_rank << ", rd max rank "
       << rd.max_rank << ", objectives " << fw.final_objective << " / "
       << rd.final_objective << "; ";
    if (rd.max_rank > 0.25 * fw.max_rank) {
      out.status = Outcome::Fail;
      ss << "rank ratio above 0.25; ";
    }
    const double rel =
        std::abs(rd.final_objective - fw.final_objective) /
        std::max(fw.final_objective, 1e-12);
    if (rel > 1e-3) {
      out.status = Outcome::Fail;
      ss << "objective mismatch " << rel << "; ";
    }
  }
  ss << elapsed_since(t0) << " s";
  out.detail = ss.str();
  return out;
}

// ML-100k reproduction at the tuned radius over 5 split seeds.
Outcome criterion_7() {
  const auto path = dataset_path("NUCFW_ML100K", "data/ml-100k/u.data");
  if (!path)
    return {Outcome::Skip,
            "ml-100k not found (set NUCFW_ML100K or place data/ml-100k/u.data)"};
  const auto t0 = std::chrono::steady_clock::now();
  const Observations all = parse_movielens(*path, MovieLensFormat::Ml100k);

  double rd_rmse_sum = 0.0, rd_rank_sum = 0.0, fw_rank_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset data = split_and_normalize(all, seed);
    const double delta = delta_for(data.train, 5).delta;  // mu = 3
    const MovieLensRun rd = run_variant(data, Variant::Rdfw, delta, seed);
    const MovieLensRun fw = run_variant(data, Variant::Fw, delta, seed);
    rd_rmse_sum += rd.test_rmse;
    rd_rank_sum += rd.final_rank;
    fw_rank_sum += fw.final_rank;
  }
  const double rd_rmse = rd_rmse_sum / 5.0;
  const double rd_rank = rd_rank_sum / 5.0;
  const double fw_rank = fw_rank_sum / 5.0;

  Outcome out;
  std::ostringstream ss;
  ss << "rd mean rmse " << rd_rmse << ", rd mean rank " << rd_rank
     << ", fw mean rank " << fw_rank << ", " << elapsed_since(t0) << " s";
  if (std::abs(rd_rmse - 0.879) > 0.02) {
    out.status = Outcome::Fail;
    ss << "; rmse outside 0.879 +/- 0.02";
  }
  if (rd_rank > 60.0) {
    out.status = Outcome::Fail;
    ss << "; rank-drop mean final rank above 60";
  }
  if (fw_rank < 5.0 * rd_rank) {
    out.status = Outcome::Fail;
    ss << "; plain run final rank below 5x the rank-drop run";
  }
  out.detail = ss.str();
  return out;
}

// Optional extended check on ML-1M (same tolerances, tuned mu = 3.4).
Outcome criterion_8() {
  const auto path = dataset_path("NUCFW_ML1M", "data/ml-1m/ratings.dat");
  if (!path)
    return {Outcome::Skip,
            "optional ml-1m check; set NUCFW_ML1M to run it"};
  const auto t0 = std::chrono::steady_clock::now();
  const Observations all = parse_movielens(*path, MovieLensFormat::Ml1m);

  double rd_rmse_sum = 0.0, rd_rank_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset data = split_and_normalize(all, seed);
    const double delta = delta_for(data.train, 7).delta;  // mu = 3.4
    const MovieLensRun rd = run_variant(data, Variant::Rdfw, delta, seed);
    rd_rmse_sum += rd.test_rmse;
    rd_rank_sum += rd.final_rank;
  }
  const double rd_rmse = rd_rmse_sum / 5.0;
  const double rd_rank = rd_rank_sum / 5.0;
  Outcome out;
  std::ostringstream ss;
  ss << "rd mean rmse " << rd_rmse << ", rd mean rank " << rd_rank << ", "
     << elapsed_since(t0) << " s";
  if (std::abs(rd_rmse - 0.820) > 0.02) {
    out.status = Outcome::Fail;
    ss << "; rmse outside 0.820 +/- 0.02";
  }
  if (rd_rank > 100.0) {
    out.status = Outcome::Fail;
    ss << "; mean final rank above 100";
  }
  out.detail = ss.str();
  return out;
}

// 100 sequential rank-one updates on a 30x20 iterate, each within 1e-8
// spectral distance of dense recomputation.
Outcome criterion_9() {
  const auto t0 = std::chrono::steady_clock::now();
  return from_report(check_svd_update_maintenance(5, 100, 30, 20, 9901),
                     elapsed_since(t0));
}

const struct {
  int id;
  const char* name;
  Outcome (*run)();
} kCriteria[] = {
    {1, "rank-one annihilation exactness", criterion_1},
    {2, "interior/exterior step feasibility and rank drop", criterion_2},
    {3, "interior selection near the sampled optimum", criterion_3},
    {4, "boundary descent characterization", criterion_4},
    {5, "suboptimality under the step-count bound", criterion_5},
    {6, "ml-100k low-rank trajectory", criterion_6},
    {7, "ml-100k tuned-radius reproduction", criterion_7},
    {8, "ml-1m extended reproduction (optional)", criterion_8},
    {9, "factorization maintenance over 100 updates", criterion_9},
};

int run_one(int id) {
  for (const auto& criterion : kCriteria) {
    if (criterion.id != id) continue;
    const Outcome outcome = criterion.run();
    const char* tag = outcome.status == Outcome::Pass   ? "PASS"
                      : outcome.status == Outcome::Fail ? "FAIL"
                                                        : "SKIP";
    std::printf("%s  criterion %d: %s (%s)\n", tag, criterion.id,
                criterion.name, outcome.detail.c_str());
    std::fflush(stdout);
    if (outcome.status == Outcome::Fail) return 1;
    if (outcome.status == Outcome::Skip) return kSkipExit;
    return 0;
  }
  std::fprintf(stderr, "unknown criterion %d\n", id);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  int criterion = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      criterion = std::atoi(argv[++i]);
  }
  if (criterion != 0) return run_one(criterion);

  int failures = 0;
  int skips = 0;
  for (const auto& entry : kCriteria) {
    const int rc = run_one(entry.id);
    if (rc == 1) ++failures;
    if (rc == kSkipExit) ++skips;
  }
  if (failures > 0) return 1;
  return skips > 0 ? kSkipExit : 0;
}
