#include "nucfw/cli_runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <semaphore>
#include <sstream>

#include "nucfw/log.hpp"
#include "nucfw/objective.hpp"

namespace nucfw {

namespace {

namespace fs = std::filesystem;

struct SeedData {
  Dataset data;
  double delta = 0.0;
};

SeedData load_for_seed(const RunSpec& spec, std::uint64_t seed,
                       const std::optional<Observations>& parsed, int j) {
  SeedData out;
  if (spec.source.is_movielens()) {
    out.data = split_and_normalize(*parsed, seed);
    out.data.name = fs::path(spec.source.movielens_path).stem().string();
  } else {
    out.data = make_synthetic(spec.source.syn_m, spec.source.syn_n,
                              spec.source.syn_rank,
                              spec.source.syn_obs_fraction,
                              spec.source.syn_noise_std, seed)
                   .data;
  }
  if (spec.delta_override)
    out.delta = *spec.delta_override;
  else
    out.delta = delta_for(out.data.train, j).delta;
  return out;
}

struct RunOutcome {
  Variant variant = Variant::Fw;
  std::uint64_t seed = 0;
  int final_rank = 0;
  double test_rmse = 0.0;
  double elapsed_s = 0.0;
};

RunOutcome run_one(const RunSpec& spec, Variant variant, std::uint64_t seed,
                   const std::optional<Observations>& parsed) {
  const SeedData seed_data = load_for_seed(spec, seed, parsed, spec.mu_index);
  SolverConfig config = spec.config;
  config.variant = variant;
  config.seed = seed;
  config.delta = seed_data.delta;
  const SolveResult result = solve(seed_data.data.train, config);

  const fs::path trace_path =
      fs::path(spec.out_dir) /
      ("trace_" + to_string(variant) + "_" + std::to_string(seed) + ".csv");
  write_trace_csv(trace_path.string(), result.trace);

  RunOutcome out;
  out.variant = variant;
  out.seed = seed;
  out.final_rank =
      static_cast<int>(numeric_rank(result.x, config.rank_threshold));
  out.test_rmse = seed_data.data.test.size() > 0
                      ? rmse(result.x, seed_data.data.test)
                      : std::numeric_limits<double>::quiet_NaN();
  out.elapsed_s =
      result.trace.empty() ? 0.0 : result.trace.back().elapsed_s;
  return out;
}

// Bounded-concurrency fan-out; tasks own their outputs so results are
// identical for any jobs value.
template <typename Task>
std::vector<RunOutcome> run_all(const std::vector<Task>& tasks, int jobs) {
  std::counting_semaphore<256> slots(std::max(1, std::min(jobs, 256)));
  std::vector<std::future<RunOutcome>> futures;
  futures.reserve(tasks.size());
  for (const Task& task : tasks) {
    futures.push_back(std::async(std::launch::async, [&slots, task] {
      slots.acquire();
      struct Release {
        std::counting_semaphore<256>* s;
        ~Release() { s->release(); }
      } release{&slots};
      return task();
    }));
  }
  std::vector<RunOutcome> outcomes;
  outcomes.reserve(futures.size());
  for (auto& f : futures) outcomes.push_back(f.get());
  return outcomes;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(const std::string& path,
                     const std::vector<TraceRow>& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "iter,objective,gap,nuclear_norm,rank,step_type,tau,elapsed_s\n";
  for (const TraceRow& row : trace) {
    out << row.iter << ',' << format_double(row.objective) << ','
        << format_double(row.gap) << ',' << format_double(row.nuclear_norm)
        << ',' << row.rank << ',' << to_string(row.step_type) << ','
        << format_double(row.tau) << ',' << format_double(row.elapsed_s)
        << '\n';
  }
}

int cmd_run(const RunSpec& spec) {
  try {
    if (spec.out_dir.empty())
      throw std::invalid_argument("run: output directory required");
    std::optional<Observations> parsed;
    if (spec.source.is_movielens())
      parsed = parse_movielens(spec.source.movielens_path, spec.source.format);
    fs::create_directories(spec.out_dir);

    std::vector<std::function<RunOutcome()>> tasks;
    for (Variant variant : spec.variants)
      for (std::uint64_t seed : spec.seeds)
        tasks.push_back([&spec, variant, seed, &parsed] {
          return run_one(spec, variant, seed, parsed);
        });
    const std::vector<RunOutcome> outcomes = run_all(tasks, spec.jobs);

    const fs::path summary_path = fs::path(spec.out_dir) / "summary.csv";
    std::ofstream summary(summary_path, std::ios::binary);
    if (!summary)
      throw std::runtime_error("cannot write " + summary_path.string());
    summary << "variant,runs,mean_rmse,mean_final_rank,max_final_rank,"
               "mean_time_s";
    if (spec.raw_rmse) summary << ",mean_rmse_raw";
    summary << '\n';
    for (Variant variant : spec.variants) {
      double rmse_sum = 0.0, rank_sum = 0.0, time_sum = 0.0;
      double raw_sum = 0.0;
      int max_rank = 0, count = 0;
      double stddev = 1.0;
      if (spec.source.is_movielens()) {
        // normalization constants are split-dependent; report the mean
        const SeedData sd =
            load_for_seed(spec, spec.seeds.front(), parsed, spec.mu_index);
        stddev = sd.data.stddev;
      }
      for (const RunOutcome& o : outcomes) {
        if (o.variant != variant) continue;
        ++count;
        rmse_sum += o.test_rmse;
        raw_sum += o.test_rmse * stddev;
        rank_sum += o.final_rank;
        time_sum += o.elapsed_s;
        max_rank = std::max(max_rank, o.final_rank);
      }
      if (count == 0) continue;
      summary << to_string(variant) << ',' << count << ','
              << format_double(rmse_sum / count) << ','
              << format_double(rank_sum / count) << ',' << max_rank << ','
              << format_double(time_sum / count);
      if (spec.raw_rmse) summary << ',' << format_double(raw_sum / count);
      summary << '\n';
    }
    return 0;
  } catch (const std::exception& e) {
    log::error("run failed: %s", e.what());
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_tune_delta(const RunSpec& spec) {
  try {
    if (spec.out_dir.empty())
      throw std::invalid_argument("tune-delta: output directory required");
    std::optional<Observations> parsed;
    if (spec.source.is_movielens())
      parsed = parse_movielens(spec.source.movielens_path, spec.source.format);
    fs::create_directories(spec.out_dir);
    const Variant variant = spec.variants.front();

    struct Row {
      int j;
      double mu, delta, val_rmse;
    };
    std::vector<Row> rows;
    for (int j = 0; j <= spec.max_j; ++j) {
      double rmse_sum = 0.0;
      double delta_sum = 0.0;
      for (std::uint64_t seed : spec.seeds) {
        SeedData sd = load_for_seed(spec, seed, parsed, j);
        const DeltaSchedule sched = delta_for(sd.data.train, j);
        SolverConfig config = spec.config;
        config.variant = variant;
        config.seed = seed;
        config.delta = sched.delta;
        const SolveResult result = solve(sd.data.train, config);
        if (sd.data.validation.size() == 0)
          throw std::runtime_error("tune-delta: empty validation split");
        rmse_sum += rmse(result.x, sd.data.validation);
        delta_sum += sched.delta;
      }
      const double mean_rmse = rmse_sum / spec.seeds.size();
      rows.push_back({j, 2.0 + 0.2 * j,
                      delta_sum / static_cast<double>(spec.seeds.size()),
                      mean_rmse});
      log::info("tune-delta j=%d mu=%.2f val_rmse=%.6f", j, rows.back().mu,
                mean_rmse);
      if (j >= 1 && rows[j - 1].val_rmse - rows[j].val_rmse <= 1e-3) break;
    }

    const fs::path tuning_path = fs::path(spec.out_dir) / "tuning.csv";
    std::ofstream out(tuning_path, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot write " + tuning_path.string());
    out << "j,mu,delta,val_rmse\n";
    for (const Row& row : rows)
      out << row.j << ',' << format_double(row.mu) << ','
          << format_double(row.delta) << ',' << format_double(row.val_rmse)
          << '\n';

    const auto best = std::min_element(
        rows.begin(), rows.end(),
        [](const Row& a, const Row& b) { return a.val_rmse < b.val_rmse; });
    std::printf("selected j=%d mu=%s delta=%s val_rmse=%s\n", best->j,
                format_double(best->mu).c_str(),
                format_double(best->delta).c_str(),
                format_double(best->val_rmse).c_str());
    return 0;
  } catch (const std::exception& e) {
    log::error("tune-delta failed: %s", e.what());
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_verify(VerifyScale scale, std::uint64_t seed) {
  const std::vector<PropertyReport> reports =
      run_property_suite(scale, seed);
  bool all_ok = true;
  for (const PropertyReport& report : reports) {
    if (report.ok()) {
      std::printf("PASS  %-62s trials=%d\n", report.name.c_str(),
                  report.trials);
    } else {
      all_ok = false;
      std::ostringstream seeds;
      for (std::size_t i = 0; i < report.counterexample_seeds.size(); ++i) {
        if (i > 0) seeds << ',';
        seeds << report.counterexample_seeds[i];
      }
      std::printf("FAIL  %-62s trials=%d failures=%d seeds=[%s]%s%s\n",
                  report.name.c_str(), report.trials, report.failures,
                  seeds.str().c_str(), report.note.empty() ? "" : " note=",
                  report.note.c_str());
    }
  }
  return all_ok ? 0 : 1;
}

}  // namespace nucfw
