#include <doctest.h>

#include <random>

#include "nucfw/data_io.hpp"
#include "nucfw/solver.hpp"
#include "nucfw/verify.hpp"
#include "oracles.hpp"

using namespace nucfw;

TEST_CASE("config validation") {
  const Observations obs = make_observations(2, 2, {{0, 0, 1.0}});
  SolverConfig config;
  config.delta = 0.0;
  CHECK_THROWS_AS(solve(obs, config), std::invalid_argument);
  config.delta = 1.0;
  config.max_iters = 0;
  CHECK_THROWS_AS(solve(obs, config), std::invalid_argument);
  config.max_iters = 10;
  config.rel_gap_tol = 0.0;
  CHECK_THROWS_AS(solve(obs, config), std::invalid_argument);
}

TEST_CASE("fully observed rank-one problem is solved exactly") {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector u = Vector::NullaryExpr(10, [&](Index) { return gauss(rng); });
  Vector v = Vector::NullaryExpr(8, [&](Index) { return gauss(rng); });
  u.normalize();
  v.normalize();
  const double sigma = 2.0;
  std::vector<Triplet> entries;
  for (Index i = 0; i < 10; ++i)
    for (Index j = 0; j < 8; ++j)
      entries.push_back({static_cast<int>(i), static_cast<int>(j),
                         sigma * u(i) * v(j)});
  const Observations obs = make_observations(10, 8, std::move(entries));

  SolverConfig config;
  config.variant = Variant::Fw;
  config.delta = sigma;
  config.max_iters = 50;
  const SolveResult result = solve(obs, config);
  CHECK(result.converged);
  CHECK(result.trace.size() <= 50);
  CHECK(result.trace.back().objective < 1e-12);
  CHECK(numeric_rank(result.x, 1e-6) == 1);
}

TEST_CASE("empty or exactly-fit observations stop immediately") {
  SolverConfig config;
  config.delta = 1.0;

  const Observations empty = make_observations(4, 3, {});
  const SolveResult r1 = solve(empty, config);
  REQUIRE(r1.trace.size() == 1);
  CHECK(r1.trace[0].step_type == StepType::Stop);
  CHECK(r1.trace[0].gap == 0.0);
  CHECK(r1.x.rank() == 0);
  CHECK(r1.converged);

  const Observations zeros =
      make_observations(2, 2, {{0, 0, 0.0}, {1, 1, 0.0}});
  const SolveResult r2 = solve(zeros, config);
  REQUIRE(r2.trace.size() == 1);
  CHECK(r2.trace[0].objective == 0.0);
  CHECK(r2.converged);
}

TEST_CASE("away atom selection maximizes gradient alignment") {
  const ThinSvd x = zero_iterate(2, 2);
  Matrix g(2, 2);
  g << 1.0, 0.0, 0.0, -1.0;
  const Observations obs = observations_with_gradient(x, g);
  const SparseResidual res = residual(x, obs);

  const double delta = 1.0;
  AtomicDecomposition decomposition;
  RankOneOuter a1;
  a1.u = Vector::Zero(2);
  a1.u(0) = 1.0;
  a1.v = a1.u;
  a1.scale = delta;
  RankOneOuter a2;
  a2.u = Vector::Zero(2);
  a2.u(1) = 1.0;
  a2.v = a2.u;
  a2.scale = delta;
  decomposition.atoms = {a1, a2};
  decomposition.weights = {0.6, 0.4};

  const auto choice = away_choice(decomposition, res);
  REQUIRE(choice.has_value());
  CHECK(choice->index == 0);
  CHECK(choice->inner == doctest::Approx(delta).epsilon(1e-12));
  CHECK(choice->max_step == doctest::Approx(1.5).epsilon(1e-12));

  CHECK_FALSE(away_choice(AtomicDecomposition{}, res).has_value());
}

TEST_CASE("away-step runs keep a consistent atomic decomposition") {
  SyntheticProblem prob = make_synthetic(14, 11, 3, 0.6, 0.2, 77);
  SolverConfig config;
  config.variant = Variant::Afw;
  config.delta = 0.6 * nuclear_norm(prob.ground_truth);
  config.max_iters = 120;
  config.seed = 9;
  config.validate_decomposition = true;  // throws on divergence
  const SolveResult result = solve(prob.data.train, config);

  double total = 0.0;
  for (double w : result.decomposition.weights) {
    CHECK(w > 0.0);
    total += w;
  }
  CHECK(total <= 1.0 + 1e-10);
  const Matrix diff =
      densify(result.decomposition, 14, 11) - densify(result.x);
  CHECK(spectral_norm(diff) <= 1e-6);
}

TEST_CASE("in-face runs") {
  SUBCASE("interior trajectories match plain Frank-Wolfe") {
    SyntheticProblem prob = make_synthetic(12, 9, 2, 0.7, 0.1, 5);
    SolverConfig config;
    config.delta = 50.0 * nuclear_norm(prob.ground_truth);  // never binds
    config.max_iters = 40;
    config.seed = 3;
    config.variant = Variant::Fw;
    const SolveResult fw = solve(prob.data.train, config);
    config.variant = Variant::InFace;
    const SolveResult inface = solve(prob.data.train, config);
    REQUIRE(fw.trace.size() == inface.trace.size());
    for (std::size_t k = 0; k < fw.trace.size(); ++k) {
      CHECK(fw.trace[k].objective == inface.trace[k].objective);
      CHECK(fw.trace[k].tau == inface.trace[k].tau);
      CHECK(fw.trace[k].step_type == inface.trace[k].step_type);
    }
  }

  SUBCASE("boundary steps reduce the rank by one") {
    SyntheticProblem prob = make_synthetic(16, 12, 4, 0.8, 0.0, 21);
    SolverConfig config;
    config.variant = Variant::InFace;
    config.delta = 0.35 * nuclear_norm(prob.ground_truth);  // binds hard
    config.max_iters = 300;
    config.seed = 4;
    const SolveResult result = solve(prob.data.train, config);
    int inface_rows = 0;
    for (std::size_t k = 0; k + 1 < result.trace.size(); ++k) {
      if (result.trace[k].step_type == StepType::InFace) {
        ++inface_rows;
        CHECK(result.trace[k + 1].rank == result.trace[k].rank - 1);
        CHECK(result.trace[k + 1].objective <=
              result.trace[k].objective * (1.0 + 1e-10) + 1e-12);
      }
      CHECK(result.trace[k].nuclear_norm <= config.delta + 1e-8);
    }
    CHECK(inface_rows > 0);
  }
}

TEST_CASE("rank-drop runs recover a planted low-rank matrix") {
  SyntheticProblem prob = make_synthetic(50, 40, 5, 0.5, 0.0, 123);
  SolverConfig config;
  config.variant = Variant::Rdfw;
  config.delta = nuclear_norm(prob.ground_truth);
  config.max_iters = 1000;
  config.seed = 1;
  const SolveResult result = solve(prob.data.train, config);
  CHECK(result.converged);
  CHECK(numeric_rank(result.x, 1e-6) <= 10);
  CHECK(rmse(result.x, prob.data.test) < 0.05);
}

TEST_CASE("suboptimality bound series") {
  std::vector<TraceRow> trace(4);
  trace[0].step_type = StepType::Fw;
  trace[1].step_type = StepType::RdInterior;
  trace[2].step_type = StepType::Fw;
  trace[3].step_type = StepType::Stop;
  const std::vector<double> bound = convergence_bound(trace, 2.0, 1.0);
  CHECK(bound[0] == doctest::Approx(8.0));        // 2 * delta^2 * L
  CHECK(bound[1] == doctest::Approx(32.0 / 5.0)); // one plain step so far
  CHECK(bound[2] == doctest::Approx(32.0 / 5.0));
  CHECK(bound[3] == doctest::Approx(32.0 / 6.0));
  for (std::size_t k = 1; k < bound.size(); ++k)
    CHECK(bound[k] <= bound[k - 1]);
  CHECK_THROWS_AS(convergence_bound(trace, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("randomized solver properties (smoke counts)") {
  CHECK(check_convergence_bound(3, 201).failures == 0);
  CHECK(check_solver_feasibility(4, 202).failures == 0);
  CHECK(check_rank_discipline(6, 203).failures == 0);
  CHECK(check_rank_one_trace_equivalence(20, 204).failures == 0);
}
