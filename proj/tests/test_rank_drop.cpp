#include <doctest.h>

#include <random>

#include "nucfw/objective.hpp"
#include "nucfw/rank_drop.hpp"
#include "nucfw/verify.hpp"

using namespace nucfw;

namespace {

ThinSvd diag_iterate(std::vector<double> values) {
  const Index r = static_cast<Index>(values.size());
  Vector s(r);
  for (Index i = 0; i < r; ++i) s(i) = values[static_cast<std::size_t>(i)];
  return make_thin_svd(Matrix::Identity(r, r), s, Matrix::Identity(r, r));
}

}  // namespace

TEST_CASE("kappa is half the distance to the boundary") {
  CHECK(kappa(diag_iterate({1.0}), 3.0) == 1.0);
  CHECK(kappa(diag_iterate({1.0}), 1.0) == 0.0);
  CHECK(kappa(diag_iterate({2.0, 1.0}), 5.0) == 1.0);
  CHECK_THROWS_AS(kappa(diag_iterate({2.0, 1.0}), 2.0),
                  std::invalid_argument);
}

TEST_CASE("projected gradient compresses the sparse gradient") {
  const ThinSvd x = diag_iterate({2.0, 1.0});
  Matrix g(2, 2);
  g << -1.0, 0.0, 0.0, 0.0;
  const Observations obs = observations_with_gradient(x, g);
  const SparseResidual res = residual(x, obs);
  const Matrix w = projected_gradient(x, res);
  CHECK(w(0, 0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(w(0, 1)) < 1e-12);
  CHECK(std::abs(w(1, 0)) < 1e-12);
  CHECK(std::abs(w(1, 1)) < 1e-12);

  const Observations exact = observations_with_gradient(x, Matrix::Zero(2, 2));
  const Matrix wz = projected_gradient(x, residual(x, exact));
  CHECK(wz.cwiseAbs().maxCoeff() < 1e-12);

  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const ThinSvd y = random_thin_svd(15, 10, 4, 0.5, 2.0, rng);
  const Matrix grad =
      Matrix::NullaryExpr(15, 10, [&](Index, Index) { return gauss(rng); });
  const Observations omega = observations_with_gradient(y, grad);
  const Matrix wy = projected_gradient(y, residual(y, omega));
  const Matrix expected = y.U.transpose() * grad * y.V;
  CHECK((wy - expected).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("interior candidate enumeration on a 2x2 instance") {
  Vector s(2);
  s << 2.0, 1.0;
  Matrix w(2, 2);
  w << -1.0, 0.0, 0.0, 0.0;

  SUBCASE("both stationary pairs feasible at kappa = 2.5") {
    const auto candidates = interior_candidates(w, s, 2.5, kZeroSvTol);
    REQUIRE(candidates.size() == 2);
    bool saw_first = false, saw_second = false;
    for (const auto& cand : candidates) {
      if (std::abs(cand.bilinear - 0.5) < 1e-9) {
        saw_first = true;
        CHECK(cand.score == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK(std::abs(cand.s(0)) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(cand.lambda - 2.0) < 1e-9);
      }
      if (std::abs(cand.bilinear - 1.0) < 1e-9) {
        saw_second = true;
        CHECK(cand.score == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(std::abs(cand.s(1)) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(cand.lambda) < 1e-9);
      }
    }
    CHECK(saw_first);
    CHECK(saw_second);
  }

  SUBCASE("kappa = 0.9 leaves no feasible candidate") {
    CHECK(interior_candidates(w, s, 0.9, kZeroSvTol).empty());
  }

  SUBCASE("zero gradient degenerates to zero-score pairs") {
    const auto candidates =
        interior_candidates(Matrix::Zero(2, 2), s, 2.5, kZeroSvTol);
    REQUIRE(candidates.size() == 2);
    for (const auto& cand : candidates)
      CHECK(cand.score == doctest::Approx(0.0));
  }
}

TEST_CASE("exterior step on a 2x2 instance") {
  Vector s(2);
  s << 2.0, 1.0;

  SUBCASE("identity gradient selects the leading direction") {
    const ExteriorStep step = exterior_step(Matrix::Identity(2, 2), s, 3.0);
    CHECK(std::abs(step.s(0)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(step.tau_star == doctest::Approx(2.0).epsilon(1e-10));
  }

  SUBCASE("gradient weighted toward the trailing direction") {
    Matrix w(2, 2);
    w << 0.0, 0.0, 0.0, 5.0;
    const ExteriorStep step = exterior_step(w, s, 3.0);
    CHECK(std::abs(step.s(1)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(step.tau_star == doctest::Approx(0.5).epsilon(1e-10));
  }

  SUBCASE("zero gradient keeps the deterministic leading tie-break") {
    const ExteriorStep step = exterior_step(Matrix::Zero(2, 2), s, 3.0);
    CHECK(step.s(0) == 1.0);
    CHECK(step.s(1) == 0.0);
  }
}

TEST_CASE("rank-drop direction selection") {
  const ThinSvd x = diag_iterate({2.0, 1.0});
  Matrix g(2, 2);
  g << -1.0, 0.0, 0.0, 0.0;
  const Observations obs = observations_with_gradient(x, g);
  const SparseResidual res = residual(x, obs);

  SUBCASE("interior instance picks the better-scoring pair") {
    const RankDropStep step = rank_drop_direction(x, res, 8.0);
    CHECK(step.kind == RankDropKind::Interior);
    CHECK(std::abs(step.s(1)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(step.tau_star == doctest::Approx(1.0 / 7.0).epsilon(1e-9));
    CHECK(step.score == doctest::Approx(0.0).epsilon(1e-9));

    const StepOutcome outcome =
        check_rank_drop_outcome(x, 8.0, step.s, step.t, step.tau_star);
    CHECK(outcome.feasible);
    CHECK(outcome.rank_dropped);
    const Matrix xplus = (1.0 + step.tau_star) * densify(x) -
                         step.tau_star * 8.0 * (x.U * step.s) *
                             (x.V * step.t).transpose();
    CHECK(xplus(0, 0) == doctest::Approx(16.0 / 7.0).epsilon(1e-9));
    CHECK(std::abs(xplus(1, 1)) < 1e-9);
  }

  SUBCASE("boundary instance goes through the exterior branch") {
    const Observations id_obs =
        observations_with_gradient(x, Matrix::Identity(2, 2));
    const SparseResidual id_res = residual(x, id_obs);
    const RankDropStep step = rank_drop_direction(x, id_res, 3.0);
    CHECK(step.kind == RankDropKind::Exterior);
    CHECK(step.tau_star == doctest::Approx(2.0).epsilon(1e-9));
    const Matrix xplus = (1.0 + step.tau_star) * densify(x) -
                         step.tau_star * 3.0 * (x.U * step.s) *
                             (x.V * step.t).transpose();
    CHECK(std::abs(xplus(0, 0)) < 1e-9);
    CHECK(xplus(1, 1) == doctest::Approx(3.0).epsilon(1e-9));
  }

  SUBCASE("near-boundary instance falls back to the exterior branch") {
    // kappa = 0.9 < sigma_r
    const RankDropStep step = rank_drop_direction(x, res, 4.8);
    CHECK(step.kind == RankDropKind::Exterior);
  }

  SUBCASE("complex spectrum leaves no interior candidate") {
    Matrix rot(2, 2);
    rot << 0.0, 1.0, -1.0, 0.0;
    const Observations rot_obs = observations_with_gradient(x, rot);
    const SparseResidual rot_res = residual(x, rot_obs);
    const RankDropStep step = rank_drop_direction(x, rot_res, 20.0);
    CHECK(step.kind == RankDropKind::Exterior);
    const StepOutcome outcome =
        check_rank_drop_outcome(x, 20.0, step.s, step.t, step.tau_star);
    CHECK(outcome.feasible);
    CHECK(outcome.rank_dropped);
  }

  SUBCASE("rank below two is rejected") {
    const ThinSvd r1 = diag_iterate({2.0});
    const Observations o1 = observations_with_gradient(r1, Matrix::Ones(1, 1));
    CHECK_THROWS_AS(rank_drop_direction(r1, residual(r1, o1), 5.0),
                    std::invalid_argument);
  }
}

TEST_CASE("randomized rank-drop properties (smoke counts)") {
  CHECK(check_rank_drop_exactness(200, 101).failures == 0);
  CHECK(check_radius_lower_bound(200, 102).failures == 0);
  CHECK(check_interior_feasibility(60, 103).failures == 0);
  CHECK(check_interior_nonempty(100, 104).failures == 0);
  CHECK(check_interior_selection_quality(20, 2000, 105).failures == 0);
  CHECK(check_boundary_descent(40, 40, 106).failures == 0);
  CHECK(check_exterior_boundary_proximity(100, 107).failures == 0);
  CHECK(check_exterior_feasibility(60, 108).failures == 0);
  CHECK(check_face_membership(60, 109).failures == 0);
}

TEST_CASE("outcome checker flags a sign-flipped step size") {
  std::mt19937_64 rng(55);
  const ThinSvd x = random_thin_svd(8, 6, 3, 0.5, 2.0, rng);
  const double delta = nuclear_norm(x) + 2.0 * x.S(2) * 0.5;
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Matrix g =
      Matrix::NullaryExpr(8, 6, [&](Index, Index) { return gauss(rng); });
  const Observations obs = observations_with_gradient(x, g);
  const RankDropStep step = rank_drop_direction(x, residual(x, obs), delta);
  REQUIRE(step.kind == RankDropKind::Exterior);

  const StepOutcome good =
      check_rank_drop_outcome(x, delta, step.s, step.t, step.tau_star);
  CHECK(good.feasible);
  CHECK(good.rank_dropped);
  const StepOutcome corrupted =
      check_rank_drop_outcome(x, delta, step.s, step.t, -step.tau_star);
  CHECK_FALSE(corrupted.rank_dropped);
}
