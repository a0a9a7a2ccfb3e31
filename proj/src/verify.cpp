#include "nucfw/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "nucfw/data_io.hpp"
#include "nucfw/objective.hpp"
#include "nucfw/rank_drop.hpp"
#include "nucfw/solver.hpp"

namespace nucfw {

namespace {

constexpr double kRankThresholdForOracle = 1e-6;

std::uniform_real_distribution<double> unit_dist(0.0, 1.0);

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_dist(rng);
}

Index uniform_index(std::mt19937_64& rng, Index lo, Index hi) {
  return lo + static_cast<Index>(rng() % static_cast<std::uint64_t>(
                                           hi - lo + 1));
}

Vector random_gaussian(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = gauss(rng);
  return v;
}

Vector random_unit(Index n, std::mt19937_64& rng) {
  Vector v = random_gaussian(n, rng);
  const double norm = v.norm();
  if (norm == 0.0) {
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  return v / norm;
}

Matrix random_gaussian_matrix(Index m, Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = gauss(rng);
  return a;
}

// Accumulates per-trial pass/fail with the trial's seed for replay.
struct Collector {
  PropertyReport report;

  explicit Collector(std::string name) { report.name = std::move(name); }

  void record(std::uint64_t seed, bool ok, const std::string& detail = "") {
    ++report.trials;
    if (!ok) {
      ++report.failures;
      if (report.counterexample_seeds.size() < 8)
        report.counterexample_seeds.push_back(seed);
      if (report.note.empty()) report.note = detail;
    }
  }
};

struct RankDropInstance {
  ThinSvd x;
  Observations obs;
  double delta = 0.0;
};

// Draws an iterate plus dense gradient; delta is placed so the requested
// branch triggers (interior: kappa >= sigma_r, exterior: kappa < sigma_r).
RankDropInstance random_branch_instance(std::mt19937_64& rng, bool interior,
                                        Index max_rank = 6) {
  RankDropInstance out;
  const Index r = uniform_index(rng, 2, max_rank);
  const Index m = uniform_index(rng, r + 1, r + 7);
  const Index n = uniform_index(rng, r + 1, r + 6);
  out.x = random_thin_svd(m, n, r, 0.4, 3.0, rng);
  const double nn = nuclear_norm(out.x);
  const double sigma_r = out.x.S(r - 1);
  const double factor =
      interior ? uniform(rng, 1.05, 3.0) : uniform(rng, 0.05, 0.95);
  out.delta = nn + 2.0 * sigma_r * factor;
  out.obs = observations_with_gradient(
      out.x, random_gaussian_matrix(m, n, rng));
  return out;
}

}  // namespace

Matrix random_orthonormal(Index rows, Index cols, std::mt19937_64& rng) {
  const Matrix a = random_gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

ThinSvd random_thin_svd(Index m, Index n, Index r, double sv_min,
                        double sv_max, std::mt19937_64& rng) {
  Vector sv(r);
  for (Index i = 0; i < r; ++i) sv(i) = uniform(rng, sv_min, sv_max);
  std::sort(sv.data(), sv.data() + r, std::greater<double>());
  return make_thin_svd(random_orthonormal(m, r, rng), sv,
                       random_orthonormal(n, r, rng));
}

Matrix random_dense_of_rank(Index m, Index n, Index rank,
                            std::mt19937_64& rng) {
  // Resample until the planted rank is well separated from the 1e-6
  // threshold used by the dense oracle.
  for (;;) {
    Matrix a = random_gaussian_matrix(m, rank, rng) *
               random_gaussian_matrix(rank, n, rng);
    Eigen::JacobiSVD<Matrix> svd(a);
    if (svd.singularValues()(rank - 1) > 1e-3) return a;
  }
}

Observations observations_with_gradient(const ThinSvd& x, const Matrix& g) {
  const Matrix xd = densify(x);
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(x.m * x.n));
  for (Index i = 0; i < x.m; ++i)
    for (Index j = 0; j < x.n; ++j)
      entries.push_back({static_cast<int>(i), static_cast<int>(j),
                         xd(i, j) - g(i, j)});
  return make_observations(x.m, x.n, std::move(entries));
}

StepOutcome check_rank_drop_outcome(const ThinSvd& x, double delta,
                                    const Vector& s, const Vector& t,
                                    double tau) {
  const Matrix xd = densify(x);
  const Matrix pert = (x.U * s) * (x.V * t).transpose();
  const Matrix xplus = (1.0 + tau) * xd - tau * delta * pert;
  Eigen::JacobiSVD<Matrix> svd(xplus);
  StepOutcome out;
  out.nuclear_norm_after = svd.singularValues().sum();
  out.rank_after = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > kRankThresholdForOracle) ++out.rank_after;
  out.feasible = out.nuclear_norm_after <= delta + 1e-8;
  out.rank_dropped = out.rank_after == x.rank() - 1;
  return out;
}

PropertyReport check_rank_drop_exactness(int trials, std::uint64_t seed0) {
  Collector c("rank-one annihilation drops the rank by exactly one");
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(trial);
    std::mt19937_64 rng(seed);
    const Index k = uniform_index(rng, 2, 6);
    const Index m = uniform_index(rng, k, 10);
    const Index n = uniform_index(rng, k, 10);
    const Matrix a = random_dense_of_rank(m, n, k, rng);
    Vector xv, yv;
    double sigma = 0.0;
    do {
      xv = random_unit(n, rng);
      yv = random_unit(m, rng);
      sigma = yv.dot(a * xv);
    } while (std::abs(sigma) <= 1e-6);
    const Vector u = a * xv;
    const Vector v = a.transpose() * yv;
    const Matrix b = a - (1.0 / sigma) * u * v.transpose();
    const Index rank_a = dense_numeric_rank(a, kRankThresholdForOracle);
    const Index rank_b = dense_numeric_rank(b, kRankThresholdForOracle);
    c.record(seed, rank_a == k && rank_b == k - 1,
             "rank " + std::to_string(rank_a) + " -> " +
                 std::to_string(rank_b));
  }
  return c.report;
}

PropertyReport check_radius_lower_bound(int trials, std::uint64_t seed0) {
  Collector c("rank-drop steps have nuclear norm at least sigma_r");
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(trial);
    std::mt19937_64 rng(seed);
    const Index k = uniform_index(rng, 2, 6);
    const Index m = uniform_index(rng, k, 10);
    const Index n = uniform_index(rng, k, 10);
    const Matrix a = random_dense_of_rank(m, n, k, rng);
    Vector xv, yv;
    double sigma = 0.0;
    do {
      xv = random_unit(n, rng);
      yv = random_unit(m, rng);
      sigma = yv.dot(a * xv);
    } while (std::abs(sigma) <= 1e-6);
    const Vector u = a * xv;
    const Vector v = a.transpose() * yv;
    const double z_norm = u.norm() * v.norm() / std::abs(sigma);
    Eigen::JacobiSVD<Matrix> svd(a);
    const double sigma_r = svd.singularValues()(k - 1);
    c.record(seed, z_norm >= sigma_r - 1e-10, "");
  }
  return c.report;
}

PropertyReport check_interior_feasibility(int trials, std::uint64_t seed0) {
  Collector c("interior rank-drop step stays feasible and drops the rank");
  std::uint64_t seed = seed0;
  int done = 0;
  int attempts = 0;
  const int max_attempts = trials * 64;
  while (done < trials && attempts < max_attempts) {
    ++attempts;
    const std::uint64_t trial_seed = seed++;
    std::mt19937_64 rng(trial_seed);
    RankDropInstance inst = random_branch_instance(rng, /*interior=*/true);
    const SparseResidual res = residual(inst.x, inst.obs);
    RankDropStep step = rank_drop_direction(inst.x, res, inst.delta);
    if (step.kind != RankDropKind::Interior) continue;  // no candidate; redraw
    ++done;
    StepOutcome outcome = check_rank_drop_outcome(inst.x, inst.delta, step.s,
                                                  step.t, step.tau_star);
    bool grid_ok = true;
    const Matrix xd = densify(inst.x);
    const Matrix pert =
        (inst.x.U * step.s) * (inst.x.V * step.t).transpose();
    for (int g = 0; g <= 10; ++g) {
      const double tau = step.tau_star * g / 10.0;
      const Matrix xg = (1.0 + tau) * xd - tau * inst.delta * pert;
      Eigen::JacobiSVD<Matrix> svd(xg);
      if (svd.singularValues().sum() > inst.delta + 1e-8) grid_ok = false;
    }
    c.record(trial_seed, outcome.feasible && outcome.rank_dropped && grid_ok,
             outcome.feasible ? "rank drop mismatch" : "infeasible iterate");
  }
  if (done < trials) {
    ++c.report.failures;
    c.report.note = "could not realize enough interior instances";
  }
  return c.report;
}

PropertyReport check_interior_nonempty(int trials, std::uint64_t seed0) {
  Collector c("interior subproblem always has a feasible point");
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(trial);
    std::mt19937_64 rng(seed);
    RankDropInstance inst = random_branch_instance(rng, /*interior=*/true);
    const Index r = inst.x.rank();
    const double kap = kappa(inst.x, inst.delta);
    const double sigma_r = inst.x.S(r - 1);
    Vector s = Vector::Zero(r);
    s(r - 1) = 1.0;
    Vector t = Vector::Zero(r);
    t(r - 1) = sigma_r / kap;
    const double bilinear = s.dot(inst.x.S.cwiseInverse().asDiagonal() * t);
    const double z_norm = s.norm() * t.norm() / bilinear;
    c.record(seed,
             t.norm() <= 1.0 + 1e-12 && bilinear > 0.0 &&
                 z_norm <= kap * (1.0 + 1e-12),
             "constructed pair infeasible");
  }
  return c.report;
}

PropertyReport check_interior_selection_quality(int instances, int samples,
                                                std::uint64_t seed0) {
  Collector c("selected interior candidate is near the sampled optimum");
  std::uint64_t seed = seed0;
  int done = 0;
  int attempts = 0;
  const int max_attempts = instances * 64;
  while (done < instances && attempts < max_attempts) {
    ++attempts;
    const std::uint64_t trial_seed = seed++;
    std::mt19937_64 rng(trial_seed);
    const Index r = 3;
    const Index m = uniform_index(rng, 5, 8);
    const Index n = uniform_index(rng, 5, 8);
    ThinSvd x = random_thin_svd(m, n, r, 0.4, 3.0, rng);
    const double nn = nuclear_norm(x);
    const double sigma_r = x.S(r - 1);
    const double delta = nn + 2.0 * sigma_r * uniform(rng, 1.05, 3.0);
    const Observations obs =
        observations_with_gradient(x, random_gaussian_matrix(m, n, rng));
    const SparseResidual res = residual(x, obs);
    RankDropStep step = rank_drop_direction(x, res, delta);
    if (step.kind != RankDropKind::Interior) continue;
    ++done;

    const Matrix w = projected_gradient(x, res);
    const Vector sigma_inv = x.S.cwiseInverse();
    const double kap = kappa(x, delta);
    const double selected =
        step.s.dot(w * step.t) / step.s.dot(sigma_inv.asDiagonal() * step.t);

    double best_sample = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
      Vector s = random_unit(r, rng);
      const Vector t = random_unit(r, rng);
      double bilinear = s.dot(sigma_inv.asDiagonal() * t);
      if (bilinear < 0.0) {
        s = -s;
        bilinear = -bilinear;
      }
      if (bilinear == 0.0 || kap * bilinear < 1.0) continue;
      best_sample = std::max(best_sample, s.dot(w * t) / bilinear);
    }
    if (!std::isfinite(best_sample)) {
      c.record(trial_seed, true);  // sampler found nothing to compare against
      continue;
    }
    const double slack = 0.02 * std::abs(best_sample);
    std::ostringstream detail;
    detail << "selected " << selected << " vs sampled " << best_sample;
    c.record(trial_seed, selected >= best_sample - slack, detail.str());
  }
  if (done < instances) {
    ++c.report.failures;
    c.report.note = "could not realize enough interior instances";
  }
  return c.report;
}

PropertyReport check_boundary_descent(int aligned_instances,
                                      int misaligned_instances,
                                      std::uint64_t seed0) {
  Collector c("boundary steps descend the nuclear norm iff s = t");
  const int nsub = 16;
  for (int trial = 0; trial < aligned_instances + misaligned_instances;
       ++trial) {
    const bool aligned = trial < aligned_instances;
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(trial);
    std::mt19937_64 rng(seed);
    const Index r = uniform_index(rng, 2, 5);
    const Index m = uniform_index(rng, r + 2, r + 8);
    const Index n = uniform_index(rng, r + 2, r + 7);
    const ThinSvd x = random_thin_svd(m, n, r, 0.4, 3.0, rng);
    const double delta = nuclear_norm(x);  // boundary iterate

    Vector s = random_unit(r, rng);
    Vector t;
    if (aligned) {
      t = s;
    } else {
      do {
        t = random_unit(r, rng);
      } while (s.dot(t) > 0.99);
    }
    const Matrix d =
        densify(x) - delta * (x.U * s) * (x.V * t).transpose();

    double max_inner = -std::numeric_limits<double>::infinity();
    for (int h = 0; h <= nsub; ++h) {
      Matrix hmat = Matrix::Zero(m, n);
      if (h > 0) {
        const Matrix raw = random_gaussian_matrix(m, n, rng);
        hmat = raw - x.U * (x.U.transpose() * raw);
        hmat = hmat - (hmat * x.V) * x.V.transpose();
        const double sp = spectral_norm(hmat);
        if (sp > 1.0) hmat /= sp;
      }
      const Matrix g = x.U * x.V.transpose() + hmat;
      max_inner = std::max(max_inner, (d.array() * g.array()).sum());
    }
    const bool ok = aligned ? max_inner <= 1e-8 : max_inner > 0.0;
    std::ostringstream detail;
    detail << (aligned ? "aligned" : "misaligned") << " max inner "
           << max_inner;
    c.record(seed, ok, detail.str());
  }
  return c.report;
}

PropertyReport check_exterior_boundary_proximity(int trials,
                                                 std::uint64_t seed0) {
  Collector c("exterior trigger implies the iterate is near the boundary");
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(trial);
    std::mt19937_64 rng(seed);
    RankDropInstance inst = random_branch_instance(rng, /*interior=*/false);
    const Index r = inst.x.rank();
    const double kap = kappa(inst.x, inst.delta);
    const double sigma_r = inst.x.S(r - 1);
    if (kap >= sigma_r) {
      c.record(seed, false, "instance did not trigger the exterior branch");
      continue;
    }
    const double nn = nuclear_norm(inst.x);
    const double bound =
        static_cast<double>(r) / static_cast<double>(r + 2) * inst.delta;
    c.record(seed, nn > bound - 1e-10, "");
  }
  return c.report;
}

PropertyReport check_exterior_feasibility(int trials, std::uint64_t seed0) {
  Collector c("exterior rank-drop step stays feasible and drops the rank");
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(trial);
    std::mt19937_64 rng(seed);
    RankDropInstance inst = random_branch_instance(rng, /*interior=*/false);
    const SparseResidual res = residual(inst.x, inst.obs);
    RankDropStep step = rank_drop_direction(inst.x, res, inst.delta);
    if (step.kind != RankDropKind::Exterior) {
      c.record(seed, false, "expected the exterior branch");
      continue;
    }
    StepOutcome outcome = check_rank_drop_outcome(inst.x, inst.delta, step.s,
                                                  step.t, step.tau_star);
    c.record(seed, outcome.feasible && outcome.rank_dropped,
             outcome.feasible ? "rank drop mismatch" : "infeasible iterate");
  }
  return c.report;
}

PropertyReport check_face_membership(int trials, std::uint64_t seed0) {
  Collector c("rank-drop steps lie on the minimal face");
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(trial);
    std::mt19937_64 rng(seed);
    const bool interior = trial % 2 == 0;
    RankDropInstance inst = random_branch_instance(rng, interior);
    const SparseResidual res = residual(inst.x, inst.obs);
    RankDropStep step = rank_drop_direction(inst.x, res, inst.delta);
    bool ok = true;
    std::string detail;
    if (step.kind == RankDropKind::Interior) {
      const double kap = kappa(inst.x, inst.delta);
      const double bilinear =
          step.s.dot(inst.x.S.cwiseInverse().asDiagonal() * step.t);
      const double z_norm = 1.0 / bilinear;
      ok = z_norm <= kap * (1.0 + 1e-12) && kap < inst.delta;
      detail = "interior step outside the kappa ball";
    } else {
      const Index r = inst.x.rank();
      const Matrix face = inst.delta * step.s * step.s.transpose();
      Eigen::SelfAdjointEigenSolver<Matrix> es(face);
      ok = std::abs(face.trace() - inst.delta) <=
               1e-10 * std::max(1.0, inst.delta) &&
           es.eigenvalues()(0) >= -1e-12 &&
           (face - face.transpose()).cwiseAbs().maxCoeff() == 0.0 &&
           face.rows() == r;
      detail = "exterior face matrix not PSD with trace delta";
    }
    c.record(seed, ok, detail);
  }
  return c.report;
}

PropertyReport check_svd_update_maintenance(int trials, int updates_per_trial,
                                            Index m, Index n,
                                            std::uint64_t seed0) {
  Collector c("incremental factorization tracks dense recomputation");
  const double threshold = 1e-12;
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(trial);
    std::mt19937_64 rng(seed);
    const Index r0 = uniform_index(rng, 2, std::min<Index>(8, std::min(m, n)));
    ThinSvd x = random_thin_svd(m, n, r0, 0.5, 2.0, rng);
    Matrix shadow = densify(x);
    bool ok = true;
    std::string detail;
    for (int step = 0; step < updates_per_trial && ok; ++step) {
      std::normal_distribution<double> gauss(0.0, 1.0);
      RankOneOuter delta{random_gaussian(m, rng), random_gaussian(n, rng),
                         0.5 * gauss(rng)};
      const double iterate_scale =
          step % 3 == 0 ? uniform(rng, 0.3, 1.2) : 1.0;
      const Index rank_before = x.rank();
      const double nn_before = nuclear_norm(x);
      x = rank_one_update(x, iterate_scale, delta, threshold);
      shadow = iterate_scale * shadow +
               delta.scale * delta.u * delta.v.transpose();
      const double err = spectral_norm(densify(x) - shadow);
      if (err >= 1e-8) {
        ok = false;
        detail = "spectral error " + std::to_string(err);
      }
      if (x.rank() > rank_before + 1) {
        ok = false;
        detail = "rank grew by more than one";
      }
      if (iterate_scale == 1.0) {
        const double bound = nn_before +
                             std::abs(delta.scale) * delta.u.norm() *
                                 delta.v.norm() +
                             1e-9;
        if (nuclear_norm(x) > bound) {
          ok = false;
          detail = "nuclear norm exceeded the triangle bound";
        }
      }
      if (ortho_drift(x) > kOrthoTol) {
        ok = false;
        detail = "orthogonality drift above tolerance";
      }
    }
    c.record(seed, ok, detail);
  }
  return c.report;
}

PropertyReport check_convergence_bound(int runs, std::uint64_t seed0) {
  Collector c("suboptimality stays under the Frank-Wolfe step-count bound");
  for (int run = 0; run < runs; ++run) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(run);
    SyntheticProblem prob = make_synthetic(20, 16, 3, 0.6, 0.0, seed);
    const double delta = nuclear_norm(prob.ground_truth);

    SolverConfig ref_config;
    ref_config.variant = Variant::Rdfw;
    ref_config.delta = delta;
    ref_config.rel_gap_tol = 1e-6;
    ref_config.max_iters = 3000;
    ref_config.seed = seed;
    const double f_ref =
        solve(prob.data.train, ref_config).trace.back().objective;

    SolverConfig config = ref_config;
    config.rel_gap_tol = 1e-2;
    config.max_iters = 500;
    const SolveResult result = solve(prob.data.train, config);
    const std::vector<double> bound =
        convergence_bound(result.trace, delta, 1.0);

    bool ok = true;
    for (std::size_t k = 0; k < result.trace.size(); ++k) {
      if (result.trace[k].objective - f_ref > bound[k] + 1e-9) ok = false;
      if (k > 0 && bound[k] > bound[k - 1] + 1e-15) ok = false;
    }
    c.record(seed, ok, "bound violated");
  }
  return c.report;
}

PropertyReport check_solver_feasibility(int runs, std::uint64_t seed0) {
  Collector c("every iterate of every variant stays in the nuclear ball");
  const Variant variants[] = {Variant::Fw, Variant::Afw, Variant::InFace,
                              Variant::Rdfw};
  for (int run = 0; run < runs; ++run) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(run);
    SyntheticProblem prob = make_synthetic(16, 12, 2, 0.5, 0.1, seed);
    const double delta = delta_for(prob.data.train, 0).delta;
    bool ok = true;
    std::string detail;
    for (Variant variant : variants) {
      SolverConfig config;
      config.variant = variant;
      config.delta = delta;
      config.max_iters = 150;
      config.seed = seed;
      config.validate_decomposition = variant == Variant::Afw;
      const SolveResult result = solve(prob.data.train, config);
      for (const TraceRow& row : result.trace) {
        if (row.nuclear_norm > delta + 1e-8) {
          ok = false;
          detail = "trace row outside the ball for " + to_string(variant);
        }
      }
      const double dense_nn =
          full_svd_oracle(densify(result.x)).S.sum();
      if (dense_nn > delta + 1e-8) {
        ok = false;
        detail = "final iterate outside the ball for " + to_string(variant);
      }
    }
    c.record(seed, ok, detail);
  }
  return c.report;
}

PropertyReport check_rank_discipline(int runs, std::uint64_t seed0) {
  Collector c("rank-drop runs are monotone and drop rank one step at a time");
  for (int run = 0; run < runs; ++run) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(run);
    SyntheticProblem prob = make_synthetic(20, 16, 3, 0.5, 0.0, seed);
    SolverConfig config;
    config.variant = Variant::Rdfw;
    config.delta = nuclear_norm(prob.ground_truth);
    config.max_iters = 300;
    config.seed = seed;
    const SolveResult result = solve(prob.data.train, config);
    bool ok = true;
    std::string detail;
    for (std::size_t k = 0; k < result.trace.size(); ++k) {
      const TraceRow& row = result.trace[k];
      if (k + 1 < result.trace.size()) {
        const TraceRow& next = result.trace[k + 1];
        if (next.objective > row.objective * (1.0 + 1e-10) + 1e-12) {
          ok = false;
          detail = "objective increased";
        }
        const bool is_rd = row.step_type == StepType::RdInterior ||
                           row.step_type == StepType::RdExterior;
        if (is_rd) {
          if (next.rank != row.rank - 1) {
            ok = false;
            detail = "accepted rank-drop step did not drop the rank by one";
          }
          const bool next_rd = next.step_type == StepType::RdInterior ||
                               next.step_type == StepType::RdExterior;
          if (next_rd) {
            ok = false;
            detail = "two consecutive rank-drop steps";
          }
        }
      }
    }
    c.record(seed, ok, detail);
  }
  return c.report;
}

PropertyReport check_rank_one_trace_equivalence(int runs,
                                                std::uint64_t seed0) {
  Collector c("plain and rank-drop runs coincide on rank-one problems");
  for (int run = 0; run < runs; ++run) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(run);
    std::mt19937_64 rng(seed);
    const Index m = uniform_index(rng, 6, 10);
    const Index n = uniform_index(rng, 5, 9);
    const Vector u = random_unit(m, rng);
    const Vector v = random_unit(n, rng);
    const double sigma = uniform(rng, 1.0, 4.0);
    std::vector<Triplet> entries;
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j)
        entries.push_back({static_cast<int>(i), static_cast<int>(j),
                           sigma * u(i) * v(j)});
    const Observations obs = make_observations(m, n, std::move(entries));

    SolverConfig config;
    config.delta = sigma;
    config.max_iters = 60;
    config.seed = seed;
    config.variant = Variant::Fw;
    const SolveResult fw = solve(obs, config);
    config.variant = Variant::Rdfw;
    const SolveResult rdfw = solve(obs, config);

    bool ok = fw.trace.size() == rdfw.trace.size();
    if (ok) {
      for (std::size_t k = 0; k < fw.trace.size(); ++k) {
        const TraceRow& a = fw.trace[k];
        const TraceRow& b = rdfw.trace[k];
        if (a.iter != b.iter || a.objective != b.objective ||
            a.gap != b.gap || a.nuclear_norm != b.nuclear_norm ||
            a.rank != b.rank || a.step_type != b.step_type || a.tau != b.tau)
          ok = false;
      }
      for (const TraceRow& row : rdfw.trace)
        if (row.step_type == StepType::RdInterior ||
            row.step_type == StepType::RdExterior)
          ok = false;
    }
    c.record(seed, ok, "traces diverged");
  }
  return c.report;
}

std::vector<PropertyReport> run_property_suite(VerifyScale scale,
                                               std::uint64_t seed0) {
  const bool full = scale == VerifyScale::Full;
  std::vector<PropertyReport> reports;
  reports.push_back(
      check_rank_drop_exactness(full ? 10000 : 200, seed0 + 1000));
  reports.push_back(check_radius_lower_bound(full ? 2000 : 200, seed0 + 2000));
  reports.push_back(
      check_interior_feasibility(full ? 1000 : 100, seed0 + 3000));
  reports.push_back(check_interior_nonempty(full ? 1000 : 100, seed0 + 4000));
  reports.push_back(check_interior_selection_quality(
      full ? 50 : 100, full ? 100000 : 5000, seed0 + 5000));
  reports.push_back(check_boundary_descent(full ? 200 : 100, full ? 200 : 100,
                                           seed0 + 6000));
  reports.push_back(
      check_exterior_boundary_proximity(full ? 1000 : 100, seed0 + 7000));
  reports.push_back(
      check_exterior_feasibility(full ? 1000 : 100, seed0 + 8000));
  reports.push_back(check_face_membership(full ? 1000 : 100, seed0 + 9000));
  reports.push_back(check_svd_update_maintenance(full ? 200 : 100, 10, 20, 15,
                                                 seed0 + 10000));
  reports.push_back(check_convergence_bound(full ? 20 : 8, seed0 + 11000));
  reports.push_back(check_solver_feasibility(full ? 40 : 12, seed0 + 12000));
  reports.push_back(check_rank_discipline(full ? 60 : 20, seed0 + 13000));
  reports.push_back(
      check_rank_one_trace_equivalence(full ? 200 : 100, seed0 + 14000));
  return reports;
}

}  // namespace nucfw
