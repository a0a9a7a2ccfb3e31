#include "nucfw/solver.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <limits>

#include "nucfw/kernels.hpp"
#include "nucfw/log.hpp"
#include "nucfw/rank_drop.hpp"

namespace nucfw {

namespace {

// Relative nuclear-norm distance to the boundary below which the in-face
// variant attempts its rank-reducing away step.
constexpr double kInFaceBoundaryTol = 1e-3;
constexpr double kAtomMergeTol = 1e-10;
constexpr double kWeightDropTol = 1e-14;
constexpr double kDecompositionTol = 1e-6;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

Variant variant_from_string(const std::string& name) {
  if (name == "fw") return Variant::Fw;
  if (name == "afw") return Variant::Afw;
  if (name == "inface") return Variant::InFace;
  if (name == "rdfw") return Variant::Rdfw;
  throw std::invalid_argument("unknown variant: " + name);
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Fw: return "fw";
    case Variant::Afw: return "afw";
    case Variant::InFace: return "inface";
    case Variant::Rdfw: return "rdfw";
  }
  return "?";
}

std::string to_string(StepType t) {
  switch (t) {
    case StepType::Fw: return "fw";
    case StepType::Away: return "away";
    case StepType::InFace: return "inface";
    case StepType::RdInterior: return "rd-interior";
    case StepType::RdExterior: return "rd-exterior";
    case StepType::Stop: return "stop";
  }
  return "?";
}

Matrix densify(const AtomicDecomposition& decomposition, Index m, Index n) {
  Matrix acc = Matrix::Zero(m, n);
  for (std::size_t i = 0; i < decomposition.atoms.size(); ++i) {
    const RankOneOuter& a = decomposition.atoms[i];
    acc += decomposition.weights[i] * a.scale * a.u * a.v.transpose();
  }
  return acc;
}

std::optional<AwayChoice> away_choice(
    const AtomicDecomposition& decomposition, const SparseResidual& res) {
  std::optional<AwayChoice> best;
  for (std::size_t i = 0; i < decomposition.atoms.size(); ++i) {
    const RankOneOuter& a = decomposition.atoms[i];
    const double inner =
        a.scale * kernels::rank_one_inner(*res.pattern, res.value, a.u, a.v,
                                          kernels::default_exec());
    if (!best || inner > best->inner) {
      const double w = decomposition.weights[i];
      const double cap =
          w < 1.0 ? w / (1.0 - w) : std::numeric_limits<double>::max();
      best = AwayChoice{static_cast<int>(i), inner, cap};
    }
  }
  return best;
}

namespace {

// Merge-or-append for a fresh oracle atom; weights were already rescaled.
void add_atom(AtomicDecomposition& decomposition, const RankOneOuter& atom,
              double weight) {
  for (std::size_t i = 0; i < decomposition.atoms.size(); ++i) {
    const RankOneOuter& a = decomposition.atoms[i];
    const double align = a.u.dot(atom.u) * a.v.dot(atom.v);
    if (std::abs(align - 1.0) <= kAtomMergeTol) {
      decomposition.weights[i] += weight;
      return;
    }
  }
  decomposition.atoms.push_back(atom);
  decomposition.weights.push_back(weight);
}

void drop_exhausted_atoms(AtomicDecomposition& decomposition) {
  std::size_t keep = 0;
  for (std::size_t i = 0; i < decomposition.atoms.size(); ++i) {
    if (decomposition.weights[i] > kWeightDropTol) {
      if (keep != i) {
        decomposition.atoms[keep] = std::move(decomposition.atoms[i]);
        decomposition.weights[keep] = decomposition.weights[i];
      }
      ++keep;
    }
  }
  decomposition.atoms.resize(keep);
  decomposition.weights.resize(keep);
}

struct LoopContext {
  const Observations& obs;
  const SolverConfig& config;
  const TraceSink& sink;
  std::vector<TraceRow> trace;
  std::chrono::steady_clock::time_point t0;

  void emit(int iter, double f, double gap, double nn, int rank,
            StepType type, double tau) {
    TraceRow row{iter, f, gap, nn, rank, type, tau, seconds_since(t0)};
    trace.push_back(row);
    if (sink) sink(row);
  }
};

SolveResult run_loop(LoopContext& ctx) {
  const Observations& obs = ctx.obs;
  const SolverConfig& config = ctx.config;
  const auto exec = kernels::default_exec();

  ThinSvd x = zero_iterate(obs.m, obs.n);
  std::mt19937_64 rng(config.seed);
  AtomicDecomposition decomposition;
  bool prev_was_rd = true;  // Algorithm start: first step is Frank-Wolfe
  double prev_gap = 0.0;
  bool converged = false;
  std::vector<double> dir(obs.size());

  int k = 0;
  for (;;) {
    SparseResidual res = residual(x, obs);
    const double f = objective_value(res);
    const bool zero_grad = f == 0.0;
    const double nn = nuclear_norm(x);
    const int rank = static_cast<int>(x.rank());

    if (k < config.max_iters && !zero_grad) {
      if (config.variant == Variant::Rdfw && !prev_was_rd && rank >= 2) {
        std::optional<RankDropStep> step;
        try {
          step = rank_drop_direction(x, res, config.delta);
        } catch (const std::exception& e) {
          log::debug("rank-drop direction unavailable at iter %d: %s", k,
                     e.what());
        }
        if (step) {
          const double tau = step->tau_star;
          RankOneOuter pert{x.U * step->s, x.V * step->t,
                            -tau * config.delta};
          const double trial = kernels::blend_half_sq(
              obs, res.iterate_value, 1.0 + tau, pert.u, pert.v, pert.scale,
              exec);
          if (trial <= f) {
            const StepType type = step->kind == RankDropKind::Interior
                                      ? StepType::RdInterior
                                      : StepType::RdExterior;
            ctx.emit(k, f, prev_gap, nn, rank, type, tau);
            x = rank_one_update(x, 1.0 + tau, pert, config.rank_threshold);
            prev_was_rd = true;
            ++k;
            continue;
          }
        }
      } else if (config.variant == Variant::InFace && rank >= 2 &&
                 nn >= config.delta * (1.0 - kInFaceBoundaryTol)) {
        // Away vertex of the minimal face: delta * U s s^T V^T with s the
        // top eigendirection of the symmetrized projected gradient, taken
        // at the largest feasible step.
        const Matrix w = projected_gradient(x, res);
        const Matrix sym = 0.5 * (w + w.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
        const Vector s = es.eigenvectors().col(rank - 1);
        const double q = s.dot(x.S.cwiseInverse().asDiagonal() * s);
        const double denom = config.delta * q - 1.0;
        if (std::isfinite(denom) && denom > 1e-12) {
          const double tau = 1.0 / denom;
          RankOneOuter pert{x.U * s, x.V * s, -tau * config.delta};
          const double trial = kernels::blend_half_sq(
              obs, res.iterate_value, 1.0 + tau, pert.u, pert.v, pert.scale,
              exec);
          if (trial <= f) {
            ctx.emit(k, f, prev_gap, nn, rank, StepType::InFace, tau);
            x = rank_one_update(x, 1.0 + tau, pert, config.rank_threshold);
            ++k;
            continue;
          }
        }
      }
    }

    // Oracle step shared by all variants.
    LmoResult lr;
    double gap = 0.0;
    if (!zero_grad) {
      lr = lmo(res, config.delta, config.power_tol, config.power_max_iter,
               rng);
      if (!lr.converged)
        log::debug("oracle power iteration hit the cap at iter %d", k);
      gap = lr.zero_gradient ? 0.0 : duality_gap(x, res, lr.atom);
    }
    prev_gap = gap;

    const bool gap_stop =
        zero_grad || lr.zero_gradient ||
        gap <= config.rel_gap_tol * std::max(f, 1e-12);
    if (gap_stop || k >= config.max_iters) {
      converged = gap_stop;
      ctx.emit(k, f, gap, nn, rank, StepType::Stop, 0.0);
      break;
    }

    bool take_fw = true;
    std::optional<AwayChoice> away;
    if (config.variant == Variant::Afw) {
      away = away_choice(decomposition, res);
      if (away) {
        const double grad_dot_x =
            kernels::dot(res.value, res.iterate_value, exec);
        // <-grad, d_fw> = gap vs <-grad, d_away> = <atom, grad> - <x, grad>
        take_fw = gap >= away->inner - grad_dot_x;
      }
    }

    if (take_fw) {
      kernels::combine_rank_one(obs, lr.atom, 1.0, res.iterate_value, -1.0,
                                dir, exec);
      const double tau = line_search_on_residual(res.value, dir, 1.0);
      ctx.emit(k, f, gap, nn, rank, StepType::Fw, tau);
      RankOneOuter scaled = lr.atom;
      scaled.scale *= tau;
      x = rank_one_update(x, 1.0 - tau, scaled, config.rank_threshold);
      if (config.variant == Variant::Afw) {
        for (double& w : decomposition.weights) w *= 1.0 - tau;
        add_atom(decomposition, lr.atom, tau);
        drop_exhausted_atoms(decomposition);
      }
    } else {
      const RankOneOuter& atom =
          decomposition.atoms[static_cast<std::size_t>(away->index)];
      kernels::combine_rank_one(obs, atom, -1.0, res.iterate_value, 1.0, dir,
                                exec);
      const double tau = line_search_on_residual(res.value, dir,
                                                 away->max_step);
      ctx.emit(k, f, gap, nn, rank, StepType::Away, tau);
      RankOneOuter scaled = atom;
      scaled.scale *= -tau;
      x = rank_one_update(x, 1.0 + tau, scaled, config.rank_threshold);
      for (double& w : decomposition.weights) w *= 1.0 + tau;
      decomposition.weights[static_cast<std::size_t>(away->index)] -= tau;
      drop_exhausted_atoms(decomposition);
    }

    if (config.variant == Variant::Afw && config.validate_decomposition) {
      const Matrix diff = densify(decomposition, obs.m, obs.n) - densify(x);
      if (spectral_norm(diff) > kDecompositionTol)
        throw std::runtime_error(
            "atomic decomposition diverged from the factored iterate");
    }

    prev_was_rd = false;
    ++k;
  }

  SolveResult out;
  out.x = std::move(x);
  out.trace = std::move(ctx.trace);
  out.converged = converged;
  out.decomposition = std::move(decomposition);
  return out;
}

}  // namespace

SolveResult solve(const Observations& train, const SolverConfig& config,
                  const TraceSink& sink) {
  if (!(config.delta > 0.0))
    throw std::invalid_argument("solve: delta must be positive");
  if (config.max_iters < 1)
    throw std::invalid_argument("solve: max_iters must be at least 1");
  if (!(config.rel_gap_tol > 0.0))
    throw std::invalid_argument("solve: rel_gap_tol must be positive");

  LoopContext ctx{train, config, sink, {}, std::chrono::steady_clock::now()};
  try {
    return run_loop(ctx);
  } catch (const std::exception& e) {
    throw SolverError(std::string("solver failed: ") + e.what(),
                      std::move(ctx.trace));
  }
}

std::vector<double> convergence_bound(const std::vector<TraceRow>& trace,
                                      double delta, double lipschitz) {
  if (!(lipschitz > 0.0))
    throw std::invalid_argument("convergence_bound: lipschitz must be > 0");
  std::vector<double> bound(trace.size());
  int fw_steps = 0;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    bound[k] = 8.0 * delta * delta * lipschitz / (4.0 + fw_steps);
    if (trace[k].step_type == StepType::Fw) ++fw_steps;
  }
  return bound;
}

}  // namespace nucfw
