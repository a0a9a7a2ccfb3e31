#include "nucfw/objective.hpp"

#include <cmath>
#include <stdexcept>

#include "nucfw/kernels.hpp"

namespace nucfw {

namespace {

Vector random_unit(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = gauss(rng);
  const double norm = v.norm();
  if (norm == 0.0) {
    v.setZero();
    if (n > 0) v(0) = 1.0;
    return v;
  }
  return v / norm;
}

struct PowerState {
  Vector v;       // right singular vector estimate
  Vector gv;      // G v
  double rho = 0.0;  // Rayleigh quotient of G^T G
  bool converged = false;
  int iterations = 0;
};

PowerState power_iterate(const Observations& pattern,
                         std::span<const double> gvals, Vector v0,
                         double power_tol, int power_max_iter,
                         kernels::Exec exec) {
  PowerState st;
  st.v = std::move(v0);
  Vector w(pattern.m), z(pattern.n);
  double rho_prev = -1.0;
  for (int it = 1; it <= power_max_iter; ++it) {
    kernels::apply_right(pattern, gvals, st.v, w, exec);
    st.rho = w.squaredNorm();
    st.iterations = it;
    if (std::abs(st.rho - rho_prev) <=
        power_tol * std::max(st.rho, 1e-300)) {
      st.converged = true;
      st.gv = w;
      return st;
    }
    rho_prev = st.rho;
    kernels::apply_left(pattern, gvals, w, z, exec);
    const double znorm = z.norm();
    if (znorm == 0.0) break;  // landed in the null space; caller restarts
    st.v = z / znorm;
  }
  kernels::apply_right(pattern, gvals, st.v, w, exec);
  st.rho = w.squaredNorm();
  st.gv = w;
  return st;
}

}  // namespace

double objective_value(const SparseResidual& res) {
  return 0.5 * kernels::sum_squares(res.value, kernels::default_exec());
}

double objective_value(const ThinSvd& x, const Observations& obs) {
  return objective_value(residual(x, obs));
}

SparseResidual residual(const ThinSvd& x, const Observations& obs) {
  if (x.m != obs.m || x.n != obs.n)
    throw std::invalid_argument("residual: shape mismatch");
  SparseResidual res;
  res.pattern = &obs;
  res.iterate_value.resize(obs.size());
  kernels::reconstruct(x, obs, res.iterate_value, kernels::default_exec());
  res.value.resize(obs.size());
  const auto exec = kernels::default_exec();
  // element-wise, no reduction
  if (exec == kernels::Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t e = 0; e < static_cast<std::ptrdiff_t>(obs.size());
         ++e)
      res.value[e] = res.iterate_value[e] - obs.value[e];
  } else {
    for (std::size_t e = 0; e < obs.size(); ++e)
      res.value[e] = res.iterate_value[e] - obs.value[e];
  }
  return res;
}

Vector apply_gradient(const SparseResidual& res, Side side,
                      const Vector& vec) {
  Vector out;
  if (side == Side::Right)
    kernels::apply_right(*res.pattern, res.value, vec, out,
                         kernels::default_exec());
  else
    kernels::apply_left(*res.pattern, res.value, vec, out,
                        kernels::default_exec());
  return out;
}

LmoResult lmo(const SparseResidual& res, double delta, double power_tol,
              int power_max_iter, std::mt19937_64& rng) {
  const Observations& pattern = *res.pattern;
  LmoResult out;
  const double gnorm2 =
      kernels::sum_squares(res.value, kernels::default_exec());
  if (gnorm2 == 0.0) {
    out.zero_gradient = true;
    out.converged = true;
    return out;
  }
  const auto exec = kernels::default_exec();
  PowerState best = power_iterate(pattern, res.value,
                                  random_unit(pattern.n, rng), power_tol,
                                  power_max_iter, exec);
  out.iterations = best.iterations;
  if (!best.converged) {
    PowerState retry = power_iterate(pattern, res.value,
                                     random_unit(pattern.n, rng), power_tol,
                                     power_max_iter, exec);
    out.iterations += retry.iterations;
    if (retry.converged || retry.rho > best.rho) best = std::move(retry);
  }
  out.converged = best.converged;
  out.sigma = std::sqrt(best.rho);
  const double gvnorm = best.gv.norm();
  if (gvnorm == 0.0) {
    // Degenerate direction; fall back to an arbitrary feasible atom.
    out.atom.u = Vector::Zero(pattern.m);
    out.atom.v = Vector::Zero(pattern.n);
    if (pattern.m > 0) out.atom.u(0) = 1.0;
    if (pattern.n > 0) out.atom.v(0) = 1.0;
    out.atom.scale = -delta;
    out.converged = false;
    return out;
  }
  out.atom.u = best.gv / gvnorm;
  out.atom.v = best.v;
  out.atom.scale = -delta;
  return out;
}

double line_search_on_residual(std::span<const double> rvals,
                               std::span<const double> dvals,
                               double tau_max) {
  if (tau_max <= 0.0)
    throw std::invalid_argument("line_search: tau_max must be positive");
  const auto exec = kernels::default_exec();
  const double dd = kernels::sum_squares(dvals, exec);
  if (dd == 0.0) return 0.0;
  const double rd = kernels::dot(rvals, dvals, exec);
  const double tau = -rd / dd;
  if (tau < 0.0) return 0.0;
  if (tau > tau_max) return tau_max;
  return tau;
}

double exact_line_search(const ThinSvd& x, const Observations& obs,
                         std::span<const double> dir_on_omega,
                         double tau_max) {
  const SparseResidual res = residual(x, obs);
  return line_search_on_residual(res.value, dir_on_omega, tau_max);
}

double duality_gap(const ThinSvd& x, const SparseResidual& res,
                   const RankOneOuter& lmo_atom) {
  (void)x;
  const auto exec = kernels::default_exec();
  const double grad_dot_x =
      kernels::dot(res.value, res.iterate_value, exec);
  const double grad_dot_atom =
      lmo_atom.scale * kernels::rank_one_inner(*res.pattern, res.value,
                                               lmo_atom.u, lmo_atom.v, exec);
  return grad_dot_x - grad_dot_atom;
}

double rmse(const ThinSvd& x, const Observations& test) {
  if (test.size() == 0)
    throw std::invalid_argument("rmse: empty test set");
  const SparseResidual res = residual(x, test);
  const double ss =
      kernels::sum_squares(res.value, kernels::default_exec());
  return std::sqrt(ss / static_cast<double>(test.size()));
}

}  // namespace nucfw
