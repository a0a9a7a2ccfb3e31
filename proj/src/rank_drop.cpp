#include "nucfw/rank_drop.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "nucfw/kernels.hpp"

namespace nucfw {

double kappa(const ThinSvd& x, double delta) {
  const double nn = nuclear_norm(x);
  if (nn > delta + 1e-10)
    throw std::invalid_argument("kappa: iterate outside the nuclear ball");
  return std::max(0.0, 0.5 * (delta - nn));
}

Matrix projected_gradient(const ThinSvd& x, const SparseResidual& res) {
  const Index r = x.rank();
  const Observations& pattern = *res.pattern;
  Matrix gv(x.m, r);
  Vector tmp;
  for (Index b = 0; b < r; ++b) {
    const Vector vb = x.V.col(b);
    kernels::apply_right(pattern, res.value, vb, tmp,
                         kernels::default_exec());
    gv.col(b) = tmp;
  }
  return x.U.transpose() * gv;
}

std::vector<InteriorCandidate> interior_candidates(const Matrix& W,
                                                   const Vector& S,
                                                   double kappa_value,
                                                   double zero_sv_tol) {
  const Index r = S.size();
  const Vector sigma_inv = S.cwiseInverse();

  const Matrix neg_sigma_w = -(S.asDiagonal() * W);
  Eigen::EigenSolver<Matrix> es(neg_sigma_w, /*computeEigenvectors=*/false);

  std::vector<double> lambdas;
  lambdas.reserve(static_cast<std::size_t>(r));
  for (Index i = 0; i < r; ++i) {
    const std::complex<double> ev = es.eigenvalues()(i);
    if (std::abs(ev.imag()) <= 1e-12 * (1.0 + std::abs(ev)))
      lambdas.push_back(ev.real());
  }
  std::sort(lambdas.begin(), lambdas.end());

  // One candidate per eigenvalue, evaluated independently and merged in
  // eigenvalue order so the result does not depend on the schedule.
  std::vector<std::optional<InteriorCandidate>> slots(lambdas.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t li = 0;
       li < static_cast<std::ptrdiff_t>(lambdas.size()); ++li) {
    const double lambda = lambdas[static_cast<std::size_t>(li)];
    Matrix m_lambda = -0.5 * (W + lambda * Matrix(sigma_inv.asDiagonal()));
    Eigen::JacobiSVD<Matrix> svd(
        m_lambda, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double tol = zero_sv_tol * std::max(1.0, smax);
    std::optional<InteriorCandidate> best;
    for (Index i = r - 1; i >= 0 && sv(i) <= tol; --i) {
      Vector s = svd.matrixU().col(i);
      const Vector t = svd.matrixV().col(i);
      double bilinear = s.dot(sigma_inv.asDiagonal() * t);
      if (bilinear < 0.0) {
        s = -s;
        bilinear = -bilinear;
      }
      if (bilinear == 0.0) continue;
      if (kappa_value * bilinear < 1.0) continue;
      const double score = s.dot(W * t);
      if (!best || score > best->score)
        best = InteriorCandidate{std::move(s), t, lambda, score, bilinear};
    }
    slots[static_cast<std::size_t>(li)] = std::move(best);
  }

  std::vector<InteriorCandidate> out;
  for (auto& slot : slots)
    if (slot) out.push_back(std::move(*slot));
  return out;
}

ExteriorStep exterior_step(const Matrix& W, const Vector& S, double delta) {
  const Index r = S.size();
  const Matrix sym = 0.5 * (W + W.transpose());
  Vector s;
  if (sym.cwiseAbs().maxCoeff() == 0.0) {
    // Zero gradient: any direction scores zero; keep the leading one.
    s = Vector::Zero(r);
    s(0) = 1.0;
  } else {
    const Vector shalf = S.cwiseSqrt();
    const Matrix b = shalf.asDiagonal() * sym * shalf.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> es(b);
    const Vector z = es.eigenvectors().col(r - 1);
    s = shalf.asDiagonal() * z;
    s.normalize();
  }
  const double q = s.dot(S.cwiseInverse().asDiagonal() * s);
  const double denom = delta * q - 1.0;
  if (!std::isfinite(denom) || denom <= 1e-12)
    throw std::runtime_error(
        "exterior_step: degenerate step size (delta * s^T Sigma^-1 s <= 1)");
  return ExteriorStep{std::move(s), 1.0 / denom};
}

RankDropStep rank_drop_direction(const ThinSvd& x, const SparseResidual& res,
                                 double delta) {
  const Index r = x.rank();
  if (r < 2)
    throw std::invalid_argument("rank_drop_direction: rank < 2");
  const double kap = kappa(x, delta);
  const Matrix w = projected_gradient(x, res);
  const double sigma_r = x.S(r - 1);

  if (kap >= sigma_r) {
    const auto candidates =
        interior_candidates(w, x.S, kap, kZeroSvTol);
    const InteriorCandidate* best = nullptr;
    for (const auto& cand : candidates) {
      if (best == nullptr || cand.score > best->score) best = &cand;
    }
    if (best != nullptr) {
      const double alpha = 1.0 / best->bilinear;
      const double tau = alpha / (delta - alpha);
      return RankDropStep{best->s, best->t, tau, RankDropKind::Interior,
                          best->score};
    }
  }

  ExteriorStep ext = exterior_step(w, x.S, delta);
  const double score = ext.s.dot(w * ext.s);
  return RankDropStep{ext.s, ext.s, ext.tau_star, RankDropKind::Exterior,
                      score};
}

}  // namespace nucfw
