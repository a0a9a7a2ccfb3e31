#include "nucfw/thin_svd.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nucfw {

namespace {

// Relative size below which the component of an update vector outside the
// current column span is not worth a new basis column.
constexpr double kExtendTol = 1e-12;

Eigen::BDCSVD<Matrix> small_svd(const Matrix& a) {
  return Eigen::BDCSVD<Matrix>(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

ThinSvd from_parts(Matrix u, Vector s, Matrix v, Index m, Index n) {
  ThinSvd out;
  out.U = std::move(u);
  out.S = std::move(s);
  out.V = std::move(v);
  out.m = m;
  out.n = n;
  return out;
}

// Keeps singular values strictly above the threshold. sv is descending.
Index kept_count(const Vector& sv, double threshold) {
  Index k = 0;
  while (k < sv.size() && sv(k) > threshold) ++k;
  return k;
}

ThinSvd reorthogonalized(const ThinSvd& x, double rank_threshold) {
  const Index r = x.rank();
  Eigen::HouseholderQR<Matrix> qr_u(x.U);
  Eigen::HouseholderQR<Matrix> qr_v(x.V);
  Matrix qu = qr_u.householderQ() * Matrix::Identity(x.m, r);
  Matrix qv = qr_v.householderQ() * Matrix::Identity(x.n, r);
  Matrix ru = qr_u.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  Matrix rv = qr_v.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  Matrix core = ru * x.S.asDiagonal() * rv.transpose();
  auto svd = small_svd(core);
  const Index k = kept_count(svd.singularValues(), rank_threshold);
  if (k == 0) return zero_iterate(x.m, x.n);
  return from_parts(qu * svd.matrixU().leftCols(k),
                    svd.singularValues().head(k),
                    qv * svd.matrixV().leftCols(k), x.m, x.n);
}

}  // namespace

ThinSvd zero_iterate(Index m, Index n) {
  ThinSvd out;
  out.U = Matrix(m, 0);
  out.S = Vector(0);
  out.V = Matrix(n, 0);
  out.m = m;
  out.n = n;
  return out;
}

ThinSvd make_thin_svd(Matrix U, Vector S, Matrix V) {
  const Index r = S.size();
  if (U.cols() != r || V.cols() != r)
    throw std::invalid_argument("make_thin_svd: factor column count != rank");
  if (r > std::min(U.rows(), V.rows()))
    throw std::invalid_argument("make_thin_svd: rank exceeds min(m, n)");
  for (Index i = 0; i < r; ++i) {
    if (!(S(i) > 0.0))
      throw std::invalid_argument("make_thin_svd: nonpositive singular value");
    if (i > 0 && S(i) > S(i - 1))
      throw std::invalid_argument("make_thin_svd: singular values not sorted");
  }
  ThinSvd out = from_parts(std::move(U), std::move(S), std::move(V),
                           /*m=*/0, /*n=*/0);
  out.m = out.U.rows();
  out.n = out.V.rows();
  if (ortho_drift(out) > kOrthoTol)
    throw std::invalid_argument("make_thin_svd: factors not orthonormal");
  return out;
}

double nuclear_norm(const ThinSvd& x) { return x.S.sum(); }

Index numeric_rank(const ThinSvd& x, double rank_threshold) {
  Index count = 0;
  for (Index i = 0; i < x.S.size(); ++i)
    if (x.S(i) > rank_threshold) ++count;
  return count;
}

double ortho_drift(const ThinSvd& x) {
  const Index r = x.rank();
  if (r == 0) return 0.0;
  const Matrix gu = x.U.transpose() * x.U - Matrix::Identity(r, r);
  const Matrix gv = x.V.transpose() * x.V - Matrix::Identity(r, r);
  return std::max(gu.cwiseAbs().maxCoeff(), gv.cwiseAbs().maxCoeff());
}

double reconstruct_entry(const ThinSvd& x, Index i, Index j) {
  if (i < 0 || i >= x.m || j < 0 || j >= x.n)
    throw std::out_of_range("reconstruct_entry: index out of bounds");
  double acc = 0.0;
  for (Index k = 0; k < x.rank(); ++k) acc += x.U(i, k) * x.S(k) * x.V(j, k);
  return acc;
}

std::vector<double> reconstruct_entries(
    const ThinSvd& x, const std::vector<std::pair<Index, Index>>& indices) {
  std::vector<double> out;
  out.reserve(indices.size());
  for (const auto& [i, j] : indices) out.push_back(reconstruct_entry(x, i, j));
  return out;
}

Matrix densify(const ThinSvd& x) {
  if (x.rank() == 0) return Matrix::Zero(x.m, x.n);
  return x.U * x.S.asDiagonal() * x.V.transpose();
}

ThinSvd rank_one_update(const ThinSvd& x, double iterate_scale,
                        const RankOneOuter& delta, double rank_threshold) {
  if (iterate_scale < 0.0)
    throw std::invalid_argument("rank_one_update: negative iterate scale");
  if (delta.scale != 0.0 &&
      (delta.u.size() != x.m || delta.v.size() != x.n))
    throw std::invalid_argument("rank_one_update: dimension mismatch");

  const double unorm = delta.scale != 0.0 ? delta.u.norm() : 0.0;
  const double vnorm = delta.scale != 0.0 ? delta.v.norm() : 0.0;
  const bool has_delta = delta.scale != 0.0 && unorm > 0.0 && vnorm > 0.0;

  // Pure rescale of the existing factorization.
  if (!has_delta) {
    if (iterate_scale == 0.0 || x.rank() == 0) return zero_iterate(x.m, x.n);
    Vector s = x.S * iterate_scale;
    const Index k = kept_count(s, rank_threshold);
    if (k == 0) return zero_iterate(x.m, x.n);
    return from_parts(x.U.leftCols(k), s.head(k), x.V.leftCols(k), x.m, x.n);
  }

  // Rank-one matrix built from scratch.
  if (iterate_scale == 0.0 || x.rank() == 0) {
    const double sigma = std::abs(delta.scale) * unorm * vnorm;
    if (sigma <= rank_threshold) return zero_iterate(x.m, x.n);
    const double sign = delta.scale > 0.0 ? 1.0 : -1.0;
    Matrix u = sign * delta.u / unorm;
    Matrix v = delta.v / vnorm;
    Vector s(1);
    s(0) = sigma;
    return from_parts(std::move(u), std::move(s), std::move(v), x.m, x.n);
  }

  const Index r = x.rank();

  // Split the update vectors into in-span coefficients and a (possibly
  // empty) new orthogonal direction; two projection passes keep the new
  // column orthogonal even when the out-of-span part is small.
  Vector mu = x.U.transpose() * delta.u;
  Vector p = delta.u - x.U * mu;
  const Vector mu_extra = x.U.transpose() * p;
  p -= x.U * mu_extra;
  mu += mu_extra;
  const double pnorm = p.norm();
  const bool extend_u = pnorm > kExtendTol * unorm;

  Vector nu = x.V.transpose() * delta.v;
  Vector q = delta.v - x.V * nu;
  const Vector nu_extra = x.V.transpose() * q;
  q -= x.V * nu_extra;
  nu += nu_extra;
  const double qnorm = q.norm();
  const bool extend_v = qnorm > kExtendTol * vnorm;

  const Index ru = r + (extend_u ? 1 : 0);
  const Index rv = r + (extend_v ? 1 : 0);

  Vector mu_ext(ru);
  mu_ext.head(r) = mu;
  if (extend_u) mu_ext(r) = pnorm;
  Vector nu_ext(rv);
  nu_ext.head(r) = nu;
  if (extend_v) nu_ext(r) = qnorm;

  Matrix core = Matrix::Zero(ru, rv);
  core.topLeftCorner(r, r) = (iterate_scale * x.S).asDiagonal();
  core += delta.scale * mu_ext * nu_ext.transpose();

  auto svd = small_svd(core);
  const Index k = kept_count(svd.singularValues(), rank_threshold);
  if (k == 0) return zero_iterate(x.m, x.n);

  Matrix unew(x.m, k);
  unew.noalias() = x.U * svd.matrixU().topRows(r).leftCols(k);
  if (extend_u) unew.noalias() += (p / pnorm) * svd.matrixU().row(r).head(k);
  Matrix vnew(x.n, k);
  vnew.noalias() = x.V * svd.matrixV().topRows(r).leftCols(k);
  if (extend_v) vnew.noalias() += (q / qnorm) * svd.matrixV().row(r).head(k);

  ThinSvd out = from_parts(std::move(unew), svd.singularValues().head(k),
                           std::move(vnew), x.m, x.n);
  if (ortho_drift(out) > kOrthoTol) out = reorthogonalized(out, rank_threshold);
  return out;
}

ThinSvd full_svd_oracle(const Matrix& dense, double rank_threshold) {
  if (dense.size() == 0) return zero_iterate(dense.rows(), dense.cols());
  Eigen::JacobiSVD<Matrix> svd(dense,
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  double threshold = rank_threshold;
  if (threshold < 0.0) {
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    threshold = std::max<double>(dense.rows(), dense.cols()) *
                std::numeric_limits<double>::epsilon() * smax;
  }
  const Index k = kept_count(sv, threshold);
  if (k == 0) return zero_iterate(dense.rows(), dense.cols());
  return from_parts(svd.matrixU().leftCols(k), sv.head(k),
                    svd.matrixV().leftCols(k), dense.rows(), dense.cols());
}

Index dense_numeric_rank(const Matrix& dense, double threshold) {
  if (dense.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(dense);
  Index count = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > threshold) ++count;
  return count;
}

double spectral_norm(const Matrix& dense) {
  if (dense.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(dense);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

}  // namespace nucfw
