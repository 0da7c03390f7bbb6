#include "cascademix/projections.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace cascademix {

void clamp_box_zero_diag(Eigen::MatrixXd& m, double hi) {
  m = m.cwiseMax(0.0).cwiseMin(hi);
  m.diagonal().setZero();
}

Eigen::VectorXd project_l1_ball_nonneg(const Eigen::VectorXd& v, double radius) {
  Eigen::VectorXd x = v.cwiseMax(0.0);
  if (radius <= 0.0) return Eigen::VectorXd::Zero(v.size());
  if (x.sum() <= radius) return x;

  // sort-and-threshold: find the largest prefix whose running mean excess
  // keeps the threshold below the entries in the prefix
  std::vector<double> sorted(x.data(), x.data() + x.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumsum += sorted[k];
    const double candidate = (cumsum - radius) / static_cast<double>(k + 1);
    if (candidate < sorted[k]) tau = candidate;
  }
  return (x.array() - tau).cwiseMax(0.0);
}

Eigen::VectorXd project_l1_box(const Eigen::VectorXd& v, double radius, double hi) {
  auto clamped_sum = [&](double tau) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      s += std::clamp(v[i] - tau, 0.0, hi);
    return s;
  };
  if (radius <= 0.0) return Eigen::VectorXd::Zero(v.size());
  if (clamped_sum(0.0) <= radius)
    return v.cwiseMax(0.0).cwiseMin(hi);

  double lo = 0.0, up = v.maxCoeff();  // clamped_sum(up) = 0 < radius
  for (int it = 0; it < 200 && up - lo > 1e-15 * std::max(1.0, up); ++it) {
    const double mid = 0.5 * (lo + up);
    if (clamped_sum(mid) > radius)
      lo = mid;
    else
      up = mid;
  }
  const double tau = 0.5 * (lo + up);
  Eigen::VectorXd x(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) x[i] = std::clamp(v[i] - tau, 0.0, hi);
  return x;
}

double nuclear_norm(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().sum();
}

namespace {

bool nuclear_pass(Eigen::MatrixXd& m, double radius, double box_hi) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) return false;
  Eigen::VectorXd sv = project_l1_ball_nonneg(svd.singularValues(), radius);
  m = svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
  clamp_box_zero_diag(m, box_hi);
  return true;
}

}  // namespace

NuclearProjectionResult project_nuclear_box(const Eigen::MatrixXd& m, double radius,
                                            double box_hi, double tol, int max_passes) {
  NuclearProjectionResult out;
  out.value = m;
  if (!m.allFinite()) {
    out.svd_ok = false;
    return out;
  }
  clamp_box_zero_diag(out.value, box_hi);
  if (radius <= 0.0) {
    out.value.setZero();
    return out;
  }
  for (int pass = 0; pass < max_passes; ++pass) {
    const double nn = nuclear_norm(out.value);
    if (nn <= radius * (1.0 + tol)) return out;
    ++out.passes;
    if (!nuclear_pass(out.value, radius, box_hi)) {
      out.svd_ok = false;
      break;
    }
  }
  // clamping after the singular-value step can re-inflate the norm; a
  // global shrink stays inside the box and restores the nuclear bound
  const double nn = nuclear_norm(out.value);
  if (nn > radius) {
    out.value *= radius / nn;
    out.scaled = true;
  }
  return out;
}

NuclearProjectionResult project_nuclear_box_dykstra(const Eigen::MatrixXd& m, double radius,
                                                    double box_hi, int iters) {
  NuclearProjectionResult out;
  if (!m.allFinite()) {
    out.value = m;
    out.svd_ok = false;
    return out;
  }
  Eigen::MatrixXd x = m;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (int it = 0; it < iters; ++it) {
    Eigen::MatrixXd y = x + p;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
      out.value = x;
      out.svd_ok = false;
      return out;
    }
    Eigen::VectorXd sv = project_l1_ball_nonneg(svd.singularValues(), radius);
    Eigen::MatrixXd yn = svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
    p = y - yn;
    Eigen::MatrixXd z = yn + q;
    x = z;
    clamp_box_zero_diag(x, box_hi);
    q = z - x;
    ++out.passes;
  }
  const double nn = nuclear_norm(x);
  if (nn > radius && nn > 0.0) {
    x *= radius / nn;
    out.scaled = true;
  }
  out.value = std::move(x);
  return out;
}

}  // namespace cascademix
