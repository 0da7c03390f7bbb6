#include "cascademix/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace cascademix {

double mae_rates(const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth) {
  if (est.rows() != truth.rows() || est.cols() != truth.cols())
    throw ValidationError("shape mismatch between estimate and truth");
  double sum = 0.0;
  long count = 0;
  for (int j = 0; j < truth.rows(); ++j) {
    for (int i = 0; i < truth.cols(); ++i) {
      if (truth(j, i) <= 0.0) continue;
      sum += std::abs(est(j, i) - truth(j, i)) / truth(j, i);
      ++count;
    }
  }
  if (count == 0) throw EmptySupportError("truth network has no positive entries");
  return sum / static_cast<double>(count);
}

double mae_pi(const Eigen::VectorXd& est, const Eigen::VectorXd& truth) {
  if (est.size() != truth.size()) throw ValidationError("pi length mismatch");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    if (!(truth[i] > 0.0)) throw ValidationError("true pi must be strictly positive");
    sum += std::abs(est[i] - truth[i]) / truth[i];
  }
  return truth.size() == 0 ? 0.0 : sum / static_cast<double>(truth.size());
}

TopologyMetrics topology_metrics(const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth,
                                 double threshold) {
  if (est.rows() != truth.rows() || est.cols() != truth.cols())
    throw ValidationError("shape mismatch between estimate and truth");
  long n_est = 0, n_truth = 0, shared = 0;
  for (int j = 0; j < truth.rows(); ++j) {
    for (int i = 0; i < truth.cols(); ++i) {
      if (j == i) continue;
      const bool e = est(j, i) > threshold;
      const bool t = truth(j, i) > threshold;
      n_est += e;
      n_truth += t;
      shared += e && t;
    }
  }
  TopologyMetrics m;
  const long denom = n_est + n_truth;
  m.symdiff_ratio = denom == 0 ? 0.0 : static_cast<double>(denom - 2 * shared) / denom;
  m.acc = 1.0 - m.symdiff_ratio;
  m.precision = n_est == 0 ? 0.0 : static_cast<double>(shared) / n_est;
  m.recall = n_truth == 0 ? 0.0 : static_cast<double>(shared) / n_truth;
  return m;
}

double overlap(const SupportMask& a, const SupportMask& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ValidationError("shape mismatch between masks");
  long inter = 0, uni = 0;
  for (int j = 0; j < a.rows(); ++j) {
    for (int i = 0; i < a.cols(); ++i) {
      if (j == i) continue;
      const bool x = a(j, i) != 0, y = b(j, i) != 0;
      inter += x && y;
      uni += x || y;
    }
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

MixtureParams global_swap(const MixtureParams& p) {
  MixtureParams s;
  s.theta = p.psi;
  s.psi = p.theta;
  s.pi = Eigen::VectorXd::Ones(p.pi.size()) - p.pi;
  return s;
}

}  // namespace

MixtureParams align_to_truth(const MixtureParams& est, const MixtureParams& truth) {
  const double direct = mae_rates(est.theta.weights, truth.theta.weights) +
                        mae_rates(est.psi.weights, truth.psi.weights);
  const double crossed = mae_rates(est.psi.weights, truth.theta.weights) +
                         mae_rates(est.theta.weights, truth.psi.weights);
  return crossed < direct ? global_swap(est) : est;
}

EvalReport evaluate(const MixtureParams& est, const MixtureParams& truth, double threshold) {
  const double direct = mae_rates(est.theta.weights, truth.theta.weights) +
                        mae_rates(est.psi.weights, truth.psi.weights);
  const double crossed = mae_rates(est.psi.weights, truth.theta.weights) +
                         mae_rates(est.theta.weights, truth.psi.weights);
  const MixtureParams aligned = crossed < direct ? global_swap(est) : est;

  EvalReport r;
  r.swapped = crossed < direct;
  r.edge_threshold = threshold;
  r.mae_theta = mae_rates(aligned.theta.weights, truth.theta.weights);
  r.mae_psi = mae_rates(aligned.psi.weights, truth.psi.weights);
  r.mae_pi = mae_pi(aligned.pi, truth.pi);

  const TopologyMetrics mt = topology_metrics(aligned.theta.weights, truth.theta.weights, threshold);
  const TopologyMetrics mp = topology_metrics(aligned.psi.weights, truth.psi.weights, threshold);
  r.acc_theta = mt.acc;
  r.pre_theta = mt.precision;
  r.rec_theta = mt.recall;
  r.symdiff_ratio_theta = mt.symdiff_ratio;
  r.acc_psi = mp.acc;
  r.pre_psi = mp.precision;
  r.rec_psi = mp.recall;
  r.symdiff_ratio_psi = mp.symdiff_ratio;

  const Eigen::MatrixXd est_union = aligned.theta.weights.cwiseMax(aligned.psi.weights);
  const Eigen::MatrixXd truth_union = truth.theta.weights.cwiseMax(truth.psi.weights);
  const TopologyMetrics mu = topology_metrics(est_union, truth_union, threshold);
  r.acc_union = mu.acc;
  r.pre_union = mu.precision;
  r.rec_union = mu.recall;
  r.symdiff_ratio_union = mu.symdiff_ratio;

  r.overlap_est = overlap(support_of(aligned.theta.weights, threshold),
                          support_of(aligned.psi.weights, threshold));
  return r;
}

namespace {

const char* kReportFields[] = {
    "mae_theta",        "mae_psi",           "mae_pi",
    "acc_theta",        "pre_theta",         "rec_theta",
    "acc_psi",          "pre_psi",           "rec_psi",
    "acc_union",        "pre_union",         "rec_union",
    "symdiff_ratio_theta", "symdiff_ratio_psi", "symdiff_ratio_union",
    "overlap_est",      "edge_threshold",    "swapped",
};

std::vector<double> report_values(const EvalReport& r) {
  return {r.mae_theta,
          r.mae_psi,
          r.mae_pi,
          r.acc_theta,
          r.pre_theta,
          r.rec_theta,
          r.acc_psi,
          r.pre_psi,
          r.rec_psi,
          r.acc_union,
          r.pre_union,
          r.rec_union,
          r.symdiff_ratio_theta,
          r.symdiff_ratio_psi,
          r.symdiff_ratio_union,
          r.overlap_est,
          r.edge_threshold,
          r.swapped ? 1.0 : 0.0};
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::string report_json(const EvalReport& r) {
  nlohmann::json j;
  const auto values = report_values(r);
  for (std::size_t k = 0; k < values.size(); ++k) j[kReportFields[k]] = values[k];
  j["acc_definition"] = EvalReport::kAccDefinition;
  return j.dump(2);
}

std::string report_csv_header() {
  std::ostringstream out;
  for (std::size_t k = 0; k < std::size(kReportFields); ++k) {
    if (k > 0) out << ',';
    out << kReportFields[k];
  }
  return out.str();
}

std::string report_csv_row(const EvalReport& r) {
  std::ostringstream out;
  const auto values = report_values(r);
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) out << ',';
    out << fmt17(values[k]);
  }
  return out.str();
}

}  // namespace cascademix
