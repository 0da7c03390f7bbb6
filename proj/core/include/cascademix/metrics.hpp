#pragma once

#include <string>

#include "cascademix/mixture.hpp"
#include "cascademix/types.hpp"

namespace cascademix {

// Mean relative absolute error over the truth's positive entries.
double mae_rates(const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth);

// Mean relative absolute error over nodes; truth must be strictly positive.
double mae_pi(const Eigen::VectorXd& est, const Eigen::VectorXd& truth);

struct TopologyMetrics {
  double acc = 0.0;        // 1 - symmetric-difference ratio (higher is better)
  double precision = 0.0;  // shared / estimated edges, 0 when none estimated
  double recall = 0.0;     // shared / true edges
  double symdiff_ratio = 0.0;  // raw |est ^ truth| / (|est| + |truth|)
};

// Support metrics with I(x) = 1 iff x > threshold.
TopologyMetrics topology_metrics(const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth,
                                 double threshold);

// Jaccard index of two binary supports; 0 when both are empty.
double overlap(const SupportMask& a, const SupportMask& b);

// Resolves the mixture label switch: returns est or its global swap
// (theta <-> psi, pi <-> 1-pi), whichever gives the lower
// mae(theta) + mae(psi) against the truth.
MixtureParams align_to_truth(const MixtureParams& est, const MixtureParams& truth);

struct EvalReport {
  double mae_theta = 0.0;
  double mae_psi = 0.0;
  double mae_pi = 0.0;
  double acc_theta = 0.0, pre_theta = 0.0, rec_theta = 0.0;
  double acc_psi = 0.0, pre_psi = 0.0, rec_psi = 0.0;
  double acc_union = 0.0, pre_union = 0.0, rec_union = 0.0;
  double symdiff_ratio_theta = 0.0, symdiff_ratio_psi = 0.0, symdiff_ratio_union = 0.0;
  double overlap_est = 0.0;  // support Jaccard of the aligned estimate pair
  double edge_threshold = 0.0;
  bool swapped = false;  // alignment applied the global label swap
  static constexpr const char* kAccDefinition = "1 - symdiff_ratio";
};

inline constexpr double kDefaultEdgeThreshold = 0.05;

// Aligns est to truth, then fills every metric at the given threshold.
EvalReport evaluate(const MixtureParams& est, const MixtureParams& truth,
                    double threshold = kDefaultEdgeThreshold);

std::string report_json(const EvalReport& r);
std::string report_csv_header();
std::string report_csv_row(const EvalReport& r);

}  // namespace cascademix
