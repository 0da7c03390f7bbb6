#pragma once

#include <Eigen/Dense>

namespace cascademix {

// Elementwise clamp to [0, hi] with a forced zero diagonal.
void clamp_box_zero_diag(Eigen::MatrixXd& m, double hi);

// Euclidean projection of v onto the simplex-like set
// { x >= 0, sum(x) <= radius } by the sort-and-threshold rule: if the
// positive part already fits it is returned, otherwise entries become
// max(v_i - tau, 0) with tau chosen so the sum equals radius.
Eigen::VectorXd project_l1_ball_nonneg(const Eigen::VectorXd& v, double radius);

// Exact projection onto { 0 <= x_i <= hi, sum(x) <= radius } via bisection
// on the shared threshold tau: x_i(tau) = clamp(v_i - tau, 0, hi).
Eigen::VectorXd project_l1_box(const Eigen::VectorXd& v, double radius, double hi);

double nuclear_norm(const Eigen::MatrixXd& m);

struct NuclearProjectionResult {
  Eigen::MatrixXd value;
  bool svd_ok = true;
  int passes = 0;        // composite passes used
  bool scaled = false;   // final norm rescue applied
};

// Approximate projection onto { 0 <= entries <= box_hi, zero diagonal,
// nuclear norm <= radius }. One pass = SVD, l1-projection of the singular
// values, reconstruction, box clamp. The clamp can push the nuclear norm
// back above the radius, so passes repeat until the bound holds within
// `tol` relative slack; a final global rescale (which preserves the box
// and sign constraints) guarantees feasibility.
NuclearProjectionResult project_nuclear_box(const Eigen::MatrixXd& m, double radius,
                                            double box_hi, double tol = 1e-9,
                                            int max_passes = 32);

// Dykstra's alternating projections between the nuclear ball and the box;
// converges to the exact projection onto the intersection. Used as an
// optional refinement of project_nuclear_box.
NuclearProjectionResult project_nuclear_box_dykstra(const Eigen::MatrixXd& m, double radius,
                                                    double box_hi, int iters = 25);

}  // namespace cascademix
