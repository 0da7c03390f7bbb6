#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cascademix/likelihood.hpp"
#include "cascademix/types.hpp"

namespace cascademix {

// Model parameters: per-node mixture probabilities pi plus the two
// diffusion networks. Column i of the effective network in a cascade is
// drawn from theta with probability pi[i] and from psi otherwise.
struct MixtureParams {
  DiffusionNetwork theta;
  DiffusionNetwork psi;
  Eigen::VectorXd pi;

  int size() const { return theta.size(); }
  void validate(double epsilon_clip) const;
};

// Responsibilities resp(c, i) = posterior probability that node i engaged
// with cascade c through theta. prior_fallbacks counts nodes whose both
// branch likelihoods vanished (posterior fell back to the prior).
struct PosteriorMatrix {
  Eigen::MatrixXd resp;
  int prior_fallbacks = 0;
};

// Column-wise mixture: column i of the result is theta's column where
// z[i] = 1 and psi's column otherwise.
DiffusionNetwork mixed_network(const MixtureParams& params, const Eigen::VectorXi& z);

// Marginal log-likelihood of one cascade: per non-source node,
// logsumexp(ln pi + term_theta, ln(1-pi) + term_psi).
double marginal_loglik(const MixtureParams& params, const Cascade& cascade,
                       const HazardModel& model);

double marginal_loglik(const MixtureParams& params, const CascadePanel& panel, std::size_t c);

// Mean marginal log-likelihood over a panel (1/C scaling, deterministic
// pairwise reduction).
double mean_marginal_loglik(const MixtureParams& params, const CascadePanel& panel);

// Closed-form posterior of the network indicators. Source nodes carry
// their prior pi[i]; so do nodes whose both branches are impossible.
PosteriorMatrix e_step(const MixtureParams& params, const std::vector<Cascade>& cascades,
                       const HazardModel& model);
PosteriorMatrix e_step(const MixtureParams& params, const CascadePanel& panel);

struct QComponents {
  double q1 = 0.0;  // responsibilities-weighted theta terms
  double q2 = 0.0;  // complementary-weighted psi terms
  double q3 = 0.0;  // Bernoulli prior terms
  double total() const { return q1 + q2 + q3; }
};

// Decomposed expected complete-data log-likelihood, averaged over cascades.
QComponents q_components(const MixtureParams& params, const PosteriorMatrix& posteriors,
                         const std::vector<Cascade>& cascades, const HazardModel& model);
QComponents q_components(const MixtureParams& params, const PosteriorMatrix& posteriors,
                         const CascadePanel& panel);

// Q1 and Q2 alone, for the M-step line searches.
double q1_value(const Eigen::MatrixXd& theta, const PosteriorMatrix& posteriors,
                const CascadePanel& panel);
double q2_value(const Eigen::MatrixXd& psi, const PosteriorMatrix& posteriors,
                const CascadePanel& panel);

struct GradDiagnostics {
  int hazard_floor_hits = 0;
};

// d(Q1)/d(theta): responsibilities-weighted per-column likelihood gradients,
// averaged over cascades. grad_q2 is the (1 - resp)-weighted analogue.
Eigen::MatrixXd grad_q1(const Eigen::MatrixXd& theta, const PosteriorMatrix& posteriors,
                        const std::vector<Cascade>& cascades, const HazardModel& model,
                        GradDiagnostics* diag = nullptr);
Eigen::MatrixXd grad_q1(const Eigen::MatrixXd& theta, const PosteriorMatrix& posteriors,
                        const CascadePanel& panel, GradDiagnostics* diag = nullptr);
Eigen::MatrixXd grad_q2(const Eigen::MatrixXd& psi, const PosteriorMatrix& posteriors,
                        const std::vector<Cascade>& cascades, const HazardModel& model,
                        GradDiagnostics* diag = nullptr);
Eigen::MatrixXd grad_q2(const Eigen::MatrixXd& psi, const PosteriorMatrix& posteriors,
                        const CascadePanel& panel, GradDiagnostics* diag = nullptr);

// Entropy of the factorized posterior, averaged over cascades. At the
// E-step point, q_components().total() + entropy equals the mean marginal
// log-likelihood.
double posterior_entropy(const PosteriorMatrix& posteriors);

// logsumexp of two log-branches, symmetric in its arguments.
double log_add_exp(double a, double b);

}  // namespace cascademix
