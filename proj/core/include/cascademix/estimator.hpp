#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cascademix/mixture.hpp"
#include "cascademix/projections.hpp"
#include "cascademix/types.hpp"

namespace cascademix {

struct EmConfig {
  int max_em_iters = 200;
  int inner_iters = 100;        // projected-gradient steps per M-update
  double elbo_tol = 1e-6;       // relative change of the mean marginal log-lik
  double epsilon_clip = 0.01;   // pi is kept inside [eps, 1-eps]
  double beta1 = 10.0;          // box bound on theta rates
  double beta2 = 10.0;          // box bound on psi rates
  std::optional<double> rho;    // nuclear-norm radius; empty = tune on a grid
  std::optional<double> sparsity_s;  // l1 radius when no support mask is given
  double armijo_shrink = 0.5;
  double armijo_slope = 1e-4;
  bool dykstra_refine = false;  // tighter nuclear-ball/box projection
  std::uint64_t seed = 0;
};

struct FitDiagnostics {
  int estep_prior_fallbacks = 0;
  int hazard_floor_hits = 0;
  int svd_failures = 0;
  int armijo_exhausted = 0;
  double max_nuclear_violation = 0.0;  // max over iterates of ||psi||_*/rho - 1
};

struct FitResult {
  MixtureParams params;              // best-seen parameters
  std::vector<double> marginal_trace;  // mean marginal log-lik, entry 0 = initial point
  std::vector<double> elbo_trace;      // Q total + posterior entropy after each M-step
  std::vector<double> psi_nuclear_trace;
  bool converged = false;
  int iterations = 0;
  double rho_used = 0.0;
  FitDiagnostics diagnostics;
};

// Support-constrained (or l1-constrained when mask is absent) projected
// gradient ascent on Q1. The returned iterate never has a lower Q1 than the
// input.
DiffusionNetwork update_theta(const DiffusionNetwork& theta, const PosteriorMatrix& posteriors,
                              const CascadePanel& panel, const std::optional<SupportMask>& mask,
                              const EmConfig& config, FitDiagnostics* diag = nullptr);

// Nuclear-ball + box projected gradient ascent on Q2.
DiffusionNetwork update_psi(const DiffusionNetwork& psi, const PosteriorMatrix& posteriors,
                            const CascadePanel& panel, double rho, const EmConfig& config,
                            FitDiagnostics* diag = nullptr);

// Closed-form maximizer of Q3: per-node posterior mean clipped to
// [epsilon, 1-epsilon].
Eigen::VectorXd update_pi(const PosteriorMatrix& posteriors, const EmConfig& config);

// Regularized EM fit. When config.rho is empty a geometric grid spanning
// [0.1, 2] times the nuclear norm of the initial psi is tuned by validation
// likelihood first.
FitResult fit(const std::vector<Cascade>& cascades, const HazardModel& model,
              const std::optional<SupportMask>& mask, const EmConfig& config);

struct TuneResult {
  double best_rho = 0.0;
  std::vector<double> val_loglik;  // one entry per grid point, in grid order
};

// Selects rho on a train/validation split of the cascades, maximizing the
// mean validation marginal log-likelihood; ties break toward smaller rho.
TuneResult tune_rho(const std::vector<Cascade>& cascades, const HazardModel& model,
                    const std::optional<SupportMask>& mask, const EmConfig& config,
                    const std::vector<double>& grid, double split);

struct IdentifiabilityDiagnostic {
  double degree_term = 0.0;       // sqrt(max row degree * max column degree)
  double incoherence_term = 0.0;  // 2 * (max singular-vector row norm)^2
  double product = 0.0;
  bool flagged = false;  // product >= 1: separation heuristic violated
};

// Upper-bound surrogate for the rank-sparsity separation between a sparse
// support and a low-rank matrix. Heuristic sufficient-condition check only.
IdentifiabilityDiagnostic identifiability_diagnostic(const SupportMask& mask,
                                                     const Eigen::MatrixXd& psi);

// Single-network maximum-likelihood estimate under box constraints; serves
// as the benchmark and as the initializer that is split into theta/psi.
DiffusionNetwork baseline_fit(const std::vector<Cascade>& cascades, const HazardModel& model,
                              const EmConfig& config);

}  // namespace cascademix
