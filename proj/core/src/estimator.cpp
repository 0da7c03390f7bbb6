#include "cascademix/estimator.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "cascademix/parallel.hpp"
#include "cascademix/rng.hpp"

namespace cascademix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_not_degenerate(const std::vector<Cascade>& cascades) {
  if (cascades.empty()) throw DegenerateDataError("no cascades provided");
  for (const Cascade& c : cascades) {
    int activated = 0;
    for (int i = 0; i < c.size(); ++i)
      if (c.activated(i)) ++activated;
    if (activated >= 2) return;
  }
  throw DegenerateDataError("every cascade has fewer than two activated nodes");
}

using Projection = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;
using Objective = std::function<double(const Eigen::MatrixXd&)>;
using Gradient = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

// Projected gradient ascent with backtracking. Accepted steps never lower
// the objective, so the caller's monotonicity contract holds even when the
// projection is approximate.
Eigen::MatrixXd pga_maximize(const Eigen::MatrixXd& x0, const Objective& f, const Gradient& grad,
                             const Projection& project, const EmConfig& config, int iters,
                             FitDiagnostics* diag) {
  Eigen::MatrixXd x = project(x0);
  double fx = f(x);
  double step = 0.0;  // resolved from the first gradient

  for (int it = 0; it < iters; ++it) {
    const Eigen::MatrixXd g = grad(x);
    const double gmax = g.cwiseAbs().maxCoeff();
    if (gmax == 0.0) break;
    if (step == 0.0) step = 1.0 / (1.0 + gmax);

    double t = step;
    bool accepted = false;
    Eigen::MatrixXd x_trial;
    double f_trial = -kInf;
    for (int ls = 0; ls < 60; ++ls) {
      x_trial = project(x + t * g);
      const double dn2 = (x_trial - x).squaredNorm();
      if (dn2 == 0.0) break;  // projected-stationary for this step size
      f_trial = f(x_trial);
      const bool ok = fx == -kInf ? f_trial > -kInf
                                  : f_trial >= fx + config.armijo_slope / t * dn2;
      if (ok) {
        accepted = true;
        break;
      }
      t *= config.armijo_shrink;
    }
    if (!accepted) {
      if (diag != nullptr) ++diag->armijo_exhausted;
      break;
    }
    const double move = (x_trial - x).norm();
    x = std::move(x_trial);
    fx = f_trial;
    step = std::min(t * 2.0, 1e6);
    if (move <= 1e-10 * (1.0 + x.norm())) break;
  }
  return x;
}

Eigen::MatrixXd project_support_box(const Eigen::MatrixXd& m, const SupportMask& mask,
                                    double hi) {
  Eigen::MatrixXd out = m.cwiseProduct(mask.cast<double>());
  clamp_box_zero_diag(out, hi);
  return out;
}

// { support-free theta }: zero diagonal, box, total l1 mass at most s.
Eigen::MatrixXd project_l1_box_matrix(const Eigen::MatrixXd& m, double s, double hi) {
  const int n = static_cast<int>(m.rows());
  Eigen::VectorXd flat(n * n - n);
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (i != j) flat[k++] = m(j, i);
  flat = project_l1_box(flat, s, hi);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (i != j) out(j, i) = flat[k++];
  return out;
}

double median_positive(const Eigen::MatrixXd& m) {
  std::vector<double> v;
  for (int j = 0; j < m.rows(); ++j)
    for (int i = 0; i < m.cols(); ++i)
      if (m(j, i) > 0.0) v.push_back(m(j, i));
  if (v.empty()) return 0.0;
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k)
    grid[k] = lo * std::pow(hi / lo, points <= 1 ? 0.0 : static_cast<double>(k) / (points - 1));
  return grid;
}

struct InitialSplit {
  DiffusionNetwork theta;
  DiffusionNetwork psi;
};

InitialSplit split_baseline(const DiffusionNetwork& baseline,
                            const std::optional<SupportMask>& mask) {
  const int n = baseline.size();
  Eigen::MatrixXd th(n, n), ps(n, n);
  if (mask.has_value()) {
    th = baseline.weights.cwiseProduct(mask->cast<double>());
    ps = baseline.weights - th;
  } else {
    // No observed support: the larger half of the entries (by magnitude)
    // seeds the sparse network, the rest seeds the low-rank one.
    const double med = median_positive(baseline.weights);
    th = (baseline.weights.array() > med).cast<double>() * baseline.weights.array();
    ps = baseline.weights - th;
  }
  ps.diagonal().setZero();
  return {DiffusionNetwork(std::move(th)), DiffusionNetwork(std::move(ps))};
}

FitResult fit_impl(const std::vector<Cascade>& cascades, const CascadePanel& panel,
                   const HazardModel& model, const std::optional<SupportMask>& mask,
                   const EmConfig& config, double rho, const DiffusionNetwork& baseline);

}  // namespace

Eigen::VectorXd update_pi(const PosteriorMatrix& posteriors, const EmConfig& config) {
  const double eps = config.epsilon_clip;
  Eigen::VectorXd pi = posteriors.resp.colwise().mean();
  for (Eigen::Index i = 0; i < pi.size(); ++i) pi[i] = std::clamp(pi[i], eps, 1.0 - eps);
  return pi;
}

DiffusionNetwork update_theta(const DiffusionNetwork& theta, const PosteriorMatrix& posteriors,
                              const CascadePanel& panel, const std::optional<SupportMask>& mask,
                              const EmConfig& config, FitDiagnostics* diag) {
  Projection project;
  if (mask.has_value()) {
    const SupportMask& m = *mask;
    project = [&, hi = config.beta1](const Eigen::MatrixXd& x) {
      return project_support_box(x, m, hi);
    };
  } else {
    const double s = config.sparsity_s.value_or(theta.weights.sum());
    project = [s, hi = config.beta1](const Eigen::MatrixXd& x) {
      return project_l1_box_matrix(x, s, hi);
    };
  }
  GradDiagnostics gdiag;
  Objective f = [&](const Eigen::MatrixXd& x) { return q1_value(x, posteriors, panel); };
  Gradient g = [&](const Eigen::MatrixXd& x) { return grad_q1(x, posteriors, panel, &gdiag); };
  Eigen::MatrixXd out =
      pga_maximize(theta.weights, f, g, project, config, config.inner_iters, diag);
  if (diag != nullptr) diag->hazard_floor_hits += gdiag.hazard_floor_hits;
  return DiffusionNetwork(std::move(out));
}

DiffusionNetwork update_psi(const DiffusionNetwork& psi, const PosteriorMatrix& posteriors,
                            const CascadePanel& panel, double rho, const EmConfig& config,
                            FitDiagnostics* diag) {
  Projection project = [&, rho](const Eigen::MatrixXd& x) {
    NuclearProjectionResult r = config.dykstra_refine
                                    ? project_nuclear_box_dykstra(x, rho, config.beta2)
                                    : project_nuclear_box(x, rho, config.beta2);
    if (!r.svd_ok && diag != nullptr) ++diag->svd_failures;
    return r.value;
  };
  if (rho <= 0.0) return DiffusionNetwork::zero(psi.size());
  GradDiagnostics gdiag;
  Objective f = [&](const Eigen::MatrixXd& x) { return q2_value(x, posteriors, panel); };
  Gradient g = [&](const Eigen::MatrixXd& x) { return grad_q2(x, posteriors, panel, &gdiag); };
  Eigen::MatrixXd out =
      pga_maximize(psi.weights, f, g, project, config, config.inner_iters, diag);
  if (diag != nullptr) diag->hazard_floor_hits += gdiag.hazard_floor_hits;
  return DiffusionNetwork(std::move(out));
}

DiffusionNetwork baseline_fit(const std::vector<Cascade>& cascades, const HazardModel& model,
                              const EmConfig& config) {
  check_not_degenerate(cascades);
  const CascadePanel panel(cascades, model);
  const int n = panel.n_nodes();
  const std::size_t C = panel.n_cascades();

  Objective f = [&](const Eigen::MatrixXd& x) {
    return parallel::sum_items(C, [&](std::size_t c) { return panel.loglik(c, x); }) /
           static_cast<double>(C);
  };
  Gradient g = [&](const Eigen::MatrixXd& x) {
    const std::size_t n_chunks = (C + parallel::kChunk - 1) / parallel::kChunk;
    std::vector<Eigen::MatrixXd> partial(n_chunks);
    parallel::for_chunks(C, [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
      for (std::size_t c = lo; c < hi; ++c)
        for (int i = 0; i < n; ++i) panel.add_node_grad(c, i, x, 1.0, acc);
      partial[chunk] = std::move(acc);
    });
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, n);
    for (auto& p : partial) grad += p;
    return Eigen::MatrixXd(grad / static_cast<double>(C));
  };
  Projection project = [hi = config.beta1](const Eigen::MatrixXd& x) {
    Eigen::MatrixXd out = x;
    clamp_box_zero_diag(out, hi);
    return out;
  };

  Eigen::MatrixXd x0 = Eigen::MatrixXd::Constant(n, n, 0.1);
  x0.diagonal().setZero();
  const int iters = std::max(200, config.inner_iters);
  return DiffusionNetwork(pga_maximize(x0, f, g, project, config, iters, nullptr));
}

FitResult fit(const std::vector<Cascade>& cascades, const HazardModel& model,
              const std::optional<SupportMask>& mask, const EmConfig& config) {
  check_not_degenerate(cascades);
  if (mask.has_value()) validate_mask(*mask);
  const CascadePanel panel(cascades, model);
  const DiffusionNetwork baseline = baseline_fit(cascades, model, config);

  double rho;
  if (config.rho.has_value()) {
    rho = *config.rho;
  } else {
    const InitialSplit init = split_baseline(baseline, mask);
    double nn0 = nuclear_norm(init.psi.weights);
    if (nn0 <= 0.0) nn0 = 1.0;
    const std::vector<double> grid = geometric_grid(0.1 * nn0, 2.0 * nn0, 8);
    rho = tune_rho(cascades, model, mask, config, grid, 0.8).best_rho;
  }
  return fit_impl(cascades, panel, model, mask, config, rho, baseline);
}

namespace {

FitResult fit_impl(const std::vector<Cascade>& cascades, const CascadePanel& panel,
                   const HazardModel& model, const std::optional<SupportMask>& mask,
                   const EmConfig& config, double rho, const DiffusionNetwork& baseline) {
  (void)cascades;
  (void)model;
  FitResult result;
  result.rho_used = rho;

  InitialSplit init = split_baseline(baseline, mask);
  EmConfig cfg = config;
  if (!mask.has_value() && !cfg.sparsity_s.has_value())
    cfg.sparsity_s = init.theta.weights.sum();  // fixed l1 radius for the whole run
  MixtureParams params;
  params.theta = std::move(init.theta);
  params.psi = DiffusionNetwork(project_nuclear_box(init.psi.weights, rho, cfg.beta2).value);
  params.pi = Eigen::VectorXd::Constant(panel.n_nodes(), 0.5);

  double best_ll = -kInf;
  MixtureParams best = params;
  double prev_ll = mean_marginal_loglik(params, panel);
  result.marginal_trace.push_back(prev_ll);
  if (prev_ll > best_ll) {
    best_ll = prev_ll;
    best = params;
  }

  for (int m = 0; m < cfg.max_em_iters; ++m) {
    PosteriorMatrix post = e_step(params, panel);
    result.diagnostics.estep_prior_fallbacks += post.prior_fallbacks;

    params.theta = update_theta(params.theta, post, panel, mask, cfg, &result.diagnostics);
    params.psi = update_psi(params.psi, post, panel, rho, cfg, &result.diagnostics);
    params.pi = update_pi(post, cfg);

    const double ll = mean_marginal_loglik(params, panel);
    const double elbo = q_components(params, post, panel).total() + posterior_entropy(post);
    const double nn = nuclear_norm(params.psi.weights);
    result.marginal_trace.push_back(ll);
    result.elbo_trace.push_back(elbo);
    result.psi_nuclear_trace.push_back(nn);
    if (rho > 0.0)
      result.diagnostics.max_nuclear_violation =
          std::max(result.diagnostics.max_nuclear_violation, nn / rho - 1.0);
    result.iterations = m + 1;

    if (ll > best_ll) {
      best_ll = ll;
      best = params;
    }
    if (std::isfinite(ll) && std::isfinite(prev_ll) &&
        std::abs(ll - prev_ll) < cfg.elbo_tol * std::max(1.0, std::abs(prev_ll))) {
      result.converged = true;
      break;
    }
    prev_ll = ll;
  }

  result.params = std::move(best);
  return result;
}

}  // namespace

TuneResult tune_rho(const std::vector<Cascade>& cascades, const HazardModel& model,
                    const std::optional<SupportMask>& mask, const EmConfig& config,
                    const std::vector<double>& grid, double split) {
  if (grid.empty()) throw ValidationError("rho grid must be non-empty");
  if (!(split > 0.0 && split < 1.0)) throw ValidationError("split must lie in (0, 1)");
  check_not_degenerate(cascades);

  std::vector<std::size_t> order(cascades.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng = make_rng(config.seed);
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t n_train = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::lround(split * static_cast<double>(cascades.size()))), 1,
      cascades.size() - 1);
  std::vector<Cascade> train, val;
  train.reserve(n_train);
  val.reserve(cascades.size() - n_train);
  for (std::size_t k = 0; k < order.size(); ++k)
    (k < n_train ? train : val).push_back(cascades[order[k]]);

  const CascadePanel train_panel(train, model);
  const CascadePanel val_panel(val, model);
  const DiffusionNetwork train_baseline = baseline_fit(train, model, config);

  TuneResult out;
  out.val_loglik.reserve(grid.size());
  double best_ll = -kInf;
  for (double rho : grid) {
    const FitResult f = fit_impl(train, train_panel, model, mask, config, rho, train_baseline);
    const double ll = mean_marginal_loglik(f.params, val_panel);
    out.val_loglik.push_back(ll);
    const bool better = ll > best_ll || (ll == best_ll && rho < out.best_rho);
    if (out.val_loglik.size() == 1 || better) {
      best_ll = ll;
      out.best_rho = rho;
    }
  }
  return out;
}

IdentifiabilityDiagnostic identifiability_diagnostic(const SupportMask& mask,
                                                     const Eigen::MatrixXd& psi) {
  validate_mask(mask);
  IdentifiabilityDiagnostic d;

  double max_row = 0.0, max_col = 0.0;
  for (int j = 0; j < mask.rows(); ++j) max_row = std::max(max_row, double(mask.row(j).sum()));
  for (int i = 0; i < mask.cols(); ++i) max_col = std::max(max_col, double(mask.col(i).sum()));
  d.degree_term = std::sqrt(max_row * max_col);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(psi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() > 0 && sv[0] > 0.0) {
    const double cutoff = 1e-10 * sv[0];
    int rank = 0;
    while (rank < sv.size() && sv[rank] > cutoff) ++rank;
    double mu = 0.0;
    for (int i = 0; i < psi.rows(); ++i)
      mu = std::max(mu, svd.matrixU().row(i).head(rank).norm());
    for (int i = 0; i < psi.cols(); ++i)
      mu = std::max(mu, svd.matrixV().row(i).head(rank).norm());
    d.incoherence_term = 2.0 * mu * mu;
  }

  d.product = d.degree_term * d.incoherence_term;
  d.flagged = d.product >= 1.0;
  return d;
}

}  // namespace cascademix
