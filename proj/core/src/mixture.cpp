#include "cascademix/mixture.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include "cascademix/parallel.hpp"

namespace cascademix {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void MixtureParams::validate(double epsilon_clip) const {
  theta.validate();
  psi.validate();
  if (pi.size() != theta.size() || psi.size() != theta.size())
    throw ValidationError("mixture parameter shapes disagree");
  for (int i = 0; i < pi.size(); ++i)
    if (!(pi[i] >= epsilon_clip && pi[i] <= 1.0 - epsilon_clip))
      throw ValidationError("pi entry outside the clipped interval");
}

DiffusionNetwork mixed_network(const MixtureParams& params, const Eigen::VectorXi& z) {
  const int n = params.size();
  Eigen::MatrixXd w(n, n);
  for (int i = 0; i < n; ++i)
    w.col(i) = z[i] != 0 ? params.theta.weights.col(i) : params.psi.weights.col(i);
  return DiffusionNetwork(std::move(w));
}

double log_add_exp(double a, double b) {
  const double m = std::max(a, b);
  if (m == -kInf) return -kInf;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

double marginal_loglik(const MixtureParams& params, const CascadePanel& panel, std::size_t c) {
  double total = 0.0;
  for (int i = 0; i < panel.n_nodes(); ++i) {
    if (panel.role(c, i) == NodeRole::Source) continue;
    const double lt = std::log(params.pi[i]) + panel.node_term(c, i, params.theta.weights);
    const double lp = std::log(1.0 - params.pi[i]) + panel.node_term(c, i, params.psi.weights);
    total += log_add_exp(lt, lp);
  }
  return total;
}

double marginal_loglik(const MixtureParams& params, const Cascade& cascade,
                       const HazardModel& model) {
  CascadePanel panel({cascade}, model);
  return marginal_loglik(params, panel, 0);
}

double mean_marginal_loglik(const MixtureParams& params, const CascadePanel& panel) {
  const std::size_t C = panel.n_cascades();
  if (C == 0) return 0.0;
  return parallel::sum_items(C, [&](std::size_t c) { return marginal_loglik(params, panel, c); }) /
         static_cast<double>(C);
}

PosteriorMatrix e_step(const MixtureParams& params, const CascadePanel& panel) {
  const std::size_t C = panel.n_cascades();
  const int n = panel.n_nodes();
  PosteriorMatrix out;
  out.resp.resize(static_cast<Eigen::Index>(C), n);
  std::atomic<int> fallbacks{0};

  parallel::for_chunks(C, [&](std::size_t, std::size_t lo, std::size_t hi) {
    int local_fallbacks = 0;
    for (std::size_t c = lo; c < hi; ++c) {
      for (int i = 0; i < n; ++i) {
        const double prior = params.pi[i];
        if (panel.role(c, i) == NodeRole::Source) {
          out.resp(c, i) = prior;
          continue;
        }
        const double lt = std::log(prior) + panel.node_term(c, i, params.theta.weights);
        const double lp = std::log(1.0 - prior) + panel.node_term(c, i, params.psi.weights);
        if (lt == -kInf && lp == -kInf) {
          out.resp(c, i) = prior;
          ++local_fallbacks;
        } else if (lt == -kInf) {
          out.resp(c, i) = 0.0;
        } else if (lp == -kInf) {
          out.resp(c, i) = 1.0;
        } else {
          // logistic of the log-odds, evaluated from the larger branch
          out.resp(c, i) = lt >= lp ? 1.0 / (1.0 + std::exp(lp - lt))
                                    : std::exp(lt - lp) / (1.0 + std::exp(lt - lp));
        }
      }
    }
    fallbacks.fetch_add(local_fallbacks, std::memory_order_relaxed);
  });

  out.prior_fallbacks = fallbacks.load();
  return out;
}

PosteriorMatrix e_step(const MixtureParams& params, const std::vector<Cascade>& cascades,
                       const HazardModel& model) {
  return e_step(params, CascadePanel(cascades, model));
}

namespace {

// weight * term with the 0 * (-inf) = 0 convention for impossible branches
// that carry no responsibility.
inline double weighted_term(double weight, double term) {
  if (weight == 0.0) return 0.0;
  return weight * term;
}

}  // namespace

QComponents q_components(const MixtureParams& params, const PosteriorMatrix& posteriors,
                         const CascadePanel& panel) {
  const std::size_t C = panel.n_cascades();
  const int n = panel.n_nodes();
  QComponents q;
  q.q1 = parallel::sum_items(C, [&](std::size_t c) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      acc += weighted_term(posteriors.resp(c, i), panel.node_term(c, i, params.theta.weights));
    return acc;
  });
  q.q2 = parallel::sum_items(C, [&](std::size_t c) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      acc += weighted_term(1.0 - posteriors.resp(c, i), panel.node_term(c, i, params.psi.weights));
    return acc;
  });
  q.q3 = parallel::sum_items(C, [&](std::size_t c) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = posteriors.resp(c, i);
      acc += weighted_term(r, std::log(params.pi[i])) +
             weighted_term(1.0 - r, std::log(1.0 - params.pi[i]));
    }
    return acc;
  });
  const double inv_c = C == 0 ? 0.0 : 1.0 / static_cast<double>(C);
  q.q1 *= inv_c;
  q.q2 *= inv_c;
  q.q3 *= inv_c;
  return q;
}

QComponents q_components(const MixtureParams& params, const PosteriorMatrix& posteriors,
                         const std::vector<Cascade>& cascades, const HazardModel& model) {
  return q_components(params, posteriors, CascadePanel(cascades, model));
}

double q1_value(const Eigen::MatrixXd& theta, const PosteriorMatrix& posteriors,
                const CascadePanel& panel) {
  const std::size_t C = panel.n_cascades();
  if (C == 0) return 0.0;
  const int n = panel.n_nodes();
  return parallel::sum_items(C, [&](std::size_t c) {
           double acc = 0.0;
           for (int i = 0; i < n; ++i)
             acc += weighted_term(posteriors.resp(c, i), panel.node_term(c, i, theta));
           return acc;
         }) /
         static_cast<double>(C);
}

double q2_value(const Eigen::MatrixXd& psi, const PosteriorMatrix& posteriors,
                const CascadePanel& panel) {
  const std::size_t C = panel.n_cascades();
  if (C == 0) return 0.0;
  const int n = panel.n_nodes();
  return parallel::sum_items(C, [&](std::size_t c) {
           double acc = 0.0;
           for (int i = 0; i < n; ++i)
             acc += weighted_term(1.0 - posteriors.resp(c, i), panel.node_term(c, i, psi));
           return acc;
         }) /
         static_cast<double>(C);
}

namespace {

Eigen::MatrixXd weighted_grad(const Eigen::MatrixXd& net, const PosteriorMatrix& posteriors,
                              const CascadePanel& panel, bool complement, GradDiagnostics* diag) {
  const std::size_t C = panel.n_cascades();
  const int n = panel.n_nodes();
  const std::size_t n_chunks = (C + parallel::kChunk - 1) / parallel::kChunk;
  std::vector<Eigen::MatrixXd> partial(n_chunks);
  std::vector<int> floor_hits(n_chunks, 0);

  parallel::for_chunks(C, [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    int hits = 0;
    for (std::size_t c = lo; c < hi; ++c) {
      for (int i = 0; i < n; ++i) {
        const double r = posteriors.resp(c, i);
        const double w = complement ? 1.0 - r : r;
        hits += panel.add_node_grad(c, i, net, w, acc);
      }
    }
    partial[chunk] = std::move(acc);
    floor_hits[chunk] = hits;
  });

  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < n_chunks; ++k) grad += partial[k];
  if (C > 0) grad /= static_cast<double>(C);
  if (diag != nullptr)
    for (int h : floor_hits) diag->hazard_floor_hits += h;
  return grad;
}

}  // namespace

Eigen::MatrixXd grad_q1(const Eigen::MatrixXd& theta, const PosteriorMatrix& posteriors,
                        const CascadePanel& panel, GradDiagnostics* diag) {
  return weighted_grad(theta, posteriors, panel, /*complement=*/false, diag);
}

Eigen::MatrixXd grad_q1(const Eigen::MatrixXd& theta, const PosteriorMatrix& posteriors,
                        const std::vector<Cascade>& cascades, const HazardModel& model,
                        GradDiagnostics* diag) {
  return grad_q1(theta, posteriors, CascadePanel(cascades, model), diag);
}

Eigen::MatrixXd grad_q2(const Eigen::MatrixXd& psi, const PosteriorMatrix& posteriors,
                        const CascadePanel& panel, GradDiagnostics* diag) {
  return weighted_grad(psi, posteriors, panel, /*complement=*/true, diag);
}

Eigen::MatrixXd grad_q2(const Eigen::MatrixXd& psi, const PosteriorMatrix& posteriors,
                        const std::vector<Cascade>& cascades, const HazardModel& model,
                        GradDiagnostics* diag) {
  return grad_q2(psi, posteriors, CascadePanel(cascades, model), diag);
}

double posterior_entropy(const PosteriorMatrix& posteriors) {
  const auto C = posteriors.resp.rows();
  if (C == 0) return 0.0;
  double total = 0.0;
  for (Eigen::Index c = 0; c < C; ++c) {
    for (Eigen::Index i = 0; i < posteriors.resp.cols(); ++i) {
      const double r = posteriors.resp(c, i);
      if (r > 0.0) total -= r * std::log(r);
      if (r < 1.0) total -= (1.0 - r) * std::log1p(-r);
    }
  }
  return total / static_cast<double>(C);
}

}  // namespace cascademix
