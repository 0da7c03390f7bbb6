#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "cascademix/hazard.hpp"
#include "cascademix/types.hpp"

namespace cascademix {

// ln P_I(t_i; column): probability density that node i is activated at t_i
// by its already-activated parents {j : t_j < t_i}, computed as
//   sum_j rate_ji * h(t_i - t_j)  +  ln sum_j rate_ji * k(t_i - t_j).
// Returns nullopt when node i has no preceding activated node (a source;
// its activation is exogenous and must be excluded from the likelihood).
// Returns -infinity when every applicable hazard is zero.
std::optional<double> log_p_activated(const Eigen::VectorXd& column, const Cascade& cascade,
                                      int i, const HazardModel& model);

// ln P_U(T; column): log-probability that node i survives all activated
// parents through the window. Zero when no parent activated.
double log_p_censored(const Eigen::VectorXd& column, const Cascade& cascade, int i,
                      const HazardModel& model);

// Full cascade log-likelihood, factorized over nodes; sources excluded.
double cascade_loglik(const DiffusionNetwork& net, const Cascade& cascade,
                      const HazardModel& model);

// weight * d/d(column) of node i's log-probability term (activated or
// censored according to the cascade). Entries for non-parents are zero.
Eigen::VectorXd grad_column(const Eigen::VectorXd& column, const Cascade& cascade, int i,
                            const HazardModel& model, double weight);

enum class NodeRole : unsigned char { Source, Activated, Censored };

struct ParentShape {
  int parent;
  double h;  // log-survival shaping at the observed lag
  double k;  // hazard multiplier at the observed lag
};

// Precomputed per-(cascade, node) parent shapes for a fixed hazard model.
// The shapes depend only on the observed times, so every likelihood,
// posterior, and gradient evaluation reduces to dot products against the
// current rate columns. Built once per estimation run.
class CascadePanel {
 public:
  CascadePanel(std::vector<Cascade> cascades, const HazardModel& model);

  int n_nodes() const { return n_; }
  std::size_t n_cascades() const { return cascades_.size(); }
  const HazardModel& model() const { return model_; }
  const std::vector<Cascade>& cascades() const { return cascades_; }

  NodeRole role(std::size_t c, int i) const { return roles_[c * n_ + i]; }

  std::span<const ParentShape> parents(std::size_t c, int i) const {
    const std::size_t e = c * n_ + i;
    return {shapes_.data() + offsets_[e], offsets_[e + 1] - offsets_[e]};
  }

  // Node i's log-probability term under the rates in column i of `net`.
  // Sources contribute 0.
  double node_term(std::size_t c, int i, const Eigen::MatrixXd& net) const;

  // Adds weight * d(node term)/d(rates) into column i of `grad`. When an
  // activated node currently has zero total hazard (term is -infinity) the
  // hazard denominator is floored so the ascent direction stays finite;
  // returns the number of floored nodes (0 or 1).
  int add_node_grad(std::size_t c, int i, const Eigen::MatrixXd& net, double weight,
                    Eigen::MatrixXd& grad) const;

  // Cascade log-likelihood via the precomputed shapes.
  double loglik(std::size_t c, const Eigen::MatrixXd& net) const;

 private:
  std::vector<Cascade> cascades_;
  HazardModel model_;
  int n_ = 0;
  std::vector<NodeRole> roles_;
  std::vector<std::size_t> offsets_;
  std::vector<ParentShape> shapes_;
};

// Hazard floor used by gradient evaluations at zero-hazard points.
inline constexpr double kGradHazardFloor = 1e-8;

}  // namespace cascademix
