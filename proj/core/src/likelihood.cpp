#include "cascademix/likelihood.hpp"

#include <cmath>
#include <limits>

namespace cascademix {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::optional<double> log_p_activated(const Eigen::VectorXd& column, const Cascade& cascade,
                                      int i, const HazardModel& model) {
  const double ti = cascade.times[i];
  double log_surv = 0.0;
  double total_hazard = 0.0;
  bool has_parent = false;
  for (int j = 0; j < cascade.size(); ++j) {
    if (j == i || cascade.times[j] >= ti) continue;  // strict: ties are not parents
    has_parent = true;
    const double dt = ti - cascade.times[j];
    log_surv += column[j] * log_survival_shape(model, dt);
    total_hazard += column[j] * hazard_shape(model, dt);
  }
  if (!has_parent) return std::nullopt;
  if (total_hazard <= 0.0) return -kInf;
  return log_surv + std::log(total_hazard);
}

double log_p_censored(const Eigen::VectorXd& column, const Cascade& cascade, int i,
                      const HazardModel& model) {
  const double T = cascade.window;
  double log_surv = 0.0;
  for (int j = 0; j < cascade.size(); ++j) {
    if (j == i || cascade.times[j] >= T) continue;
    log_surv += column[j] * log_survival_shape(model, T - cascade.times[j]);
  }
  return log_surv;
}

double cascade_loglik(const DiffusionNetwork& net, const Cascade& cascade,
                      const HazardModel& model) {
  double total = 0.0;
  for (int i = 0; i < cascade.size(); ++i) {
    if (cascade.activated(i)) {
      if (cascade.is_source(i)) continue;
      const auto term = log_p_activated(net.weights.col(i), cascade, i, model);
      total += term.value_or(0.0);
    } else {
      total += log_p_censored(net.weights.col(i), cascade, i, model);
    }
  }
  return total;
}

Eigen::VectorXd grad_column(const Eigen::VectorXd& column, const Cascade& cascade, int i,
                            const HazardModel& model, double weight) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(column.size());
  if (cascade.activated(i)) {
    if (cascade.is_source(i)) return grad;
    const double ti = cascade.times[i];
    double total_hazard = 0.0;
    for (int j = 0; j < cascade.size(); ++j) {
      if (j == i || cascade.times[j] >= ti) continue;
      total_hazard += column[j] * hazard_shape(model, ti - cascade.times[j]);
    }
    const double denom = total_hazard > 0.0 ? total_hazard : kGradHazardFloor;
    for (int j = 0; j < cascade.size(); ++j) {
      if (j == i || cascade.times[j] >= ti) continue;
      const double dt = ti - cascade.times[j];
      grad[j] = weight * (log_survival_shape(model, dt) + hazard_shape(model, dt) / denom);
    }
  } else {
    const double T = cascade.window;
    for (int j = 0; j < cascade.size(); ++j) {
      if (j == i || cascade.times[j] >= T) continue;
      grad[j] = weight * log_survival_shape(model, T - cascade.times[j]);
    }
  }
  return grad;
}

CascadePanel::CascadePanel(std::vector<Cascade> cascades, const HazardModel& model)
    : cascades_(std::move(cascades)), model_(model) {
  n_ = cascades_.empty() ? 0 : cascades_.front().size();
  roles_.resize(cascades_.size() * n_);
  offsets_.assign(cascades_.size() * n_ + 1, 0);

  for (std::size_t c = 0; c < cascades_.size(); ++c) {
    const Cascade& casc = cascades_[c];
    if (casc.size() != n_) throw ValidationError("cascades disagree on node count");
    casc.validate();
    for (int i = 0; i < n_; ++i) {
      const std::size_t e = c * n_ + i;
      std::size_t count = 0;
      if (casc.activated(i)) {
        if (casc.is_source(i)) {
          roles_[e] = NodeRole::Source;
        } else {
          roles_[e] = NodeRole::Activated;
          for (int j = 0; j < n_; ++j)
            if (j != i && casc.times[j] < casc.times[i]) ++count;
        }
      } else {
        roles_[e] = NodeRole::Censored;
        for (int j = 0; j < n_; ++j)
          if (j != i && casc.times[j] < casc.window) ++count;
      }
      offsets_[e + 1] = offsets_[e] + count;
    }
  }

  shapes_.resize(offsets_.back());
  for (std::size_t c = 0; c < cascades_.size(); ++c) {
    const Cascade& casc = cascades_[c];
    for (int i = 0; i < n_; ++i) {
      const std::size_t e = c * n_ + i;
      std::size_t pos = offsets_[e];
      if (roles_[e] == NodeRole::Activated) {
        const double ti = casc.times[i];
        for (int j = 0; j < n_; ++j) {
          if (j == i || casc.times[j] >= ti) continue;
          const double dt = ti - casc.times[j];
          shapes_[pos++] = {j, log_survival_shape(model_, dt), hazard_shape(model_, dt)};
        }
      } else if (roles_[e] == NodeRole::Censored) {
        for (int j = 0; j < n_; ++j) {
          if (j == i || casc.times[j] >= casc.window) continue;
          const double dt = casc.window - casc.times[j];
          shapes_[pos++] = {j, log_survival_shape(model_, dt), hazard_shape(model_, dt)};
        }
      }
    }
  }
}

double CascadePanel::node_term(std::size_t c, int i, const Eigen::MatrixXd& net) const {
  const NodeRole r = role(c, i);
  if (r == NodeRole::Source) return 0.0;
  double log_surv = 0.0;
  if (r == NodeRole::Activated) {
    double total_hazard = 0.0;
    for (const ParentShape& p : parents(c, i)) {
      const double e = net(p.parent, i);
      log_surv += e * p.h;
      total_hazard += e * p.k;
    }
    if (total_hazard <= 0.0) return -kInf;
    return log_surv + std::log(total_hazard);
  }
  for (const ParentShape& p : parents(c, i)) log_surv += net(p.parent, i) * p.h;
  return log_surv;
}

int CascadePanel::add_node_grad(std::size_t c, int i, const Eigen::MatrixXd& net, double weight,
                                Eigen::MatrixXd& grad) const {
  const NodeRole r = role(c, i);
  if (r == NodeRole::Source || weight == 0.0) return 0;
  int floored = 0;
  if (r == NodeRole::Activated) {
    double total_hazard = 0.0;
    for (const ParentShape& p : parents(c, i)) total_hazard += net(p.parent, i) * p.k;
    double denom = total_hazard;
    if (denom <= 0.0) {
      denom = kGradHazardFloor;
      floored = 1;
    }
    for (const ParentShape& p : parents(c, i))
      grad(p.parent, i) += weight * (p.h + p.k / denom);
  } else {
    for (const ParentShape& p : parents(c, i)) grad(p.parent, i) += weight * p.h;
  }
  return floored;
}

double CascadePanel::loglik(std::size_t c, const Eigen::MatrixXd& net) const {
  double total = 0.0;
  for (int i = 0; i < n_; ++i) total += node_term(c, i, net);
  return total;
}

}  // namespace cascademix
