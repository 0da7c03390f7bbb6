#pragma once

#include <Eigen/Dense>

#include "cascademix/errors.hpp"

namespace cascademix {

// Directed weighted diffusion network. weights(j, i) is the transmission
// rate from sender j to receiver i, so column i collects everything that
// can activate node i. Zero diagonal, nonnegative finite entries.
struct DiffusionNetwork {
  Eigen::MatrixXd weights;

  DiffusionNetwork() = default;
  explicit DiffusionNetwork(Eigen::MatrixXd w) : weights(std::move(w)) { validate(); }

  static DiffusionNetwork zero(int n) { return DiffusionNetwork(Eigen::MatrixXd::Zero(n, n)); }

  int size() const { return static_cast<int>(weights.rows()); }

  void validate(double box_bound = kDefaultBoxBound) const;

  // Default box bound on transmission rates.
  static constexpr double kDefaultBoxBound = 10.0;
};

// One observed cascade: activation times in [0, window], censored nodes
// carry exactly `window`, and the earliest entry (the source) is 0.
struct Cascade {
  Eigen::VectorXd times;
  double window = 0.0;

  Cascade() = default;
  Cascade(Eigen::VectorXd t, double T) : times(std::move(t)), window(T) { validate(); }

  int size() const { return static_cast<int>(times.size()); }
  bool activated(int i) const { return times[i] < window; }
  // Sources activate exogenously at time 0 and contribute no activation term.
  bool is_source(int i) const { return times[i] == 0.0; }

  void validate() const;
};

// Binary support mask with zero diagonal; restricts which entries of a
// network may be nonzero.
using SupportMask = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

SupportMask support_of(const Eigen::MatrixXd& m, double threshold = 0.0);

void validate_mask(const SupportMask& mask);

}  // namespace cascademix
