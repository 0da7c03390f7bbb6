#include "cascademix/types.hpp"

#include <cmath>
#include <string>

namespace cascademix {

void DiffusionNetwork::validate(double box_bound) const {
  if (weights.rows() != weights.cols())
    throw ValidationError("diffusion network must be square");
  for (int i = 0; i < weights.rows(); ++i) {
    if (weights(i, i) != 0.0)
      throw ValidationError("diffusion network has nonzero diagonal at node " + std::to_string(i));
  }
  for (int j = 0; j < weights.rows(); ++j) {
    for (int i = 0; i < weights.cols(); ++i) {
      const double w = weights(j, i);
      if (!std::isfinite(w) || w < 0.0)
        throw ValidationError("transmission rate must be finite and nonnegative");
      if (w > box_bound)
        throw ValidationError("transmission rate exceeds box bound " + std::to_string(box_bound));
    }
  }
}

void Cascade::validate() const {
  if (!(window > 0.0) || !std::isfinite(window))
    throw ValidationError("cascade window must be a positive finite time");
  bool has_source = false;
  for (int i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (!std::isfinite(t) || t < 0.0 || t > window)
      throw ValidationError("activation time outside [0, window] at node " + std::to_string(i));
    if (t == 0.0) has_source = true;
  }
  if (times.size() > 0 && !has_source)
    throw ValidationError("cascade has no source node (no activation at time 0)");
}

SupportMask support_of(const Eigen::MatrixXd& m, double threshold) {
  SupportMask s(m.rows(), m.cols());
  for (int j = 0; j < m.rows(); ++j)
    for (int i = 0; i < m.cols(); ++i) s(j, i) = (j != i && m(j, i) > threshold) ? 1 : 0;
  return s;
}

void validate_mask(const SupportMask& mask) {
  if (mask.rows() != mask.cols()) throw ValidationError("support mask must be square");
  for (int i = 0; i < mask.rows(); ++i)
    if (mask(i, i) != 0) throw ValidationError("support mask must have zero diagonal");
  for (int j = 0; j < mask.rows(); ++j)
    for (int i = 0; i < mask.cols(); ++i)
      if (mask(j, i) != 0 && mask(j, i) != 1) throw ValidationError("support mask must be binary");
}

}  // namespace cascademix
