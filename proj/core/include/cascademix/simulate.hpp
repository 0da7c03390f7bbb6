#pragma once

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "cascademix/hazard.hpp"
#include "cascademix/mixture.hpp"
#include "cascademix/types.hpp"

namespace cascademix {

struct UniformNodes {};
struct FixedSource {
  int node = 0;
};
struct WeightedSource {
  Eigen::VectorXd weights;  // must sum to 1
};
using SourceDist = std::variant<UniformNodes, FixedSource, WeightedSource>;

struct SimSpec {
  MixtureParams params;
  HazardModel model;
  double window = 10.0;
  int n_cascades = 1;
  SourceDist source = UniformNodes{};
  std::uint64_t seed = 0;

  void validate() const;
};

struct SimulatedCascade {
  Cascade cascade;
  Eigen::VectorXi z;  // network indicator drawn for every node
};

// One cascade under the column-mixed network: per-node indicators are drawn
// first, the source activates at 0, and activations propagate by the
// first-parent rule, lazily sampling pairwise delays at each activation.
// Event ties break by node index; times past the window are censored.
SimulatedCascade simulate_cascade(const SimSpec& spec, std::mt19937_64& rng);

struct SimulatedBatch {
  std::vector<Cascade> cascades;
  Eigen::MatrixXi z;  // n_cascades x n
};

// Independent cascades with fresh indicators per cascade; cascade c uses the
// RNG substream derived from (seed, c), so results do not depend on
// scheduling.
SimulatedBatch simulate_batch(const SimSpec& spec);

}  // namespace cascademix
