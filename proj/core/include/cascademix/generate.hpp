#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <variant>

#include "cascademix/types.hpp"

namespace cascademix {

struct ErdosRenyi {
  double p = 0.01;  // independent probability per directed pair
};

struct StochasticBlock {
  int blocks = 4;
  double p_in = 0.05;
  double p_out = 0.01;
};

struct BarabasiAlbert {
  int m = 1;  // edges attached from each new node, oriented new -> existing
};

using Topology = std::variant<ErdosRenyi, StochasticBlock, BarabasiAlbert>;

struct GenSpec {
  int n = 0;
  Topology topology = ErdosRenyi{};
  double weight_lo = 1.0, weight_hi = 5.0;  // uniform rates on the support
  int psi_rank = 5;
  double factor_density = 0.1;              // nonzero fraction in each factor
  double factor_lo = 1.0, factor_hi = 2.0;  // uniform factor entries
  std::optional<double> target_overlap;     // support Jaccard for paired generation
  std::uint64_t seed = 0;

  void validate() const;
};

struct MaskedNetwork {
  SupportMask mask;
  DiffusionNetwork net;
};

// Directed support drawn from the requested topology with uniform weights.
MaskedNetwork gen_theta(const GenSpec& spec, std::mt19937_64& rng);

// Low-rank nonnegative network psi = F1 * F2^T with sparse uniform factors
// and a zeroed diagonal.
DiffusionNetwork gen_psi(const GenSpec& spec, std::mt19937_64& rng);

// Adds random directed edges to the mask until the union support
// mask | support(psi) has no empty row or column.
SupportMask impute_connectivity(const SupportMask& theta_mask, const Eigen::MatrixXd& psi,
                                std::mt19937_64& rng);

struct NetworkPair {
  DiffusionNetwork theta;
  DiffusionNetwork psi;
};

// Generates psi, then builds theta's support to realize the requested
// support overlap (Jaccard) within +-0.05; weights as in gen_theta.
NetworkPair gen_overlap_pair(const GenSpec& spec, std::mt19937_64& rng);

// Support Jaccard of two nonnegative matrices (off-diagonal entries).
double support_overlap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace cascademix
