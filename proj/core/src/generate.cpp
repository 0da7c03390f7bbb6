#include "cascademix/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cascademix/errors.hpp"
#include "cascademix/metrics.hpp"
#include "cascademix/rng.hpp"

namespace cascademix {

void GenSpec::validate() const {
  if (n < 1) throw ValidationError("node count must be positive");
  if (!(weight_lo > 0.0) || weight_hi < weight_lo)
    throw ValidationError("weight range must be positive and ordered");
  if (psi_rank < 1) throw ValidationError("psi rank must be at least 1");
  if (factor_density < 0.0 || factor_density > 1.0)
    throw ValidationError("factor density must lie in [0, 1]");
  if (!(factor_lo > 0.0) || factor_hi < factor_lo)
    throw ValidationError("factor range must be positive and ordered");
  if (std::holds_alternative<ErdosRenyi>(topology)) {
    const double p = std::get<ErdosRenyi>(topology).p;
    if (p < 0.0 || p > 1.0) throw ValidationError("edge probability must lie in [0, 1]");
  } else if (std::holds_alternative<StochasticBlock>(topology)) {
    const auto& sbm = std::get<StochasticBlock>(topology);
    if (sbm.blocks < 1) throw ValidationError("block count must be positive");
    for (double p : {sbm.p_in, sbm.p_out})
      if (p < 0.0 || p > 1.0) throw ValidationError("edge probability must lie in [0, 1]");
  } else {
    if (std::get<BarabasiAlbert>(topology).m < 1)
      throw ValidationError("attachment count must be positive");
  }
  if (target_overlap.has_value() && (*target_overlap < 0.0 || *target_overlap > 1.0))
    throw ValidationError("target overlap must lie in [0, 1]");
}

namespace {

SupportMask gen_support(const GenSpec& spec, std::mt19937_64& rng) {
  const int n = spec.n;
  SupportMask mask = SupportMask::Zero(n, n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  if (const auto* er = std::get_if<ErdosRenyi>(&spec.topology)) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (i != j && unit(rng) < er->p) mask(j, i) = 1;
  } else if (const auto* sbm = std::get_if<StochasticBlock>(&spec.topology)) {
    // equally sized blocks by node index
    const int per_block = (n + sbm->blocks - 1) / sbm->blocks;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        const bool internal = (j / per_block) == (i / per_block);
        if (unit(rng) < (internal ? sbm->p_in : sbm->p_out)) mask(j, i) = 1;
      }
    }
  } else {
    // preferential attachment; each new node aims m directed edges at
    // existing ones, sampled proportionally to current degree
    const int m = std::get<BarabasiAlbert>(spec.topology).m;
    std::vector<int> repeated;  // node id repeated once per incident edge
    for (int v = 1; v < n; ++v) {
      const int edges = std::min(m, v);
      std::vector<int> targets;
      for (int e = 0; e < edges; ++e) {
        int u;
        int guard = 0;
        do {
          if (repeated.empty()) {
            std::uniform_int_distribution<int> pick(0, v - 1);
            u = pick(rng);
          } else {
            std::uniform_int_distribution<std::size_t> pick(0, repeated.size() - 1);
            u = repeated[pick(rng)];
          }
        } while (std::find(targets.begin(), targets.end(), u) != targets.end() && ++guard < 64);
        targets.push_back(u);
      }
      for (int u : targets) {
        mask(v, u) = 1;
        repeated.push_back(v);
        repeated.push_back(u);
      }
    }
  }
  return mask;
}

DiffusionNetwork weights_on_support(const SupportMask& mask, double lo, double hi,
                                    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> weight(lo, hi);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(mask.rows(), mask.cols());
  for (int j = 0; j < mask.rows(); ++j)
    for (int i = 0; i < mask.cols(); ++i)
      if (mask(j, i) != 0) w(j, i) = weight(rng);
  return DiffusionNetwork(std::move(w));
}

}  // namespace

MaskedNetwork gen_theta(const GenSpec& spec, std::mt19937_64& rng) {
  spec.validate();
  SupportMask mask = gen_support(spec, rng);
  DiffusionNetwork net = weights_on_support(mask, spec.weight_lo, spec.weight_hi, rng);
  return {std::move(mask), std::move(net)};
}

DiffusionNetwork gen_psi(const GenSpec& spec, std::mt19937_64& rng) {
  spec.validate();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> entry(spec.factor_lo, spec.factor_hi);
  Eigen::MatrixXd f1 = Eigen::MatrixXd::Zero(spec.n, spec.psi_rank);
  Eigen::MatrixXd f2 = Eigen::MatrixXd::Zero(spec.n, spec.psi_rank);
  for (Eigen::MatrixXd* f : {&f1, &f2})
    for (int i = 0; i < spec.n; ++i)
      for (int k = 0; k < spec.psi_rank; ++k)
        if (unit(rng) < spec.factor_density) (*f)(i, k) = entry(rng);
  Eigen::MatrixXd psi = f1 * f2.transpose();
  psi.diagonal().setZero();
  return DiffusionNetwork(std::move(psi));
}

SupportMask impute_connectivity(const SupportMask& theta_mask, const Eigen::MatrixXd& psi,
                                std::mt19937_64& rng) {
  const int n = static_cast<int>(theta_mask.rows());
  SupportMask mask = theta_mask;
  const SupportMask psi_support = support_of(psi);

  auto union_row_empty = [&](int j) {
    for (int i = 0; i < n; ++i)
      if (i != j && (mask(j, i) != 0 || psi_support(j, i) != 0)) return false;
    return true;
  };
  auto union_col_empty = [&](int i) {
    for (int j = 0; j < n; ++j)
      if (i != j && (mask(j, i) != 0 || psi_support(j, i) != 0)) return false;
    return true;
  };

  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int j = 0; j < n; ++j) {
    if (!union_row_empty(j)) continue;
    int i = pick(rng);
    while (i == j) i = pick(rng);
    mask(j, i) = 1;
  }
  for (int i = 0; i < n; ++i) {
    if (!union_col_empty(i)) continue;
    int j = pick(rng);
    while (j == i) j = pick(rng);
    mask(j, i) = 1;
  }
  return mask;
}

double support_overlap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return overlap(support_of(a), support_of(b));
}

NetworkPair gen_overlap_pair(const GenSpec& spec, std::mt19937_64& rng) {
  spec.validate();
  if (!spec.target_overlap.has_value())
    throw ValidationError("gen_overlap_pair requires target_overlap");
  const double target = *spec.target_overlap;
  const int n = spec.n;

  for (int attempt = 0; attempt < 32; ++attempt) {
    DiffusionNetwork psi = gen_psi(spec, rng);
    const SupportMask b = support_of(psi.weights);
    std::vector<std::pair<int, int>> in_b, out_b;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        (b(j, i) != 0 ? in_b : out_b).emplace_back(j, i);
      }
    }
    const std::size_t nb = in_b.size();
    if (nb == 0) continue;

    SupportMask a = SupportMask::Zero(n, n);
    if (target >= 1.0) {
      for (auto [j, i] : in_b) a(j, i) = 1;
    } else {
      // choose theta's edge budget from the topology, then split it between
      // cells inside and outside psi's support to hit the Jaccard target:
      // overlap = shared / (na + nb - shared)
      GenSpec probe = spec;
      probe.seed = 0;
      std::mt19937_64 probe_rng(splitmix64(spec.seed + 77 * attempt));
      const SupportMask topo = gen_support(probe, probe_rng);
      std::size_t na = static_cast<std::size_t>(topo.sum());
      na = std::max<std::size_t>(na, 1);
      auto shared_for = [&](std::size_t na_try) {
        return static_cast<std::size_t>(
            std::lround(target * static_cast<double>(na_try + nb) / (1.0 + target)));
      };
      std::size_t shared = std::min({shared_for(na), na, nb});
      if (shared > shared_for(na)) shared = shared_for(na);
      const std::size_t outside = na - shared;
      if (outside > out_b.size()) continue;

      std::shuffle(in_b.begin(), in_b.end(), rng);
      std::shuffle(out_b.begin(), out_b.end(), rng);
      for (std::size_t k = 0; k < shared; ++k) a(in_b[k].first, in_b[k].second) = 1;
      for (std::size_t k = 0; k < outside; ++k) a(out_b[k].first, out_b[k].second) = 1;
    }

    DiffusionNetwork theta = weights_on_support(a, spec.weight_lo, spec.weight_hi, rng);
    const double realized = support_overlap(theta.weights, psi.weights);
    if (std::abs(realized - target) <= 0.05) return {std::move(theta), std::move(psi)};
  }
  throw GenerationFailureError("could not realize the requested support overlap");
}

}  // namespace cascademix
