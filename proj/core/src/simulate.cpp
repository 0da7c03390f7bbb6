#include "cascademix/simulate.hpp"

#include <cmath>
#include <queue>

#include "cascademix/parallel.hpp"
#include "cascademix/rng.hpp"

namespace cascademix {

void SimSpec::validate() const {
  params.validate(0.0);
  if (!(window > 0.0)) throw ValidationError("simulation window must be positive");
  if (n_cascades < 0) throw ValidationError("cascade count must be nonnegative");
  if (const auto* w = std::get_if<WeightedSource>(&source)) {
    if (w->weights.size() != params.size())
      throw ValidationError("source weight vector length mismatch");
    if (w->weights.minCoeff() < 0.0 || std::abs(w->weights.sum() - 1.0) > 1e-9)
      throw ValidationError("source weights must be a probability vector");
  } else if (const auto* f = std::get_if<FixedSource>(&source)) {
    if (f->node < 0 || f->node >= params.size())
      throw ValidationError("fixed source node out of range");
  }
}

namespace {

int draw_source(const SourceDist& source, int n, std::mt19937_64& rng) {
  if (std::holds_alternative<UniformNodes>(source)) {
    std::uniform_int_distribution<int> pick(0, n - 1);
    return pick(rng);
  }
  if (const auto* f = std::get_if<FixedSource>(&source)) return f->node;
  const auto& w = std::get<WeightedSource>(source).weights;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u = unit(rng);
  for (int i = 0; i < n; ++i) {
    u -= w[i];
    if (u <= 0.0) return i;
  }
  return n - 1;
}

struct Event {
  double time;
  int node;
  bool operator>(const Event& other) const {
    if (time != other.time) return time > other.time;
    return node > other.node;  // ties break toward the smaller node index
  }
};

}  // namespace

SimulatedCascade simulate_cascade(const SimSpec& spec, std::mt19937_64& rng) {
  spec.validate();
  const int n = spec.params.size();
  const double T = spec.window;

  SimulatedCascade out;
  out.z.resize(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // indicators are drawn for every node, activated or not: they decide which
  // column would receive the transmission
  for (int i = 0; i < n; ++i) out.z[i] = unit(rng) < spec.params.pi[i] ? 1 : 0;
  const DiffusionNetwork net = mixed_network(spec.params, out.z);

  Eigen::VectorXd times = Eigen::VectorXd::Constant(n, T);
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
  const int source = draw_source(spec.source, n, rng);
  queue.push({0.0, source});

  std::vector<bool> activated(n, false);
  while (!queue.empty()) {
    const Event ev = queue.top();
    queue.pop();
    if (ev.time >= T) break;
    if (activated[ev.node]) continue;
    activated[ev.node] = true;
    times[ev.node] = ev.time;
    for (int i = 0; i < n; ++i) {
      if (i == ev.node || activated[i]) continue;
      const double rate = net.weights(ev.node, i);
      if (rate <= 0.0) continue;
      const double delay = sample_delay(spec.model, rate, rng);
      const double t = ev.time + delay;
      if (t < T) queue.push({t, i});
    }
  }

  out.cascade = Cascade(std::move(times), T);
  return out;
}

SimulatedBatch simulate_batch(const SimSpec& spec) {
  spec.validate();
  const int n = spec.params.size();
  SimulatedBatch out;
  out.cascades.resize(static_cast<std::size_t>(spec.n_cascades));
  out.z.resize(spec.n_cascades, n);

  parallel::for_chunks(static_cast<std::size_t>(spec.n_cascades),
                       [&](std::size_t, std::size_t lo, std::size_t hi) {
                         for (std::size_t c = lo; c < hi; ++c) {
                           std::mt19937_64 rng = make_rng(substream_seed(spec.seed, c));
                           SimulatedCascade sim = simulate_cascade(spec, rng);
                           out.cascades[c] = std::move(sim.cascade);
                           out.z.row(static_cast<Eigen::Index>(c)) = sim.z.transpose();
                         }
                       });
  return out;
}

}  // namespace cascademix
